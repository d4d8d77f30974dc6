use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::{DensityMatrix, Mat4};
use crate::{Error, Field, Result};

/// Width of the boundary band in which region ties are broken toward the
/// more inclusive region.
pub const REGION_TOLERANCE: f64 = 1e-12;

/// Coordinates of the Pauli-diagonal state `(I + sum_k d_k s_k (x) s_k) / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DPoint {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl DPoint {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let d = Self { d1, d2, d3 };
        if d.as_array().iter().any(|v| !(v.abs() <= 1.0 + REGION_TOLERANCE)) {
            return Err(Error::domain(format!("({d1}, {d2}, {d3}) lies outside the cube [-1, 1]^3")));
        }
        Ok(d)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.d1, self.d2, self.d3]
    }

    pub fn l1_norm(&self) -> f64 {
        self.d1.abs() + self.d2.abs() + self.d3.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// Inside the octahedron.
    Separable,
    /// Inside the tetrahedron but outside the octahedron.
    Entangled,
    /// Inside the cube but outside the tetrahedron.
    Witness,
}

/// Sign patterns `s` with eigenvalues `(1 + s . d) / 4`.
const SIGN_PATTERNS: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];

/// Eigenvalues of the Pauli-diagonal matrix, one per sign pattern.
pub fn pauli_eigenvalues(d: &DPoint) -> [f64; 4] {
    let d = d.as_array();
    SIGN_PATTERNS.map(|s| (1.0 + s[0] * d[0] + s[1] * d[1] + s[2] * d[2]) / 4.0)
}

/// The (real) matrix `sigma_k (x) sigma_k` for `k = 1, 2, 3`.
pub(crate) fn sigma_sigma(k: usize) -> Matrix4<f64> {
    match k {
        1 => Matrix4::new(
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        ),
        2 => Matrix4::new(
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0,
        ),
        3 => Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, 1.0)),
        _ => unreachable!("Pauli index {k}"),
    }
}

pub(crate) fn pauli_real(d: &DPoint) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    for (k, dk) in d.as_array().into_iter().enumerate() {
        m += sigma_sigma(k + 1) * dk;
    }
    m / 4.0
}

/// The Pauli-diagonal matrix at `d`. It is a state (PSD) exactly when `d`
/// lies in the tetrahedron; see [`DensityMatrix::is_psd`].
pub fn pauli_state(d: &DPoint) -> DensityMatrix {
    let m: Mat4 = pauli_real(d).map(|x| Complex64::new(x, 0.0));
    DensityMatrix::new_unchecked(Field::Rebit, m)
}

/// Region of the cube containing `d`.
pub fn classify_region(d: &DPoint) -> Region {
    let min_eig = pauli_eigenvalues(d).into_iter().fold(f64::INFINITY, f64::min);
    if min_eig < -REGION_TOLERANCE / 4.0 {
        Region::Witness
    } else if d.l1_norm() <= 1.0 + REGION_TOLERANCE {
        Region::Separable
    } else {
        Region::Entangled
    }
}

fn numerator_rho(d: &DPoint) -> f64 {
    let [d1, d2, d3] = d.as_array();
    (d1 - d2 - d3 - 1.0) * (d1 + d2 - d3 + 1.0) * (d1 - d2 + d3 + 1.0) * (d1 + d2 + d3 - 1.0)
}

fn numerator_pt(d: &DPoint) -> f64 {
    let [d1, d2, d3] = d.as_array();
    (d1 - d2 - d3 + 1.0) * (d1 + d2 - d3 - 1.0) * (d1 - d2 + d3 - 1.0) * (d1 + d2 + d3 + 1.0)
}

/// `det(rho')` for a conjugated Pauli-diagonal state with normalizer
/// `trace_norm = Tr[(A (x) B) rho (A (x) B)^dag]`, `det A = det B = 1`.
pub fn det_rho_formula(d: &DPoint, trace_norm: f64) -> f64 {
    numerator_rho(d) / (256.0 * trace_norm.powi(4))
}

/// `det(rho'^PT)` under the same conditions as [`det_rho_formula`].
pub fn det_pt_formula(d: &DPoint, trace_norm: f64) -> f64 {
    numerator_pt(d) / (256.0 * trace_norm.powi(4))
}
