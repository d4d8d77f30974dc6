use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::{DensityMatrix, Mat4};
use crate::{Error, Field, Result};

pub type Mat2 = Matrix2<Complex64>;

/// Normalizers at or below this magnitude mark a sample as degenerate.
pub const NORMALIZER_FLOOR: f64 = 1e-300;

/// Bargmann coordinates of SL(2,R): a point of the open unit disk and an angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2rParam {
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub omega: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The SU(1,1) element `[[alpha, beta], [conj beta, conj alpha]]` with
/// `alpha = e^{i omega} / sqrt(1 - |gamma|^2)` and
/// `beta = gamma e^{-i omega} / sqrt(1 - |gamma|^2)`.
pub fn bargmann_su11(p: &Sl2rParam) -> Result<Mat2> {
    let g2 = p.gamma_re * p.gamma_re + p.gamma_im * p.gamma_im;
    if !(g2 < 1.0) {
        return Err(Error::domain(format!("|gamma|^2 = {g2} is not below 1")));
    }
    let s = 1.0 / (1.0 - g2).sqrt();
    let e = Complex64::from_polar(s, p.omega);
    let alpha = e;
    let beta = c(p.gamma_re, p.gamma_im) * e.conj();
    Ok(Mat2::new(alpha, beta, beta.conj(), alpha.conj()))
}

/// Maps Bargmann coordinates to SL(2,R) by conjugating the SU(1,1) element
/// with `C = [[1, -i], [-i, 1]] / sqrt(2)`.
pub fn bargmann_to_sl2r(p: &Sl2rParam) -> Result<Matrix2<f64>> {
    Ok(bargmann_complex(p)?.map(|z| z.re))
}

/// [`bargmann_to_sl2r`] before discarding the (round-off) imaginary parts.
pub fn bargmann_complex(p: &Sl2rParam) -> Result<Mat2> {
    let m = bargmann_su11(p)?;
    let k = FRAC_1_SQRT_2;
    let cayley = Mat2::new(c(k, 0.0), c(0.0, -k), c(0.0, -k), c(k, 0.0));
    let cayley_inv = Mat2::new(c(k, 0.0), c(0.0, k), c(0.0, k), c(k, 0.0));
    Ok(cayley * m * cayley_inv)
}

/// Unit-determinant chart of SL(2,C): `[[a, b], [c, (1 + b c) / a]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2cParam {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// Smallest `|a|` accepted by the SL(2,C) chart.
pub const SL2C_MIN_A: f64 = 1e-6;

impl Sl2cParam {
    pub fn from_reals(x: &[f64]) -> Self {
        Self { a: c(x[0], x[1]), b: c(x[2], x[3]), c: c(x[4], x[5]) }
    }

    pub fn matrix(&self) -> Result<Mat2> {
        if !(self.a.norm() > SL2C_MIN_A) {
            return Err(Error::domain(format!("|a| = {} too small for the SL(2,C) chart", self.a.norm())));
        }
        let d = (Complex64::new(1.0, 0.0) + self.b * self.c) / self.a;
        Ok(Mat2::new(self.a, self.b, self.c, d))
    }
}

pub(crate) fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut k = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    k[(2 * i + p, 2 * j + q)] = a[(i, j)] * b[(p, q)];
                }
            }
        }
    }
    k
}

pub(crate) fn kron_real(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut k = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    k[(2 * i + p, 2 * j + q)] = a[(i, j)] * b[(p, q)];
                }
            }
        }
    }
    k
}

/// `rho' = K rho K^dag / Tr[K rho K^dag]` with `K = A (x) B`.
///
/// Returns `Ok(None)` when the normalizer is within [`NORMALIZER_FLOOR`] of
/// zero; callers skip and count such samples. The result is a rebit matrix
/// when `rho`, `A` and `B` are all real.
pub fn conjugate_state(rho: &DensityMatrix, a: &Mat2, b: &Mat2) -> Result<Option<DensityMatrix>> {
    let k = kron(a, b);
    let n = k * rho.matrix() * k.adjoint();
    let t = n.trace();
    if !t.re.is_finite() || t.re.abs() <= NORMALIZER_FLOOR {
        return Ok(None);
    }
    let mut out = n / Complex64::new(t.re, 0.0);
    let real = rho.field() == Field::Rebit && a.iter().chain(b.iter()).all(|z| z.im == 0.0);
    if real {
        out.iter_mut().for_each(|z| z.im = 0.0);
    }
    let field = if real { Field::Rebit } else { Field::Qubit };
    Ok(Some(DensityMatrix::new_unchecked(field, out)))
}

/// Trace of `K rho K^dag` for `K = A (x) B`.
pub fn conjugation_normalizer(rho: &DensityMatrix, a: &Mat2, b: &Mat2) -> f64 {
    let k = kron(a, b);
    (k * rho.matrix() * k.adjoint()).trace().re
}
