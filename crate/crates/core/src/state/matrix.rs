use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::Field;
use crate::{Error, Result};

pub type Mat4 = Matrix4<Complex64>;

/// Lower bound on eigenvalues accepted as positive semidefinite.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// `det(rho^PT)` at or above `-PPT_TOLERANCE` counts as separable.
pub const PPT_TOLERANCE: f64 = 1e-14;

const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// A 4x4 unit-trace Hermitian matrix. Rebit matrices carry zero imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    field: Field,
    m: Mat4,
}

impl DensityMatrix {
    /// Wraps a matrix, checking Hermiticity and unit trace to `1e-10`.
    /// Positivity is not checked here.
    pub fn new(field: Field, m: Mat4) -> Result<Self> {
        if hermitian_defect(&m) > HERMITIAN_TOLERANCE {
            return Err(Error::domain("matrix is not Hermitian"));
        }
        if field == Field::Rebit && m.iter().any(|z| z.im != 0.0) {
            return Err(Error::domain("rebit matrix has imaginary entries"));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::domain(format!("trace {tr} is not 1")));
        }
        Ok(Self { field, m })
    }

    pub(crate) fn new_unchecked(field: Field, m: Mat4) -> Self {
        Self { field, m }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn det(&self) -> f64 {
        det4(&self.m).re
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigenvalues4(&self.m)
    }

    pub fn is_psd(&self) -> bool {
        self.spectrum().map(|s| s.min() >= -PSD_TOLERANCE).unwrap_or(false)
    }
}

fn hermitian_defect(m: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Determinant by Laplace expansion over the 2x2 minors of rows (0,1) and (2,3).
pub fn det4<T>(m: &Matrix4<T>) -> T
where
    T: nalgebra::Scalar + Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    let a01 = minor(0, 1, 0, 1);
    let a02 = minor(0, 1, 0, 2);
    let a03 = minor(0, 1, 0, 3);
    let a12 = minor(0, 1, 1, 2);
    let a13 = minor(0, 1, 1, 3);
    let a23 = minor(0, 1, 2, 3);
    let b01 = minor(2, 3, 0, 1);
    let b02 = minor(2, 3, 0, 2);
    let b03 = minor(2, 3, 0, 3);
    let b12 = minor(2, 3, 1, 2);
    let b13 = minor(2, 3, 1, 3);
    let b23 = minor(2, 3, 2, 3);
    a01 * b23 - a02 * b13 + a03 * b12 + a12 * b03 - a13 * b02 + a23 * b01
}

/// Transpose with respect to the second subsystem:
/// `rho[2i+a, 2j+b] -> rho[2i+b, 2j+a]`.
pub fn partial_transpose(m: &Mat4) -> Mat4 {
    let mut out = *m;
    for bi in 0..2 {
        for bj in 0..2 {
            let (r, c) = (2 * bi, 2 * bj);
            out[(r, c + 1)] = m[(r + 1, c)];
            out[(r + 1, c)] = m[(r, c + 1)];
        }
    }
    out
}

/// PPT test for two-qubit states: `det(rho^PT) >= -1e-14`.
///
/// A two-qubit partial transpose has at most one negative eigenvalue, so the
/// sign of its determinant decides separability.
pub fn is_separable_ppt(rho: &DensityMatrix) -> bool {
    det4(&partial_transpose(rho.matrix())).re >= -PPT_TOLERANCE
}

/// Real eigenvalues of a Hermitian 4x4 matrix, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum(pub [f64; 4]);

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.0[3]
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }
}

/// Eigenvalues of a Hermitian matrix via nalgebra's symmetric eigensolver.
pub fn eigenvalues4(m: &Mat4) -> Result<Spectrum> {
    if hermitian_defect(m) > HERMITIAN_TOLERANCE {
        return Err(Error::domain("eigenvalues4 requires a Hermitian matrix"));
    }
    let ev = m.symmetric_eigenvalues();
    let mut lambda = [ev[0], ev[1], ev[2], ev[3]];
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum(lambda))
}

/// Maximal concurrence `max(0, l1 - l3 - 2 sqrt(l2 l4))` of a sorted spectrum.
pub fn max_concurrence(s: &Spectrum) -> Result<f64> {
    let [l1, l2, l3, l4] = s.0;
    let p = l2 * l4;
    if p < -1e-12 {
        return Err(Error::domain(format!("negative eigenvalue product {p:e}")));
    }
    Ok((l1 - l3 - 2.0 * p.max(0.0).sqrt()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag(d: [f64; 4]) -> Mat4 {
        Mat4::from_diagonal(&nalgebra::Vector4::new(c(d[0]), c(d[1]), c(d[2]), c(d[3])))
    }

    fn singlet() -> Mat4 {
        let mut m = Mat4::zeros();
        m[(1, 1)] = c(0.5);
        m[(2, 2)] = c(0.5);
        m[(1, 2)] = c(-0.5);
        m[(2, 1)] = c(-0.5);
        m
    }

    #[test]
    fn det4_matches_lu() {
        let m = Mat4::from_fn(|i, j| Complex64::new((i * 4 + j) as f64 * 0.3 - 1.0, (i as f64) - (j as f64) * 0.7 + 0.1 * (i * j) as f64));
        let lu = m.determinant();
        assert!((det4(&m) - lu).norm() < 1e-10 * lu.norm().max(1.0));
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let rho = DensityMatrix::new(Field::Rebit, diag([0.25; 4])).unwrap();
        assert_eq!(partial_transpose(rho.matrix()), *rho.matrix());
        assert!(is_separable_ppt(&rho));
        let s = rho.spectrum().unwrap();
        assert_eq!(s.0, [0.25; 4]);
    }

    #[test]
    fn singlet_partial_transpose() {
        let rho = DensityMatrix::new(Field::Rebit, singlet()).unwrap();
        let pt = partial_transpose(rho.matrix());
        assert!((det4(&pt).re + 1.0 / 16.0).abs() < 1e-15);
        assert!(!is_separable_ppt(&rho));
        let s = eigenvalues4(&pt).unwrap();
        for (got, want) in s.0.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_diagonal_spectrum() {
        let s = eigenvalues4(&diag([0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(s.0, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = diag([0.25; 4]);
        m[(0, 1)] = c(0.1);
        assert!(eigenvalues4(&m).is_err());
        assert!(DensityMatrix::new(Field::Qubit, m).is_err());
    }

    #[test]
    fn rejects_bad_trace() {
        assert!(DensityMatrix::new(Field::Qubit, diag([0.5; 4])).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(max_concurrence(&Spectrum([1.0, 0.0, 0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(max_concurrence(&Spectrum([0.25; 4])).unwrap(), 0.0);
        let v = max_concurrence(&Spectrum([0.5, 0.3, 0.2, 0.0])).unwrap();
        assert!((v - 0.3).abs() < 1e-15);
        assert!(max_concurrence(&Spectrum([0.5, 0.3, 0.3, -0.1])).is_err());
    }

    #[test]
    fn partial_transpose_is_involution() {
        let m = Mat4::from_fn(|i, j| Complex64::new((i + 2 * j) as f64, (i as f64) * 0.5 - j as f64));
        assert_eq!(partial_transpose(&partial_transpose(&m)), m);
        assert_eq!(partial_transpose(&m).trace(), m.trace());
    }
}
