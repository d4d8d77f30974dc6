use num_complex::Complex64;

use super::matrix::{eigenvalues4, DensityMatrix, Mat4, PSD_TOLERANCE};
use super::Field;
use crate::{Error, Result};

/// Position `(row, col)` of each strictly-lower entry, in coordinate order.
pub(crate) const OFFDIAG_POSITIONS: [(usize, usize); 6] =
    [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];

const BALL_TOLERANCE: f64 = 1e-12;

/// Free entries of the lower-triangular Cholesky factor of a density matrix.
///
/// `G44` is not stored; [`cholesky_compose`] completes it so that the trace is
/// one. The free entries lie in one-eighth of the closed unit ball
/// (`G11, G22, G33 >= 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CholeskyFactor {
    field: Field,
    diag: [f64; 3],
    offdiag: [Complex64; 6],
}

impl CholeskyFactor {
    pub fn new(field: Field, diag: [f64; 3], offdiag: [Complex64; 6]) -> Result<Self> {
        if diag.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::domain("Cholesky diagonal entries must be nonnegative"));
        }
        if field == Field::Rebit && offdiag.iter().any(|z| z.im != 0.0) {
            return Err(Error::domain("rebit factor has imaginary entries"));
        }
        Ok(Self { field, diag, offdiag })
    }

    /// Builds a factor from coordinates in the crate-wide ordering.
    pub fn from_coords(field: Field, coords: &[f64]) -> Result<Self> {
        if coords.len() != field.dim() {
            return Err(Error::domain(format!(
                "{field} factor needs {} coordinates, got {}",
                field.dim(),
                coords.len()
            )));
        }
        let diag = [coords[0], coords[1], coords[2]];
        let mut offdiag = [Complex64::new(0.0, 0.0); 6];
        for (k, z) in offdiag.iter_mut().enumerate() {
            *z = match field {
                Field::Rebit => Complex64::new(coords[3 + k], 0.0),
                Field::Qubit => Complex64::new(coords[3 + 2 * k], coords[4 + 2 * k]),
            };
        }
        Self::new(field, diag, offdiag)
    }

    pub fn zero(field: Field) -> Self {
        Self { field, diag: [0.0; 3], offdiag: [Complex64::new(0.0, 0.0); 6] }
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.field.dim());
        out.extend_from_slice(&self.diag);
        for z in &self.offdiag {
            out.push(z.re);
            if self.field == Field::Qubit {
                out.push(z.im);
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn diag(&self) -> [f64; 3] {
        self.diag
    }

    pub fn offdiag(&self) -> [Complex64; 6] {
        self.offdiag
    }

    /// Squared Euclidean norm of the free coordinates (`r^2`).
    pub fn norm_sq(&self) -> f64 {
        self.diag.iter().map(|d| d * d).sum::<f64>()
            + self.offdiag.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `G44`, the entry that completes unit trace.
    pub fn gamma44(&self) -> f64 {
        (1.0 - self.norm_sq()).max(0.0).sqrt()
    }

    /// Every coordinate multiplied by `s` (used to move along a radial ray).
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            field: self.field,
            diag: self.diag.map(|d| d * s),
            offdiag: self.offdiag.map(|z| z * s),
        }
    }

    /// The full lower-triangular matrix including `G44`.
    pub fn lower(&self) -> Mat4 {
        let mut g = Mat4::zeros();
        for k in 0..3 {
            g[(k, k)] = Complex64::new(self.diag[k], 0.0);
        }
        g[(3, 3)] = Complex64::new(self.gamma44(), 0.0);
        for (z, &(r, c)) in self.offdiag.iter().zip(OFFDIAG_POSITIONS.iter()) {
            g[(r, c)] = *z;
        }
        g
    }
}

/// `rho = G G^dagger` with `G44` chosen for unit trace.
pub fn cholesky_compose(g: &CholeskyFactor) -> Result<DensityMatrix> {
    let n2 = g.norm_sq();
    if n2 > 1.0 + BALL_TOLERANCE {
        return Err(Error::domain(format!("factor lies outside unit ball (|G|^2 = {n2})")));
    }
    Ok(compose_in_ball(g))
}

/// Composition for factors already known to lie in the ball.
pub(crate) fn compose_in_ball(g: &CholeskyFactor) -> DensityMatrix {
    let l = g.lower();
    let mut rho = Mat4::zeros();
    // rho_ij = sum_{k <= min(i,j)} G_ik conj(G_jk); fill the lower half and mirror.
    for i in 0..4 {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..=j {
                acc += l[(i, k)] * l[(j, k)].conj();
            }
            rho[(i, j)] = acc;
            rho[(j, i)] = acc.conj();
        }
        rho[(i, i)].im = 0.0;
    }
    DensityMatrix::new_unchecked(g.field(), rho)
}

/// Inverse of [`cholesky_compose`]: semidefinite Cholesky with zero pivots
/// mapped to zero columns.
pub fn cholesky_decompose(rho: &DensityMatrix) -> Result<CholeskyFactor> {
    let spectrum = eigenvalues4(rho.matrix())?;
    if spectrum.min() < -PSD_TOLERANCE {
        return Err(Error::domain(format!(
            "matrix is not positive semidefinite (min eigenvalue {:e})",
            spectrum.min()
        )));
    }
    let m = rho.matrix();
    let mut l = Mat4::zeros();
    for j in 0..4 {
        let mut pivot = m[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if pivot <= 1e-15 {
            continue;
        }
        let d = pivot.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in (j + 1)..4 {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / d;
        }
    }
    let diag = [l[(0, 0)].re, l[(1, 1)].re, l[(2, 2)].re];
    let mut offdiag = OFFDIAG_POSITIONS.map(|(r, c)| l[(r, c)]);
    if rho.field() == Field::Rebit {
        for z in offdiag.iter_mut() {
            z.im = 0.0;
        }
    }
    CholeskyFactor::new(rho.field(), diag, offdiag)
}

/// `det rho = (G11 G22 G33)^2 (1 - |free coordinates|^2)`.
pub fn determinant_cholesky(g: &CholeskyFactor) -> f64 {
    let p: f64 = g.diag.iter().product();
    p * p * (1.0 - g.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::det4;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn maximally_mixed_from_half_diagonal() {
        let g = CholeskyFactor::from_coords(Field::Rebit, &[0.5, 0.5, 0.5, 0., 0., 0., 0., 0., 0.]).unwrap();
        let rho = cholesky_compose(&g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!(approx(rho.matrix()[(i, j)].re, want));
            }
        }
        assert!(approx(determinant_cholesky(&g), 1.0 / 256.0));
    }

    #[test]
    fn origin_is_pure_44_state() {
        let g = CholeskyFactor::zero(Field::Qubit);
        let rho = cholesky_compose(&g).unwrap();
        assert_eq!(rho.matrix()[(3, 3)].re, 1.0);
        assert_eq!(rho.matrix().iter().filter(|z| z.norm() != 0.0).count(), 1);
        assert_eq!(determinant_cholesky(&g), 0.0);
    }

    #[test]
    fn hand_multiplied_example() {
        // G11 = G21 = G22 = 1/2; G44 = 1/2 completes the trace.
        let g = CholeskyFactor::from_coords(Field::Rebit, &[0.5, 0.5, 0., 0.5, 0., 0., 0., 0., 0.]).unwrap();
        let rho = cholesky_compose(&g).unwrap();
        let m = rho.matrix();
        assert!(approx(m[(0, 0)].re, 0.25));
        assert!(approx(m[(1, 0)].re, 0.25));
        assert!(approx(m[(1, 1)].re, 0.5));
        assert!(approx(m[(2, 2)].re, 0.0));
        assert!(approx(m[(3, 3)].re, 0.25));
        assert!(approx(rho.det(), 0.0));
        assert!(approx(determinant_cholesky(&g), 0.0));
    }

    #[test]
    fn rejects_points_outside_ball() {
        let g = CholeskyFactor::from_coords(Field::Rebit, &[0.8, 0.8, 0., 0., 0., 0., 0., 0., 0.]).unwrap();
        assert!(cholesky_compose(&g).is_err());
    }

    #[test]
    fn rejects_negative_diagonal() {
        assert!(CholeskyFactor::from_coords(Field::Rebit, &[-0.1, 0., 0., 0., 0., 0., 0., 0., 0.]).is_err());
    }

    #[test]
    fn decompose_inverts_examples() {
        let g = CholeskyFactor::from_coords(Field::Rebit, &[0.5, 0.5, 0.5, 0., 0., 0., 0., 0., 0.]).unwrap();
        let back = cholesky_decompose(&cholesky_compose(&g).unwrap()).unwrap();
        for (a, b) in back.coords().iter().zip(g.coords()) {
            assert!((a - b).abs() < 1e-14);
        }
        let zero = CholeskyFactor::zero(Field::Qubit);
        let back = cholesky_decompose(&cholesky_compose(&zero).unwrap()).unwrap();
        assert!(back.coords().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn decompose_rejects_indefinite() {
        let mut m = Mat4::zeros();
        m[(0, 0)] = Complex64::new(0.6, 0.0);
        m[(1, 1)] = Complex64::new(0.6, 0.0);
        m[(2, 2)] = Complex64::new(-0.2, 0.0);
        let rho = DensityMatrix::new(Field::Rebit, m).unwrap();
        assert!(cholesky_decompose(&rho).is_err());
    }

    #[test]
    fn closed_form_determinant_agrees_on_a_qubit_point() {
        let coords = [0.3, 0.25, 0.2, 0.1, -0.05, 0.2, 0.1, -0.1, 0.05, 0.15, 0.0, -0.2, 0.1, 0.05, 0.1];
        let g = CholeskyFactor::from_coords(Field::Qubit, &coords).unwrap();
        let rho = cholesky_compose(&g).unwrap();
        let direct = det4(rho.matrix()).re;
        assert!((direct - determinant_cholesky(&g)).abs() < 1e-15);
    }
}
