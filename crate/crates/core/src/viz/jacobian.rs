use nalgebra::DMatrix;

use crate::{Error, Result};

/// Default relative step of [`numerical_jacobian`].
pub const DEFAULT_STEP: f64 = 1e-5;

/// Central-difference Jacobian of `map` at `x`: entry `(i, j)` is
/// `d map_i / d x_j`. Coordinate `j` is stepped by `h * max(1, |x_j|)`.
pub fn numerical_jacobian<F>(map: F, x: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(h > 0.0) {
        return Err(Error::domain(format!("finite-difference step {h} must be positive")));
    }
    let mut probe = x.to_vec();
    let mut columns = Vec::with_capacity(x.len());
    let mut rows = None;
    for j in 0..x.len() {
        let step = h * x[j].abs().max(1.0);
        probe[j] = x[j] + step;
        let plus = map(&probe)?;
        probe[j] = x[j] - step;
        let minus = map(&probe)?;
        probe[j] = x[j];
        if plus.len() != minus.len() || rows.is_some_and(|r| r != plus.len()) {
            return Err(Error::domain("map output length changed between evaluations"));
        }
        rows = Some(plus.len());
        let col: Vec<f64> = plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * step)).collect();
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("map is not finite near coordinate {j}")));
        }
        columns.push(col);
    }
    let rows = rows.unwrap_or(0);
    Ok(DMatrix::from_fn(rows, x.len(), |i, j| columns[j][i]))
}

/// Determinant of a square Jacobian.
pub fn jacobian_det(j: &DMatrix<f64>) -> Result<f64> {
    if !j.is_square() {
        return Err(Error::domain(format!("{}x{} Jacobian is not square", j.nrows(), j.ncols())));
    }
    Ok(j.clone().lu().determinant())
}

/// Volume factor `sqrt(det(J^T J))` of a tall Jacobian.
pub fn gram_volume(j: &DMatrix<f64>) -> f64 {
    (j.transpose() * j).lu().determinant().max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_scaling() {
        for k in 1..6 {
            let x = vec![0.3; k];
            let id = numerical_jacobian(|v| Ok(v.to_vec()), &x, DEFAULT_STEP).unwrap();
            assert!((jacobian_det(&id).unwrap() - 1.0).abs() < 1e-8);
            let two = numerical_jacobian(|v| Ok(v.iter().map(|a| 2.0 * a).collect()), &x, DEFAULT_STEP).unwrap();
            let d = jacobian_det(&two).unwrap();
            assert!((d / 2f64.powi(k as i32) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn gram_of_embedded_plane() {
        // (u, v) -> (u, v, u + v) stretches area by sqrt(3).
        let j = numerical_jacobian(|v| Ok(vec![v[0], v[1], v[0] + v[1]]), &[0.1, 0.2], DEFAULT_STEP).unwrap();
        assert!((gram_volume(&j) - 3f64.sqrt()).abs() < 1e-8);
        assert!(jacobian_det(&j).is_err());
    }

    #[test]
    fn non_finite_output_is_an_error() {
        assert!(numerical_jacobian(|v| Ok(vec![f64::NAN * v[0]]), &[1.0], DEFAULT_STEP).is_err());
    }
}
