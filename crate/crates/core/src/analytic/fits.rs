use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::beta::reg_inc_beta;
use crate::profile::{Axis, ProfileEstimate};
use crate::{Error, Field, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    BetaTail,
    Cosine,
    PowerCompare,
}

impl std::str::FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" | "beta-tail" => Ok(FitModel::BetaTail),
            "cosine" => Ok(FitModel::Cosine),
            "power" | "power-compare" => Ok(FitModel::PowerCompare),
            other => Err(Error::Input(format!("unknown fit model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Beta tail: `[F(0)]`. Cosine: `[c0, c1]`. Power comparison: `[alpha]`.
    pub params: Vec<f64>,
    pub rms_residual: f64,
}

/// The fixed tail model `1 - I_r(3, 1/4)`.
pub fn beta_tail_model(r: f64) -> Result<f64> {
    Ok(1.0 - reg_inc_beta(r, 3.0, 0.25)?)
}

fn rms(residuals: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = residuals.fold((0.0, 0usize), |(s, n), r| (s + r * r, n + 1));
    (sum / n as f64).sqrt()
}

fn require(p: &ProfileEstimate, axis: Axis) -> Result<()> {
    p.validate()?;
    if p.axis != axis {
        return Err(Error::Input(format!("expected a {axis} profile, got {}", p.axis)));
    }
    Ok(())
}

fn normalized_at_origin(p: &ProfileEstimate) -> Result<Vec<f64>> {
    let f0 = p.value[0];
    if !(f0 > 0.0) {
        return Err(Error::Estimation(format!("profile value at r = 0 is {f0}; cannot normalize")));
    }
    Ok(p.value.iter().map(|v| v / f0).collect())
}

/// RMS distance between the profile scaled to 1 at `r = 0` and
/// `1 - I_r(3, 1/4)`. The model has no free parameters.
pub fn fit_beta_tail(profile: &ProfileEstimate) -> Result<FitResult> {
    require(profile, Axis::Radial)?;
    if profile.field != Field::Rebit {
        return Err(Error::Input("the beta tail model applies to rebit profiles".into()));
    }
    let scaled = normalized_at_origin(profile)?;
    let model: Vec<f64> = profile.grid.iter().map(|&r| beta_tail_model(r)).collect::<Result<_>>()?;
    Ok(FitResult {
        model: FitModel::BetaTail,
        params: vec![profile.value[0]],
        rms_residual: rms(scaled.iter().zip(&model).map(|(a, b)| a - b)),
    })
}

/// Least-squares fit of `c0 + c1 cos(4 pi phi_hat)`.
pub fn fit_cosine(profile: &ProfileEstimate) -> Result<FitResult> {
    require(profile, Axis::Azimuthal)?;
    let basis: Vec<f64> = profile.grid.iter().map(|&x| (4.0 * PI * x).cos()).collect();
    let n = basis.len() as f64;
    let sx: f64 = basis.iter().sum();
    let sxx: f64 = basis.iter().map(|c| c * c).sum();
    let sy: f64 = profile.value.iter().sum();
    let sxy: f64 = basis.iter().zip(&profile.value).map(|(c, y)| c * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() <= 1e-12 * n * sxx.max(1.0) {
        return Err(Error::Input("grid cannot separate the constant and cosine terms".into()));
    }
    let c1 = (n * sxy - sx * sy) / det;
    let c0 = (sy - c1 * sx) / n;
    let rms_residual = rms(basis.iter().zip(&profile.value).map(|(c, y)| y - c0 - c1 * c));
    Ok(FitResult { model: FitModel::Cosine, params: vec![c0, c1], rms_residual })
}

/// RMS difference between the qubit profile and the rebit profile raised to
/// `alpha`, both scaled to 1 at `r = 0`.
pub fn power_compare(rebit: &ProfileEstimate, qubit: &ProfileEstimate, alpha: f64) -> Result<f64> {
    require(rebit, Axis::Radial)?;
    require(qubit, Axis::Radial)?;
    if rebit.grid.len() != qubit.grid.len() {
        return Err(Error::Input(format!(
            "grid mismatch: {} vs {} points",
            rebit.grid.len(),
            qubit.grid.len()
        )));
    }
    let g = normalized_at_origin(rebit)?;
    let q = normalized_at_origin(qubit)?;
    Ok(rms(g.iter().zip(&q).map(|(a, b)| b - a.max(0.0).powf(alpha))))
}

/// [`power_compare`] packaged as a [`FitResult`].
pub fn fit_power(rebit: &ProfileEstimate, qubit: &ProfileEstimate, alpha: f64) -> Result<FitResult> {
    Ok(FitResult { model: FitModel::PowerCompare, params: vec![alpha], rms_residual: power_compare(rebit, qubit, alpha)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::unit_grid;

    fn profile(axis: Axis, field: Field, f: impl Fn(f64) -> f64, k: usize) -> ProfileEstimate {
        let grid = unit_grid(k).unwrap();
        let value = grid.iter().map(|&x| f(x)).collect();
        ProfileEstimate::from_values(axis, field, grid, value, vec![0.0; k]).unwrap()
    }

    #[test]
    fn beta_model_endpoints() {
        assert_eq!(beta_tail_model(0.0).unwrap(), 1.0);
        assert_eq!(beta_tail_model(1.0).unwrap(), 0.0);
    }

    #[test]
    fn cosine_recovers_exact_model() {
        let p = profile(Axis::Azimuthal, Field::Rebit, |x| 0.4 + 0.02 * (4.0 * PI * x).cos(), 101);
        let fit = fit_cosine(&p).unwrap();
        assert!((fit.params[0] - 0.4).abs() < 1e-10);
        assert!((fit.params[1] - 0.02).abs() < 1e-10);
        assert!(fit.rms_residual < 1e-12);
        let flat = fit_cosine(&profile(Axis::Azimuthal, Field::Rebit, |_| 0.3, 11)).unwrap();
        assert!(flat.params[1].abs() < 1e-12);
    }

    #[test]
    fn cosine_rejects_degenerate_grid() {
        assert!(fit_cosine(&profile(Axis::Azimuthal, Field::Rebit, |_| 0.3, 2)).is_err());
    }

    #[test]
    fn power_compare_constructed_cases() {
        let g = |r: f64| 18.0 * (1.0 - r * r);
        let a = profile(Axis::Radial, Field::Rebit, g, 51);
        assert_eq!(power_compare(&a, &a, 1.0).unwrap(), 0.0);
        let b = profile(Axis::Radial, Field::Qubit, |r| 30.0 * (g(r) / 18.0).powf(1.5), 51);
        assert!(power_compare(&a, &b, 1.5).unwrap() < 1e-12);
        let c = profile(Axis::Radial, Field::Qubit, |r| r, 21);
        assert!(power_compare(&a, &c, 1.5).is_err());
    }

    #[test]
    fn beta_tail_needs_positive_origin() {
        let p = profile(Axis::Radial, Field::Rebit, |_| 0.0, 11);
        assert!(fit_beta_tail(&p).is_err());
    }
}
