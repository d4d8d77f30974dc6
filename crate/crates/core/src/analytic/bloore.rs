//! Closed forms in the Bloore ratio variable `nu = rho11 rho44 / (rho22 rho33)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::beta::reg_inc_beta;
use super::quadrature::integrate;
use crate::{Error, Result};

/// Below this the printed formula is used as is; above it, the Taylor series
/// about `nu = 1`. The formula divides a ninth-order zero by `(nu - 1)^9` and
/// loses roughly `-9 log10|nu - 1|` digits, about 4.5 at the switch.
const SERIES_FROM: f64 = 0.25;

/// Terms kept in the series; `0.75^SERIES_TERMS` is below 1e-19.
const SERIES_TERMS: usize = 160;

const DENOMINATOR: i128 = 3780;

// P1(1 + t) = nu (nu + 2)(nu^2 + 14 nu + 8) + 1 and P2(1 + t) = 5 nu^4 + 32 nu^3 - 32 nu - 5,
// as coefficients of t^0..t^4.
const P1_SHIFTED: [i128; 5] = [70, 140, 90, 20, 1];
// Only needed to show the low orders cancel; it has no t^9 or higher terms.
#[cfg(test)]
const P2_SHIFTED: [i128; 5] = [0, 84, 126, 52, 5];

/// `t^k` coefficient of `6 P1(1+t) ln(1+t)` as an exact fraction `(num, den)`.
fn log_term_coefficient(k: usize) -> (i128, i128) {
    let lags: Vec<(i128, i128)> = (0..5)
        .filter(|&i| i < k)
        .map(|i| (P1_SHIFTED[i], (k - i) as i128))
        .collect();
    let den: i128 = lags.iter().map(|&(_, l)| l).product();
    let num: i128 = lags
        .iter()
        .map(|&(p, l)| {
            let sign = if l % 2 == 1 { 1 } else { -1 };
            6 * sign * p * (den / l)
        })
        .sum();
    (num, den)
}

/// Coefficients `c_j` with `J(1 + t) = (1 + t)^{3/2} sum_j c_j t^j`.
fn series_coefficients() -> &'static [f64; SERIES_TERMS] {
    static COEFFS: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = [0.0; SERIES_TERMS];
        for (j, cj) in c.iter_mut().enumerate() {
            let (num, den) = log_term_coefficient(j + 9);
            // Both are exact in f64 for these k, so one rounding.
            *cj = num as f64 / (den * DENOMINATOR) as f64;
        }
        c
    })
}

fn direct(nu: f64) -> f64 {
    let p1 = nu * (nu + 2.0) * (nu * nu + 14.0 * nu + 8.0) + 1.0;
    let p2 = 5.0 * nu.powi(4) + 32.0 * nu.powi(3) - 32.0 * nu - 5.0;
    nu.powf(1.5) * (12.0 * p1 * nu.sqrt().ln() - 5.0 * p2) / (3780.0 * (nu - 1.0).powi(9))
}

fn series(nu: f64) -> f64 {
    let t = nu - 1.0;
    let sum = series_coefficients().iter().rev().fold(0.0, |acc, &c| acc * t + c);
    nu.powf(1.5) * sum
}

/// The two-rebit Hilbert-Schmidt volume element in the `nu` variable,
///
/// `J(nu) = nu^{3/2} (12 P1(nu) ln sqrt(nu) - 5 P2(nu)) / (3780 (nu - 1)^9)`,
///
/// with the removable singularity at `nu = 1` handled by series.
pub fn jac_real_nu(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::domain(format!("nu = {nu} outside (0, 1]")));
    }
    Ok(if nu < SERIES_FROM { direct(nu) } else { series(nu) })
}

/// The printed closed form, with no special handling near `nu = 1`.
pub fn jac_real_nu_direct(nu: f64) -> f64 {
    direct(nu)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub label: String,
    pub computed: f64,
    pub exact: f64,
    pub exact_text: String,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(label: &str, computed: f64, exact: f64, exact_text: &str, tolerance: f64) -> Self {
        let relative_error = ((computed - exact) / exact).abs();
        Self {
            label: label.into(),
            computed,
            exact,
            exact_text: exact_text.into(),
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlooreReport {
    /// `2 int_0^1 J(nu) I_nu(1/2, 2) d nu = 1/151200`.
    pub integral: IdentityCheck,
    /// `(2419200/17) int_0^1 J(nu) I_nu(1/2, 2) d nu = 8/17`.
    pub probability: IdentityCheck,
    pub quadrature_error: f64,
    pub evaluations: usize,
    /// `J(1)`, finite through the series branch.
    pub endpoint_value: f64,
    /// Identities recorded without a numeric check.
    pub documented_only: Vec<String>,
}

impl BlooreReport {
    pub fn all_pass(&self) -> bool {
        self.integral.pass && self.probability.pass
    }
}

/// Relative tolerance of the identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Integrates `J(nu) I_nu(1/2, 2)` over `(0, 1]` and checks both rationals.
pub fn bloore_integral_checks() -> Result<BlooreReport> {
    let integrand = |nu: f64| match (jac_real_nu(nu), reg_inc_beta(nu, 0.5, 2.0)) {
        (Ok(j), Ok(i)) => j * i,
        _ => f64::NAN,
    };
    let q = integrate(integrand, &[0.0, SERIES_FROM, 1.0], 0.0, 1e-13, 2000)?;
    Ok(BlooreReport {
        integral: IdentityCheck::new(
            "2 * int_0^1 J_real(nu) I_nu(1/2,2) dnu",
            2.0 * q.value,
            1.0 / 151_200.0,
            "1/151200",
            IDENTITY_TOLERANCE,
        ),
        probability: IdentityCheck::new(
            "(2419200/17) * int_0^1 J_real(nu) I_nu(1/2,2) dnu",
            2_419_200.0 / 17.0 * q.value,
            8.0 / 17.0,
            "8/17",
            IDENTITY_TOLERANCE,
        ),
        quadrature_error: q.error,
        evaluations: q.evaluations,
        endpoint_value: jac_real_nu(1.0)?,
        documented_only: vec![
            "8/33 = (48432384000/17) * int_0^1 J_complex(nu) I_nu(1/2,2)^2 dnu \
             (two-qubit counterpart; J_complex is not available in closed form here)"
                .into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_coefficients_cancel_exactly() {
        // The numerator 6 P1 ln(1+t) - 5 P2 vanishes to ninth order at t = 0.
        for k in 0..9 {
            let (num, den) = log_term_coefficient(k);
            let p2 = if k < 5 { P2_SHIFTED[k] } else { 0 };
            assert_eq!(num, 5 * p2 * den, "t^{k}");
        }
        let (num, den) = log_term_coefficient(9);
        assert_eq!(num * 105, den);
    }

    #[test]
    fn endpoint_value() {
        let j1 = jac_real_nu(1.0).unwrap();
        assert!((j1 - 1.0 / (105.0 * 3780.0)).abs() < 1e-22);
    }

    #[test]
    fn branches_agree_at_switch() {
        let a = direct(SERIES_FROM);
        let b = series(SERIES_FROM);
        assert!(((a - b) / b).abs() < 1e-11, "{a} vs {b}");
    }

    #[test]
    fn domain() {
        assert!(jac_real_nu(0.0).is_err());
        assert!(jac_real_nu(1.0 + 1e-12).is_err());
        assert!(jac_real_nu(f64::NAN).is_err());
    }
}
