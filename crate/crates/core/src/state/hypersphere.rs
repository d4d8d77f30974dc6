use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::cholesky::{compose_in_ball, CholeskyFactor};
use super::matrix::{det4, is_separable_ppt, partial_transpose};
use super::Field;
use crate::{Error, Result};

const ANGLE_SLACK: f64 = 1e-12;

/// A point of the restricted n-ball in hyperspherical coordinates.
///
/// `theta` holds the `n - 2` polar angles; `theta[0..3]` range over
/// `[0, pi/2]` (this keeps the three Cholesky diagonals nonnegative), the rest
/// over `[0, pi]`. `phi` is the azimuth in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperspherePoint {
    pub r: f64,
    pub theta: Vec<f64>,
    pub phi: f64,
}

impl HyperspherePoint {
    pub fn new(r: f64, theta: Vec<f64>, phi: f64) -> Self {
        Self { r, theta, phi }
    }

    /// Dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.theta.len() + 2
    }

    /// Standard hyperspherical-to-Cartesian map.
    pub fn to_cartesian(&self) -> Vec<f64> {
        let mut x = unit_direction(&self.theta, self.phi);
        for v in x.iter_mut() {
            *v *= self.r;
        }
        x
    }

    /// Inverse chart. Polar angles come out in `[0, pi]`, the azimuth in `[0, 2 pi)`.
    pub fn from_cartesian(x: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 3 {
            return Err(Error::domain("hyperspherical chart needs n >= 3"));
        }
        // tail[k] = sqrt(x_k^2 + ... + x_{n-1}^2)
        let mut tail = vec![0.0f64; n + 1];
        for k in (0..n).rev() {
            tail[k] = tail[k + 1].hypot(x[k]);
        }
        let theta = (0..n - 2).map(|k| tail[k + 1].atan2(x[k])).collect();
        let mut phi = x[n - 1].atan2(x[n - 2]);
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { r: tail[0], theta, phi })
    }

    pub(crate) fn validate(&self, field: Field) -> Result<()> {
        if self.n() != field.dim() {
            return Err(Error::domain(format!(
                "{field} needs a {}-ball point, got n = {}",
                field.dim(),
                self.n()
            )));
        }
        if !(0.0..=1.0 + ANGLE_SLACK).contains(&self.r) {
            return Err(Error::domain(format!("radius {} outside [0, 1]", self.r)));
        }
        validate_angles(&self.theta, self.phi)
    }
}

fn validate_angles(theta: &[f64], phi: f64) -> Result<()> {
    for (k, &t) in theta.iter().enumerate() {
        let hi = if k < 3 { FRAC_PI_2 } else { PI };
        if !(t >= -ANGLE_SLACK && t <= hi + ANGLE_SLACK) {
            return Err(Error::domain(format!("theta[{k}] = {t} outside [0, {hi}]")));
        }
    }
    if !(phi >= -ANGLE_SLACK && phi <= TAU + ANGLE_SLACK) {
        return Err(Error::domain(format!("phi = {phi} outside [0, 2pi)")));
    }
    Ok(())
}

/// Unit vector with the given angles:
/// `x_1 = cos t_1`, `x_k = cos t_k prod_{j<k} sin t_j`, and the last two
/// coordinates `cos phi`, `sin phi` times the full sine product.
pub fn unit_direction(theta: &[f64], phi: f64) -> Vec<f64> {
    let n = theta.len() + 2;
    let mut x = Vec::with_capacity(n);
    let mut sines = 1.0;
    for &t in theta {
        let (s, c) = t.sin_cos();
        x.push(sines * c);
        sines *= s;
    }
    let (s, c) = phi.sin_cos();
    x.push(sines * c);
    x.push(sines * s);
    x
}

/// Maps a ball point to Cholesky coordinates (crate-wide ordering).
pub fn ball_to_factor(p: &HyperspherePoint, field: Field) -> Result<CholeskyFactor> {
    p.validate(field)?;
    let mut x = p.to_cartesian();
    // Angles within slack of the bounds may produce -0.0 or -1e-17 diagonals.
    for v in x.iter_mut().take(3) {
        *v = v.max(0.0);
    }
    CholeskyFactor::from_coords(field, &x)
}

/// PPT indicator along the ray with the given angles, one entry per radius.
///
/// Each radius is composed and tested on its own; no polynomial form in `r`
/// is assumed.
pub fn det_pt_on_radial_ray(
    theta: &[f64],
    phi: f64,
    field: Field,
    r_grid: &[f64],
) -> Result<Vec<bool>> {
    let unit = ball_to_factor(&HyperspherePoint::new(1.0, theta.to_vec(), phi), field)?;
    r_grid
        .iter()
        .map(|&r| {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::domain(format!("radius {r} outside [0, 1]")));
            }
            Ok(is_separable_ppt(&compose_in_ball(&unit.scaled(r))))
        })
        .collect()
}

/// Diagnostic: number of sign changes of `det(rho^PT)` along a ray sampled on
/// `r_grid`. A form `f - g r^2` would allow at most one.
pub fn pt_sign_changes_on_ray(theta: &[f64], phi: f64, field: Field, r_grid: &[f64]) -> Result<usize> {
    let unit = ball_to_factor(&HyperspherePoint::new(1.0, theta.to_vec(), phi), field)?;
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for &r in r_grid {
        let d = det4(&partial_transpose(compose_in_ball(&unit.scaled(r)).matrix())).re;
        if d == 0.0 {
            continue;
        }
        let sign = d > 0.0;
        if last.is_some_and(|s| s != sign) {
            changes += 1;
        }
        last = Some(sign);
    }
    Ok(changes)
}
