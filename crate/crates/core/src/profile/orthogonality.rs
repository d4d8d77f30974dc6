use serde::{Deserialize, Serialize};

use crate::par::ordered_chunks;
use crate::sampling::{sample_ball, SamplerConfig};
use crate::state::{ball_to_factor, cholesky_compose, det4, partial_transpose, HyperspherePoint};
use crate::Result;

/// Hilbert-Schmidt mean of `det(rho) det(rho^PT)` relative to the mean of
/// `det(rho)^2`, with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityEstimate {
    pub ratio: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

impl OrthogonalityEstimate {
    pub fn z_score(&self) -> f64 {
        self.ratio / self.stderr
    }
}

/// Estimates `E[det(rho) det(rho^PT)] / E[det(rho)^2]` under the
/// Hilbert-Schmidt measure.
pub fn determinant_orthogonality(cfg: &SamplerConfig) -> Result<OrthogonalityEstimate> {
    cfg.validate()?;
    // sum x, sum y, sum x^2, sum xy, sum y^2 with x = w D D_pt, y = w D^2.
    let mut acc = [0.0f64; 5];
    ordered_chunks(
        0..cfg.n_samples,
        cfg.workers,
        |range| {
            let mut part = [0.0f64; 5];
            for i in range {
                let (s, r) = sample_ball(cfg, i)?;
                if s.weight == 0.0 {
                    continue;
                }
                let g = ball_to_factor(&HyperspherePoint::new(r, s.theta, s.phi), cfg.field)?;
                let rho = cholesky_compose(&g)?;
                let d = det4(rho.matrix()).re;
                let d_pt = det4(&partial_transpose(rho.matrix())).re;
                let x = s.weight * d * d_pt;
                let y = s.weight * d * d;
                part[0] += x;
                part[1] += y;
                part[2] += x * x;
                part[3] += x * y;
                part[4] += y * y;
            }
            Ok(part)
        },
        |_, part| {
            for (a, b) in acc.iter_mut().zip(part) {
                *a += b;
            }
            Ok(())
        },
    )?;
    let [sx, sy, sxx, sxy, syy] = acc;
    let ratio = sx / sy;
    let var = (sxx - 2.0 * ratio * sxy + ratio * ratio * syy).max(0.0);
    Ok(OrthogonalityEstimate { ratio, stderr: var.sqrt() / sy, n_samples: cfg.n_samples })
}
