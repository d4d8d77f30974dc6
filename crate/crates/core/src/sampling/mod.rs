//! Weighted angular samples on the restricted hypersphere.
//!
//! Every sample is a pure function of `(seed, index)`. Monte Carlo draws come
//! from a ChaCha8 stream selected by the index; quasi-Monte Carlo draws are
//! coordinates of an Owen-scrambled Sobol point. A sample's unit-cube point
//! uses coordinates `0..n-2` for the polar angles, `n-2` for the azimuth and
//! `n-1` for the radial variate when a radius is needed.

pub mod sobol;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::par::ordered_chunks;
use crate::{Error, Field, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerKind {
    #[serde(rename = "mc")]
    MonteCarlo,
    #[serde(rename = "qmc")]
    QuasiMonteCarlo,
}

impl SamplerKind {
    pub const fn name(self) -> &'static str {
        match self {
            SamplerKind::MonteCarlo => "mc",
            SamplerKind::QuasiMonteCarlo => "qmc",
        }
    }

    /// Human-readable generator description recorded in output metadata.
    pub const fn generator(self) -> &'static str {
        match self {
            SamplerKind::MonteCarlo => "chacha8, one stream per sample index",
            SamplerKind::QuasiMonteCarlo => "sobol (joe-kuo), owen-scrambled via laine-karras hash",
        }
    }

    pub(crate) const fn tag(self) -> u8 {
        match self {
            SamplerKind::MonteCarlo => 1,
            SamplerKind::QuasiMonteCarlo => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(SamplerKind::MonteCarlo),
            2 => Some(SamplerKind::QuasiMonteCarlo),
            _ => None,
        }
    }
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mc" | "montecarlo" | "monte-carlo" => Ok(SamplerKind::MonteCarlo),
            "qmc" | "quasimontecarlo" | "quasi-monte-carlo" | "sobol" => Ok(SamplerKind::QuasiMonteCarlo),
            other => Err(Error::Input(format!("unknown sampler `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub field: Field,
    pub kind: SamplerKind,
    pub seed: u64,
    pub n_samples: u64,
    /// Threads used by estimators. Never affects results.
    pub workers: usize,
}

impl SamplerConfig {
    pub fn new(field: Field, kind: SamplerKind, seed: u64, n_samples: u64) -> Self {
        Self { field, kind, seed, n_samples, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Input("n_samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Input("workers must be at least 1".into()));
        }
        if self.kind == SamplerKind::QuasiMonteCarlo && self.n_samples > 1 << 32 {
            return Err(Error::Input("quasi-Monte Carlo supports at most 2^32 samples".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularSample {
    pub theta: Vec<f64>,
    pub phi: f64,
    pub weight: f64,
}

/// Fills `out` with the unit-cube point `index` of the given stream.
///
/// Coordinates are a prefix-stable function of `(kind, seed, index)`: asking
/// for more dimensions never changes the leading ones.
pub fn unit_point(kind: SamplerKind, seed: u64, index: u64, out: &mut [f64]) -> Result<()> {
    match kind {
        SamplerKind::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index);
            for v in out.iter_mut() {
                *v = rng.random::<f64>();
            }
        }
        SamplerKind::QuasiMonteCarlo => {
            let i = u32::try_from(index)
                .map_err(|_| Error::Input(format!("quasi-Monte Carlo index {index} exceeds 2^32 - 1")))?;
            if out.len() > sobol::MAX_DIMENSIONS {
                return Err(Error::Input(format!(
                    "quasi-Monte Carlo supports at most {} dimensions",
                    sobol::MAX_DIMENSIONS
                )));
            }
            for (d, v) in out.iter_mut().enumerate() {
                *v = sobol::sample(i, d, seed);
            }
        }
    }
    Ok(())
}

/// Volume of the angle box `[0,pi/2]^3 x [0,pi]^(n-5) x [0,2pi)`.
pub fn box_volume(field: Field) -> f64 {
    FRAC_PI_2.powi(3) * PI.powi(field.dim() as i32 - 5) * TAU
}

/// Composite angular weight: the Cholesky Jacobian at the unit-radius point
/// times the hyperspherical sine factors. The azimuth never enters.
pub fn angular_weight(theta: &[f64], field: Field) -> f64 {
    let n = field.dim();
    debug_assert_eq!(theta.len(), n - 2);
    let [a, b, c] = field.jacobian_exponents();
    let (s1, c1) = theta[0].sin_cos();
    let (s2, c2) = theta[1].sin_cos();
    let c3 = theta[2].cos();
    let g11 = c1;
    let g22 = s1 * c2;
    let g33 = s1 * s2 * c3;
    let mut w = 8.0 * g11.powi(a) * g22.powi(b) * g33.powi(c);
    for (k, &t) in theta.iter().enumerate() {
        w *= t.sin().powi((n - 2 - k) as i32);
    }
    w.max(0.0)
}

/// Inverse CDF of the density `(m+1) r^m` on `[0, 1]`.
pub fn radial_inverse_cdf(u: f64, m: i32) -> f64 {
    u.powf(1.0 / f64::from(m + 1))
}

fn angles_from_unit(field: Field, u: &[f64]) -> AngularSample {
    let n = field.dim();
    let theta: Vec<f64> = (0..n - 2)
        .map(|k| if k < 3 { FRAC_PI_2 * u[k] } else { PI * u[k] })
        .collect();
    let phi = TAU * u[n - 2];
    let weight = angular_weight(&theta, field);
    AngularSample { theta, phi, weight }
}

fn check_index(cfg: &SamplerConfig, index: u64) -> Result<()> {
    if index >= cfg.n_samples {
        return Err(Error::Input(format!(
            "sample index {index} out of range for n_samples = {}",
            cfg.n_samples
        )));
    }
    Ok(())
}

/// Angular sample `index` of the configured stream.
pub fn sample_angles(cfg: &SamplerConfig, index: u64) -> Result<AngularSample> {
    check_index(cfg, index)?;
    let mut u = vec![0.0; cfg.field.dim() - 1];
    unit_point(cfg.kind, cfg.seed, index, &mut u)?;
    Ok(angles_from_unit(cfg.field, &u))
}

/// Angular sample `index` together with a radius drawn from `(m+1) r^m`.
///
/// The angles are identical to [`sample_angles`] at the same index.
pub fn sample_ball(cfg: &SamplerConfig, index: u64) -> Result<(AngularSample, f64)> {
    check_index(cfg, index)?;
    let n = cfg.field.dim();
    let mut u = vec![0.0; n];
    unit_point(cfg.kind, cfg.seed, index, &mut u)?;
    let r = radial_inverse_cdf(u[n - 1], cfg.field.radial_exponent());
    Ok((angles_from_unit(cfg.field, &u), r))
}

/// Monte Carlo estimate of the Hilbert-Schmidt volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub field: Field,
    pub volume: f64,
    pub stderr: f64,
    pub exact: f64,
    pub n_samples: u64,
}

impl VolumeEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.volume - self.exact).abs() / self.exact
    }

    /// Deviation from the exact value in units of the standard error.
    pub fn z_score(&self) -> f64 {
        (self.volume - self.exact) / self.stderr
    }
}

/// `box_volume * mean(w) / (m+1)` with its standard error.
pub fn estimate_volume(cfg: &SamplerConfig) -> Result<VolumeEstimate> {
    cfg.validate()?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    ordered_chunks(
        0..cfg.n_samples,
        cfg.workers,
        |range| {
            let (mut s, mut s2) = (0.0, 0.0);
            for i in range {
                let w = sample_angles(cfg, i)?.weight;
                s += w;
                s2 += w * w;
            }
            Ok((s, s2))
        },
        |_, (s, s2)| {
            sum += s;
            sum_sq += s2;
            Ok(())
        },
    )?;
    let n = cfg.n_samples as f64;
    let mean = sum / n;
    let var = if cfg.n_samples > 1 { (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0) } else { 0.0 };
    let scale = box_volume(cfg.field) / f64::from(cfg.field.radial_exponent() + 1);
    Ok(VolumeEstimate {
        field: cfg.field,
        volume: scale * mean,
        stderr: scale * (var / n).sqrt(),
        exact: cfg.field.hs_volume(),
        n_samples: cfg.n_samples,
    })
}
