//! Radial and azimuthal separability profiles.
//!
//! A run walks the sample indices of a [`SamplerConfig`] in fixed-size chunks,
//! evaluates a separability indicator on a grid for every sample and folds the
//! weighted counts in index order. Because chunk boundaries and the fold order
//! never change, the result depends only on the configuration, not on the
//! worker count or on where a run was checkpointed.

mod checkpoint;
mod integrate;
mod orthogonality;

pub use checkpoint::Checkpoint;
pub use integrate::{product_weights, unit_grid};
pub use orthogonality::{determinant_orthogonality, OrthogonalityEstimate};

use std::f64::consts::TAU;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::par::{ordered_chunks, CHUNK};
use crate::sampling::{sample_angles, sample_ball, SamplerConfig};
use crate::state::det_pt_on_radial_ray;
use crate::{Error, Field, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Radial,
    Azimuthal,
}

impl Axis {
    pub const fn name(self) -> &'static str {
        match self {
            Axis::Radial => "radial",
            Axis::Azimuthal => "azimuthal",
        }
    }

    /// Name of the profile abscissa.
    pub const fn abscissa(self) -> &'static str {
        match self {
            Axis::Radial => "r",
            Axis::Azimuthal => "phi_hat",
        }
    }

    pub(crate) const fn tag(self) -> u8 {
        match self {
            Axis::Radial => 1,
            Axis::Azimuthal => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(Axis::Radial),
            2 => Some(Axis::Azimuthal),
            _ => None,
        }
    }

    /// Profile scale: `m + 1` for radial profiles, 1 for azimuthal ones.
    fn scale(self, field: Field) -> f64 {
        match self {
            Axis::Radial => f64::from(field.radial_exponent() + 1),
            Axis::Azimuthal => 1.0,
        }
    }

    fn power(self, field: Field) -> i32 {
        match self {
            Axis::Radial => field.radial_exponent(),
            Axis::Azimuthal => 0,
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Separability indicator evaluated along a ray of fixed direction.
pub trait Indicator: Sync {
    /// Stable identifier; part of the checkpoint configuration hash.
    fn id(&self) -> &'static str;

    /// One flag per entry of `radii` for the states at `(r, theta, phi)`.
    fn on_ray(&self, field: Field, theta: &[f64], phi: f64, radii: &[f64]) -> Result<Vec<bool>>;
}

/// The PPT test: `det(rho^PT) >= 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ppt;

impl Indicator for Ppt {
    fn id(&self) -> &'static str {
        "ppt"
    }

    fn on_ray(&self, field: Field, theta: &[f64], phi: f64, radii: &[f64]) -> Result<Vec<bool>> {
        det_pt_on_radial_ray(theta, phi, field, radii)
    }
}

/// Declares every state separable. Used to check normalization.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllSeparable;

impl Indicator for AllSeparable {
    fn id(&self) -> &'static str {
        "all"
    }

    fn on_ray(&self, _: Field, _: &[f64], _: f64, radii: &[f64]) -> Result<Vec<bool>> {
        Ok(vec![true; radii.len()])
    }
}

/// Declares the states with `r <= radius` separable.
#[derive(Debug, Clone, Copy)]
pub struct WithinRadius(pub f64);

impl Indicator for WithinRadius {
    fn id(&self) -> &'static str {
        "within-radius"
    }

    fn on_ray(&self, _: Field, _: &[f64], _: f64, radii: &[f64]) -> Result<Vec<bool>> {
        Ok(radii.iter().map(|&r| r <= self.0).collect())
    }
}

/// Running sums of a profile run.
///
/// With sample weight `w`, grid indicator `s_j` and the per-sample integral
/// `p` of the scaled indicator row, the sums are `S1_j = sum w s_j`,
/// `S2_j = sum w^2 s_j`, `W = sum w`, `W2 = sum w^2`, `WP = sum w p`,
/// `WWP = sum w^2 p` and `WWPP = sum w^2 p^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sums {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub w: f64,
    pub w2: f64,
    pub wp: f64,
    pub wwp: f64,
    pub wwpp: f64,
}

impl Sums {
    fn zeros(points: usize) -> Self {
        Self { s1: vec![0.0; points], s2: vec![0.0; points], w: 0.0, w2: 0.0, wp: 0.0, wwp: 0.0, wwpp: 0.0 }
    }

    fn add(&mut self, other: &Sums) {
        for (a, b) in self.s1.iter_mut().zip(&other.s1) {
            *a += b;
        }
        for (a, b) in self.s2.iter_mut().zip(&other.s2) {
            *a += b;
        }
        self.w += other.w;
        self.w2 += other.w2;
        self.wp += other.wp;
        self.wwp += other.wwp;
        self.wwpp += other.wwpp;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEstimate {
    pub axis: Axis,
    pub field: Field,
    pub grid: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_samples: u64,
    pub total_weight: f64,
    /// Standard error of the integrated probability from per-sample
    /// integrals, when the profile came from a sampling run.
    pub integral_stderr: Option<f64>,
}

impl ProfileEstimate {
    /// Profile of a single value per grid point without sampling errors, e.g.
    /// one read back from a CSV file.
    pub fn from_values(axis: Axis, field: Field, grid: Vec<f64>, value: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        let p = Self { axis, field, grid, value, stderr, n_samples: 0, total_weight: 0.0, integral_stderr: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.grid.len();
        if k < 2 || self.value.len() != k || self.stderr.len() != k {
            return Err(Error::Input("profile needs at least 2 points and matching columns".into()));
        }
        let h = 1.0 / (k - 1) as f64;
        for (j, &x) in self.grid.iter().enumerate() {
            if (x - j as f64 * h).abs() > 1e-9 {
                return Err(Error::Input(format!("grid is not equally spaced on [0, 1] at index {j}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate {
    pub p: f64,
    pub stderr: f64,
    pub field: Field,
    pub axis: Axis,
    pub n_samples: u64,
}

/// Integrates a profile to a separability probability.
///
/// Radial profiles are integrated against `r^m`, azimuthal ones against 1.
/// The standard error is the per-sample one when available, otherwise the
/// grid errors are propagated as if independent.
pub fn integrate_profile(p: &ProfileEstimate) -> Result<ProbabilityEstimate> {
    p.validate()?;
    let q = product_weights(p.grid.len(), p.axis.power(p.field))?;
    let value: f64 = q.iter().zip(&p.value).map(|(a, b)| a * b).sum();
    let stderr = match p.integral_stderr {
        Some(se) => se,
        None => q.iter().zip(&p.stderr).map(|(a, s)| (a * s).powi(2)).sum::<f64>().sqrt(),
    };
    Ok(ProbabilityEstimate { p: value, stderr, field: p.field, axis: p.axis, n_samples: p.n_samples })
}

/// A resumable profile computation.
pub struct ProfileRun<'a> {
    axis: Axis,
    cfg: SamplerConfig,
    grid: Vec<f64>,
    quad: Vec<f64>,
    indicator: &'a dyn Indicator,
    sums: Sums,
    next_index: u64,
}

impl<'a> ProfileRun<'a> {
    pub fn new(axis: Axis, cfg: SamplerConfig, grid_points: usize, indicator: &'a dyn Indicator) -> Result<Self> {
        cfg.validate()?;
        let grid = unit_grid(grid_points)?;
        let quad = product_weights(grid_points, axis.power(cfg.field))?;
        Ok(Self { axis, cfg, grid, quad, indicator, sums: Sums::zeros(grid_points), next_index: 0 })
    }

    /// Restores a run from a checkpoint taken with the same configuration.
    ///
    /// Only `cfg.workers` may differ from the saved run.
    pub fn from_checkpoint(
        ck: Checkpoint,
        axis: Axis,
        cfg: SamplerConfig,
        grid_points: usize,
        indicator: &'a dyn Indicator,
    ) -> Result<Self> {
        let mut run = Self::new(axis, cfg, grid_points, indicator)?;
        if ck.field != cfg.field {
            return Err(Error::Checkpoint(format!(
                "checkpoint holds a {} run, expected {}",
                ck.field, cfg.field
            )));
        }
        if ck.axis != axis {
            return Err(Error::Checkpoint(format!("checkpoint holds a {} run, expected {axis}", ck.axis)));
        }
        if ck.config_hash != run.config_hash() {
            return Err(Error::Checkpoint("checkpoint configuration does not match this run".into()));
        }
        if ck.sums.s1.len() != grid_points || ck.next_index > cfg.n_samples {
            return Err(Error::Checkpoint("checkpoint sums are inconsistent with its header".into()));
        }
        run.sums = ck.sums;
        run.next_index = ck.next_index;
        Ok(run)
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    pub fn is_complete(&self) -> bool {
        self.next_index >= self.cfg.n_samples
    }

    pub(crate) fn config_hash(&self) -> [u8; 8] {
        checkpoint::config_hash(self.axis, &self.cfg, self.grid.len(), self.indicator.id())
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            axis: self.axis,
            field: self.cfg.field,
            kind: self.cfg.kind,
            seed: self.cfg.seed,
            n_samples: self.cfg.n_samples,
            grid_points: self.grid.len() as u64,
            config_hash: self.config_hash(),
            next_index: self.next_index,
            sums: self.sums.clone(),
        }
    }

    /// Processes samples up to `until`, rounded up to a chunk boundary, and
    /// returns the new position.
    pub fn advance(&mut self, until: u64) -> Result<u64> {
        let end = until.div_ceil(CHUNK).saturating_mul(CHUNK).min(self.cfg.n_samples);
        if end <= self.next_index {
            return Ok(self.next_index);
        }
        let start = self.next_index;
        let sums = &mut self.sums;
        let next = &mut self.next_index;
        let this = Evaluator { axis: self.axis, cfg: &self.cfg, grid: &self.grid, quad: &self.quad, indicator: self.indicator };
        ordered_chunks(
            start..end,
            self.cfg.workers,
            |range| this.chunk(range),
            |range, part| {
                sums.add(&part);
                *next = range.end;
                Ok(())
            },
        )?;
        Ok(self.next_index)
    }

    /// Runs to completion, calling `on_progress` after every `every` samples.
    pub fn run_with_progress(&mut self, every: u64, mut on_progress: impl FnMut(&Self) -> Result<()>) -> Result<()> {
        let every = every.max(CHUNK);
        while !self.is_complete() {
            self.advance(self.next_index + every)?;
            on_progress(self)?;
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<ProfileEstimate> {
        if !self.is_complete() {
            return Err(Error::Estimation(format!(
                "run stopped at sample {} of {}",
                self.next_index, self.cfg.n_samples
            )));
        }
        let s = &self.sums;
        if !(s.w > 0.0) {
            return Err(Error::Estimation("total sample weight is zero".into()));
        }
        let scale = self.axis.scale(self.cfg.field);
        let mut value = Vec::with_capacity(self.grid.len());
        let mut stderr = Vec::with_capacity(self.grid.len());
        for (&s1, &s2) in s.s1.iter().zip(&s.s2) {
            let ratio = s1 / s.w;
            let var = (s2 * (1.0 - 2.0 * ratio) + ratio * ratio * s.w2).max(0.0);
            value.push(scale * ratio);
            stderr.push(scale * var.sqrt() / s.w);
        }
        let p = s.wp / s.w;
        let var_p = (s.wwpp - 2.0 * p * s.wwp + p * p * s.w2).max(0.0);
        Ok(ProfileEstimate {
            axis: self.axis,
            field: self.cfg.field,
            grid: self.grid.clone(),
            value,
            stderr,
            n_samples: self.cfg.n_samples,
            total_weight: s.w,
            integral_stderr: Some(var_p.sqrt() / s.w),
        })
    }
}

struct Evaluator<'r> {
    axis: Axis,
    cfg: &'r SamplerConfig,
    grid: &'r [f64],
    quad: &'r [f64],
    indicator: &'r dyn Indicator,
}

impl Evaluator<'_> {
    fn chunk(&self, range: Range<u64>) -> Result<Sums> {
        let field = self.cfg.field;
        let scale = self.axis.scale(field);
        let mut part = Sums::zeros(self.grid.len());
        for i in range {
            let (flags, weight) = match self.axis {
                Axis::Radial => {
                    let s = sample_angles(self.cfg, i)?;
                    if s.weight == 0.0 {
                        continue;
                    }
                    (self.indicator.on_ray(field, &s.theta, s.phi, self.grid)?, s.weight)
                }
                Axis::Azimuthal => {
                    let (s, r) = sample_ball(self.cfg, i)?;
                    if s.weight == 0.0 {
                        continue;
                    }
                    let mut flags = Vec::with_capacity(self.grid.len());
                    for &x in self.grid {
                        flags.push(self.indicator.on_ray(field, &s.theta, TAU * x, &[r])?[0]);
                    }
                    (flags, s.weight)
                }
            };
            let w = weight;
            let mut p = 0.0;
            for (j, &sep) in flags.iter().enumerate() {
                if sep {
                    part.s1[j] += w;
                    part.s2[j] += w * w;
                    p += self.quad[j];
                }
            }
            p *= scale;
            part.w += w;
            part.w2 += w * w;
            part.wp += w * p;
            part.wwp += w * w * p;
            part.wwpp += w * w * p * p;
        }
        Ok(part)
    }
}

/// Radial profile `F(r) = (m+1) sum w sep(r) / sum w` under the PPT test.
pub fn radial_profile(cfg: &SamplerConfig, grid_points: usize) -> Result<ProfileEstimate> {
    profile_with(Axis::Radial, cfg, grid_points, &Ppt)
}

/// Azimuthal profile `F(phi_hat) = sum w sep(phi_hat) / sum w` under the PPT
/// test, with `r` drawn from `(m+1) r^m`.
pub fn azimuthal_profile(cfg: &SamplerConfig, grid_points: usize) -> Result<ProfileEstimate> {
    profile_with(Axis::Azimuthal, cfg, grid_points, &Ppt)
}

/// Profile along `axis` with a caller-supplied indicator.
pub fn profile_with(axis: Axis, cfg: &SamplerConfig, grid_points: usize, indicator: &dyn Indicator) -> Result<ProfileEstimate> {
    let mut run = ProfileRun::new(axis, *cfg, grid_points, indicator)?;
    run.advance(cfg.n_samples)?;
    run.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SamplerKind;

    fn cfg(field: Field, n: u64) -> SamplerConfig {
        SamplerConfig::new(field, SamplerKind::MonteCarlo, 11, n)
    }

    #[test]
    fn all_separable_normalizes_to_one() {
        for field in [Field::Rebit, Field::Qubit] {
            for axis in [Axis::Radial, Axis::Azimuthal] {
                let p = profile_with(axis, &cfg(field, 300), 11, &AllSeparable).unwrap();
                let m1 = axis.scale(field);
                assert!(p.value.iter().all(|&v| (v - m1).abs() < 1e-12));
                let prob = integrate_profile(&p).unwrap();
                assert!((prob.p - 1.0).abs() < 1e-12, "{axis} {field}: {}", prob.p);
                assert!(prob.stderr < 1e-12);
            }
        }
    }

    #[test]
    fn half_radius_indicator_gives_power() {
        let p = profile_with(Axis::Radial, &cfg(Field::Rebit, 200), 101, &WithinRadius(0.5)).unwrap();
        let prob = integrate_profile(&p).unwrap();
        // The step at r = 1/2 is smeared over one panel.
        assert!((prob.p - 0.5f64.powi(18)).abs() < 1e-5);
    }

    #[test]
    fn advance_rounds_to_chunks_and_resumes_identically() {
        let c = cfg(Field::Rebit, 3000);
        let whole = radial_profile(&c, 21).unwrap();
        let mut run = ProfileRun::new(Axis::Radial, c, 21, &Ppt).unwrap();
        assert_eq!(run.advance(1).unwrap(), CHUNK);
        let ck = run.checkpoint();
        let mut resumed = ProfileRun::from_checkpoint(ck, Axis::Radial, c.with_workers(2), 21, &Ppt).unwrap();
        resumed.advance(u64::MAX).unwrap();
        assert_eq!(resumed.finish().unwrap(), whole);
    }

    #[test]
    fn unfinished_run_cannot_finish() {
        let run = ProfileRun::new(Axis::Radial, cfg(Field::Rebit, 10), 5, &Ppt).unwrap();
        assert!(run.finish().is_err());
    }
}
