//! Pushforward measure of local SL(2,C) conjugation, binned over the cube.

use serde::{Deserialize, Serialize};

use super::group::{kron, Mat2, Sl2cParam, NORMALIZER_FLOOR};
use super::jacobian::{gram_volume, jacobian_det, numerical_jacobian, DEFAULT_STEP};
use super::pauli::{classify_region, pauli_state, DPoint, Region};
use super::{GridSurface, RegionTally};
use crate::par::ordered_chunks;
use crate::sampling::{unit_point, SamplerKind};
use crate::state::Mat4;
use crate::{Error, Result};

/// Jacobian determinants below this magnitude are treated as singular.
pub const SINGULAR_DET: f64 = 1e-250;

const DIM: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitVizConfig {
    pub n_qmc: u64,
    pub bins: usize,
    /// Real and imaginary parts of the chart entries `a, b, c` are uniform
    /// in `[-entry_bound, entry_bound]`.
    pub entry_bound: f64,
    pub seed: u64,
    /// Forces `A = B = I`; the measure is then the surface volume of
    /// `d -> rho'`.
    pub identity_group: bool,
    #[serde(skip)]
    pub workers: usize,
}

impl QubitVizConfig {
    pub fn new(n_qmc: u64, bins: usize, entry_bound: f64, seed: u64) -> Self {
        Self { n_qmc, bins, entry_bound, seed, identity_group: false, workers: 1 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitVizCounts {
    pub accepted: u64,
    pub outside_tetrahedron: u64,
    /// Samples with `|a| <= 1e-6` in either chart.
    pub singular_chart: u64,
    pub singular_jacobian: u64,
    pub negative_jacobian: u64,
}

impl QubitVizCounts {
    fn add(&mut self, o: &Self) {
        self.accepted += o.accepted;
        self.outside_tetrahedron += o.outside_tetrahedron;
        self.singular_chart += o.singular_chart;
        self.singular_jacobian += o.singular_jacobian;
        self.negative_jacobian += o.negative_jacobian;
    }
}

/// Ratio of octahedron to tetrahedron measure with a delta-method error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityEstimate {
    pub p: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitVizResult {
    pub config: QubitVizConfig,
    pub tally: RegionTally,
    /// Measure per bin, index `(i * bins + j) * bins + k` for `(d1, d2, d3)`.
    pub bins: Vec<f64>,
    /// Axis-summed surfaces over `(d1, d2)`, `(d1, d3)` and `(d2, d3)`.
    pub marginals: [GridSurface; 3],
    pub separability: SeparabilityEstimate,
    /// Fraction of accepted samples whose raw Jacobian determinant is negative.
    pub negative_jacobian_fraction: f64,
    pub counts: QubitVizCounts,
}

/// Diagonal `(m11, m22, m33)` then real and imaginary parts of the upper
/// off-diagonals in row-major order.
pub(crate) fn qubit_coords(m: &Mat4) -> [f64; DIM] {
    let mut out = [0.0; DIM];
    out[0] = m[(0, 0)].re;
    out[1] = m[(1, 1)].re;
    out[2] = m[(2, 2)].re;
    let mut k = 3;
    for (r, c) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        out[k] = m[(r, c)].re;
        out[k + 1] = m[(r, c)].im;
        k += 2;
    }
    out
}

fn conjugated_coords(a: &Mat2, b: &Mat2, d: &[f64]) -> Result<Vec<f64>> {
    let rho = pauli_state(&DPoint { d1: d[0], d2: d[1], d3: d[2] });
    let k = kron(a, b);
    let n = k * rho.matrix() * k.adjoint();
    let t = n.trace().re;
    if !t.is_finite() || t.abs() <= NORMALIZER_FLOOR {
        return Err(Error::domain("vanishing normalizer"));
    }
    Ok(qubit_coords(&(n / num_complex::Complex64::new(t, 0.0))).to_vec())
}

/// `(a_A, b_A, c_A, a_B, b_B, c_B, d1, d2, d3) -> rho'` coordinates, with each
/// complex chart entry given as (re, im).
pub fn qubit_map(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != DIM {
        return Err(Error::domain(format!("qubit map takes {DIM} coordinates, got {}", x.len())));
    }
    let a = Sl2cParam::from_reals(&x[0..6]).matrix()?;
    let b = Sl2cParam::from_reals(&x[6..12]).matrix()?;
    conjugated_coords(&a, &b, &x[12..15])
}

fn bin_index(v: f64, bins: usize) -> usize {
    (((v + 1.0) / 2.0 * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

struct Partial {
    bins: Vec<f64>,
    tally: RegionTally,
    counts: QubitVizCounts,
    // sum m, sum m^2, sum m sep, sum m^2 sep
    moments: [f64; 4],
}

/// Bins the pushforward measure of `(A, B, d)` over the cube.
pub fn qubit_measure_bins(cfg: &QubitVizConfig) -> Result<QubitVizResult> {
    if cfg.bins < 3 || cfg.bins % 2 == 0 {
        return Err(Error::Input(format!("bins per axis must be odd and at least 3, got {}", cfg.bins)));
    }
    if !(cfg.entry_bound > 0.0 && cfg.entry_bound.is_finite()) {
        return Err(Error::Input(format!("entry bound must be positive, got {}", cfg.entry_bound)));
    }
    if cfg.n_qmc == 0 || cfg.n_qmc > 1 << 32 {
        return Err(Error::Input(format!("n_qmc must be in 1..=2^32, got {}", cfg.n_qmc)));
    }
    let nb = cfg.bins;
    let cells = nb * nb * nb;
    let mut total = Partial { bins: vec![0.0; cells], tally: RegionTally::default(), counts: QubitVizCounts::default(), moments: [0.0; 4] };
    ordered_chunks(
        0..cfg.n_qmc,
        cfg.workers.max(1),
        |range| {
            let mut part = Partial { bins: vec![0.0; cells], tally: RegionTally::default(), counts: QubitVizCounts::default(), moments: [0.0; 4] };
            let mut u = [0.0; DIM];
            for i in range {
                unit_point(SamplerKind::QuasiMonteCarlo, cfg.seed, i, &mut u)?;
                let mut x = [0.0; DIM];
                for j in 0..12 {
                    x[j] = cfg.entry_bound * (2.0 * u[j] - 1.0);
                }
                for j in 12..DIM {
                    x[j] = 2.0 * u[j] - 1.0;
                }
                let d = DPoint { d1: x[12], d2: x[13], d3: x[14] };
                let region = classify_region(&d);
                if region == Region::Witness {
                    part.counts.outside_tetrahedron += 1;
                    continue;
                }
                let raw = if cfg.identity_group {
                    let id = Mat2::identity();
                    let j = numerical_jacobian(|v| conjugated_coords(&id, &id, v), &x[12..], DEFAULT_STEP)?;
                    gram_volume(&j)
                } else {
                    let a_ok = Sl2cParam::from_reals(&x[0..6]).matrix().is_ok();
                    let b_ok = Sl2cParam::from_reals(&x[6..12]).matrix().is_ok();
                    if !(a_ok && b_ok) {
                        part.counts.singular_chart += 1;
                        continue;
                    }
                    match numerical_jacobian(qubit_map, &x, DEFAULT_STEP).and_then(|j| jacobian_det(&j)) {
                        Ok(det) => det,
                        Err(_) => f64::NAN,
                    }
                };
                if !raw.is_finite() || raw.abs() < SINGULAR_DET {
                    part.counts.singular_jacobian += 1;
                    continue;
                }
                if raw < 0.0 {
                    part.counts.negative_jacobian += 1;
                }
                let m = raw.abs();
                part.counts.accepted += 1;
                part.bins[(bin_index(d.d1, nb) * nb + bin_index(d.d2, nb)) * nb + bin_index(d.d3, nb)] += m;
                part.tally.add(region, m);
                let sep = if region == Region::Separable { 1.0 } else { 0.0 };
                part.moments[0] += m;
                part.moments[1] += m * m;
                part.moments[2] += m * sep;
                part.moments[3] += m * m * sep;
            }
            Ok(part)
        },
        |_, part| {
            for (a, b) in total.bins.iter_mut().zip(&part.bins) {
                *a += b;
            }
            total.tally.merge(&part.tally);
            total.counts.add(&part.counts);
            for (a, b) in total.moments.iter_mut().zip(part.moments) {
                *a += b;
            }
            Ok(())
        },
    )?;
    let [s, s2, ss, ss2] = total.moments;
    let p = ss / s;
    // Indicator squared is the indicator, so sum m^2 (sep - p)^2 expands as below.
    let var = (ss2 * (1.0 - 2.0 * p) + p * p * s2).max(0.0);
    let centers: Vec<f64> = (0..nb).map(|i| -1.0 + (2 * i + 1) as f64 / nb as f64).collect();
    let b = &total.bins;
    let idx = |i: usize, j: usize, k: usize| (i * nb + j) * nb + k;
    let marginal = |axes: [&str; 2], f: &dyn Fn(usize, usize) -> f64| GridSurface {
        axes: [axes[0].into(), axes[1].into()],
        abscissae: centers.clone(),
        values: (0..nb * nb).map(|q| f(q / nb, q % nb)).collect(),
        stderr: None,
    };
    let marginals = [
        marginal(["d1", "d2"], &|i, j| (0..nb).map(|k| b[idx(i, j, k)]).sum()),
        marginal(["d1", "d3"], &|i, k| (0..nb).map(|j| b[idx(i, j, k)]).sum()),
        marginal(["d2", "d3"], &|j, k| (0..nb).map(|i| b[idx(i, j, k)]).sum()),
    ];
    let accepted = total.counts.accepted;
    Ok(QubitVizResult {
        config: *cfg,
        tally: total.tally,
        bins: total.bins,
        marginals,
        separability: SeparabilityEstimate { p, stderr: var.sqrt() / s },
        negative_jacobian_fraction: if accepted > 0 { total.counts.negative_jacobian as f64 / accepted as f64 } else { 0.0 },
        counts: total.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_cover_the_cube() {
        assert_eq!(bin_index(-1.0, 7), 0);
        assert_eq!(bin_index(1.0, 7), 6);
        assert_eq!(bin_index(0.0, 7), 3);
    }

    #[test]
    fn rejects_even_bins() {
        assert!(qubit_measure_bins(&QubitVizConfig::new(10, 6, 1.0, 0)).is_err());
        assert!(qubit_measure_bins(&QubitVizConfig::new(10, 7, 0.0, 0)).is_err());
    }

    #[test]
    fn map_at_identity_is_the_pauli_state() {
        let mut x = [0.0; DIM];
        x[0] = 1.0;
        x[6] = 1.0;
        x[12] = 0.2;
        x[14] = -0.4;
        let y = qubit_map(&x).unwrap();
        let rho = pauli_state(&DPoint { d1: 0.2, d2: 0.0, d3: -0.4 });
        assert_eq!(y, qubit_coords(rho.matrix()).to_vec());
    }
}
