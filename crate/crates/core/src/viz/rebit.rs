//! Pushforward measure of local SL(2,R) conjugation over the `d1-d3` plane.

use std::f64::consts::TAU;

use nalgebra::{Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use super::group::{bargmann_to_sl2r, kron_real, Sl2rParam, NORMALIZER_FLOOR};
use super::pauli::{classify_region, sigma_sigma, DPoint};
use super::{GridSurface, RegionTally};
use crate::par::ordered_chunks;
use crate::sampling::{unit_point, SamplerKind};
use crate::{Error, Result};

const GROUP_DIM: usize = 6;
const STEP: f64 = 1e-5;

/// How the measure at a grid point is formed from the map Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RebitMeasure {
    /// `sqrt(det(J^T J))` of the 9x8 Jacobian of
    /// `(group parameters, d1, d3) -> rho'`: the surface volume of the image.
    GramSurface,
    /// `|det J|` of the 9x9 Jacobian of `(group parameters, d1, d2, d3) -> rho'`
    /// evaluated at `d2 = 0`.
    FullJacobian,
}

impl std::str::FromStr for RebitMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gram" | "gram-surface" => Ok(RebitMeasure::GramSurface),
            "full" | "full-jacobian" => Ok(RebitMeasure::FullJacobian),
            other => Err(Error::Input(format!("unknown rebit measure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RebitVizConfig {
    pub n_qmc: u64,
    pub grid: usize,
    pub seed: u64,
    pub measure: RebitMeasure,
    /// Draw `A` from the coordinates normally used for `B` and vice versa.
    pub swap_roles: bool,
    #[serde(skip)]
    pub workers: usize,
}

impl RebitVizConfig {
    pub fn new(n_qmc: u64, grid: usize, seed: u64) -> Self {
        Self { n_qmc, grid, seed, measure: RebitMeasure::GramSurface, swap_roles: false, workers: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RebitRatios {
    pub cube_minus_tetra_over_tetra: f64,
    pub octa_over_tetra: f64,
    pub entangled_over_witness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RebitVizResult {
    pub config: RebitVizConfig,
    pub tally: RegionTally,
    pub surface: GridSurface,
    pub ratios: RebitRatios,
    /// Grid evaluations dropped for a vanishing normalizer.
    pub skipped: u64,
}

/// The 9 independent entries of a real symmetric 4x4 matrix: the diagonal
/// `(m11, m22, m33)` and the upper off-diagonals in row-major order.
pub(crate) fn rebit_coords(m: &Matrix4<f64>) -> [f64; 9] {
    [m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(0, 1)], m[(0, 2)], m[(0, 3)], m[(1, 2)], m[(1, 3)], m[(2, 3)]]
}

fn group_pair(p: &[f64]) -> Result<Matrix4<f64>> {
    let a = bargmann_to_sl2r(&Sl2rParam { gamma_re: p[0], gamma_im: p[1], omega: p[2] })?;
    let b = bargmann_to_sl2r(&Sl2rParam { gamma_re: p[3], gamma_im: p[4], omega: p[5] })?;
    Ok(kron_real(&a, &b))
}

/// `(gamma_A, omega_A, gamma_B, omega_B, d...) -> rho'` coordinates, where
/// `d` is `(d1, d3)` with `d2 = 0`, or `(d1, d2, d3)`.
pub fn rebit_map(x: &[f64]) -> Result<Vec<f64>> {
    let d = match x.len() {
        8 => [x[6], 0.0, x[7]],
        9 => [x[6], x[7], x[8]],
        n => return Err(Error::domain(format!("rebit map takes 8 or 9 coordinates, got {n}"))),
    };
    let k = group_pair(&x[..GROUP_DIM])?;
    let mut rho = Matrix4::identity();
    for (i, dk) in d.iter().enumerate() {
        rho += sigma_sigma(i + 1) * *dk;
    }
    let n = k * rho * k.transpose() / 4.0;
    let t = n.trace();
    if t.abs() <= NORMALIZER_FLOOR {
        return Err(Error::domain("vanishing normalizer"));
    }
    Ok(rebit_coords(&(n / t)).to_vec())
}

/// Per-sample data: coordinates and traces of `K S_k K^T / 4` for
/// `S = (I, s1 s1, s2 s2, s3 s3)` and their central differences in the six
/// group parameters.
struct Basis {
    c: [[f64; 9]; 4],
    t: [f64; 4],
    dc: [[[f64; 9]; 4]; GROUP_DIM],
    dt: [[f64; 4]; GROUP_DIM],
}

fn basis_at(p: &[f64; GROUP_DIM]) -> Result<([[f64; 9]; 4], [f64; 4])> {
    let k = group_pair(p)?;
    let mut c = [[0.0; 9]; 4];
    let mut t = [0.0; 4];
    for s in 0..4 {
        let sk = if s == 0 { Matrix4::identity() } else { sigma_sigma(s) };
        let n = k * sk * k.transpose() / 4.0;
        c[s] = rebit_coords(&n);
        t[s] = n.trace();
    }
    Ok((c, t))
}

impl Basis {
    fn new(p: [f64; GROUP_DIM]) -> Result<Self> {
        let (c, t) = basis_at(&p)?;
        let mut dc = [[[0.0; 9]; 4]; GROUP_DIM];
        let mut dt = [[0.0; 4]; GROUP_DIM];
        for i in 0..GROUP_DIM {
            let h = STEP * p[i].abs().max(1.0);
            let mut plus = p;
            plus[i] += h;
            let mut minus = p;
            minus[i] -= h;
            // Keep the difference stencil inside the unit disk.
            if i % 3 != 2 {
                let j = i - i % 3;
                for q in [&plus, &minus] {
                    if q[j] * q[j] + q[j + 1] * q[j + 1] >= 1.0 {
                        return Err(Error::domain("group parameter too close to the disk boundary"));
                    }
                }
            }
            let (cp, tp) = basis_at(&plus)?;
            let (cm, tm) = basis_at(&minus)?;
            for s in 0..4 {
                for e in 0..9 {
                    dc[i][s][e] = (cp[s][e] - cm[s][e]) / (2.0 * h);
                }
                dt[i][s] = (tp[s] - tm[s]) / (2.0 * h);
            }
        }
        Ok(Self { c, t, dc, dt })
    }

    /// Measure at `d`, or `None` for a vanishing normalizer.
    fn measure(&self, d: [f64; 3], kind: RebitMeasure) -> Option<f64> {
        let w = [1.0, d[0], d[1], d[2]];
        let comb = |c: &[[f64; 9]; 4]| {
            let mut out = [0.0; 9];
            for s in 0..4 {
                for e in 0..9 {
                    out[e] += w[s] * c[s][e];
                }
            }
            out
        };
        let n = comb(&self.c);
        let t: f64 = (0..4).map(|s| w[s] * self.t[s]).sum();
        if t.abs() <= NORMALIZER_FLOOR {
            return None;
        }
        let t2 = t * t;
        // d(N/T) = (dN T - N dT) / T^2
        let column = |dn: &[f64; 9], dtr: f64| {
            let mut col = [0.0; 9];
            for e in 0..9 {
                col[e] = (dn[e] * t - n[e] * dtr) / t2;
            }
            col
        };
        let mut cols: Vec<[f64; 9]> = Vec::with_capacity(9);
        for i in 0..GROUP_DIM {
            let dn = comb(&self.dc[i]);
            let dtr: f64 = (0..4).map(|s| w[s] * self.dt[i][s]).sum();
            cols.push(column(&dn, dtr));
        }
        let d_indices: &[usize] = match kind {
            RebitMeasure::GramSurface => &[1, 3],
            RebitMeasure::FullJacobian => &[1, 2, 3],
        };
        for &s in d_indices {
            cols.push(column(&self.c[s], self.t[s]));
        }
        Some(match kind {
            RebitMeasure::GramSurface => {
                let j = SMatrix::<f64, 9, 8>::from_fn(|r, c| cols[c][r]);
                (j.transpose() * j).determinant().max(0.0).sqrt()
            }
            RebitMeasure::FullJacobian => SMatrix::<f64, 9, 9>::from_fn(|r, c| cols[c][r]).determinant().abs(),
        })
    }
}

/// Group parameters of QMC point `u`: `gamma = sqrt(u0) e^{2 pi i u1}`,
/// `omega = 2 pi u2` for `A`, likewise from `u3..u5` for `B`.
fn group_params(u: &[f64; GROUP_DIM], swap: bool) -> [f64; GROUP_DIM] {
    let one = |v: &[f64]| {
        let rho = v[0].sqrt();
        let (s, c) = (TAU * v[1]).sin_cos();
        [rho * c, rho * s, TAU * v[2]]
    };
    let (a, b) = if swap { (one(&u[3..]), one(&u[..3])) } else { (one(&u[..3]), one(&u[3..])) };
    [a[0], a[1], a[2], b[0], b[1], b[2]]
}

/// Grid abscissae `-1..=1` with `grid` points.
pub(crate) fn symmetric_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|i| -1.0 + 2.0 * i as f64 / (grid - 1) as f64).collect()
}

struct Partial {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    skipped: u64,
}

/// Accumulates the pushforward measure over the `grid x grid` lattice of the
/// `d1-d3` plane (`d2 = 0`) for `n_qmc` quasi-random group elements.
pub fn rebit_measure_map(cfg: &RebitVizConfig) -> Result<RebitVizResult> {
    if cfg.grid < 3 {
        return Err(Error::Input(format!("grid must be at least 3, got {}", cfg.grid)));
    }
    if cfg.n_qmc == 0 || cfg.n_qmc > 1 << 32 {
        return Err(Error::Input(format!("n_qmc must be in 1..=2^32, got {}", cfg.n_qmc)));
    }
    let axis = symmetric_grid(cfg.grid);
    let cells = cfg.grid * cfg.grid;
    let mut sum = vec![0.0; cells];
    let mut sum_sq = vec![0.0; cells];
    let mut skipped = 0;
    ordered_chunks(
        0..cfg.n_qmc,
        cfg.workers.max(1),
        |range| {
            let mut part = Partial { sum: vec![0.0; cells], sum_sq: vec![0.0; cells], skipped: 0 };
            let mut u = [0.0; GROUP_DIM];
            for i in range {
                unit_point(SamplerKind::QuasiMonteCarlo, cfg.seed, i, &mut u)?;
                let basis = match Basis::new(group_params(&u, cfg.swap_roles)) {
                    Ok(b) => b,
                    Err(_) => {
                        part.skipped += cells as u64;
                        continue;
                    }
                };
                for (a, &d1) in axis.iter().enumerate() {
                    for (b, &d3) in axis.iter().enumerate() {
                        match basis.measure([d1, 0.0, d3], cfg.measure) {
                            Some(m) if m.is_finite() => {
                                part.sum[a * cfg.grid + b] += m;
                                part.sum_sq[a * cfg.grid + b] += m * m;
                            }
                            _ => part.skipped += 1,
                        }
                    }
                }
            }
            Ok(part)
        },
        |_, part| {
            for (x, y) in sum.iter_mut().zip(&part.sum) {
                *x += y;
            }
            for (x, y) in sum_sq.iter_mut().zip(&part.sum_sq) {
                *x += y;
            }
            skipped += part.skipped;
            Ok(())
        },
    )?;
    let n = cfg.n_qmc as f64;
    let mut tally = RegionTally::default();
    for (a, &d1) in axis.iter().enumerate() {
        for (b, &d3) in axis.iter().enumerate() {
            let region = classify_region(&DPoint { d1, d2: 0.0, d3 });
            tally.add(region, sum[a * cfg.grid + b] / n);
        }
    }
    let values: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let stderr = sum_sq
        .iter()
        .zip(&values)
        .map(|(s2, m)| if n > 1.0 { ((s2 / n - m * m).max(0.0) / (n - 1.0)).sqrt() } else { 0.0 })
        .collect();
    let tetra = tally.measure_octahedron + tally.measure_tetra_minus_octa;
    let ratios = RebitRatios {
        cube_minus_tetra_over_tetra: tally.measure_cube_minus_tetra / tetra,
        octa_over_tetra: tally.measure_octahedron / tetra,
        entangled_over_witness: tally.measure_tetra_minus_octa / tally.measure_cube_minus_tetra,
    };
    Ok(RebitVizResult {
        config: *cfg,
        tally,
        surface: GridSurface { axes: ["d1".into(), "d3".into()], abscissae: axis, values, stderr: Some(stderr) },
        ratios,
        skipped,
    })
}

/// Measure at one grid point computed from [`rebit_map`] with a full
/// numerical Jacobian. Slow; used to cross-check the assembled Jacobian.
pub fn rebit_point_measure(group: &[f64; GROUP_DIM], d: [f64; 3], kind: RebitMeasure) -> Result<f64> {
    use super::jacobian::{gram_volume, jacobian_det, numerical_jacobian, DEFAULT_STEP};
    let mut x = group.to_vec();
    match kind {
        RebitMeasure::GramSurface => {
            if d[1] != 0.0 {
                return Err(Error::domain("the surface measure lives on d2 = 0"));
            }
            x.extend([d[0], d[2]]);
            Ok(gram_volume(&numerical_jacobian(rebit_map, &x, DEFAULT_STEP)?))
        }
        RebitMeasure::FullJacobian => {
            x.extend(d);
            Ok(jacobian_det(&numerical_jacobian(rebit_map, &x, DEFAULT_STEP)?)?.abs())
        }
    }
}

/// The same measure through the per-sample basis used by [`rebit_measure_map`].
pub fn rebit_point_measure_fast(group: &[f64; GROUP_DIM], d: [f64; 3], kind: RebitMeasure) -> Result<Option<f64>> {
    Ok(Basis::new(*group)?.measure(d, kind))
}
