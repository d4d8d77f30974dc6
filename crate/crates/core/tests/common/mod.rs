#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepscope::state::{cholesky_compose, CholeskyFactor, DensityMatrix};
use sepscope::viz::{bargmann_to_sl2r, Mat2, Sl2cParam, Sl2rParam};
use sepscope::Field;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let (u, v): (f64, f64) = (rng.random(), rng.random());
    (-2.0 * (1.0 - u).ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Uniform point of the Cholesky ball: nonnegative diagonal, norm below 1.
pub fn ball_coords(rng: &mut ChaCha8Rng, field: Field) -> Vec<f64> {
    let n = field.dim();
    let mut x: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r = rng.random::<f64>().powf(1.0 / n as f64);
    for (k, v) in x.iter_mut().enumerate() {
        *v *= r / norm;
        if k < 3 {
            *v = v.abs();
        }
    }
    x
}

pub fn random_state(rng: &mut ChaCha8Rng, field: Field) -> (CholeskyFactor, DensityMatrix) {
    let g = CholeskyFactor::from_coords(field, &ball_coords(rng, field)).unwrap();
    let rho = cholesky_compose(&g).unwrap();
    (g, rho)
}

pub fn random_sl2r_param(rng: &mut ChaCha8Rng) -> Sl2rParam {
    sl2r_param_within(rng, 0.95)
}

/// Bargmann parameters with `|gamma| < gamma_max`.
pub fn sl2r_param_within(rng: &mut ChaCha8Rng, gamma_max: f64) -> Sl2rParam {
    let r = gamma_max * rng.random::<f64>().sqrt();
    let t = std::f64::consts::TAU * rng.random::<f64>();
    Sl2rParam { gamma_re: r * t.cos(), gamma_im: r * t.sin(), omega: std::f64::consts::TAU * rng.random::<f64>() }
}

pub fn random_sl2r(rng: &mut ChaCha8Rng) -> Mat2 {
    sl2r_within(rng, 0.95)
}

pub fn sl2r_within(rng: &mut ChaCha8Rng, gamma_max: f64) -> Mat2 {
    bargmann_to_sl2r(&sl2r_param_within(rng, gamma_max)).unwrap().map(|x| num_complex::Complex64::new(x, 0.0))
}

/// SL(2,C) element from the unit-determinant chart with entries in `[-2, 2]`
/// and `|a| >= 0.2`.
pub fn random_sl2c(rng: &mut ChaCha8Rng) -> Mat2 {
    sl2c_within(rng, 2.0, 0.2)
}

/// Chart entries in `[-bound, bound]` with `|a| >= min_a`.
pub fn sl2c_within(rng: &mut ChaCha8Rng, bound: f64, min_a: f64) -> Mat2 {
    loop {
        let x: Vec<f64> = (0..6).map(|_| bound * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let p = Sl2cParam::from_reals(&x);
        if p.a.norm() >= min_a {
            return p.matrix().unwrap();
        }
    }
}

/// Real entries `rho_11, rho_22, rho_33` then the strictly lower entries
/// `rho_21, rho_31, rho_32, rho_41, rho_42, rho_43` (real and imaginary parts
/// interleaved for qubits).
pub fn rho_coords(rho: &DensityMatrix) -> Vec<f64> {
    let m = rho.matrix();
    let mut out = vec![m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re];
    for (i, j) in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
        out.push(m[(i, j)].re);
        if rho.field() == Field::Qubit {
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Point of the tetrahedron of Pauli-diagonal states.
pub fn random_d_point(rng: &mut ChaCha8Rng) -> sepscope::viz::DPoint {
    loop {
        let d: [f64; 3] = std::array::from_fn(|_| 2.0 * rng.random::<f64>() - 1.0);
        let p = sepscope::viz::DPoint::new(d[0], d[1], d[2]).unwrap();
        if sepscope::viz::pauli_eigenvalues(&p).iter().all(|&e| e >= 0.0) {
            return p;
        }
    }
}
