//! Quadrature weights for profiles on an equally spaced grid over `[0, 1]`.
//!
//! The profile is interpolated by a quadratic on each pair of panels (a line
//! on the last panel when the panel count is odd) and the interpolant is
//! integrated exactly against `x^m`. For `m = 0` this is composite Simpson
//! with a trapezoid on the trailing panel. Integrating the power exactly
//! keeps the all-separable normalization at 1 to rounding, where plain
//! Simpson on `F(r) r^m` would leave an `O(h^4 m^4)` error.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (x, w);
        out[n - 1 - i] = (-x, w);
    }
    out
}

/// `q` such that `sum_j q[j] F(x_j)` approximates `int_0^1 F(x) x^m dx`, with
/// `x_j = j / (points - 1)`.
pub fn product_weights(points: usize, m: i32) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Input(format!("need at least 2 grid points, got {points}")));
    }
    if m < 0 {
        return Err(Error::domain(format!("power {m} must be nonnegative")));
    }
    // Exact for polynomials of degree m + 2.
    let rule = gauss_legendre((m as usize + 4) / 2 + 1);
    let h = 1.0 / (points - 1) as f64;
    let x = |j: usize| j as f64 * h;
    let mut q = vec![0.0; points];
    let panels = points - 1;
    let mut add_panel = |nodes: &[usize]| {
        let a = x(nodes[0]);
        let b = x(*nodes.last().unwrap());
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for &(t, w) in &rule {
            let r = mid + half * t;
            let g = w * half * r.powi(m);
            for (i, &ni) in nodes.iter().enumerate() {
                let mut l = 1.0;
                for (k, &nk) in nodes.iter().enumerate() {
                    if k != i {
                        l *= (r - x(nk)) / (x(ni) - x(nk));
                    }
                }
                q[ni] += g * l;
            }
        }
    };
    let pairs = panels / 2;
    for p in 0..pairs {
        add_panel(&[2 * p, 2 * p + 1, 2 * p + 2]);
    }
    if panels % 2 == 1 {
        add_panel(&[panels - 1, panels]);
    }
    Ok(q)
}

/// Equally spaced grid on `[0, 1]` with both endpoints.
pub fn unit_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Input(format!("need at least 2 grid points, got {points}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|j| j as f64 / last).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(q: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        let n = q.len();
        q.iter().enumerate().map(|(j, w)| w * f(j as f64 / (n - 1) as f64)).sum()
    }

    #[test]
    fn gauss_legendre_integrates_monomials() {
        let rule = gauss_legendre(16);
        for k in 0..32 {
            let got: f64 = rule.iter().map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - exact).abs() < 1e-14, "k = {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn m_zero_is_simpson() {
        let q = product_weights(5, 0).unwrap();
        let h = 0.25;
        let expect = [h / 3.0, 4.0 * h / 3.0, 2.0 * h / 3.0, 4.0 * h / 3.0, h / 3.0];
        for (a, b) in q.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let q = product_weights(4, 0).unwrap();
        let h = 1.0 / 3.0;
        let expect = [h / 3.0, 4.0 * h / 3.0, h / 3.0 + h / 2.0, h / 2.0];
        for (a, b) in q.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_and_linear_profiles_are_exact() {
        for points in [2, 3, 10, 101, 1001] {
            for m in [0, 17, 29] {
                let q = product_weights(points, m).unwrap();
                let mf = f64::from(m);
                assert!((apply(&q, |_| mf + 1.0) - 1.0).abs() < 1e-12);
                assert!((apply(&q, |r| r) - 1.0 / (mf + 2.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(product_weights(1, 0).is_err());
        assert!(unit_grid(0).is_err());
        assert_eq!(unit_grid(3).unwrap(), vec![0.0, 0.5, 1.0]);
    }
}
