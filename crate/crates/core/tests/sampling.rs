use sepscope::sampling::{box_volume, estimate_volume, sample_angles, sample_ball, unit_point, SamplerConfig, SamplerKind};
use sepscope::Field;

/// Warnock's closed form for the squared L2-star discrepancy.
fn l2_star_sq(points: &[[f64; 2]]) -> f64 {
    let n = points.len() as f64;
    let a: f64 = points.iter().map(|p| p.iter().map(|x| 1.0 - x * x).product::<f64>()).sum();
    let mut b = 0.0;
    for p in points {
        for q in points {
            b += (0..2).map(|k| 1.0 - p[k].max(q[k])).product::<f64>();
        }
    }
    1.0 / 9.0 - a / (2.0 * n) + b / (n * n)
}

fn projection(kind: SamplerKind, seed: u64, dims: (usize, usize), n: u64) -> Vec<[f64; 2]> {
    let mut u = vec![0.0; 15];
    (0..n)
        .map(|i| {
            unit_point(kind, seed, i, &mut u).unwrap();
            [u[dims.0], u[dims.1]]
        })
        .collect()
}

#[test]
fn scrambled_sobol_beats_monte_carlo_on_projections() {
    let n = 1024;
    for dims in [(0, 1), (2, 9), (6, 13), (12, 14)] {
        let mc: Vec<f64> = (0..20).map(|s| l2_star_sq(&projection(SamplerKind::MonteCarlo, s, dims, n)).sqrt()).collect();
        let mean = mc.iter().sum::<f64>() / mc.len() as f64;
        let sd = (mc.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (mc.len() - 1) as f64).sqrt();
        let se = sd / (mc.len() as f64).sqrt();
        let qmc = l2_star_sq(&projection(SamplerKind::QuasiMonteCarlo, 42, dims, n)).sqrt();
        assert!(qmc < mean - 3.0 * se, "{dims:?}: qmc {qmc:.2e}, mc {mean:.2e} +- {se:.2e}");
        assert!(mc.iter().all(|&d| qmc < d), "{dims:?}");
        // For iid points E[D^2] = (1/4 - 1/9) / n in two dimensions.
        let rms_iid = ((0.25 - 1.0 / 9.0) / n as f64).sqrt();
        assert!((mean / rms_iid - 1.0).abs() < 0.3, "{dims:?}: mc mean {mean:.2e} vs {rms_iid:.2e}");
    }
}

#[test]
fn unit_points_are_in_the_open_cube() {
    let mut u = vec![0.0; 15];
    for kind in [SamplerKind::MonteCarlo, SamplerKind::QuasiMonteCarlo] {
        let mut mean = [0.0; 15];
        for i in 0..4096 {
            unit_point(kind, 3, i, &mut u).unwrap();
            for (m, &x) in mean.iter_mut().zip(&u) {
                assert!(x > 0.0 && x < 1.0);
                *m += x / 4096.0;
            }
        }
        // Standard error of a uniform mean at n = 4096 is about 0.0045.
        assert!(mean.iter().all(|m| (m - 0.5).abs() < 0.02), "{kind}: {mean:?}");
    }
}

#[test]
fn angles_stay_in_their_ranges() {
    for field in [Field::Rebit, Field::Qubit] {
        let cfg = SamplerConfig::new(field, SamplerKind::QuasiMonteCarlo, 5, 2000);
        for i in 0..2000 {
            let (s, r) = sample_ball(&cfg, i).unwrap();
            assert_eq!(s, sample_angles(&cfg, i).unwrap());
            assert!((0.0..=1.0).contains(&r));
            assert_eq!(s.theta.len(), field.dim() - 2);
            let half_pi = std::f64::consts::FRAC_PI_2;
            assert!(s.theta[..3].iter().all(|&t| (0.0..=half_pi).contains(&t)));
            assert!(s.theta[3..].iter().all(|&t| (0.0..=std::f64::consts::PI).contains(&t)));
            assert!((0.0..std::f64::consts::TAU).contains(&s.phi));
            assert!(s.weight >= 0.0 && s.weight.is_finite());
        }
    }
}

#[test]
fn box_volume_matches_angle_ranges() {
    use std::f64::consts::PI;
    assert!((box_volume(Field::Rebit) - (PI / 2.0).powi(3) * PI.powi(4) * 2.0 * PI).abs() < 1e-9);
    assert!((box_volume(Field::Qubit) - (PI / 2.0).powi(3) * PI.powi(10) * 2.0 * PI).abs() < 1e-3);
}

#[test]
fn rebit_volume_within_three_standard_errors() {
    for kind in [SamplerKind::MonteCarlo, SamplerKind::QuasiMonteCarlo] {
        let est = estimate_volume(&SamplerConfig::new(Field::Rebit, kind, 42, 100_000).with_workers(4)).unwrap();
        assert!(est.z_score().abs() < 3.0, "{kind}: {est:?}");
        assert!(est.relative_error() < 0.05, "{kind}: {est:?}");
        let exact = std::f64::consts::PI.powi(4) / 967_680.0;
        assert!((est.exact - exact).abs() < 1e-20);
    }
}

#[test]
fn volume_does_not_depend_on_workers() {
    let cfg = SamplerConfig::new(Field::Qubit, SamplerKind::MonteCarlo, 1, 10_000);
    assert_eq!(estimate_volume(&cfg.with_workers(1)).unwrap(), estimate_volume(&cfg.with_workers(5)).unwrap());
}
