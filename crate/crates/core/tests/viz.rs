mod common;

use common::{random_d_point, random_sl2c, random_sl2r, random_sl2r_param, rng, sl2c_within, sl2r_within};
use rand::RngExt;
use sepscope::state::{det4, eigenvalues4, is_separable_ppt, partial_transpose};
use sepscope::viz::{
    bargmann_complex, bargmann_to_sl2r, classify_region, conjugate_state, conjugation_normalizer, det_pt_formula,
    det_rho_formula, pauli_eigenvalues, pauli_state, rebit_measure_map, DPoint, Mat2, RebitVizConfig, Region,
};
use sepscope::Field;

/// Compares closed-form determinants with direct ones; differences are taken
/// relative to `1 / (256 T^4)`, the largest value either can take.
///
/// The direct determinant of `rho'` loses about `log10(T^4)` digits to
/// cancellation, so the group elements are kept moderate (T of order one);
/// the sign check below uses the wide distribution as well.
fn check_determinants(draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Mat2, seed: u64) {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut sign_checks = 0;
    for _ in 0..10_000 {
        let d = random_d_point(&mut rng);
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let rho = pauli_state(&d);
        let t = conjugation_normalizer(&rho, &a, &b);
        let out = conjugate_state(&rho, &a, &b).unwrap().unwrap();
        let direct = det4(out.matrix()).re;
        let direct_pt = det4(&partial_transpose(out.matrix())).re;
        let scale = 1.0 / (256.0 * t.powi(4));
        let (f, f_pt) = (det_rho_formula(&d, t), det_pt_formula(&d, t));
        worst = worst.max((direct - f).abs() / scale).max((direct_pt - f_pt).abs() / scale);
        // The sign depends on d alone whenever it is resolvable.
        let f0 = det_pt_formula(&d, 1.0);
        if f0.abs() > 1e-6 {
            assert_eq!(f0 > 0.0, direct_pt > 0.0, "d {d:?}");
            sign_checks += 1;
        }
    }
    assert!(worst < 1e-10, "worst normwise difference {worst:e}");
    assert!(sign_checks > 5_000);
}

/// Sign of `det(rho'^PT)` is fixed by `d` for widely spread group elements.
#[test]
fn determinant_signs_depend_on_d_only() {
    let mut rng = rng(30);
    let mut checked = 0;
    for _ in 0..10_000 {
        let d = random_d_point(&mut rng);
        let (a, b) = if checked % 2 == 0 {
            (random_sl2r(&mut rng), random_sl2r(&mut rng))
        } else {
            (random_sl2c(&mut rng), random_sl2c(&mut rng))
        };
        let t = conjugation_normalizer(&pauli_state(&d), &a, &b);
        let out = conjugate_state(&pauli_state(&d), &a, &b).unwrap().unwrap();
        let direct_pt = det4(&partial_transpose(out.matrix())).re;
        // Resolvable: formula magnitude well above the direct round-off.
        if det_pt_formula(&d, t).abs() > 1e-12 {
            assert_eq!(det_pt_formula(&d, 1.0) > 0.0, direct_pt > 0.0, "d {d:?}");
            checked += 1;
        }
    }
    assert!(checked > 5_000, "{checked}");
}

#[test]
fn determinant_formulas_match_direct_determinants_real() {
    check_determinants(|r| sl2r_within(r, 0.5), 31);
}

#[test]
fn determinant_formulas_match_direct_determinants_complex() {
    check_determinants(|r| sl2c_within(r, 1.0, 0.6), 32);
}

#[test]
fn classification_matches_spectral_oracle_on_grid() {
    let n = 101;
    let mut mismatches = 0;
    let mut seen = [0usize; 3];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = |m: usize| -1.0 + 2.0 * m as f64 / (n - 1) as f64;
                let d = DPoint::new(c(i), c(j), c(k)).unwrap();
                let rho = pauli_state(&d);
                let spec = eigenvalues4(rho.matrix()).unwrap();
                let pt_spec = eigenvalues4(&partial_transpose(rho.matrix())).unwrap();
                // Points whose deciding eigenvalue sits within the tie band
                // may go either way.
                if spec.min().abs() < 1e-12 || pt_spec.min().abs() < 1e-12 {
                    continue;
                }
                let oracle = if spec.min() < 0.0 {
                    Region::Witness
                } else if pt_spec.min() >= 0.0 {
                    Region::Separable
                } else {
                    Region::Entangled
                };
                let got = classify_region(&d);
                mismatches += (got != oracle) as u32;
                seen[got as usize] += 1;
                if got != Region::Witness {
                    assert_eq!(is_separable_ppt(&rho), got == Region::Separable);
                }
            }
        }
    }
    assert_eq!(mismatches, 0);
    assert!(seen.iter().all(|&c| c > 0), "{seen:?}");
}

#[test]
fn bargmann_outputs_are_real_and_unimodular() {
    let mut rng = rng(33);
    for _ in 0..10_000 {
        let p = random_sl2r_param(&mut rng);
        let z = bargmann_complex(&p).unwrap();
        assert!(z.iter().all(|e| e.im.abs() < 1e-12), "{z}");
        let m = bargmann_to_sl2r(&p).unwrap();
        assert!((m.determinant() - 1.0).abs() < 1e-12 * m.norm_squared().max(1.0));
        // Closure under products.
        let q = bargmann_to_sl2r(&random_sl2r_param(&mut rng)).unwrap();
        assert!(((m * q).determinant() - 1.0).abs() < 1e-10 * (m.norm_squared() * q.norm_squared()).max(1.0));
    }
}

#[test]
fn conjugation_preserves_trace_and_positivity() {
    let mut rng = rng(34);
    for _ in 0..10_000 {
        let d = random_d_point(&mut rng);
        let (a, b) = (random_sl2c(&mut rng), random_sl2c(&mut rng));
        let out = conjugate_state(&pauli_state(&d), &a, &b).unwrap().unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(out.matrix().trace().im.abs() < 1e-12);
        assert!(eigenvalues4(out.matrix()).unwrap().min() > -1e-9);
        assert_eq!(out.field(), Field::Qubit);
    }
    let id = Mat2::identity();
    let rho = pauli_state(&DPoint::new(0.2, -0.3, 0.1).unwrap());
    let same = conjugate_state(&rho, &id, &id).unwrap().unwrap();
    assert!((same.matrix() - rho.matrix()).norm() < 1e-15);
}

/// Real local conjugations keep Pauli-diagonal states real even for
/// `d2 != 0`, because `sigma_y (x) sigma_y` is a real matrix.
#[test]
fn real_conjugation_stays_real_for_any_d2() {
    let mut rng = rng(35);
    for d2 in [0.0, 0.3, -0.5] {
        let d = DPoint::new(0.1, d2, -0.2).unwrap();
        let (a, b) = (random_sl2r(&mut rng), random_sl2r(&mut rng));
        let out = conjugate_state(&pauli_state(&d), &a, &b).unwrap().unwrap();
        assert_eq!(out.field(), Field::Rebit);
        // Without discarding round-off: the Cayley-conjugated matrices.
        let ka = bargmann_complex(&random_sl2r_param(&mut rng)).unwrap();
        let kb = bargmann_complex(&random_sl2r_param(&mut rng)).unwrap();
        let raw = conjugate_state(&pauli_state(&d), &ka, &kb).unwrap().unwrap();
        let max_im = raw.matrix().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-12, "d2 {d2}: {max_im:e}");
    }
}

#[test]
fn rebit_surface_is_invariant_under_role_swap() {
    let mut cfg = RebitVizConfig::new(400, 11, 42);
    cfg.workers = 4;
    let plain = rebit_measure_map(&cfg).unwrap();
    cfg.swap_roles = true;
    let swapped = rebit_measure_map(&cfg).unwrap();
    let (sa, sb) = (plain.surface.stderr.as_ref().unwrap(), swapped.surface.stderr.as_ref().unwrap());
    let mut worst = 0.0f64;
    for i in 0..plain.surface.values.len() {
        let se = (sa[i].powi(2) + sb[i].powi(2)).sqrt();
        if se > 0.0 {
            worst = worst.max((plain.surface.values[i] - swapped.surface.values[i]).abs() / se);
        }
    }
    assert!(worst < 3.0, "largest cell difference {worst:.2} sigma");
}

#[test]
fn rebit_regions_sum_to_total() {
    let mut cfg = RebitVizConfig::new(64, 9, 7);
    cfg.workers = 2;
    let res = rebit_measure_map(&cfg).unwrap();
    let t = res.tally;
    assert!(t.measure_octahedron >= 0.0 && t.measure_tetra_minus_octa >= 0.0 && t.measure_cube_minus_tetra >= 0.0);
    let grid_sum: f64 = res.surface.values.iter().sum();
    assert!((grid_sum - t.total()).abs() <= 1e-9 * t.total(), "{grid_sum} vs {}", t.total());
    // In the d2 = 0 plane the tetrahedron and octahedron slices coincide.
    assert_eq!(t.count_tetra_minus_octa, 0);
}
