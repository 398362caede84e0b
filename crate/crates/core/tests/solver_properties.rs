mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qgchi::graph::{gen_random_connected, LengthSpec};
use qgchi::{bond_evolution, counting_function, solve, verify_weyl, MetricGraph, SecularSystem, SolverConfig};

fn max_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evolution_is_unitary(n in 3usize..7, extra in 0usize..6, seed in 0u64..1000, k in 1e-3f64..500.0) {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        let g = gen_random_connected(n, m, LengthSpec::new(0.05, 2.0), seed).unwrap();
        prop_assert!(max_defect(&bond_evolution(&g, k).unwrap()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solved_spectra_are_complete(n in 3usize..7, extra in 0usize..5, seed in 0u64..1000) {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        let g = gen_random_connected(n, m, LengthSpec::new(0.08, 1.5), seed).unwrap();
        let s = solve(&g, 40, &SolverConfig::default()).unwrap();
        let top = s.values()[39];
        prop_assert_eq!(counting_function(&g, top * (1.0 + 1e-8), &SolverConfig::default()).unwrap(), 40);
        let report = verify_weyl(&s, &g).unwrap();
        prop_assert!(report.lower_bound_ok());
        prop_assert!(!report.drift_flagged());
    }

    #[test]
    fn scaling_covariance(seed in 0u64..1000, factor in 0.2f64..5.0) {
        let g = gen_random_connected(5, 7, LengthSpec::new(0.1, 2.0), seed).unwrap();
        let base = solve(&g, 30, &SolverConfig::default()).unwrap();
        let scaled = solve(&g.scaled(factor), 30, &SolverConfig::default()).unwrap();
        for (a, b) in base.values().iter().zip(scaled.values()) {
            prop_assert!((b * factor - a).abs() < 1e-9 * a);
        }
    }
}

#[test]
fn counting_stays_below_weyl_ceiling() {
    // N(k) <= L k / pi + |V| - 1
    let g = gen_random_connected(6, 9, LengthSpec::new(0.1, 2.5), 11).unwrap();
    let system = SecularSystem::new(&g).unwrap();
    let mut k = 0.37;
    while k < 120.0 {
        let n = system.count(k, 1e-10).unwrap() as f64;
        assert!(n <= g.total_length() * k / PI + 5.0, "k = {k}");
        k += 0.731;
    }
}

#[test]
fn k5_level_count_below_5_12_ghz() {
    let f = common::k5_analog();
    let k = 2.0 * PI * 5.12 / 0.299792458;
    let n = counting_function(&f.graph, k, &SolverConfig::default()).unwrap() as i64;
    assert!((n - 132).abs() <= 3, "N = {n}");
}

#[test]
fn equal_leg_star_degeneracy_matches_determinant_scan() {
    // brute-force oracle: |det(I - U(k))| on a fine grid has local minima at
    // the levels; the kernel dimension at pi/(2l) is 2
    let l = 0.8;
    let g = MetricGraph::star(&[l, l, l]);
    let s = solve(&g, 10, &SolverConfig::default()).unwrap();
    let target = PI / (2.0 * l);
    let copies = s.values().iter().filter(|k| (*k - target).abs() < 1e-9).count();
    assert_eq!(copies, 2);

    let det = |k: f64| {
        let u = bond_evolution(&g, k).unwrap();
        (DMatrix::<Complex64>::identity(6, 6) - u).determinant().norm()
    };
    let step = 1e-4;
    let grid: Vec<f64> = (1..60000).map(|i| i as f64 * step).collect();
    let minima: Vec<f64> = grid
        .windows(3)
        .filter(|w| det(w[1]) < det(w[0]) && det(w[1]) < det(w[2]) && det(w[1]) < 1e-3)
        .map(|w| w[1])
        .collect();
    let mut distinct: Vec<f64> = s.values().to_vec();
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let distinct: Vec<f64> = distinct.into_iter().filter(|k| *k < 6.0).collect();
    assert_eq!(minima.len(), distinct.len(), "{minima:?} vs {distinct:?}");
    for (m, k) in minima.iter().zip(&distinct) {
        assert!((m - k).abs() < 2.0 * step);
    }
}

#[test]
fn single_level_deletion_anywhere_below_top_is_flagged() {
    let f = common::gamma_analog();
    for j in 1..f.spectrum.len() {
        let report = verify_weyl(&f.spectrum.without_level(j), &f.graph).unwrap();
        assert!(report.drift_flagged(), "deleting level {j} went unnoticed");
    }
}
