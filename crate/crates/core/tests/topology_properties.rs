use qgchi::graph::{gen_complete, gen_random_connected, LengthSpec};
use qgchi::topology::{complete_vertices, estimate_total_length, infer, Completeness};
use qgchi::{solve, Provenance, SolverConfig, Spectrum};

const COMPLETE_CHI: [i64; 6] = [1, 0, -2, -5, -9, -14];

#[test]
fn complete_graphs_are_recognised() {
    for n in 3..=7 {
        let g = gen_complete(n, LengthSpec::new(0.05, 3.0), n as u64).unwrap();
        let report = infer(g.summarize().unwrap().chi).unwrap();
        assert_eq!(report.completeness, Completeness::CompleteWithVertices(n));
        assert_eq!(report.beta, ((n - 1) * (n - 2) / 2) as i64);
    }
}

#[test]
fn non_complete_graphs_only_collide_on_complete_chi() {
    for seed in 0..20u64 {
        let n = 4 + (seed % 4) as usize;
        let max_m = n * (n - 1) / 2;
        let m = n - 1 + (seed as usize * 7) % (max_m - n + 1);
        let g = gen_random_connected(n, m, LengthSpec::new(0.02, 2.0), seed).unwrap();
        let chi = g.summarize().unwrap().chi;
        let report = infer(chi).unwrap();
        match report.completeness {
            Completeness::NotComplete => assert!(!COMPLETE_CHI.contains(&chi)),
            Completeness::CompleteWithVertices(k) => {
                assert!(COMPLETE_CHI.contains(&chi), "chi {chi}");
                assert_eq!(complete_vertices(chi), Some(k));
                assert!(report.caveats.iter().any(|c| c.contains("indistinguishable")));
            }
        }
    }
}

#[test]
fn interval_length_error_shrinks() {
    // perturb the exact interval levels with a bounded fluctuation so the
    // fit has something to converge through
    let levels: Vec<f64> = (1..=200)
        .map(|n| n as f64 * std::f64::consts::PI + 0.3 * (n as f64 * 1.7).sin())
        .collect();
    let s = Spectrum::new(levels, Provenance::Ingested).unwrap();
    let errors: Vec<f64> = [50, 100, 150, 200]
        .iter()
        .map(|n| (estimate_total_length(&s.truncated(*n)).unwrap() - 1.0).abs())
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] <= w[0] + 0.005, "{errors:?}");
    }
    assert!(errors[3] < 1e-3);
}

#[test]
fn k5_length_within_two_percent() {
    let g = gen_complete(5, LengthSpec::new(0.202, 3.949), 7).unwrap();
    let s = solve(&g, 150, &SolverConfig::default()).unwrap();
    let l = estimate_total_length(&s).unwrap();
    assert!((l - 3.949).abs() / 3.949 < 0.02, "{l}");
}
