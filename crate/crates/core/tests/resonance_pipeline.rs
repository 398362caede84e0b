mod common;

use proptest::prelude::*;
use qgchi::euler::{chi_curve, detect_plateau, Formula, TGrid};
use qgchi::resonance::*;
use qgchi::{Provenance, Spectrum};

fn plateau_chi(spectrum: &Spectrum, grid: TGrid) -> Option<i64> {
    let curve = chi_curve(spectrum, spectrum.len(), grid, Formula::New).unwrap();
    let p = detect_plateau(&curve).unwrap();
    p.found.then_some(p.chi_estimate)
}

proptest! {
    #[test]
    fn ghz_round_trip(levels in prop::collection::btree_set(1u64..10_000_000, 1..80)) {
        let ks: Vec<f64> = levels.iter().map(|v| *v as f64 * 1e-4 + 0.01).collect();
        let s = Spectrum::new(ks, Provenance::Solved).unwrap();
        let ds = ResonanceDataset::from_spectrum(&s, 2.06, "rt").unwrap();
        let parsed = ResonanceDataset::from_csv(&ds.to_csv()).unwrap();
        prop_assert_eq!(&parsed, &ds);
        let back = load_resonances(&parsed).unwrap();
        for (a, b) in back.values().iter().zip(s.values()) {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        }
    }

    #[test]
    fn fluctuation_has_zero_mean(levels in prop::collection::btree_set(1u64..1_000_000, 20..120)) {
        let s = Spectrum::new(levels.iter().map(|v| *v as f64 * 1e-3).collect(), Provenance::Ingested).unwrap();
        let f = counting_fluctuation(&s).unwrap();
        let mean = f.series.iter().map(|p| p.1).sum::<f64>() / f.series.len() as f64;
        prop_assert!(mean.abs() < 0.1);
    }

    #[test]
    fn seeded_perturbation_is_reproducible(seed in any::<u64>(), p in 0.0f64..0.5, sigma in 0.0f64..1e-2) {
        let s = common::gamma_analog().spectrum.clone();
        let policy = PerturbPolicy { drop_probability: p, drop_min_index: 10, jitter_relative_sigma: sigma, seed };
        prop_assert_eq!(perturb(&s, &policy).unwrap(), perturb(&s, &policy).unwrap());
    }
}

#[test]
fn clean_graph_spectra_raise_no_flags() {
    for f in [common::gamma_analog(), common::k5_analog()] {
        let fl = counting_fluctuation(&f.spectrum).unwrap();
        assert!(fl.series.iter().all(|(_, r)| r.abs() < 3.0));
        assert!(flag_gaps(&fl.series).is_empty(), "{:?}", flag_gaps(&fl.series));
        let rel = (fl.length_estimate() - f.summary.total_length).abs() / f.summary.total_length;
        assert!(rel < 0.02, "{rel}");
    }
}

#[test]
fn single_deletion_is_flagged_nearby() {
    let f = common::k5_analog();
    for j in [40, 75, 110] {
        let s = f.spectrum.without_level(j);
        let flags = flag_gaps(&counting_fluctuation(&s).unwrap().series);
        assert_eq!(flags.len(), 1, "deleting {j}: {flags:?}");
        let at = s.values().iter().position(|k| *k == flags[0]).unwrap() + 1;
        assert!(at.abs_diff(j) <= 5, "deleting {j} flagged at {at}");
    }
}

#[test]
fn separated_deletions_are_flagged_separately() {
    let f = common::k5_analog();
    let s = f.spectrum.without_level(110).without_level(50);
    assert_eq!(flag_gaps(&counting_fluctuation(&s).unwrap().series).len(), 2);
}

#[test]
fn missing_levels_barely_move_chi() {
    let f = common::k5_analog();
    let full = f.spectrum.truncated(132);
    let grid = TGrid::default_for(Some(&f.summary));
    for seed in 0..5 {
        let s = drop_random_levels(&full, 2, 81, seed).unwrap();
        assert_eq!(plateau_chi(&s, grid), Some(-5), "seed {seed}");
    }
}

#[test]
fn jitter_keeps_gamma_plateau() {
    let f = common::gamma_analog();
    let grid = TGrid::default_for(Some(&f.summary));
    for seed in 0..5 {
        let policy = PerturbPolicy {
            drop_probability: 0.0,
            drop_min_index: 1,
            jitter_relative_sigma: 1e-4,
            seed,
        };
        let s = perturb(&f.spectrum, &policy).unwrap();
        assert_eq!(plateau_chi(&s, grid), Some(-2));
    }
}

#[test]
fn ingestion_density() {
    for (f, n, expect, tol) in [
        (common::k5_analog(), 132, 26.3, 0.8),
        (common::gamma_analog(), 106, 9.97, 0.5),
    ] {
        let ds = ResonanceDataset::from_spectrum(&f.spectrum.truncated(n), 2.06, "synthetic").unwrap();
        let density = ds.level_density_per_ghz().unwrap();
        assert!((density - expect).abs() < tol, "{density}");
    }
}
