use std::path::{Path, PathBuf};

use qgchi::euler::{chi_curve, detect_plateau, k_required, truncation_bound, ChiCurve, KMode, PlateauReport, TGrid};
use qgchi::graph::{gen_complete, gen_random_connected};
use qgchi::resonance::{
    counting_fluctuation, flag_gaps, load_resonances, perturb, PerturbPolicy, ResonanceDataset, MIN_FLUCTUATION_LEVELS,
};
use qgchi::topology::{estimate_total_length, infer, TopologyReport, MIN_LENGTH_LEVELS};
use qgchi::{solve, verify_weyl, GraphSummary, LengthSpec, MetricGraph, SolverConfig, Spectrum};
use serde::Serialize;

use crate::args::{AnalyzeArgs, ChiArgs, GenArgs, GridArgs, IngestArgs, PerturbArgs, SpectrumArgs};
use crate::io::{emit, load, write_atomic, CliError, CliResult};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn grid(args: GridArgs, summary: Option<&GraphSummary>) -> TGrid {
    let base = TGrid::default_for(summary);
    TGrid::new(
        args.t_lo.unwrap_or(base.lo),
        args.t_hi.unwrap_or(base.hi),
        args.t_steps.unwrap_or(base.steps),
    )
}

fn check_terms(terms: usize, levels: usize) -> CliResult<()> {
    if terms == 0 || terms > levels {
        return Err(CliError::Usage(format!("--K {terms} must lie in 1..={levels}")));
    }
    Ok(())
}

fn no_plateau(plateau: &PlateauReport, curve: &ChiCurve) -> CliError {
    CliError::NoPlateau(format!(
        "X_K(t) never stays within 1/4 of one integer long enough (K={}, best run near {} over [{:.4}, {:.4}])",
        curve.terms, plateau.chi_estimate, plateau.t_lo, plateau.t_hi
    ))
}

/// Gap flags, empty when there are too few levels to screen.
fn gaps(spectrum: &Spectrum) -> CliResult<Vec<f64>> {
    if spectrum.len() < MIN_FLUCTUATION_LEVELS {
        return Ok(Vec::new());
    }
    Ok(flag_gaps(&counting_fluctuation(spectrum)?.series))
}

fn load_graph(path: &Path) -> CliResult<MetricGraph> {
    load(path, |text| {
        let graph = MetricGraph::from_json(text)?;
        graph.ensure_valid()?;
        Ok(graph)
    })
}

pub fn gen(args: GenArgs) -> CliResult<()> {
    let spec = LengthSpec::new(args.lmin, args.total);
    let graph = match (args.complete, args.random, args.edges) {
        (Some(n), None, _) => gen_complete(n, spec, args.seed)?,
        (None, Some(n), Some(m)) => gen_random_connected(n, m, spec, args.seed)?,
        _ => {
            return Err(CliError::Usage(
                "give either --complete N or --random N --edges M".into(),
            ))
        }
    };
    emit(args.output.as_deref(), &graph.to_json())
}

pub fn spectrum(args: SpectrumArgs) -> CliResult<()> {
    let graph = load_graph(&args.graph)?;
    let config = SolverConfig {
        k_max_hint: args.k_max_hint,
        ..SolverConfig::default()
    };
    let spectrum = solve(&graph, args.count, &config)?;
    let weyl = verify_weyl(&spectrum, &graph)?;
    if let Some(path) = &args.resonances {
        let dataset = ResonanceDataset::from_spectrum(&spectrum, args.dielectric, args.label.as_str())?;
        write_atomic(path, &dataset.to_csv())?;
    }
    emit(args.output.as_deref(), &spectrum.to_csv())?;
    eprintln!(
        "solved {} levels up to k = {:.6} 1/m; max Weyl residual {:.3}",
        spectrum.len(),
        spectrum.values().last().copied().unwrap_or(0.0),
        weyl.max_residual
    );
    Ok(())
}

pub fn chi(args: ChiArgs) -> CliResult<()> {
    let spectrum = load(&args.spectrum, Spectrum::from_csv)?;
    let terms = args.terms.unwrap_or(spectrum.len());
    check_terms(terms, spectrum.len())?;
    let curve = chi_curve(&spectrum, terms, grid(args.grid, None), args.formula)?;
    if let Some(path) = &args.output {
        write_atomic(path, &curve.to_csv())?;
    }
    let plateau = detect_plateau(&curve)?;
    print!("{}", to_json(&plateau));
    if !plateau.found {
        return Err(no_plateau(&plateau, &curve));
    }
    Ok(())
}

#[derive(Serialize)]
struct IngestReport {
    label: String,
    dielectric: f64,
    levels: usize,
    density_per_ghz: Option<f64>,
    /// Meters.
    total_length_estimate: Option<f64>,
    /// Wavenumbers in 1/m.
    gap_flags: Vec<f64>,
}

pub fn ingest(args: IngestArgs) -> CliResult<()> {
    let dataset = load(&args.input, ResonanceDataset::from_csv)?;
    let spectrum = load_resonances(&dataset)?;
    let enough = spectrum.len() >= MIN_FLUCTUATION_LEVELS;
    let report = IngestReport {
        label: dataset.label().to_string(),
        dielectric: dataset.dielectric(),
        levels: spectrum.len(),
        density_per_ghz: dataset.level_density_per_ghz().ok(),
        total_length_estimate: enough
            .then(|| counting_fluctuation(&spectrum))
            .transpose()?
            .map(|f| f.length_estimate()),
        gap_flags: gaps(&spectrum)?,
    };
    write_atomic(&args.output, &spectrum.to_csv())?;
    print!("{}", to_json(&report));
    Ok(())
}

#[derive(Debug, Serialize)]
struct KRequired {
    exact: usize,
    approx: usize,
    old: usize,
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    k_used: usize,
    levels: usize,
    formula: String,
    epsilon: f64,
    /// Present only when the graph is known.
    k_required: Option<KRequired>,
    truncation_bound: Option<f64>,
    gap_flags: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct AnalyzeResult {
    plateau: PlateauReport,
    /// Absent when no plateau was found.
    topology: Option<TopologyReport>,
    curve: PathBuf,
    diagnostics: Diagnostics,
}

fn curve_path(args: &AnalyzeArgs) -> PathBuf {
    match (&args.curve, &args.output) {
        (Some(c), _) => c.clone(),
        (None, Some(o)) => o.with_extension("curve.csv"),
        (None, None) => PathBuf::from("chi_curve.csv"),
    }
}

pub fn analyze(args: AnalyzeArgs) -> CliResult<()> {
    if !(args.epsilon > 0.0 && args.epsilon < 0.5) {
        return Err(CliError::Usage(format!(
            "--epsilon must lie in (0, 1/2), got {}",
            args.epsilon
        )));
    }
    let (spectrum, summary, terms, k_req) = match (&args.graph, &args.spectrum) {
        (Some(path), None) => {
            let graph = load_graph(path)?;
            let summary = graph.summarize()?;
            let req = |mode| k_required(summary.vertices, summary.lt0, args.epsilon, mode);
            let k_req = KRequired {
                exact: req(KMode::Exact)?,
                approx: req(KMode::Approx)?,
                old: req(KMode::Old)?,
            };
            let terms = args.terms.unwrap_or(k_req.exact);
            let count = args.count.unwrap_or(terms);
            if terms > count {
                return Err(CliError::Usage(format!("--K {terms} exceeds --count {count}")));
            }
            let spectrum = solve(&graph, count, &SolverConfig::default())?;
            (spectrum, Some(summary), terms, Some(k_req))
        }
        (None, Some(path)) => {
            let spectrum = load(path, Spectrum::from_csv)?;
            let terms = args.terms.unwrap_or(spectrum.len());
            (spectrum, None, terms, None)
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    check_terms(terms, spectrum.len())?;

    let curve = chi_curve(&spectrum, terms, grid(args.grid, summary.as_ref()), args.formula)?;
    let plateau = detect_plateau(&curve)?;
    let topology = if plateau.found {
        let mut report = infer(plateau.chi_estimate)?;
        if spectrum.len() >= MIN_LENGTH_LEVELS {
            report.total_length_estimate = Some(estimate_total_length(&spectrum)?);
        }
        Some(report)
    } else {
        None
    };
    let curve_file = curve_path(&args);
    let result = AnalyzeResult {
        plateau,
        topology,
        curve: curve_file.clone(),
        diagnostics: Diagnostics {
            k_used: terms,
            levels: spectrum.len(),
            formula: args.formula.to_string(),
            epsilon: args.epsilon,
            k_required: k_req,
            truncation_bound: summary.and_then(|s| truncation_bound(terms, s.vertices, s.lt0).ok()),
            gap_flags: gaps(&spectrum)?,
        },
    };
    write_atomic(&curve_file, &curve.to_csv())?;
    emit(args.output.as_deref(), &to_json(&result))?;
    if !plateau.found {
        return Err(no_plateau(&plateau, &curve));
    }
    Ok(())
}

pub fn perturb_cmd(args: PerturbArgs) -> CliResult<()> {
    let spectrum = load(&args.spectrum, Spectrum::from_csv)?;
    let policy = PerturbPolicy {
        drop_probability: args.drop_probability,
        drop_min_index: args.drop_min_index,
        jitter_relative_sigma: args.jitter,
        seed: args.seed,
    };
    let out = perturb(&spectrum, &policy)?;
    write_atomic(&args.output, &out.to_csv())?;
    eprintln!("kept {} of {} levels", out.len(), spectrum.len());
    Ok(())
}
