#![allow(dead_code)]

use std::sync::OnceLock;

use qgchi::graph::gen_complete;
use qgchi::{solve, GraphSummary, LengthSpec, MetricGraph, SolverConfig, Spectrum};

pub struct Fixture {
    pub graph: MetricGraph,
    pub summary: GraphSummary,
    pub spectrum: Spectrum,
}

fn build(n: usize, l_min: f64, total: f64, levels: usize) -> Fixture {
    let graph = gen_complete(n, LengthSpec::new(l_min, total), 7).unwrap();
    let summary = graph.summarize().unwrap();
    let spectrum = solve(&graph, levels, &SolverConfig::default()).unwrap();
    Fixture {
        graph,
        summary,
        spectrum,
    }
}

/// Complete graph on 4 vertices, L = 1.494 m, l_min = 0.155 m, 106 levels.
pub fn gamma_analog() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| build(4, 0.155, 1.494, 106))
}

/// Complete graph on 5 vertices, L = 3.949 m, l_min = 0.202 m, 150 levels.
pub fn k5_analog() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| build(5, 0.202, 3.949, 150))
}
