//! First `N` positive levels of a metric graph, certified complete.
//!
//! The scan evaluates the exact counting function on a grid and bisects
//! every cell where the count jumps. A jump by `m` that survives bisection
//! down to the tolerance is a level of multiplicity `m`; the kernel
//! dimension of `I - U(k)` must agree with it.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::secular::SecularSystem;
use crate::spectrum::{Provenance, Spectrum};

/// Singular values below this fraction of the matrix scale count as kernel.
pub const DEGENERACY_CUT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Optional first guess for the top of the scan window, 1/m.
    pub k_max_hint: Option<f64>,
    /// Scan step as a fraction of the mean level spacing `pi / L`.
    pub scan_step_factor: f64,
    /// Relative bracket width at which a level is considered located.
    pub refine_tolerance: f64,
    pub max_refine_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k_max_hint: None,
            scan_step_factor: 0.25,
            refine_tolerance: 1e-10,
            max_refine_iterations: 200,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.refine_tolerance > 0.0 && self.refine_tolerance < 1.0) {
            return Err(Error::param(format!(
                "refine tolerance must be in (0, 1), got {}",
                self.refine_tolerance
            )));
        }
        if !(self.scan_step_factor > 0.0 && self.scan_step_factor <= 1.0) {
            return Err(Error::param(format!(
                "scan step factor must be in (0, 1], got {}",
                self.scan_step_factor
            )));
        }
        if self.max_refine_iterations == 0 {
            return Err(Error::param("max refine iterations must be positive"));
        }
        Ok(())
    }
}

/// A located level: position and multiplicity, plus the certified count
/// just above it.
#[derive(Debug, Clone, Copy)]
struct Level {
    k: f64,
    multiplicity: usize,
}

/// `N(k)` for `graph`: positive levels `<= k` counted with multiplicity.
pub fn counting_function(graph: &MetricGraph, k: f64, config: &SolverConfig) -> Result<usize> {
    config.check()?;
    SecularSystem::new(graph)?.count(k, config.refine_tolerance)
}

pub fn solve(graph: &MetricGraph, count: usize, config: &SolverConfig) -> Result<Spectrum> {
    config.check()?;
    if count == 0 {
        return Err(Error::param("level count must be at least 1"));
    }
    let system = SecularSystem::new(graph)?;
    let total = system.total_length();
    let step = config.scan_step_factor * PI / total;
    // Dirichlet bracketing gives k_n <= pi (n + |E| + 1) / L
    let upper = PI * (count + graph.edge_count() + 1) as f64 / total;
    let window = match config.k_max_hint {
        Some(hint) if hint > system.k_floor() && hint < upper => {
            let reached = system.count_raw(hint)?.value;
            if reached >= count {
                hint
            } else {
                upper
            }
        }
        _ => upper,
    };
    let cells = ((window - system.k_floor()) / step).ceil() as usize + 1;
    let grid: Vec<f64> = (0..=cells).map(|i| system.k_floor() + i as f64 * step).collect();
    let counts = grid
        .par_iter()
        .map(|&k| system.count_raw(k).map(|c| c.value))
        .collect::<Result<Vec<_>>>()?;
    if counts[0] != 0 {
        return Err(Error::SolverIncomplete("levels below the zero-mode floor".into()));
    }
    if *counts.last().unwrap() < count {
        return Err(Error::SolverIncomplete(format!(
            "scan to k = {} found {} of {count} levels",
            grid[cells], counts[cells]
        )));
    }
    let brackets: Vec<usize> = (0..cells)
        .filter(|&i| counts[i + 1] > counts[i] && counts[i] < count)
        .collect();
    let located = brackets
        .par_iter()
        .map(|&i| refine(&system, grid[i], counts[i], grid[i + 1], counts[i + 1], config))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(count);
    for level in located.into_iter().flatten() {
        values.extend(std::iter::repeat_n(level.k, level.multiplicity));
    }
    if values.len() < count {
        return Err(Error::SolverIncomplete(format!(
            "located {} of {count} levels",
            values.len()
        )));
    }
    values.truncate(count);
    Spectrum::new(values, Provenance::Solved)
}

/// Bisects `[lo, hi]` on the counting function until every jump is
/// isolated within the tolerance.
fn refine(
    system: &SecularSystem,
    lo: f64,
    n_lo: usize,
    hi: f64,
    n_hi: usize,
    config: &SolverConfig,
) -> Result<Vec<Level>> {
    let mut pending = vec![(lo, n_lo, hi, n_hi)];
    let mut levels = Vec::new();
    'brackets: while let Some((mut a, na, mut b, nb)) = pending.pop() {
        let mut iterations = 0;
        while b - a > config.refine_tolerance * b {
            if iterations == config.max_refine_iterations {
                return Err(Error::SolverIncomplete(format!(
                    "bracket [{a}, {b}] not resolved after {iterations} bisections"
                )));
            }
            iterations += 1;
            let mid = 0.5 * (a + b);
            let nm = system.count_raw(mid)?.value;
            if nm < na || nm > nb {
                return Err(Error::SolverIncomplete(format!(
                    "non-monotone count {nm} at k = {mid} inside [{na}, {nb}]"
                )));
            }
            if nm == na {
                a = mid;
            } else if nm == nb {
                b = mid;
            } else {
                pending.push((a, na, mid, nm));
                pending.push((mid, nm, b, nb));
                continue 'brackets;
            }
        }
        levels.push(locate(system, a, b, nb - na)?);
    }
    levels.sort_by(|x, y| x.k.total_cmp(&y.k));
    Ok(levels)
}

fn locate(system: &SecularSystem, a: f64, b: f64, jump: usize) -> Result<Level> {
    let k = 0.5 * (a + b);
    if jump > 1 {
        let kernel = system.kernel_dimension(k, DEGENERACY_CUT);
        if kernel != jump {
            return Err(Error::SolverIncomplete(format!(
                "count jumps by {jump} at k = {k} but kernel dimension is {kernel}"
            )));
        }
    }
    Ok(Level { k, multiplicity: jump })
}

/// Consistency of a solved spectrum with Weyl asymptotics and with the
/// graph's exact counting function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    /// `max_n |k_n L / pi - n|`.
    pub max_residual: f64,
    /// 1-based levels violating `k_n L / pi >= n + 1 - |V|`.
    pub lower_bound_failures: Vec<usize>,
    /// Every residual lies in `[1 - |V|, |E| + 1]`.
    pub residual_bounded: bool,
    /// 1-based levels where `N(k_n + 0)` disagrees with the level index.
    pub counting_drift: Vec<usize>,
}

impl WeylReport {
    pub fn lower_bound_ok(&self) -> bool {
        self.lower_bound_failures.is_empty()
    }

    pub fn drift_flagged(&self) -> bool {
        !self.counting_drift.is_empty() || !self.residual_bounded
    }
}

pub fn verify_weyl(spectrum: &Spectrum, graph: &MetricGraph) -> Result<WeylReport> {
    let system = SecularSystem::new(graph)?;
    let total = graph.total_length();
    let v = graph.vertex_count() as f64;
    let e = graph.edge_count() as f64;
    let values = spectrum.values();
    let residuals: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, k)| k * total / PI - (i + 1) as f64)
        .collect();
    let max_residual = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let lower_bound_failures = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| **r < 1.0 - v - 1e-9)
        .map(|(i, _)| i + 1)
        .collect();
    let residual_bounded = residuals.iter().all(|r| *r >= 1.0 - v - 1e-9 && *r <= e + 1.0 + 1e-9);

    // probe just above the last member of each group of coincident levels
    let mut counting_drift = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] - values[i] <= 1e-8 * values[i] {
            j += 1;
        }
        let probe = values[j] * (1.0 + 1e-7);
        if system.count_raw(probe)?.value != j + 1 {
            counting_drift.push(j + 1);
        }
        i = j + 1;
    }
    Ok(WeylReport {
        max_residual,
        lower_bound_failures,
        residual_bounded,
        counting_drift,
    })
}
