//! Bond-scattering formulation of the Kirchhoff secular equation.
//!
//! Each edge contributes two directed bonds of equal length. With
//! `U(k) = D(k) S`, `k > 0` is an eigenvalue square root of the graph
//! Laplacian iff `U(k)` has eigenvalue 1, with matching multiplicity.
//! The eigenphases of `U(k)` increase monotonically in `k` and their sum
//! grows exactly like `2 L k` because `det D(k) = exp(2 i k L)`. Counting
//! levels therefore only needs the wrapped eigenphases at the end point.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;

/// Precomputed bond structure of one graph.
#[derive(Debug, Clone)]
pub struct SecularSystem {
    bond_lengths: Vec<f64>,
    scattering: DMatrix<f64>,
    total_length: f64,
    l_max: f64,
    k_floor: f64,
    floor_phase_sum: f64,
}

/// Distance of `k` to the nearest eigenvalue, measured as an eigenphase.
#[derive(Debug, Clone, Copy)]
pub struct RawCount {
    pub value: usize,
    pub phase_gap: f64,
}

impl SecularSystem {
    pub fn new(graph: &MetricGraph) -> Result<Self> {
        graph.ensure_valid()?;
        let edges = graph.edges();
        let bonds = 2 * edges.len();
        let deg = graph.degrees();
        // bond 2e runs u -> v, bond 2e + 1 runs v -> u
        let start = |b: usize| {
            if b.is_multiple_of(2) {
                edges[b / 2].u
            } else {
                edges[b / 2].v
            }
        };
        let end = |b: usize| start(b ^ 1);
        let scattering = DMatrix::from_fn(bonds, bonds, |out, inc| {
            let v = end(inc);
            if start(out) != v {
                return 0.0;
            }
            let transmit = 2.0 / deg[v] as f64;
            if out == inc ^ 1 {
                transmit - 1.0
            } else {
                transmit
            }
        });
        let bond_lengths = (0..bonds).map(|b| edges[b / 2].length).collect();
        let total_length = graph.total_length();
        let mut system = SecularSystem {
            bond_lengths,
            scattering,
            total_length,
            l_max: graph.max_length(),
            k_floor: 1e-6 * PI / total_length,
            floor_phase_sum: 0.0,
        };
        system.floor_phase_sum = system.eigenphases(system.k_floor)?.iter().sum();
        Ok(system)
    }

    pub fn bond_count(&self) -> usize {
        self.bond_lengths.len()
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Smallest wavenumber considered; excludes the zero mode.
    pub fn k_floor(&self) -> f64 {
        self.k_floor
    }

    pub fn scattering(&self) -> &DMatrix<f64> {
        &self.scattering
    }

    pub fn evolution(&self, k: f64) -> DMatrix<Complex64> {
        let n = self.bond_count();
        let phases: Vec<Complex64> = self
            .bond_lengths
            .iter()
            .map(|l| Complex64::from_polar(1.0, k * l))
            .collect();
        DMatrix::from_fn(n, n, |out, inc| phases[out] * self.scattering[(out, inc)])
    }

    /// Eigenphases of `U(k)` wrapped into `[0, 2 pi)`.
    pub fn eigenphases(&self, k: f64) -> Result<Vec<f64>> {
        let n = self.bond_count();
        let schur = nalgebra::Schur::try_new(self.evolution(k), f64::EPSILON, 1000 * n)
            .ok_or_else(|| Error::SolverIncomplete(format!("eigenvalue iteration did not converge at k = {k}")))?;
        let (_, t) = schur.unpack();
        Ok(t.diagonal()
            .iter()
            .map(|z| {
                let a = z.arg();
                if a < 0.0 {
                    a + TAU
                } else {
                    a
                }
            })
            .collect())
    }

    /// Number of positive levels `<= k` plus the smallest eigenphase
    /// distance to 1, without any ambiguity check.
    pub fn count_raw(&self, k: f64) -> Result<RawCount> {
        let phases = self.eigenphases(k)?;
        let sum: f64 = phases.iter().sum();
        let winding = (2.0 * self.total_length * (k - self.k_floor) + self.floor_phase_sum - sum) / TAU;
        let value = winding.round();
        if (winding - value).abs() > 1e-6 || value < 0.0 {
            return Err(Error::SolverIncomplete(format!(
                "phase winding {winding} at k = {k} is not an integer"
            )));
        }
        let phase_gap = phases.iter().map(|&p| p.min(TAU - p)).fold(f64::INFINITY, f64::min);
        Ok(RawCount {
            value: value as usize,
            phase_gap,
        })
    }

    /// `N(k)`: positive levels `<= k` with multiplicity. Fails when `k` is
    /// within `tolerance * k` of a level.
    pub fn count(&self, k: f64, tolerance: f64) -> Result<usize> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::param(format!("wavenumber must be positive, got {k}")));
        }
        if k <= self.k_floor {
            return Ok(0);
        }
        let raw = self.count_raw(k)?;
        // eigenphase speed is bounded by the longest bond
        if raw.phase_gap < (tolerance * k * self.l_max).max(1e-12) {
            return Err(Error::AmbiguousCount { k });
        }
        Ok(raw.value)
    }

    /// `dim ker(I - U(k))` with singular values below `relative_cut` times
    /// the largest one counted as zero.
    pub fn kernel_dimension(&self, k: f64, relative_cut: f64) -> usize {
        let n = self.bond_count();
        let m = DMatrix::<Complex64>::identity(n, n) - self.evolution(k);
        let sv = m.singular_values();
        let scale = sv.max().max(1.0);
        sv.iter().filter(|s| **s < relative_cut * scale).count()
    }
}

/// `U(k) = D(k) S` over directed bonds.
pub fn bond_evolution(graph: &MetricGraph, k: f64) -> Result<DMatrix<Complex64>> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param(format!("wavenumber must be positive, got {k}")));
    }
    Ok(SecularSystem::new(graph)?.evolution(k))
}
