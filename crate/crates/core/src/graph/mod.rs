//! Metric graphs: edges carrying positive optical lengths (meters), their
//! validation, derived topological scalars, and the JSON graph file format.

mod generate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{gen_complete, gen_random_connected, LengthSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Optical length in meters.
    pub length: f64,
}

/// An undirected metric graph. Parallel edges are allowed, loops are not.
///
/// Construction does not validate; call [`MetricGraph::validate`] to list
/// violations, or any of the derived-quantity methods which fail on an
/// invalid graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricGraph {
    #[serde(rename = "vertices")]
    vertex_count: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NoEdges,
    Disconnected,
    NonPositiveLength { edge: usize },
    SelfLoop { edge: usize },
    BadIndex { edge: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEdges => write!(f, "no edges"),
            Violation::Disconnected => write!(f, "disconnected"),
            Violation::NonPositiveLength { edge } => write!(f, "non-positive length (edge {edge})"),
            Violation::SelfLoop { edge } => write!(f, "self-loop (edge {edge})"),
            Violation::BadIndex { edge } => write!(f, "bad index (edge {edge})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.to_string().starts_with(name))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Topological and geometric scalars of a valid graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub chi: i64,
    pub beta: i64,
    pub total_length: f64,
    pub l_min: f64,
    /// Validity threshold `1 / (2 l_min)` of the estimator, in 1/m.
    pub t0: f64,
    /// Dimensionless optical size `total_length * t0`.
    pub lt0: f64,
}

impl MetricGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Self {
        Self { vertex_count, edges }
    }

    /// Builds a graph and rejects it unless it is valid.
    pub fn try_new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::new(vertex_count, edges);
        g.ensure_valid()?;
        Ok(g)
    }

    /// Single edge of the given length between two vertices.
    pub fn interval(length: f64) -> Self {
        Self::new(2, vec![Edge { u: 0, v: 1, length }])
    }

    /// Star with one central vertex and a leg of each given length.
    pub fn star(legs: &[f64]) -> Self {
        let edges = legs
            .iter()
            .enumerate()
            .map(|(i, &length)| Edge { u: 0, v: i + 1, length })
            .collect();
        Self::new(legs.len() + 1, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn min_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Copy with every edge length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                length: e.length * factor,
                ..*e
            })
            .collect();
        Self::new(self.vertex_count, edges)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.edges.is_empty() {
            violations.push(Violation::NoEdges);
        }
        let mut indices_ok = true;
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.vertex_count || e.v >= self.vertex_count {
                violations.push(Violation::BadIndex { edge: i });
                indices_ok = false;
            } else if e.u == e.v {
                violations.push(Violation::SelfLoop { edge: i });
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                violations.push(Violation::NonPositiveLength { edge: i });
            }
        }
        if self.vertex_count == 0 || (indices_ok && !self.is_connected()) {
            violations.push(Violation::Disconnected);
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count;
        // a connected graph on n vertices has at least n - 1 edges
        if n > self.edges.len() + 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    pub fn summarize(&self) -> Result<GraphSummary> {
        self.ensure_valid()?;
        let chi = self.vertex_count as i64 - self.edges.len() as i64;
        let total_length = self.total_length();
        let l_min = self.min_length();
        let t0 = 1.0 / (2.0 * l_min);
        Ok(GraphSummary {
            vertices: self.vertex_count,
            edges: self.edges.len(),
            chi,
            beta: 1 - chi,
            total_length,
            l_min,
            t0,
            lt0: total_length * t0,
        })
    }

    /// Parses the JSON graph file format. The result is not validated.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::format(e.line(), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serialization is infallible");
        s.push('\n');
        s
    }
}
