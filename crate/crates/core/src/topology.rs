//! Structural verdicts derived from a recovered Euler characteristic.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::stats::linear_fit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Planarity {
    Planar,
    /// The spectrum cannot certify non-planarity.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    CompleteWithVertices(usize),
    NotComplete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub chi: i64,
    pub beta: i64,
    pub planarity: Planarity,
    pub completeness: Completeness,
    /// Meters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_length_estimate: Option<f64>,
    pub caveats: Vec<String>,
}

/// `n` such that the complete graph `K_n` has Euler characteristic `chi`,
/// i.e. `(3 + sqrt(9 - 8 chi)) / 2` when that is an integer.
pub fn complete_vertices(chi: i64) -> Option<usize> {
    let disc = 9i128 - 8 * chi as i128;
    if disc < 0 {
        return None;
    }
    let root = (disc as u128).isqrt();
    if root * root != disc as u128 || !(3 + root).is_multiple_of(2) {
        return None;
    }
    usize::try_from((3 + root) / 2).ok()
}

pub fn infer(chi: i64) -> Result<TopologyReport> {
    if chi > 1 {
        return Err(Error::Inconsistent(format!(
            "Euler characteristic {chi} exceeds 1, impossible for a connected graph"
        )));
    }
    let beta = 1 - chi;
    let mut caveats = Vec::new();
    // K5 has 6 independent cycles and K3,3 has 4
    let planarity = if beta <= 3 {
        caveats.push(format!(
            "planar: beta = {beta} is too small to contain a K5 or K3,3 subgraph"
        ));
        Planarity::Planar
    } else {
        caveats.push(format!(
            "planarity undecided: beta = {beta} admits both planar and non-planar graphs"
        ));
        Planarity::Unknown
    };
    let completeness = match complete_vertices(chi) {
        Some(n) => {
            caveats.push(format!(
                "chi = {chi} matches the complete graph K{n} (beta = {}); a non-complete graph with the same chi is indistinguishable",
                (n - 1) * (n - 2) / 2
            ));
            Completeness::CompleteWithVertices(n)
        }
        None => Completeness::NotComplete,
    };
    Ok(TopologyReport {
        chi,
        beta,
        planarity,
        completeness,
        total_length_estimate: None,
        caveats,
    })
}

pub const MIN_LENGTH_LEVELS: usize = 20;

/// Weyl estimate of the total length: `pi` times the slope of the level
/// index against `k_n`, fitted over the upper half of the levels.
pub fn estimate_total_length(spectrum: &Spectrum) -> Result<f64> {
    let levels = spectrum.values();
    if levels.len() < MIN_LENGTH_LEVELS {
        return Err(Error::param(format!(
            "length estimate needs at least {MIN_LENGTH_LEVELS} levels, got {}",
            levels.len()
        )));
    }
    let start = levels.len() / 2;
    let ks = &levels[start..];
    let ns: Vec<f64> = (start + 1..=levels.len()).map(|n| n as f64).collect();
    let (slope, _) = linear_fit(ks, &ns);
    Ok(PI * slope)
}
