//! Deterministic test-family generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, MetricGraph};
use crate::error::{Error, Result};

/// Target shortest edge and total length, both in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSpec {
    pub l_min: f64,
    pub total_length: f64,
}

impl LengthSpec {
    pub fn new(l_min: f64, total_length: f64) -> Self {
        Self { l_min, total_length }
    }

    /// One edge gets exactly `l_min`; the excess over `m * l_min` is split
    /// among the others with uniform random weights.
    fn draw(&self, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let LengthSpec { l_min, total_length } = *self;
        if !(l_min > 0.0 && l_min.is_finite() && total_length.is_finite()) {
            return Err(Error::param(format!(
                "length spec needs finite positive l_min, got l_min={l_min}, total={total_length}"
            )));
        }
        let floor = l_min * m as f64;
        let excess = total_length - floor;
        let slack = 1e-12 * total_length.abs();
        if excess < -slack {
            return Err(Error::param(format!(
                "infeasible length spec: {m} edges of at least {l_min} m exceed total {total_length} m"
            )));
        }
        let excess = excess.max(0.0);
        if m == 1 {
            if excess > slack {
                return Err(Error::param(format!(
                    "infeasible length spec: a single edge cannot have l_min={l_min} and total={total_length}"
                )));
            }
            return Ok(vec![l_min]);
        }
        let shortest = rng.random_range(0..m);
        let weights: Vec<f64> = (0..m)
            .map(|i| {
                if i == shortest {
                    0.0
                } else {
                    rng.random::<f64>() + f64::EPSILON
                }
            })
            .collect();
        let weight_sum: f64 = weights.iter().sum();
        Ok(weights.iter().map(|w| l_min + excess * w / weight_sum).collect())
    }
}

fn with_lengths(n: usize, pairs: Vec<(usize, usize)>, spec: LengthSpec, rng: &mut ChaCha8Rng) -> Result<MetricGraph> {
    let lengths = spec.draw(pairs.len(), rng)?;
    let edges = pairs
        .into_iter()
        .zip(lengths)
        .map(|((u, v), length)| Edge { u, v, length })
        .collect();
    Ok(MetricGraph::new(n, edges))
}

/// Complete simple graph on `n` vertices with random lengths meeting `spec`.
pub fn gen_complete(n: usize, spec: LengthSpec, seed: u64) -> Result<MetricGraph> {
    if n < 2 {
        return Err(Error::param(format!("complete graph needs n >= 2, got {n}")));
    }
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    with_lengths(n, pairs, spec, &mut rng)
}

/// Connected simple graph with `n` vertices and `m` edges: a random
/// spanning tree plus `m - n + 1` random extra vertex pairs.
pub fn gen_random_connected(n: usize, m: usize, spec: LengthSpec, seed: u64) -> Result<MetricGraph> {
    if n < 2 {
        return Err(Error::param(format!("random graph needs n >= 2, got {n}")));
    }
    let max_edges = n * (n - 1) / 2;
    if m < n - 1 || m > max_edges {
        return Err(Error::param(format!(
            "edge count {m} outside [{}, {max_edges}] for a connected simple graph on {n} vertices",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut adjacent = vec![false; n * n];
    let mut pairs = Vec::with_capacity(m);
    let mut link = |a: usize, b: usize, pairs: &mut Vec<(usize, usize)>| {
        let (u, v) = (a.min(b), a.max(b));
        adjacent[u * n + v] = true;
        pairs.push((u, v));
    };
    for i in 1..n {
        let j = rng.random_range(0..i);
        link(order[i], order[j], &mut pairs);
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !adjacent[u * n + v])
        .collect();
    rest.shuffle(&mut rng);
    pairs.extend(rest.into_iter().take(m - (n - 1)));
    pairs.sort_unstable();
    with_lengths(n, pairs, spec, &mut rng)
}
