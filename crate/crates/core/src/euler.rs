//! Truncated Euler-characteristic estimators `X_K(t)`, plateau detection,
//! and the resonance-count and truncation-error formulas.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::graph::GraphSummary;
use crate::spectrum::Spectrum;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Leading coefficient of the slowly converging estimator. The interval
/// spectrum `k_n = n pi` at `t = 1/2` pins it to 2.
pub const OLD_COEFFICIENT: f64 = 2.0;
/// The coefficient as printed in the original derivation, kept for comparison output.
pub const OLD_COEFFICIENT_LITERAL: f64 = TAU;

/// Plateau acceptance: maximum distance to the integer.
pub const PLATEAU_DEVIATION: f64 = 0.25;
pub const PLATEAU_SPAN_RATIO: f64 = 1.3;
pub const PLATEAU_MIN_SAMPLES: usize = 10;
pub const CURVE_MIN_SAMPLES: usize = 20;
/// A connected graph has `chi <= 1`; larger integers are never plateaus.
pub const MAX_CHI: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    New,
    Old,
    OldLiteral,
}

impl Formula {
    pub fn as_str(self) -> &'static str {
        match self {
            Formula::New => "new",
            Formula::Old => "old",
            Formula::OldLiteral => "old-literal",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "new" => Ok(Formula::New),
            "old" => Ok(Formula::Old),
            "old-literal" => Ok(Formula::OldLiteral),
            other => Err(Error::param(format!("unknown formula '{other}'"))),
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// One term of the fast estimator at `x = k_n / t`:
/// `8 pi^2 sin(x) / (x ((2 pi)^2 - x^2))`, finite at `x = 2 pi` (value -1).
pub fn new_term(x: f64) -> f64 {
    if x <= PI {
        2.0 * FOUR_PI_SQ * sinc(x) / (FOUR_PI_SQ - x * x)
    } else {
        -sinc(x - TAU) * 2.0 * FOUR_PI_SQ / (x * (x + TAU))
    }
}

/// Real part of `sqrt(2 pi)` times the Fourier transform of the test
/// function `1 - cos(2 pi x)` on `[0, 1]`.
pub fn phi_hat_real(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        return 1.0;
    }
    let gap = x - TAU;
    if gap.abs() < 1e-6 {
        // sin(x) = sin(gap) cancels the pole at 2 pi
        return -sinc(gap) * FOUR_PI_SQ / (x * (x + TAU));
    }
    let transform = -Complex64::i() * (Complex64::from_polar(1.0, -x) - 1.0) * FOUR_PI_SQ / (x * (x * x - FOUR_PI_SQ));
    transform.re
}

fn old_term(x: f64) -> f64 {
    (0.5 * x).cos() * sinc(0.25 * x).powi(2)
}

/// Compensated (Neumaier) sum.
fn stable_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in terms {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("t must be positive and finite, got {t}")))
    }
}

/// `X(t)` of the fast estimator over every level of `spectrum`.
pub fn x_new(spectrum: &Spectrum, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(2.0 + stable_sum(spectrum.values().iter().map(|k| new_term(k / t))))
}

/// `X(t)` of the slowly converging estimator, coefficient 2.
pub fn x_old(spectrum: &Spectrum, t: f64) -> Result<f64> {
    evaluate(Formula::Old, spectrum.values(), t)
}

pub fn evaluate(formula: Formula, levels: &[f64], t: f64) -> Result<f64> {
    check_t(t)?;
    let value = match formula {
        Formula::New => 2.0 + stable_sum(levels.iter().map(|k| new_term(k / t))),
        Formula::Old => 2.0 + OLD_COEFFICIENT * stable_sum(levels.iter().map(|k| old_term(k / t))),
        Formula::OldLiteral => 2.0 + OLD_COEFFICIENT_LITERAL * stable_sum(levels.iter().map(|k| old_term(k / t))),
    };
    Ok(value)
}

/// Logarithmically spaced sample points for `t`, in 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl TGrid {
    pub const DEFAULT_STEPS: usize = 60;

    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    /// `[t0 / 2, 8 t0]` when the graph is known, otherwise `[0.5, 20]`.
    pub fn default_for(summary: Option<&GraphSummary>) -> Self {
        match summary {
            Some(s) => Self::new(0.5 * s.t0, 8.0 * s.t0, Self::DEFAULT_STEPS),
            None => Self::new(0.5, 20.0, Self::DEFAULT_STEPS),
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) || self.steps < 2 {
            return Err(Error::param(format!(
                "t grid needs 0 < t_lo < t_hi and at least 2 steps, got [{}, {}] x {}",
                self.lo, self.hi, self.steps
            )));
        }
        let ratio = (self.hi / self.lo).ln();
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| match i {
                0 => self.lo,
                i if i == self.steps - 1 => self.hi,
                i => self.lo * (ratio * i as f64 / last).exp(),
            })
            .collect())
    }
}

/// Sampled `X_K(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiCurve {
    pub samples: Vec<(f64, f64)>,
    pub formula: Formula,
    pub terms: usize,
}

impl ChiCurve {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# formula={}, K={}\n", self.formula, self.terms);
        for (t, x) in &self.samples {
            out.push_str(&format!("{t},{x}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<ChiCurve> {
        let header = format::parse_header(format::first_line(text)?, 2)?;
        let formula = format::header_value(&header, "formula")?
            .parse()
            .map_err(|e: Error| Error::format(1, e.to_string()))?;
        let terms: usize = format::header_value(&header, "K")?
            .parse()
            .map_err(|_| Error::format(1, "K is not a non-negative integer"))?;
        if terms == 0 {
            return Err(Error::format(1, "K must be at least 1"));
        }
        let mut samples: Vec<(f64, f64)> = Vec::new();
        for (line_no, line) in format::data_lines(text) {
            let (t, x) = line
                .split_once(',')
                .ok_or_else(|| Error::format(line_no, "expected 't,x'"))?;
            let t = format::parse_real(line_no, t)?;
            let x = format::parse_real(line_no, x)?;
            if t <= 0.0 || samples.last().is_some_and(|(prev, _)| t <= *prev) {
                return Err(Error::format(line_no, "t must be positive and strictly increasing"));
            }
            samples.push((t, x));
        }
        Ok(ChiCurve {
            samples,
            formula,
            terms,
        })
    }
}

/// Samples `X_K` over `grid` using the first `terms` levels.
pub fn chi_curve(spectrum: &Spectrum, terms: usize, grid: TGrid, formula: Formula) -> Result<ChiCurve> {
    if terms == 0 || terms > spectrum.len() {
        return Err(Error::param(format!(
            "K = {terms} outside [1, {}] available levels",
            spectrum.len()
        )));
    }
    let levels = &spectrum.values()[..terms];
    let samples = grid
        .points()?
        .into_iter()
        .map(|t| evaluate(formula, levels, t).map(|x| (t, x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChiCurve {
        samples,
        formula,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauReport {
    #[serde(rename = "chi")]
    pub chi_estimate: i64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub max_deviation: f64,
    pub found: bool,
}

impl PlateauReport {
    pub fn contains(&self, t: f64) -> bool {
        self.found && self.t_lo <= t && t <= self.t_hi
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.found && self.t_lo <= lo && hi <= self.t_hi
    }
}

/// Longest run of consecutive samples within 1/4 of one integer `m <= 1`.
/// The run must span a `t` ratio of at least 1.3 and hold at least 10
/// samples; otherwise `found` is false and the best run is still reported.
pub fn detect_plateau(curve: &ChiCurve) -> Result<PlateauReport> {
    let samples = &curve.samples;
    if samples.len() < CURVE_MIN_SAMPLES {
        return Err(Error::param(format!(
            "plateau detection needs at least {CURVE_MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let near = |x: f64| -> Option<i64> {
        let m = x.round();
        ((x - m).abs() < PLATEAU_DEVIATION && m <= MAX_CHI as f64).then_some(m as i64)
    };
    struct Run {
        m: i64,
        start: usize,
        end: usize,
        deviation: f64,
    }
    let mut best: Option<Run> = None;
    let mut i = 0;
    while i < samples.len() {
        let Some(m) = near(samples[i].1) else {
            i += 1;
            continue;
        };
        let mut j = i;
        let mut deviation = (samples[i].1 - m as f64).abs();
        while j + 1 < samples.len() && near(samples[j + 1].1) == Some(m) {
            j += 1;
            deviation = deviation.max((samples[j].1 - m as f64).abs());
        }
        let span = samples[j].0 / samples[i].0;
        let better = match &best {
            None => true,
            Some(b) => {
                let best_span = samples[b.end].0 / samples[b.start].0;
                span > best_span || (span == best_span && j - i > b.end - b.start)
            }
        };
        if better {
            best = Some(Run {
                m,
                start: i,
                end: j,
                deviation,
            });
        }
        i = j + 1;
    }
    Ok(match best {
        Some(run) => {
            let (t_lo, t_hi) = (samples[run.start].0, samples[run.end].0);
            PlateauReport {
                chi_estimate: run.m,
                t_lo,
                t_hi,
                max_deviation: run.deviation,
                found: run.end - run.start + 1 >= PLATEAU_MIN_SAMPLES && t_hi / t_lo >= PLATEAU_SPAN_RATIO,
            }
        }
        None => PlateauReport {
            chi_estimate: 0,
            t_lo: 0.0,
            t_hi: 0.0,
            max_deviation: 0.0,
            found: false,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KMode {
    /// Full bound with the exponential.
    Exact,
    /// Large `L t0` approximation.
    Approx,
    /// Requirement of the slowly converging estimator.
    Old,
}

/// Number of lowest levels that keeps `|X(t0) - X_K(t0)|` below `epsilon`.
pub fn k_required(vertices: usize, lt0: f64, epsilon: f64, mode: KMode) -> Result<usize> {
    if vertices == 0 {
        return Err(Error::param("vertex count must be positive"));
    }
    if !(lt0 >= 0.5 && lt0.is_finite()) {
        return Err(Error::param(format!("L*t0 must be at least 1/2, got {lt0}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let base = (vertices - 1) as f64;
    let extra = match mode {
        KMode::Exact => 2.0 * lt0 / (-(-epsilon * PI / lt0).exp_m1()).sqrt(),
        KMode::Approx => 2.0 / (epsilon * PI).sqrt() * lt0.powf(1.5),
        KMode::Old => 32.0 / (epsilon * PI * PI) * lt0 * lt0,
    };
    Ok((base + extra).ceil() as usize)
}

/// Upper bound on `|X(t0) - X_K(t0)|` for the fast estimator. Defined when
/// `K + 1 - |V| > 2 L t0`.
pub fn truncation_bound(terms: usize, vertices: usize, lt0: f64) -> Result<f64> {
    let shifted = terms as f64 + 1.0 - vertices as f64;
    let threshold = 2.0 * lt0;
    let defined = shifted > threshold && lt0 > 0.0;
    if !defined {
        return Err(Error::BoundUndefined { shifted, threshold });
    }
    let s2 = shifted * shifted;
    Ok(lt0 / PI * (s2 / (s2 - threshold * threshold)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Provenance;

    fn interval(levels: usize) -> Spectrum {
        Spectrum::new((1..=levels).map(|n| n as f64 * PI).collect(), Provenance::Solved).unwrap()
    }

    #[test]
    fn removable_point() {
        assert!((new_term(TAU) + 1.0).abs() < 1e-15);
        assert!((phi_hat_real(TAU) + 0.5).abs() < 1e-12);
        assert_eq!(phi_hat_real(0.0), 1.0);
        assert!(phi_hat_real(PI).abs() < 1e-15);
        assert!((new_term(1e-9) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_new_formula_is_exact() {
        for levels in [1, 2, 7, 50] {
            let x = x_new(&interval(levels), 0.5).unwrap();
            assert!((x - 1.0).abs() < 1e-12, "K={levels}: {x}");
        }
        let empty = Spectrum::new(vec![], Provenance::Solved).unwrap();
        assert_eq!(x_new(&empty, 1.0).unwrap(), 2.0);
        assert!(x_new(&empty, 0.0).is_err());
        assert!(x_new(&empty, -1.0).is_err());
    }

    #[test]
    fn interval_old_formula() {
        // tail is 8/pi^2 sum over odd n > 50 of 1/n^2 < 0.02
        let x = x_old(&interval(50), 0.5).unwrap();
        assert!((x - 1.0).abs() < 0.02, "{x}");
        let lit = evaluate(Formula::OldLiteral, interval(2000).values(), 0.5).unwrap();
        assert!((lit - (2.0 - PI)).abs() < 0.01, "{lit}");
    }

    #[test]
    fn k_required_values() {
        assert_eq!(k_required(4, 4.82, 0.25, KMode::Exact).unwrap(), 28);
        assert_eq!(k_required(5, 9.74, 0.25, KMode::Exact).unwrap(), 74);
        let old = k_required(5, 9.77, 0.25, KMode::Old).unwrap();
        assert!((1241..=1245).contains(&old), "{old}");
        assert!(k_required(4, 0.4, 0.25, KMode::Exact).is_err());
        assert!(k_required(4, 4.82, 0.5, KMode::Exact).is_err());
        assert!(k_required(4, 4.82, 0.0, KMode::Approx).is_err());
    }

    #[test]
    fn truncation_bound_values() {
        let b = truncation_bound(28, 4, 4.82).unwrap();
        assert!((b - 0.247).abs() < 1e-3, "{b}");
        assert!(truncation_bound(74, 5, 9.74).unwrap() <= 0.25);
        assert!(matches!(
            truncation_bound(12, 4, 4.82),
            Err(Error::BoundUndefined { .. })
        ));
    }

    #[test]
    fn constant_curve_plateau() {
        let curve = ChiCurve {
            samples: TGrid::new(0.5, 20.0, 40)
                .points()
                .unwrap()
                .into_iter()
                .map(|t| (t, 1.0))
                .collect(),
            formula: Formula::New,
            terms: 1,
        };
        let p = detect_plateau(&curve).unwrap();
        assert!(p.found);
        assert_eq!(p.chi_estimate, 1);
        assert_eq!((p.t_lo, p.t_hi), (0.5, 20.0));
    }

    #[test]
    fn saturated_curve_is_not_a_plateau() {
        // X -> 2 + 2K for large t; integers above 1 are rejected
        let curve = ChiCurve {
            samples: TGrid::new(0.5, 20.0, 40)
                .points()
                .unwrap()
                .into_iter()
                .map(|t| (t, 12.0))
                .collect(),
            formula: Formula::New,
            terms: 5,
        };
        assert!(!detect_plateau(&curve).unwrap().found);
    }

    #[test]
    fn short_curves_are_rejected() {
        let curve = ChiCurve {
            samples: vec![(1.0, 1.0); 5],
            formula: Formula::New,
            terms: 1,
        };
        assert!(detect_plateau(&curve).is_err());
    }

    #[test]
    fn curve_csv_round_trip() {
        let curve = chi_curve(&interval(10), 10, TGrid::new(0.5, 20.0, 25), Formula::Old).unwrap();
        let back = ChiCurve::from_csv(&curve.to_csv()).unwrap();
        assert_eq!(back, curve);
        assert!(ChiCurve::from_csv("# formula=new, K=0\n").is_err());
        assert!(ChiCurve::from_csv("# formula=new, K=3\n2,1\n1,1\n").is_err());
    }

    #[test]
    fn curve_term_range() {
        assert!(chi_curve(&interval(5), 6, TGrid::default_for(None), Formula::New).is_err());
        assert!(chi_curve(&interval(5), 0, TGrid::default_for(None), Formula::New).is_err());
        let c = chi_curve(&interval(5), 5, TGrid::new(0.5, 2.0, 3), Formula::New).unwrap();
        assert!((c.samples[0].1 - 1.0).abs() < 1e-12);
    }
}
