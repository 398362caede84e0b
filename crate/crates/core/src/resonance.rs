//! Measured resonance lists: GHz ingestion, missing-level screening via
//! the fluctuating counting function, and controlled corruption.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::format;
use crate::spectrum::{Provenance, Spectrum};
use crate::stats::linear_fit;

/// m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const MIN_FLUCTUATION_LEVELS: usize = 20;
pub const GAP_WINDOW: usize = 10;
pub const GAP_THRESHOLD: f64 = 0.5;

/// Wavenumber (1/m) of a frequency given in GHz.
pub fn ghz_to_k(nu_ghz: f64) -> f64 {
    TAU * nu_ghz * 1e9 / SPEED_OF_LIGHT
}

pub fn k_to_ghz(k: f64) -> f64 {
    k * SPEED_OF_LIGHT / (TAU * 1e9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceDataset {
    frequencies_ghz: Vec<f64>,
    dielectric: f64,
    label: String,
}

impl ResonanceDataset {
    pub fn new(frequencies_ghz: Vec<f64>, dielectric: f64, label: impl Into<String>) -> Result<Self> {
        let label = label.into().trim().to_string();
        if let Some(i) = frequencies_ghz.iter().position(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::param(format!("resonance {} is not a positive frequency", i + 1)));
        }
        if let Some(i) = frequencies_ghz.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::param(format!(
                "resonances {} and {} are not strictly increasing",
                i + 1,
                i + 2
            )));
        }
        if !(dielectric >= 1.0 && dielectric.is_finite()) {
            return Err(Error::param(format!(
                "dielectric constant must be >= 1, got {dielectric}"
            )));
        }
        if label.contains(['\n', '\r']) {
            return Err(Error::param("label must be a single line"));
        }
        Ok(Self {
            frequencies_ghz,
            dielectric,
            label,
        })
    }

    /// Expresses `spectrum` in GHz.
    pub fn from_spectrum(spectrum: &Spectrum, dielectric: f64, label: impl Into<String>) -> Result<Self> {
        Self::new(
            spectrum.values().iter().map(|k| k_to_ghz(*k)).collect(),
            dielectric,
            label,
        )
    }

    pub fn frequencies_ghz(&self) -> &[f64] {
        &self.frequencies_ghz
    }

    pub fn dielectric(&self) -> f64 {
        self.dielectric
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_dielectric(mut self, dielectric: f64) -> Result<Self> {
        if !(dielectric >= 1.0 && dielectric.is_finite()) {
            return Err(Error::param(format!(
                "dielectric constant must be >= 1, got {dielectric}"
            )));
        }
        self.dielectric = dielectric;
        Ok(self)
    }

    /// Mean number of resonances per GHz from a least-squares fit of the
    /// staircase `N(nu_i) = i`.
    pub fn level_density_per_ghz(&self) -> Result<f64> {
        if self.frequencies_ghz.len() < 2 {
            return Err(Error::param("density needs at least two resonances"));
        }
        let ns: Vec<f64> = (1..=self.frequencies_ghz.len()).map(|n| n as f64).collect();
        Ok(linear_fit(&self.frequencies_ghz, &ns).0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# unit=GHz, dielectric={}, label={}\n", self.dielectric, self.label);
        for (i, nu) in self.frequencies_ghz.iter().enumerate() {
            out.push_str(&format!("{},{nu}\n", i + 1));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let header = format::parse_header(format::first_line(text)?, 3)?;
        let unit = format::header_value(&header, "unit")?;
        if unit != "GHz" {
            return Err(Error::format(1, format!("unsupported unit '{unit}', expected GHz")));
        }
        let dielectric = format::parse_real(1, format::header_value(&header, "dielectric")?)?;
        let label = format::header_value(&header, "label")?;
        let frequencies = format::data_lines(text)
            .enumerate()
            .map(|(i, (line_no, line))| format::indexed_row(line_no, line, i + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frequencies, dielectric, label).map_err(|e| Error::format(0, e.to_string()))
    }
}

/// Converts resonance positions to wavenumbers. Graph lengths are optical
/// lengths, so the dielectric constant is metadata only.
pub fn load_resonances(dataset: &ResonanceDataset) -> Result<Spectrum> {
    Spectrum::new(
        dataset.frequencies_ghz.iter().map(|nu| ghz_to_k(*nu)).collect(),
        Provenance::Ingested,
    )
}

/// Staircase minus its least-squares linear mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Fluctuation {
    /// `(k_i, N_fl(k_i))`.
    pub series: Vec<(f64, f64)>,
    /// Levels per unit wavenumber.
    pub slope: f64,
    pub intercept: f64,
}

impl Fluctuation {
    /// Total length implied by the fitted mean density.
    pub fn length_estimate(&self) -> f64 {
        PI * self.slope
    }
}

pub fn counting_fluctuation(spectrum: &Spectrum) -> Result<Fluctuation> {
    let ks = spectrum.values();
    if ks.len() < MIN_FLUCTUATION_LEVELS {
        return Err(Error::param(format!(
            "fluctuation analysis needs at least {MIN_FLUCTUATION_LEVELS} levels, got {}",
            ks.len()
        )));
    }
    let ns: Vec<f64> = (1..=ks.len()).map(|n| n as f64).collect();
    let (slope, intercept) = linear_fit(ks, &ns);
    let series = ks
        .iter()
        .zip(&ns)
        .map(|(k, n)| (*k, n - (slope * k + intercept)))
        .collect();
    Ok(Fluctuation {
        series,
        slope,
        intercept,
    })
}

/// Candidate missing-level locations: positions where the mean of the
/// next 10 `N_fl` values sits more than 0.5 below the mean of the previous
/// 10. Hits less than one window apart merge into one flag at the deepest
/// drop.
pub fn flag_gaps(series: &[(f64, f64)]) -> Vec<f64> {
    let w = GAP_WINDOW;
    if series.len() < 2 * w {
        return Vec::new();
    }
    let mean = |s: &[(f64, f64)]| s.iter().map(|p| p.1).sum::<f64>() / s.len() as f64;
    let drops: Vec<(usize, f64)> = (w..=series.len() - w)
        .map(|i| (i, mean(&series[i - w..i]) - mean(&series[i..i + w])))
        .collect();
    // hits closer than one window belong to the same missing level
    let mut flags = Vec::new();
    let mut run: Option<(usize, usize, f64)> = None;
    for &(i, drop) in drops.iter().filter(|d| d.1 > GAP_THRESHOLD) {
        run = match run {
            Some((last, j, best)) if i - last <= w => Some(if drop > best { (i, i, drop) } else { (i, j, best) }),
            Some((_, j, _)) => {
                flags.push(series[j].0);
                Some((i, i, drop))
            }
            None => Some((i, i, drop)),
        };
    }
    if let Some((_, j, _)) = run {
        flags.push(series[j].0);
    }
    flags
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbPolicy {
    pub drop_probability: f64,
    /// 1-based index of the first level eligible for dropping.
    pub drop_min_index: usize,
    pub jitter_relative_sigma: f64,
    pub seed: u64,
}

impl PerturbPolicy {
    pub fn identity() -> Self {
        Self {
            drop_probability: 0.0,
            drop_min_index: 1,
            jitter_relative_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.drop_probability) {
            return Err(Error::param(format!(
                "drop probability must lie in [0, 1), got {}",
                self.drop_probability
            )));
        }
        if !(self.jitter_relative_sigma >= 0.0 && self.jitter_relative_sigma.is_finite()) {
            return Err(Error::param(format!(
                "jitter sigma must be non-negative, got {}",
                self.jitter_relative_sigma
            )));
        }
        Ok(())
    }
}

/// Drops eligible levels at random and applies log-normal relative jitter
/// `k -> k exp(sigma z)`, which keeps levels positive. Deterministic per seed.
pub fn perturb(spectrum: &Spectrum, policy: &PerturbPolicy) -> Result<Spectrum> {
    policy.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut values = Vec::with_capacity(spectrum.len());
    for (i, &k) in spectrum.values().iter().enumerate() {
        if i + 1 >= policy.drop_min_index
            && policy.drop_probability > 0.0
            && rng.random::<f64>() < policy.drop_probability
        {
            continue;
        }
        if policy.jitter_relative_sigma > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            values.push(k * (policy.jitter_relative_sigma * z).exp());
        } else {
            values.push(k);
        }
    }
    values.sort_by(f64::total_cmp);
    Spectrum::new(values, Provenance::Perturbed)
}

/// Removes exactly `count` distinct levels chosen uniformly among indices
/// `>= min_index` (1-based).
pub fn drop_random_levels(spectrum: &Spectrum, count: usize, min_index: usize, seed: u64) -> Result<Spectrum> {
    let first = min_index.max(1);
    let eligible = (spectrum.len() + 1).saturating_sub(first);
    if count > eligible {
        return Err(Error::param(format!(
            "cannot drop {count} levels: only {eligible} have index >= {first}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, eligible, count);
    let mut keep = vec![true; spectrum.len()];
    for p in picked.iter() {
        keep[first - 1 + p] = false;
    }
    let values = spectrum
        .values()
        .iter()
        .zip(keep)
        .filter_map(|(k, keep)| keep.then_some(*k))
        .collect();
    Spectrum::new(values, Provenance::Perturbed)
}
