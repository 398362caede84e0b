//! Ordered positive wavenumbers `k_n` (1/m) with multiplicity, and the
//! spectrum file format.

use std::fmt;

use crate::error::{Error, Result};
use crate::format;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Solved,
    Ingested,
    Perturbed,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Solved => "solved",
            Provenance::Ingested => "ingested",
            Provenance::Perturbed => "perturbed",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solved" => Ok(Provenance::Solved),
            "ingested" => Ok(Provenance::Ingested),
            "perturbed" => Ok(Provenance::Perturbed),
            other => Err(Error::format(1, format!("unknown provenance '{other}'"))),
        }
    }
}

/// Positive, non-decreasing wavenumbers. The zero mode is never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    provenance: Provenance,
}

impl Spectrum {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if let Some(i) = values.iter().position(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(Error::param(format!(
                "level {} is not a positive finite wavenumber",
                i + 1
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::param(format!("levels {} and {} are out of order", i + 1, i + 2)));
        }
        Ok(Self { values, provenance })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The first `count` levels (all of them if fewer).
    pub fn truncated(&self, count: usize) -> Spectrum {
        Spectrum {
            values: self.values[..count.min(self.values.len())].to_vec(),
            provenance: self.provenance,
        }
    }

    /// Copy without the level at 1-based `index`.
    pub fn without_level(&self, index: usize) -> Spectrum {
        let mut values = self.values.clone();
        values.remove(index - 1);
        Spectrum {
            values,
            provenance: Provenance::Perturbed,
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Spectrum> {
        Spectrum::new(self.values.iter().map(|k| k * factor).collect(), self.provenance)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# unit=k_per_m, provenance={}\n", self.provenance);
        for (i, k) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, format::sig_digits(*k, 15)));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Spectrum> {
        let header = format::parse_header(format::first_line(text)?, 2)?;
        let unit = format::header_value(&header, "unit")?;
        if unit != "k_per_m" {
            return Err(Error::format(1, format!("unsupported unit '{unit}', expected k_per_m")));
        }
        let provenance = format::header_value(&header, "provenance")?.parse()?;
        let values = format::data_lines(text)
            .enumerate()
            .map(|(i, (line_no, line))| format::indexed_row(line_no, line, i + 1))
            .collect::<Result<Vec<_>>>()?;
        Spectrum::new(values, provenance).map_err(|e| Error::format(0, e.to_string()))
    }
}
