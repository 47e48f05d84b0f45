//! Ensemble construction and empirical thermodynamics: bins the observable
//! values of a source string into macrostates and derives temperature,
//! energy spectrum, ground-state occupation and internal energy from the
//! resulting histogram.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::{theory, Error, Model, Result};

/// Macrostate populations keyed by observable value.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleHistogram {
    pub model: Model,
    /// Bits per ensemble string (M).
    pub bits: usize,
    /// Total number of observations (N).
    pub total: u64,
    counts: BTreeMap<u64, u64>,
    /// Empirical mean of the observable, exactly `(1/N) sum N_i * value_i`.
    pub mean: f64,
}

impl EnsembleHistogram {
    /// Bin a sequence of observable values.
    pub fn from_values(model: Model, bits: usize, values: &[u64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyHistogram);
        }
        let mut counts = BTreeMap::new();
        let mut sum = 0u128;
        for &v in values {
            debug_assert!(v <= bits as u64);
            *counts.entry(v).or_insert(0u64) += 1;
            sum += v as u128;
        }
        let total = values.len() as u64;
        Ok(EnsembleHistogram {
            model,
            bits,
            total,
            counts,
            mean: sum as f64 / total as f64,
        })
    }

    /// Rebuild from already-binned counts (e.g. a histogram file).
    pub fn from_counts(model: Model, bits: usize, counts: BTreeMap<u64, u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyHistogram);
        }
        if counts.keys().any(|&v| v > bits as u64) {
            return Err(Error::InvalidParameter(format!(
                "histogram key exceeds M = {bits}"
            )));
        }
        let total: u64 = counts.values().sum();
        let sum: u128 = counts.iter().map(|(&v, &c)| v as u128 * c as u128).sum();
        Ok(EnsembleHistogram {
            model,
            bits,
            total,
            counts,
            mean: sum as f64 / total as f64,
        })
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Merge another histogram of the same model and M into this one.
    pub fn merge(&mut self, other: &EnsembleHistogram) -> Result<()> {
        if self.model != other.model || self.bits != other.bits {
            return Err(Error::InvalidParameter(
                "cannot merge histograms of different models or widths".into(),
            ));
        }
        for (&v, &c) in &other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        let total = self.total + other.total;
        let sum: u128 = self.counts.iter().map(|(&v, &c)| v as u128 * c as u128).sum();
        self.total = total;
        self.mean = sum as f64 / total as f64;
        Ok(())
    }
}

/// Build a C-model histogram: cyclic Hamming distances of `source` against
/// its own rotations.
///
/// With `include_zero_shift` the shifts are `0..N` (the deterministic
/// `C_0 = 0` outlier included); without, `1..=N`, which keeps the
/// empirical mean on the `2 M p (1-p)` asymptote.
pub fn build_c_ensemble(
    source: &BitString,
    n: usize,
    include_zero_shift: bool,
) -> Result<EnsembleHistogram> {
    let m = source.len();
    let max_n = if include_zero_shift { m } else { m - 1 };
    if n == 0 || n > max_n {
        return Err(Error::InvalidParameter(format!(
            "ensemble size {n} out of range [1, {max_n}] for M = {m}"
        )));
    }
    let shifts = if include_zero_shift { 0..n } else { 1..n + 1 };
    let values: Vec<u64> = shifts
        .into_par_iter()
        .map(|sh| source.hamming_cyclic(sh).expect("shift validated"))
        .collect();
    EnsembleHistogram::from_values(Model::C, m, &values)
}

/// Build a B-model histogram: popcounts of `n` non-overlapping `m`-bit
/// substrings of `long_source`.
pub fn build_b_ensemble(long_source: &BitString, n: usize, m: usize) -> Result<EnsembleHistogram> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("N and M must be at least 1".into()));
    }
    let needed = n
        .checked_mul(m)
        .ok_or_else(|| Error::InvalidParameter("N * M overflows".into()))?;
    if long_source.len() < needed {
        return Err(Error::InvalidParameter(format!(
            "source of {} bits too short for {n} substrings of {m} bits",
            long_source.len()
        )));
    }
    let values: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|j| long_source.popcount_range(j * m, m).expect("range validated"))
        .collect();
    EnsembleHistogram::from_values(Model::B, m, &values)
}

/// Temperature of the ensemble evaluated at the empirical mean.
pub fn empirical_temperature(h: &EnsembleHistogram) -> Result<f64> {
    match h.model {
        Model::C => theory::temperature_c(h.mean, h.bits),
        Model::B => theory::temperature_b(h.mean / h.bits as f64),
    }
}

/// Energy levels with populations, sorted by energy ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySpectrum {
    /// (E_i, N_i), ground entry first.
    pub entries: Vec<(f64, u64)>,
}

/// Energy of every macrostate against the empirical mean.
pub fn energy_spectrum(h: &EnsembleHistogram) -> Result<EnergySpectrum> {
    if h.counts.is_empty() {
        return Err(Error::EmptyHistogram);
    }
    let mut entries: Vec<(f64, u64)> = h
        .counts
        .iter()
        .map(|(&v, &c)| (theory::energy_level(v as f64, h.mean, h.bits), c))
        .collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(EnergySpectrum { entries })
}

/// Observable value of the designated ground macrostate: the integer
/// nearest the empirical mean, restricted to even values for the C-model
/// (ties go to the larger value).
pub fn ground_value(h: &EnsembleHistogram) -> u64 {
    let g = match h.model {
        Model::C => 2.0 * (h.mean / 2.0).round(),
        Model::B => h.mean.round(),
    };
    (g as u64).min(h.bits as u64)
}

/// Population and fraction of the ground macrostate. The ground value may
/// be absent from the histogram, in which case the count is zero.
pub fn ground_state_fraction(h: &EnsembleHistogram) -> (u64, f64) {
    let n0 = h.counts.get(&ground_value(h)).copied().unwrap_or(0);
    (n0, n0 as f64 / h.total as f64)
}

/// Population-weighted mean energy `U = (1/N) sum N_i E_i`.
pub fn internal_energy(h: &EnsembleHistogram) -> f64 {
    let sum: f64 = h
        .counts
        .iter()
        .map(|(&v, &c)| c as f64 * theory::energy_level(v as f64, h.mean, h.bits))
        .sum();
    sum / h.total as f64
}

/// Thermodynamic summary of one ensemble run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub model: Model,
    #[serde(rename = "M")]
    pub bits: u64,
    #[serde(rename = "N")]
    pub total: u64,
    pub temperature: f64,
    pub mean: f64,
    pub ground_state_count: u64,
    pub ground_state_fraction: f64,
    pub internal_energy: f64,
    pub condensed: bool,
    pub seed: Option<u64>,
    pub p_nominal: Option<f64>,
}

/// Assemble the full summary; `seed` and `p_nominal` are run metadata the
/// caller fills in when known.
pub fn summarize(h: &EnsembleHistogram) -> Result<RunSummary> {
    let temperature = empirical_temperature(h)?;
    let (n0, fraction) = ground_state_fraction(h);
    let condensed = match h.model {
        Model::C => temperature <= theory::critical_temperature(h.bits),
        Model::B => false,
    };
    Ok(RunSummary {
        model: h.model,
        bits: h.bits as u64,
        total: h.total,
        temperature,
        mean: h.mean,
        ground_state_count: n0,
        ground_state_fraction: fraction,
        internal_energy: internal_energy(h),
        condensed,
        seed: None,
        p_nominal: None,
    })
}
