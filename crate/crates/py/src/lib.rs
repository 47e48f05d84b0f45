//! Python bindings for the bitgas core: packed bitstrings, the two
//! ensemble builders, and the analytic population/temperature formulas.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use bitgas_core::bitcore::{generate_source, SourceSpec};
use bitgas_core::{ensemble, theory, Model};

fn err(e: bitgas_core::Error) -> PyErr {
    match &e {
        bitgas_core::Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_model(s: &str) -> PyResult<Model> {
    Model::from_str(s).map_err(err)
}

/// Packed binary string; bit i lives at bit i % 64 of word i / 64.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct BitString {
    inner: bitgas_core::bitcore::BitString,
}

#[pymethods]
impl BitString {
    /// All-zero string of the given length.
    #[new]
    fn new(bits: usize) -> PyResult<Self> {
        Ok(BitString { inner: bitgas_core::bitcore::BitString::zeros(bits).map_err(err)? })
    }

    /// Deterministic Bernoulli(p) string for (length, p, seed).
    #[staticmethod]
    fn generate(bits: usize, p: f64, seed: u64) -> PyResult<Self> {
        let spec = SourceSpec::new(bits, p, seed).map_err(err)?;
        Ok(BitString { inner: generate_source(&spec).map_err(err)? })
    }

    /// Parse "0101..."; the leftmost character is bit 0.
    #[staticmethod]
    fn from_binary_str(s: &str) -> PyResult<Self> {
        Ok(BitString { inner: bitgas_core::bitcore::BitString::from_binary_str(s).map_err(err)? })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8], bits: usize) -> PyResult<Self> {
        Ok(BitString { inner: bitgas_core::bitcore::BitString::from_bytes(data, bits).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn bit(&self, i: usize) -> PyResult<bool> {
        if i >= self.inner.len() {
            return Err(PyValueError::new_err(format!("bit index {i} out of range")));
        }
        Ok(self.inner.bit(i))
    }

    fn set_bit(&mut self, i: usize, v: bool) -> PyResult<()> {
        if i >= self.inner.len() {
            return Err(PyValueError::new_err(format!("bit index {i} out of range")));
        }
        self.inner.set_bit(i, v);
        Ok(())
    }

    fn popcount(&self) -> u64 {
        self.inner.popcount()
    }

    fn popcount_range(&self, start: usize, len: usize) -> PyResult<u64> {
        self.inner.popcount_range(start, len).map_err(err)
    }

    /// Cyclic left rotation by n positions.
    fn rotate(&self, n: usize) -> PyResult<Self> {
        Ok(BitString { inner: self.inner.rotate(n).map_err(err)? })
    }

    fn xor(&self, other: &BitString) -> PyResult<Self> {
        Ok(BitString { inner: self.inner.xor(&other.inner).map_err(err)? })
    }

    /// Hamming distance to the n-rotated copy; always even.
    fn hamming_cyclic(&self, n: usize) -> PyResult<u64> {
        self.inner.hamming_cyclic(n).map_err(err)
    }

    /// Cut the first count*sub_len bits into count pieces.
    fn split(&self, count: usize, sub_len: usize) -> PyResult<Vec<BitString>> {
        Ok(self
            .inner
            .split_substrings(count, sub_len)
            .map_err(err)?
            .into_iter()
            .map(|inner| BitString { inner })
            .collect())
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.inner.to_bytes()
    }

    fn __repr__(&self) -> String {
        format!("BitString(bits={}, ones={})", self.inner.len(), self.inner.popcount())
    }
}

/// Macrostate populations keyed by observable value.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Histogram {
    inner: ensemble::EnsembleHistogram,
}

#[pymethods]
impl Histogram {
    #[staticmethod]
    fn from_counts(model: &str, bits: usize, counts: BTreeMap<u64, u64>) -> PyResult<Self> {
        let model = parse_model(model)?;
        Ok(Histogram {
            inner: ensemble::EnsembleHistogram::from_counts(model, bits, counts).map_err(err)?,
        })
    }

    #[getter]
    fn model(&self) -> String {
        self.inner.model.to_string()
    }

    #[getter]
    fn bits(&self) -> usize {
        self.inner.bits
    }

    #[getter]
    fn total(&self) -> u64 {
        self.inner.total
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean
    }

    fn counts(&self) -> BTreeMap<u64, u64> {
        self.inner.counts().clone()
    }

    /// Empirical temperature implied by the mean observable.
    fn temperature(&self) -> PyResult<f64> {
        ensemble::empirical_temperature(&self.inner).map_err(err)
    }

    /// (ground value, count, fraction) of the most populated allowed
    /// macrostate nearest the mean.
    fn ground_state(&self) -> (u64, u64, f64) {
        let v = ensemble::ground_value(&self.inner);
        let (n0, frac) = ensemble::ground_state_fraction(&self.inner);
        (v, n0, frac)
    }

    /// Mean quadratic energy per observation.
    fn internal_energy(&self) -> f64 {
        ensemble::internal_energy(&self.inner)
    }

    fn merge(&mut self, other: &Histogram) -> PyResult<()> {
        self.inner.merge(&other.inner).map_err(err)
    }

    /// Thermodynamic summary as a plain dict.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let s = ensemble::summarize(&self.inner).map_err(err)?;
        let d = pyo3::types::PyDict::new(py);
        d.set_item("model", s.model.to_string())?;
        d.set_item("M", s.bits)?;
        d.set_item("N", s.total)?;
        d.set_item("temperature", s.temperature)?;
        d.set_item("mean", s.mean)?;
        d.set_item("ground_state_count", s.ground_state_count)?;
        d.set_item("ground_state_fraction", s.ground_state_fraction)?;
        d.set_item("internal_energy", s.internal_energy)?;
        d.set_item("condensed", s.condensed)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Histogram(model={}, M={}, N={}, mean={})",
            self.inner.model, self.inner.bits, self.inner.total, self.inner.mean
        )
    }
}

/// Distances of a source string to its first n nonzero rotations
/// (shifts 0..n when include_zero_shift is set).
#[pyfunction]
#[pyo3(signature = (source, n, include_zero_shift = false))]
fn build_c_ensemble(source: &BitString, n: usize, include_zero_shift: bool) -> PyResult<Histogram> {
    Ok(Histogram {
        inner: ensemble::build_c_ensemble(&source.inner, n, include_zero_shift).map_err(err)?,
    })
}

/// Popcounts of n disjoint m-bit substrings of a long source string.
#[pyfunction]
fn build_b_ensemble(long_source: &BitString, n: usize, m: usize) -> PyResult<Histogram> {
    Ok(Histogram { inner: ensemble::build_b_ensemble(&long_source.inner, n, m).map_err(err)? })
}

/// Condensation threshold 2 / (pi M) of the cyclic-distance model.
#[pyfunction]
fn critical_temperature(m: usize) -> f64 {
    theory::critical_temperature(m)
}

#[pyfunction]
fn cbar_from_p(p: f64, m: usize) -> f64 {
    theory::cbar_from_p(p, m)
}

#[pyfunction]
fn k_factor(cbar: f64, m: usize) -> PyResult<f64> {
    theory::k_factor(cbar, m).map_err(err)
}

#[pyfunction]
fn temperature_c(cbar: f64, m: usize) -> PyResult<f64> {
    theory::temperature_c(cbar, m).map_err(err)
}

/// Mean distance cbar at which the C-model sits at temperature t.
#[pyfunction]
fn invert_temperature_c(t: f64, m: usize) -> PyResult<f64> {
    theory::invert_temperature_c(t, m).map_err(err)
}

#[pyfunction]
fn temperature_b(p: f64) -> PyResult<f64> {
    theory::temperature_b(p).map_err(err)
}

#[pyfunction]
fn invert_temperature_b(t: f64) -> PyResult<f64> {
    theory::invert_temperature_b(t).map_err(err)
}

/// Quadratic energy (v - mean)^2 / (2 M).
#[pyfunction]
fn energy_level(value: f64, mean: f64, m: usize) -> f64 {
    theory::energy_level(value, mean, m)
}

#[pyfunction]
fn ground_state_c_exact(t: f64, m: usize) -> PyResult<(f64, f64, bool)> {
    let g = theory::ground_state_c_exact(t, m).map_err(err)?;
    Ok((g.raw, g.fraction, g.condensed))
}

#[pyfunction]
fn ground_state_c_closed(t: f64, m: usize) -> PyResult<(f64, f64, bool)> {
    let g = theory::ground_state_c_closed(t, m).map_err(err)?;
    Ok((g.raw, g.fraction, g.condensed))
}

#[pyfunction]
fn ground_state_b(t: f64, m: usize) -> PyResult<f64> {
    theory::ground_state_b(t, m).map_err(err)
}

/// Predicted population of one macrostate under the named formula
/// ("adjusted-binomial", "normal", "binomial") for the given model.
#[pyfunction]
#[pyo3(signature = (model, formula, value, bits, p, count = 1))]
fn population(
    model: &str,
    formula: &str,
    value: usize,
    bits: usize,
    p: f64,
    count: u64,
) -> PyResult<f64> {
    let model = parse_model(model)?;
    let formula = theory::Formula::from_str(formula).map_err(err)?;
    let params = match model {
        Model::C => theory::ModelParams::c_from_p(bits, p).map_err(err)?,
        Model::B => theory::ModelParams::b_from_p(bits, p).map_err(err)?,
    };
    let curve = theory::theory_curve(formula, &params, count, value, value).map_err(err)?;
    curve
        .points
        .first()
        .map(|&(_, pop)| pop)
        .ok_or_else(|| PyValueError::new_err(format!("value {value} not in the model's domain")))
}

/// Full theory curve over [lo, hi] as a list of (value, population).
#[pyfunction]
#[pyo3(signature = (model, formula, bits, p, count = 1, lo = None, hi = None))]
fn theory_curve(
    model: &str,
    formula: &str,
    bits: usize,
    p: f64,
    count: u64,
    lo: Option<usize>,
    hi: Option<usize>,
) -> PyResult<Vec<(u64, f64)>> {
    let model = parse_model(model)?;
    let formula = theory::Formula::from_str(formula).map_err(err)?;
    let params = match model {
        Model::C => theory::ModelParams::c_from_p(bits, p).map_err(err)?,
        Model::B => theory::ModelParams::b_from_p(bits, p).map_err(err)?,
    };
    let curve = theory::theory_curve(formula, &params, count, lo.unwrap_or(0), hi.unwrap_or(bits))
        .map_err(err)?;
    Ok(curve.points)
}

#[pymodule]
fn bitgas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BitString>()?;
    m.add_class::<Histogram>()?;
    m.add_function(wrap_pyfunction!(build_c_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(build_b_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(critical_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(cbar_from_p, m)?)?;
    m.add_function(wrap_pyfunction!(k_factor, m)?)?;
    m.add_function(wrap_pyfunction!(temperature_c, m)?)?;
    m.add_function(wrap_pyfunction!(invert_temperature_c, m)?)?;
    m.add_function(wrap_pyfunction!(temperature_b, m)?)?;
    m.add_function(wrap_pyfunction!(invert_temperature_b, m)?)?;
    m.add_function(wrap_pyfunction!(energy_level, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_c_exact, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_c_closed, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_b, m)?)?;
    m.add_function(wrap_pyfunction!(population, m)?)?;
    m.add_function(wrap_pyfunction!(theory_curve, m)?)?;
    Ok(())
}
