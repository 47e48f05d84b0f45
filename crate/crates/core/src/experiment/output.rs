//! File formats: histogram/curve/sweep CSVs, summary JSON, raw bitstring
//! files with sidecar headers. All writes go through a temp-file + rename
//! so a crashed run never leaves a truncated artifact.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bitcore::{BitString, SourceSpec, GENERATOR_VERSION};
use crate::ensemble::EnsembleHistogram;
use crate::theory::{energy_level, TheoryCurve};
use crate::{Error, Model, Result};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write via a temporary file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into())
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    atomic_write(path, &body)
}

/// Histogram CSV: `value,count,energy`, rows sorted by value ascending,
/// energy against the empirical mean.
pub fn write_histogram_csv(path: &Path, h: &EnsembleHistogram) -> Result<()> {
    let mut out = String::from("value,count,energy\n");
    for (&v, &c) in h.counts() {
        let e = energy_level(v as f64, h.mean, h.bits);
        out.push_str(&format!("{v},{c},{}\n", fmt_real(e)));
    }
    atomic_write(path, out.as_bytes())
}

/// Re-read a histogram CSV; model and M are not stored in the file and
/// must be supplied. The mean (and thus the energy column) is recomputed
/// from the counts.
pub fn read_histogram_csv(path: &Path, model: Model, bits: usize) -> Result<EnsembleHistogram> {
    let body = fs::read_to_string(path)?;
    let mut lines = body.lines();
    match lines.next() {
        Some("value,count,energy") => {}
        other => {
            return Err(Error::Parse(format!(
                "bad histogram header: {other:?}"
            )))
        }
    }
    let mut counts = BTreeMap::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let v: u64 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad histogram row `{line}`")))?;
        let c: u64 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad histogram row `{line}`")))?;
        if counts.insert(v, c).is_some() {
            return Err(Error::Parse(format!("duplicate histogram value {v}")));
        }
    }
    EnsembleHistogram::from_counts(model, bits, counts)
}

/// Theory-curve CSV: `value,population`, deterministic ordering.
pub fn write_curve_csv(path: &Path, curve: &TheoryCurve) -> Result<()> {
    let mut out = String::from("value,population\n");
    for &(v, p) in &curve.points {
        debug_assert!(p.is_finite());
        out.push_str(&format!("{v},{}\n", fmt_real(p)));
    }
    atomic_write(path, out.as_bytes())
}

/// One row of a ground-state temperature sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRow {
    #[serde(rename = "M")]
    pub bits: u64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub n0_b: f64,
    pub n0_c_exact: f64,
    pub n0_c_closed: f64,
    pub condensed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0_c_empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0_b_empirical: Option<f64>,
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let sampled = rows.iter().any(|r| r.n0_c_empirical.is_some() || r.n0_b_empirical.is_some());
    let mut out = String::from("M,T,n0_b,n0_c_exact,n0_c_closed,condensed");
    if sampled {
        out.push_str(",n0_c_empirical,n0_b_empirical");
    }
    out.push('\n');
    for r in rows {
        for v in [r.temperature, r.n0_b, r.n0_c_exact, r.n0_c_closed] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(
                    "refusing to serialize non-finite sweep value".into(),
                ));
            }
        }
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.bits,
            fmt_real(r.temperature),
            fmt_real(r.n0_b),
            fmt_real(r.n0_c_exact),
            fmt_real(r.n0_c_closed),
            r.condensed
        ));
        if sampled {
            let f = |o: Option<f64>| o.map(fmt_real).unwrap_or_default();
            out.push_str(&format!(",{},{}", f(r.n0_c_empirical), f(r.n0_b_empirical)));
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

/// Serialized bitstring plus `<path>.meta` sidecar with `key=value` lines.
pub fn write_bitstring_file(path: &Path, b: &BitString, spec: &SourceSpec) -> Result<PathBuf> {
    atomic_write(path, &b.to_bytes())?;
    let meta = format!(
        "length_bits={}\np={}\nseed={}\ngenerator={}\n",
        spec.length_bits, spec.p, spec.seed, GENERATOR_VERSION
    );
    let meta_path = sidecar_path(path);
    atomic_write(&meta_path, meta.as_bytes())?;
    Ok(meta_path)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

pub fn read_bitstring_file(path: &Path) -> Result<(BitString, SourceSpec)> {
    let meta = fs::read_to_string(sidecar_path(path))?;
    let mut length_bits = None;
    let mut p = None;
    let mut seed = None;
    for line in meta.lines() {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        match key {
            "length_bits" => length_bits = value.parse::<usize>().ok(),
            "p" => p = value.parse::<f64>().ok(),
            "seed" => seed = value.parse::<u64>().ok(),
            "generator" => {
                if value != GENERATOR_VERSION {
                    return Err(Error::Parse(format!(
                        "unsupported generator `{value}`, expected {GENERATOR_VERSION}"
                    )));
                }
            }
            _ => {}
        }
    }
    let (length_bits, p, seed) = match (length_bits, p, seed) {
        (Some(l), Some(p), Some(s)) => (l, p, s),
        _ => return Err(Error::Parse("incomplete bitstring sidecar header".into())),
    };
    let spec = SourceSpec::new(length_bits, p, seed)?;
    let bytes = fs::read(path)?;
    Ok((BitString::from_bytes(&bytes, length_bits)?, spec))
}
