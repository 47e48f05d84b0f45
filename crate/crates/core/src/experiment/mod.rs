//! Experiment runner behind the CLI: source generation, ensemble runs,
//! theory tabulation, ground-state temperature sweeps and the three
//! standard comparison figures, all written as flat CSV/JSON files plus
//! optional gnuplot scripts.

pub mod output;
pub mod plot;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bitcore::{generate_source, BitString, SourceSpec};
use crate::ensemble::{
    build_b_ensemble, build_c_ensemble, ground_state_fraction, summarize, EnsembleHistogram,
    RunSummary,
};
use crate::theory::{
    self, ground_state_b, ground_state_c_closed, ground_state_c_exact, Formula, ModelParams,
    TheoryCurve,
};
use crate::{Error, Model, Result};
use output::{
    atomic_write, fmt_real, write_bitstring_file, write_curve_csv, write_histogram_csv,
    write_json, write_sweep_csv, SweepRow,
};

/// How the run's temperature point is specified: directly, or through the
/// source-bit probability that realizes it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Control {
    Temperature(f64),
    Prob(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Set-bit probability realizing the configured control point, on the
/// p <= 1/2 branch when converting from a temperature.
pub fn resolve_p(model: Model, control: Control, bits: usize) -> Result<f64> {
    match control {
        Control::Prob(p) => {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "p must be in [0, 1], got {p}"
                )));
            }
            Ok(p)
        }
        Control::Temperature(t) => match model {
            Model::C => Ok(ModelParams::c_from_temperature(bits, t)?.p),
            Model::B => theory::invert_temperature_b(t),
        },
    }
}

/// Configuration of a single source/ensemble run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub model: Model,
    pub bits: usize,
    /// Number of observations N (shifts for the C-model, substrings for
    /// the B-model).
    pub count: usize,
    pub control: Control,
    pub seed: u64,
    /// Runs are repeated for seeds `seed, seed + 1, ...`.
    pub seeds: u64,
    pub include_zero_shift: bool,
    pub out_dir: PathBuf,
    pub emit_plot_script: bool,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 || self.count == 0 || self.seeds == 0 {
            return Err(Error::InvalidParameter(
                "bits, count and seeds must be at least 1".into(),
            ));
        }
        if let Control::Temperature(t) = self.control {
            if !t.is_finite() || t <= 0.0 || t > 0.25 {
                return Err(Error::OutOfDomain(format!(
                    "temperature must be in (0, 0.25], got {t}"
                )));
            }
        }
        resolve_p(self.model, self.control, self.bits).map(|_| ())
    }

    fn source_bits(&self) -> usize {
        match self.model {
            Model::C => self.bits,
            Model::B => self.bits * self.count,
        }
    }
}

/// Generate the source string for one seed of the configured run.
pub fn make_source(cfg: &ExperimentConfig, seed: u64) -> Result<(BitString, SourceSpec)> {
    let p = resolve_p(cfg.model, cfg.control, cfg.bits)?;
    let spec = SourceSpec::new(cfg.source_bits(), p, seed)?;
    Ok((generate_source(&spec)?, spec))
}

/// Write the serialized source string and its sidecar header.
pub fn cmd_source(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let (b, spec) = make_source(cfg, cfg.seed)?;
    let path = cfg.out_dir.join("source.bits");
    write_bitstring_file(&path, &b, &spec)?;
    Ok(path)
}

/// Build one seed's ensemble and summary.
pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<(EnsembleHistogram, RunSummary)> {
    let (source, spec) = make_source(cfg, seed)?;
    let h = match cfg.model {
        Model::C => build_c_ensemble(&source, cfg.count, cfg.include_zero_shift)?,
        Model::B => build_b_ensemble(&source, cfg.count, cfg.bits)?,
    };
    let mut summary = summarize(&h)?;
    summary.seed = Some(seed);
    summary.p_nominal = Some(spec.p);
    Ok((h, summary))
}

/// Seed-averaged summary written for multi-seed runs; scalar fields are
/// means over the per-seed summaries.
#[derive(Clone, Debug, Serialize)]
pub struct AggregateSummary {
    pub model: Model,
    #[serde(rename = "M")]
    pub bits: u64,
    #[serde(rename = "N")]
    pub total: u64,
    pub temperature: f64,
    pub mean: f64,
    pub ground_state_count: f64,
    pub ground_state_fraction: f64,
    pub internal_energy: f64,
    pub condensed: bool,
    pub seed: u64,
    pub p_nominal: f64,
    pub seeds: u64,
    pub per_seed: Vec<RunSummary>,
}

fn aggregate(cfg: &ExperimentConfig, summaries: Vec<RunSummary>) -> AggregateSummary {
    let k = summaries.len() as f64;
    let mean_of = |f: &dyn Fn(&RunSummary) -> f64| summaries.iter().map(f).sum::<f64>() / k;
    let temperature = mean_of(&|s| s.temperature);
    AggregateSummary {
        model: cfg.model,
        bits: cfg.bits as u64,
        total: summaries[0].total,
        temperature,
        mean: mean_of(&|s| s.mean),
        ground_state_count: mean_of(&|s| s.ground_state_count as f64),
        ground_state_fraction: mean_of(&|s| s.ground_state_fraction),
        internal_energy: mean_of(&|s| s.internal_energy),
        condensed: match cfg.model {
            Model::C => temperature <= theory::critical_temperature(cfg.bits),
            Model::B => false,
        },
        seed: cfg.seed,
        p_nominal: summaries[0].p_nominal.unwrap_or(f64::NAN),
        seeds: summaries.len() as u64,
        per_seed: summaries,
    }
}

pub struct EnsembleArtifacts {
    pub histogram_path: PathBuf,
    pub summary_path: PathBuf,
    pub merged: EnsembleHistogram,
    pub summaries: Vec<RunSummary>,
}

/// Run the configured ensemble over all seeds; write the merged histogram
/// and the summary JSON (a single [`RunSummary`] for one seed, an
/// [`AggregateSummary`] otherwise).
pub fn cmd_ensemble(cfg: &ExperimentConfig) -> Result<EnsembleArtifacts> {
    cfg.validate()?;
    let mut merged: Option<EnsembleHistogram> = None;
    let mut summaries = Vec::new();
    for seed in cfg.seed..cfg.seed + cfg.seeds {
        let (h, summary) = run_seed(cfg, seed)?;
        summaries.push(summary);
        match &mut merged {
            Some(acc) => acc.merge(&h)?,
            None => merged = Some(h),
        }
    }
    let merged = merged.expect("seeds >= 1");

    let histogram_path = match cfg.format {
        OutputFormat::Csv => {
            let path = cfg.out_dir.join("histogram.csv");
            write_histogram_csv(&path, &merged)?;
            path
        }
        OutputFormat::Json => {
            let path = cfg.out_dir.join("histogram.json");
            #[derive(Serialize)]
            struct HistogramJson<'a> {
                model: Model,
                #[serde(rename = "M")]
                bits: u64,
                #[serde(rename = "N")]
                total: u64,
                mean: f64,
                counts: &'a std::collections::BTreeMap<u64, u64>,
            }
            write_json(
                &path,
                &HistogramJson {
                    model: merged.model,
                    bits: merged.bits as u64,
                    total: merged.total,
                    mean: merged.mean,
                    counts: merged.counts(),
                },
            )?;
            path
        }
    };

    let summary_path = cfg.out_dir.join("summary.json");
    if summaries.len() == 1 {
        write_json(&summary_path, &summaries[0])?;
    } else {
        write_json(&summary_path, &aggregate(cfg, summaries.clone()))?;
    }

    if cfg.emit_plot_script {
        let script = plot::histogram_script(
            "histogram.csv",
            &format!("{} M={} N={}", cfg.model, cfg.bits, cfg.count),
            "histogram.png",
        );
        atomic_write(&cfg.out_dir.join("histogram.gp"), script.as_bytes())?;
    }

    Ok(EnsembleArtifacts { histogram_path, summary_path, merged, summaries })
}

/// Configuration of a theory-curve tabulation.
#[derive(Clone, Debug)]
pub struct TheoryConfig {
    pub model: Model,
    pub formula: Formula,
    pub bits: usize,
    pub control: Control,
    /// Ensemble size N the populations are scaled to.
    pub count: u64,
    /// Value range, defaults to [0, M].
    pub range: Option<(usize, usize)>,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

pub fn theory_params(model: Model, bits: usize, control: Control) -> Result<ModelParams> {
    match (model, control) {
        (Model::C, Control::Prob(p)) => ModelParams::c_from_p(bits, p),
        (Model::C, Control::Temperature(t)) => ModelParams::c_from_temperature(bits, t),
        (Model::B, Control::Prob(p)) => ModelParams::b_from_p(bits, p),
        (Model::B, Control::Temperature(t)) => ModelParams::b_from_temperature(bits, t),
    }
}

/// Tabulate and write one theory curve; returns the written path.
pub fn cmd_theory(cfg: &TheoryConfig) -> Result<PathBuf> {
    let params = theory_params(cfg.model, cfg.bits, cfg.control)?;
    let (lo, hi) = cfg.range.unwrap_or((0, cfg.bits));
    let curve = theory::theory_curve(cfg.formula, &params, cfg.count, lo, hi)?;
    match cfg.format {
        OutputFormat::Csv => {
            let path = cfg.out_dir.join("curve.csv");
            write_curve_csv(&path, &curve)?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = cfg.out_dir.join("curve.json");
            write_json(&path, &curve)?;
            Ok(path)
        }
    }
}

/// Grid specification for a ground-state temperature sweep.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub bits: Vec<usize>,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub log_spaced: bool,
    /// Also run sampled ensembles at every grid cell.
    pub sample: bool,
    pub seed: u64,
    /// Substring count for sampled B-model cells (default 10_000).
    pub sample_count: Option<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.bits.is_empty() || self.t_count == 0 {
            return Err(Error::InvalidParameter(
                "sweep needs at least one M and one temperature".into(),
            ));
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_max && self.t_max <= 0.25) {
            return Err(Error::OutOfDomain(format!(
                "temperature grid [{}, {}] must lie in (0, 0.25]",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    pub fn temperature_grid(&self) -> Vec<f64> {
        if self.t_count == 1 {
            return vec![self.t_min];
        }
        (0..self.t_count)
            .map(|i| {
                let f = i as f64 / (self.t_count - 1) as f64;
                if self.log_spaced {
                    self.t_min * (self.t_max / self.t_min).powf(f)
                } else {
                    self.t_min + (self.t_max - self.t_min) * f
                }
            })
            .collect()
    }
}

/// Evaluate the analytic (and optionally sampled) ground-state occupations
/// on the grid. Rows come out sorted by M ascending, then T ascending.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut bits = spec.bits.clone();
    bits.sort_unstable();
    bits.dedup();
    let grid = spec.temperature_grid();
    let mut rows = Vec::with_capacity(bits.len() * grid.len());
    for &m in &bits {
        let tc = theory::critical_temperature(m);
        for &t in &grid {
            let mut row = SweepRow {
                bits: m as u64,
                temperature: t,
                n0_b: ground_state_b(t, m)?,
                n0_c_exact: ground_state_c_exact(t, m)?.fraction,
                n0_c_closed: ground_state_c_closed(t, m)?.fraction,
                condensed: t <= tc,
                n0_c_empirical: None,
                n0_b_empirical: None,
            };
            if spec.sample {
                let p_c = ModelParams::c_from_temperature(m, t)?.p;
                let src = generate_source(&SourceSpec::new(m, p_c, spec.seed)?)?;
                let h = build_c_ensemble(&src, m - 1, false)?;
                row.n0_c_empirical = Some(ground_state_fraction(&h).1);

                let n_b = spec.sample_count.unwrap_or(10_000);
                let p_b = theory::invert_temperature_b(t)?;
                let long = generate_source(&SourceSpec::new(m * n_b, p_b, spec.seed)?)?;
                let hb = build_b_ensemble(&long, n_b, m)?;
                row.n0_b_empirical = Some(ground_state_fraction(&hb).1);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Run the sweep and write `sweep.csv` (+ `sweep.gp` when requested).
pub fn cmd_sweep(spec: &SweepSpec, out_dir: &Path, emit_plot_script: bool) -> Result<PathBuf> {
    let rows = sweep_rows(spec)?;
    let path = out_dir.join("sweep.csv");
    write_sweep_csv(&path, &rows)?;
    if emit_plot_script {
        let mut bits = spec.bits.clone();
        bits.sort_unstable();
        bits.dedup();
        let script = plot::sweep_script("sweep.csv", &bits, "sweep.png");
        atomic_write(&out_dir.join("sweep.gp"), script.as_bytes())?;
    }
    Ok(path)
}

/// Configuration shared by the three reproduction figures.
#[derive(Clone, Debug)]
pub struct FigureConfig {
    pub bits: usize,
    /// Observations per ensemble; defaults to M - 1 for the C-model
    /// figure and 100_000 for the B-model figure.
    pub count: Option<usize>,
    pub seed: u64,
    /// The three sampled temperatures of figures 2 and 3.
    pub temperatures: Vec<f64>,
    pub out_dir: PathBuf,
    pub emit_plot_script: bool,
}

impl FigureConfig {
    pub fn defaults(out_dir: PathBuf) -> Self {
        FigureConfig {
            bits: 16384,
            count: None,
            seed: 1,
            temperatures: vec![6.3e-5, 2.5e-4, 1e-3],
            out_dir,
            emit_plot_script: true,
        }
    }
}

fn write_deviation_hist_csv(path: &Path, h: &EnsembleHistogram) -> Result<()> {
    let mut out = String::from("value,deviation,count\n");
    for (&v, &c) in h.counts() {
        out.push_str(&format!("{v},{},{c}\n", fmt_real(v as f64 - h.mean)));
    }
    atomic_write(path, out.as_bytes())
}

fn write_deviation_curve_csv(path: &Path, curve: &TheoryCurve, mean: f64) -> Result<()> {
    let mut out = String::from("value,deviation,population\n");
    for &(v, p) in &curve.points {
        out.push_str(&format!("{v},{},{}\n", fmt_real(v as f64 - mean), fmt_real(p)));
    }
    atomic_write(path, out.as_bytes())
}

/// Value window covering the populated part of a distribution with mean
/// `mean` and variance `M T`.
fn curve_range(mean: f64, m: usize, t: f64) -> (usize, usize) {
    let half = 8.0 * (m as f64 * t).sqrt() + 4.0;
    let lo = (mean - half).floor().max(0.0) as usize;
    let hi = ((mean + half).ceil() as usize).min(m);
    (lo, hi)
}

/// Produce the CSV bundle (and plot script) for one of the paper-style
/// figures: 1 is the ground-state temperature sweep, 2 the C-model
/// histogram-vs-theory comparison at three temperatures, 3 the same for
/// the B-model.
pub fn cmd_figure(which: u8, cfg: &FigureConfig) -> Result<Vec<PathBuf>> {
    match which {
        1 => figure_sweep(cfg),
        2 => figure_comparison(Model::C, 2, cfg),
        3 => figure_comparison(Model::B, 3, cfg),
        other => Err(Error::InvalidParameter(format!(
            "figure must be 1, 2 or 3, got {other}"
        ))),
    }
}

fn figure_sweep(cfg: &FigureConfig) -> Result<Vec<PathBuf>> {
    let bits = vec![1024, 4096, 16384];
    let spec = SweepSpec {
        bits: bits.clone(),
        t_min: 1e-5,
        t_max: 0.25,
        t_count: 100,
        log_spaced: true,
        sample: false,
        seed: cfg.seed,
        sample_count: None,
    };
    let rows = sweep_rows(&spec)?;
    let csv = cfg.out_dir.join("fig1_sweep.csv");
    write_sweep_csv(&csv, &rows)?;
    let mut written = vec![csv];
    if cfg.emit_plot_script {
        let script = plot::sweep_script("fig1_sweep.csv", &bits, "figure1.png");
        let gp = cfg.out_dir.join("fig1.gp");
        atomic_write(&gp, script.as_bytes())?;
        written.push(gp);
    }
    Ok(written)
}

fn figure_comparison(model: Model, which: u8, cfg: &FigureConfig) -> Result<Vec<PathBuf>> {
    if cfg.temperatures.is_empty() {
        return Err(Error::InvalidParameter("figure needs at least one temperature".into()));
    }
    let m = cfg.bits;
    let count = cfg.count.unwrap_or(match model {
        Model::C => m - 1,
        Model::B => 100_000,
    });
    let mut written = Vec::new();
    let mut pairs = Vec::new();
    for (i, &t) in cfg.temperatures.iter().enumerate() {
        let run = ExperimentConfig {
            model,
            bits: m,
            count,
            control: Control::Temperature(t),
            seed: cfg.seed,
            seeds: 1,
            include_zero_shift: false,
            out_dir: cfg.out_dir.clone(),
            emit_plot_script: false,
            format: OutputFormat::Csv,
        };
        let (h, mut summary) = run_seed(&run, cfg.seed)?;
        summary.seed = Some(cfg.seed);

        let hist_name = format!("fig{which}_t{i}_hist.csv");
        let theory_name = format!("fig{which}_t{i}_theory.csv");
        let hist_path = cfg.out_dir.join(&hist_name);
        write_deviation_hist_csv(&hist_path, &h)?;

        let params = theory_params(model, m, Control::Temperature(t))?;
        let formula = match model {
            Model::C => Formula::AdjustedBinomial,
            Model::B => Formula::Binomial,
        };
        let (lo, hi) = curve_range(params.mean, m, t);
        let curve = theory::theory_curve(formula, &params, count as u64, lo, hi)?;
        let theory_path = cfg.out_dir.join(&theory_name);
        write_deviation_curve_csv(&theory_path, &curve, params.mean)?;

        let summary_path = cfg.out_dir.join(format!("fig{which}_t{i}_summary.json"));
        write_json(&summary_path, &summary)?;

        pairs.push((hist_name, theory_name, format!("T={t:.3e}")));
        written.extend([hist_path, theory_path, summary_path]);
    }
    if cfg.emit_plot_script {
        let script =
            plot::comparison_script(&format!("figure{which}.png"), &pairs);
        let gp = cfg.out_dir.join(format!("fig{which}.gp"));
        atomic_write(&gp, script.as_bytes())?;
        written.push(gp);
    }
    Ok(written)
}
