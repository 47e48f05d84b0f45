use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bitgas_core::experiment::{
    cmd_ensemble, cmd_figure, cmd_source, cmd_sweep, cmd_theory, Control, ExperimentConfig,
    FigureConfig, OutputFormat, SweepSpec, TheoryConfig,
};
use bitgas_core::theory::Formula;
use bitgas_core::{Model, Result};

/// Binary-string ensemble simulator: cyclic-Hamming (C) and substring-
/// popcount (B) models, their theory curves and ground-state sweeps.
#[derive(Parser)]
#[command(name = "bitgas", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    C,
    B,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::C => Model::C,
            ModelArg::B => Model::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    AdjustedBinomial,
    Normal,
    Binomial,
}

impl From<FormulaArg> for Formula {
    fn from(f: FormulaArg) -> Formula {
        match f {
            FormulaArg::AdjustedBinomial => Formula::AdjustedBinomial,
            FormulaArg::Normal => Formula::Normal,
            FormulaArg::Binomial => Formula::Binomial,
        }
    }
}

/// Temperature/probability control point; exactly one must be given.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ControlArgs {
    /// Dimensionless temperature in (0, 0.25]
    #[arg(long)]
    temperature: Option<f64>,
    /// Set-bit probability of the source string
    #[arg(long)]
    prob: Option<f64>,
}

impl ControlArgs {
    fn control(&self) -> Control {
        match (self.temperature, self.prob) {
            (Some(t), None) => Control::Temperature(t),
            (None, Some(p)) => Control::Prob(p),
            _ => unreachable!("clap group enforces exactly one"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a source bitstring file with sidecar header
    Source {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Bits per ensemble string (M)
        #[arg(long)]
        bits: usize,
        /// Observations N; sizes the long source for the B-model
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        control: ControlArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Build an ensemble; write histogram and thermodynamic summary
    Ensemble {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        bits: usize,
        /// Observations N (default: M-1 for the C-model, 100000 for B)
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        control: ControlArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Average over this many consecutive seeds
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Include the deterministic C_0 = 0 shift in the C-model
        #[arg(long)]
        include_zero_shift: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write a gnuplot script for the histogram
        #[arg(long)]
        plot_script: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Tabulate a theory population curve
    Theory {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long)]
        bits: usize,
        /// Ensemble size N the curve is scaled to
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        control: ControlArgs,
        /// Lower end of the value range (default 0)
        #[arg(long)]
        min: Option<usize>,
        /// Upper end of the value range (default M)
        #[arg(long)]
        max: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Ground-state occupation vs temperature for a set of string lengths
    Sweep {
        /// String lengths M (comma-separated)
        #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384")]
        bits: Vec<usize>,
        #[arg(long, default_value_t = 1e-5)]
        t_min: f64,
        #[arg(long, default_value_t = 0.25)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        t_count: usize,
        /// Use a linear instead of logarithmic temperature grid
        #[arg(long)]
        linear: bool,
        /// Also run sampled ensembles at every grid cell
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        plot_script: bool,
    },
    /// Emit the CSV bundle (and plot script) for figure 1, 2 or 3
    Figure {
        /// 1: ground-state sweep; 2: C-model comparison; 3: B-model comparison
        which: u8,
        #[arg(long, default_value_t = 16384)]
        bits: usize,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sampled temperatures for figures 2 and 3 (comma-separated)
        #[arg(long, value_delimiter = ',', default_value = "6.3e-5,2.5e-4,1e-3")]
        temps: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Skip the gnuplot script
        #[arg(long)]
        no_plot_script: bool,
    },
}

fn default_count(model: Model, bits: usize) -> usize {
    match model {
        Model::C => bits.saturating_sub(1).max(1),
        Model::B => 100_000,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Source { model, bits, count, control, seed, out } => {
            let model = Model::from(model);
            let cfg = ExperimentConfig {
                model,
                bits,
                count: count.unwrap_or_else(|| default_count(model, bits)),
                control: control.control(),
                seed,
                seeds: 1,
                include_zero_shift: false,
                out_dir: out,
                emit_plot_script: false,
                format: OutputFormat::Csv,
            };
            let path = cmd_source(&cfg)?;
            println!("wrote {}", path.display());
        }
        Cmd::Ensemble {
            model, bits, count, control, seed, seeds,
            include_zero_shift, out, plot_script, format,
        } => {
            let model = Model::from(model);
            let cfg = ExperimentConfig {
                model,
                bits,
                count: count.unwrap_or_else(|| default_count(model, bits)),
                control: control.control(),
                seed,
                seeds,
                include_zero_shift,
                out_dir: out,
                emit_plot_script: plot_script,
                format: format.into(),
            };
            let arts = cmd_ensemble(&cfg)?;
            println!("wrote {}", arts.histogram_path.display());
            println!("wrote {}", arts.summary_path.display());
        }
        Cmd::Theory { model, formula, bits, count, control, min, max, out, format } => {
            let cfg = TheoryConfig {
                model: model.into(),
                formula: formula.into(),
                bits,
                control: control.control(),
                count,
                range: match (min, max) {
                    (None, None) => None,
                    (lo, hi) => Some((lo.unwrap_or(0), hi.unwrap_or(bits))),
                },
                out_dir: out,
                format: format.into(),
            };
            let path = cmd_theory(&cfg)?;
            println!("wrote {}", path.display());
        }
        Cmd::Sweep { bits, t_min, t_max, t_count, linear, sample, seed, out, plot_script } => {
            let spec = SweepSpec {
                bits,
                t_min,
                t_max,
                t_count,
                log_spaced: !linear,
                sample,
                seed,
                sample_count: None,
            };
            let path = cmd_sweep(&spec, &out, plot_script)?;
            println!("wrote {}", path.display());
        }
        Cmd::Figure { which, bits, count, seed, temps, out, no_plot_script } => {
            let cfg = FigureConfig {
                bits,
                count,
                seed,
                temperatures: temps,
                out_dir: out,
                emit_plot_script: !no_plot_script,
            };
            for path in cmd_figure(which, &cfg)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
