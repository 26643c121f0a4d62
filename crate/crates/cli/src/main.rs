//! `ndoppe` command-line front end.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ndoppe_core::compound::{DiscreteLindley, DxGammaI, DxGammaII};
use ndoppe_core::fitting::NbShape;
use ndoppe_core::fixtures::fixture;
use ndoppe_core::report::{fit_models, render_fits, render_report, sig7, OutputFormat};
use ndoppe_core::simulate::{sample_aggregate, sample_counts, SampleSummary, SimConfig};
use ndoppe_core::{
    build_report, ingest, CoefficientVector, CompoundModel, Execution, ModelKind, NdoppeDist, NegBinDist, PoissonDist,
    Primary,
};
use serde_json::json;

const OUTPUT_DIR_ENV: &str = "NDOPPE_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "ndoppe", version, about = "Fit, evaluate and simulate NDOPPE count models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit count models to a dataset.
    Fit(FitArgs),
    /// Refit all embedded tables and compare against the published columns.
    Report(ReportArgs),
    /// Evaluate an aggregate-claims model.
    Compound {
        #[arg(value_enum)]
        quantity: Quantity,
        #[command(flatten)]
        args: CompoundArgs,
    },
    /// Draw a seeded sample and print its summary as JSON.
    Simulate {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        args: SimulateArgs,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// text, csv or json.
    #[arg(long, default_value = "text")]
    format: OutputFormat,
    /// Write to this file instead of stdout. Relative paths resolve against
    /// $NDOPPE_OUTPUT_DIR when it is set.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = OUTPUT_DIR_ENV, hide_env_values = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Embedded table id, e.g. table1.
    #[arg(long, group = "source")]
    fixture: Option<String>,
    /// CSV file with header `count,frequency`.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_delimiter = ',', default_value = "poisson,negbin,ndoppe")]
    models: Vec<ModelKind>,
    /// NDOPPE coefficients a0,a1,...; defaults to the fixture's configuration, else 1,1.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<CoefficientVector>,
    /// Negative binomial size: a positive number, or `free` to estimate it.
    #[arg(long, default_value = "2")]
    nb_shape: NbShape,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, default_value = "2")]
    nb_shape: NbShape,
    /// Fit the tables one after another instead of on the thread pool.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Quantity {
    Pdf,
    Cdf,
    Mean,
    Var,
    Premium,
    Mgf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Count,
    Aggregate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Ndoppe,
    Poisson,
    Negbin,
    Dlindley,
    Dxgamma1,
    Dxgamma2,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Family,
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<CoefficientVector>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Poisson rate.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Negative binomial size.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Negative binomial or dxgamma probability.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Discrete Lindley parameter.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

#[derive(Debug, Args)]
struct CompoundArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Exponential claim rate.
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    /// Evaluation point for pdf and cdf.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Stop-loss retention.
    #[arg(long, allow_hyphen_values = true)]
    retention: Option<f64>,
    /// Argument of the mgf.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Claim rate, required for aggregate samples.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of replicates.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = OUTPUT_DIR_ENV, hide_env_values = true)]
    output_dir: Option<PathBuf>,
}

fn required<T>(value: Option<T>, flag: &str, family: Family) -> Result<T> {
    value.with_context(|| format!("--{flag} is required for --model {family:?}").to_lowercase())
}

impl ModelArgs {
    fn primary(&self) -> Result<Primary> {
        let family = self.model;
        Ok(match family {
            Family::Ndoppe => Primary::Ndoppe(NdoppeDist::new(
                required(self.coeffs.clone(), "coeffs", family)?,
                required(self.theta, "theta", family)?,
            )?),
            Family::Poisson => Primary::Poisson(PoissonDist::new(required(self.alpha, "alpha", family)?)?),
            Family::Negbin => Primary::NegBin(NegBinDist::new(
                required(self.r, "r", family)?,
                required(self.p, "p", family)?,
            )?),
            Family::Dlindley => {
                Primary::DiscreteLindley(DiscreteLindley::new(required(self.lambda, "lambda", family)?)?)
            }
            Family::Dxgamma1 => Primary::DxGammaI(DxGammaI::new(required(self.p, "p", family)?)?),
            Family::Dxgamma2 => Primary::DxGammaII(DxGammaII::new(required(self.p, "p", family)?)?),
        })
    }
}

fn emit(text: &str, output: Option<&PathBuf>, dir: Option<&PathBuf>) -> Result<()> {
    match output {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
        Some(path) => {
            let path = match dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn run_fit(args: FitArgs) -> Result<()> {
    let (data, default_coeffs) = match (&args.source.fixture, &args.source.input) {
        (Some(id), _) => {
            let f = fixture(id)?;
            (f.dataset(), f.coefficients())
        }
        (None, Some(path)) => (ingest(path)?, CoefficientVector::new(vec![1.0, 1.0])?),
        (None, None) => bail!("one of --fixture or --input is required"),
    };
    let coeffs = args.coeffs.unwrap_or(default_coeffs);
    let fits = fit_models(&data, &args.models, &coeffs, args.nb_shape)?;
    let text = render_fits(&fits, args.output.format)?;
    emit(&text, args.output.output.as_ref(), args.output.output_dir.as_ref())
}

fn run_report(args: ReportArgs) -> Result<()> {
    let report = build_report(args.nb_shape, execution(args.sequential))?;
    let text = render_report(&report, args.output.format)?;
    emit(&text, args.output.output.as_ref(), args.output.output_dir.as_ref())
}

fn run_compound(quantity: Quantity, args: CompoundArgs) -> Result<()> {
    let model = CompoundModel::new(args.model.primary()?, args.gamma)?;
    let (argument, value) = match quantity {
        Quantity::Pdf => {
            let x = args.x.context("--x is required for pdf")?;
            (Some(("x", x)), model.pdf(x)?)
        }
        Quantity::Cdf => {
            let x = args.x.context("--x is required for cdf")?;
            (Some(("x", x)), model.cdf(x)?)
        }
        Quantity::Mean => (None, model.mean()?),
        Quantity::Var => (None, model.variance()?),
        Quantity::Premium => {
            let d = args.retention.context("--retention is required for premium")?;
            (Some(("retention", d)), model.stop_loss_premium(d)?)
        }
        Quantity::Mgf => {
            let t = args.t.context("--t is required for mgf")?;
            (Some(("t", t)), model.mgf(t)?)
        }
    };
    let text = if args.json {
        let mut doc = json!({
            "model": model.to_string(),
            "quantity": format!("{quantity:?}").to_lowercase(),
            "value": value,
        });
        if let Some((name, v)) = argument {
            doc[name] = json!(v);
        }
        format!("{}\n", serde_json::to_string_pretty(&doc)?)
    } else {
        format!("{}\n", sig7(value))
    };
    emit(&text, None, None)
}

fn run_simulate(target: Target, args: SimulateArgs) -> Result<()> {
    let cfg = SimConfig::new(args.seed, args.n)?.with_execution(execution(args.sequential));
    let primary = args.model.primary()?;
    let doc = match target {
        Target::Count => {
            let draws: Vec<f64> = sample_counts(&primary, &cfg)?.into_iter().map(|n| n as f64).collect();
            json!({ "target": "count", "model": primary.name(), "summary": SampleSummary::new(&draws, &cfg) })
        }
        Target::Aggregate => {
            let gamma = args.gamma.context("--gamma is required for aggregate samples")?;
            let model = CompoundModel::new(primary, gamma)?;
            let draws = sample_aggregate(&model, &cfg)?;
            json!({ "target": "aggregate", "model": model.to_string(), "summary": SampleSummary::new(&draws, &cfg) })
        }
    };
    let text = format!("{}\n", serde_json::to_string_pretty(&doc)?);
    emit(&text, args.output.as_ref(), args.output_dir.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Report(args) => run_report(args),
        Command::Compound { quantity, args } => run_compound(quantity, args),
        Command::Simulate { target, args } => run_simulate(target, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
