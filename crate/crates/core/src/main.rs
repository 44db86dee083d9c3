use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordistack::data::BinningSpec;
use ordistack::harness::{self, BinningRef, FitOptions, Method};
use ordistack::{ClassId, Error, FittingMode, LearnerKind, Result};

/// Ordinal classification from pooled binary classifiers.
#[derive(Parser, Debug)]
#[command(name = "ordistack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a model on a labelled CSV and save it as JSON.
    Fit(FitArgs),
    /// Write predicted classes and class probabilities for a CSV.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a saved model on a labelled CSV.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Report JSON path (the text table always goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the method grid of one run config, or two plus their deltas.
    Compare {
        #[arg(long = "config", required = true, num_args = 1)]
        configs: Vec<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Output directory, overriding the config's `out_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label_col: String,
    /// difference, tree, votes or ovr
    #[arg(long, default_value = "difference")]
    method: Method,
    /// logistic or gnb
    #[arg(long, default_value = "logistic")]
    learner: LearnerKind,
    /// even_split, best_classifier, first, last or middle
    #[arg(long, default_value = "even_split")]
    strategy: String,
    /// full or conditional_subset
    #[arg(long, default_value = "full")]
    mode: FittingMode,
    #[arg(long, env = "ORDISTACK_SEED", default_value_t = 0)]
    seed: u64,
    /// Folds for best_classifier.
    #[arg(long, default_value_t = 4)]
    folds: usize,
    /// Binning preset name or JSON file.
    #[arg(long)]
    binning: Option<String>,
    /// Comma-separated class order, lowest first.
    #[arg(long, value_delimiter = ',')]
    class_order: Option<Vec<String>>,
    /// Comma-separated columns to skip.
    #[arg(long, value_delimiter = ',')]
    ignore_cols: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => {
            let binning: Option<BinningSpec> = a
                .binning
                .map(|b| BinningRef::Named(b).resolve(Path::new(".")))
                .transpose()?;
            let opts = FitOptions {
                data: a.data,
                label_col: a.label_col,
                method: a.method,
                learner: a.learner,
                strategy: a.strategy,
                mode: a.mode,
                seed: a.seed,
                folds: a.folds,
                binning,
                class_order: a.class_order.map(|v| v.into_iter().map(ClassId::new).collect()),
                ignore_columns: a.ignore_cols,
            };
            print!("{}", harness::cmd_fit(&opts, &a.out)?);
            println!("model written to {}", a.out.display());
        }
        Command::Predict { model, data, out } => {
            let n = harness::cmd_predict(&model, &data, open_out(out.as_deref())?)?;
            log::info!("{n} rows predicted");
        }
        Command::Evaluate { model, data, out } => {
            let report = harness::cmd_evaluate(&model, &data)?;
            if let Some(p) = out {
                std::fs::write(&p, report.to_json()?)?;
            }
            print!("{}", report.to_text());
        }
        Command::Compare { configs, jobs, out } => {
            let cmp = harness::cmd_compare(&configs, jobs, out.as_deref())?;
            print!("{}", cmp.to_text());
            for p in &cmp.written {
                log::info!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream pager or `head` closed the pipe
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
