use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use experiment_cli::{commands, config, runner};

#[derive(Parser)]
#[command(
    name = "eigenlocus",
    version,
    about = "Train kernel eigenlocus classifiers and reproduce the bundled Gaussian experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment config (bundled name or JSON path)
    Run {
        /// Bundled config name or path to a config file
        #[arg(long, required_unless_present = "list")]
        config: Option<String>,
        /// Override the config's output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the config's seed list with a single seed
        #[arg(long)]
        seed: Option<u64>,
        /// List the bundled config names and exit
        #[arg(long)]
        list: bool,
    },
    /// Train a model on a labeled CSV (features..., label)
    Train {
        #[arg(long)]
        data: PathBuf,
        /// Kernel family: linear, poly2 or gaussian
        #[arg(long)]
        kernel: String,
        /// Gaussian-kernel width parameter
        #[arg(long)]
        gamma: Option<f64>,
        /// Regularization constant, a positive number or "inf"
        #[arg(long = "C", default_value = "50")]
        c: String,
        /// Model file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify CSV points with a saved model
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Predictions CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a saved model's equilibrium report as a table plus JSON
    Report {
        #[arg(long)]
        model: PathBuf,
        /// Labeled CSV to score alongside the report
        #[arg(long)]
        data: Option<PathBuf>,
        /// JSON file to write (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cmd: Cmd) -> experiment_cli::Result<u8> {
    match cmd {
        Cmd::Run {
            config,
            out,
            seed,
            list,
        } => {
            if list {
                for name in config::BUNDLED {
                    println!("{name}");
                }
                return Ok(0);
            }
            let mut cfg = config::load_config(config.as_deref().unwrap_or_default())?;
            if let Some(seed) = seed {
                cfg.seeds = vec![seed];
            }
            let summary = runner::run_experiment(&cfg, out.as_deref())?;
            for row in &summary.rows {
                println!(
                    "seed {}: error {:.4} bayes {:.4} extreme {:.4}{}",
                    row.seed,
                    row.error_rate,
                    row.bayes_rate,
                    row.extreme_fraction,
                    if row.converged { "" } else { "  [not converged]" }
                );
            }
            let iqr = summary.error.iqr();
            println!(
                "{}: median error {:.4} (IQR {}), median extreme fraction {:.4}, {}/{} converged",
                cfg.name,
                summary.error.median,
                if iqr.is_nan() { "n/a".into() } else { format!("{iqr:.4}") },
                summary.extreme.median,
                summary.converged_count,
                summary.rows.len()
            );
            println!("artifacts in {}", summary.out_dir.display());
            if summary.all_seeds_failed() {
                eprintln!("no seed converged; artifacts describe best iterates only");
                return Ok(3);
            }
            Ok(0)
        }
        Cmd::Train {
            data,
            kernel,
            gamma,
            c,
            out,
        } => {
            let spec = config::parse_kernel(&kernel, gamma)?;
            let c = config::parse_c(&c)?;
            commands::train_cmd(&data, spec, c, &out)?;
            Ok(0)
        }
        Cmd::Classify { model, data, out } => {
            commands::classify_cmd(&model, &data, out.as_deref())?;
            Ok(0)
        }
        Cmd::Report { model, data, out } => {
            commands::report_cmd(&model, data.as_deref(), out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (`eigenlocus report | head`)
    // instead of panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
