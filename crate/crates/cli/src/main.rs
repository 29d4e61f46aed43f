use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use equidist::oracle::{self, parse_coeffs, points_csv};
use equidist::{run, CliError, ExperimentConfig, RunOptions, EXIT_PARTIAL};

#[derive(Parser)]
#[command(name = "equidist", version, about = "Root distributions of derivatives of polynomial families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve, measure and render every k of an experiment config.
    Run {
        config: PathBuf,
        /// Accept degrees above 4096 using subsampled Newton solves.
        #[arg(long)]
        allow_large: bool,
    },
    /// Print oracle point sets as CSV.
    Oracle {
        #[command(subcommand)]
        oracle: Oracle,
    },
    /// Render a roots CSV over the Green's function of the config's family.
    Render {
        csv: PathBuf,
        config: PathBuf,
        /// Output path; defaults to the CSV path with an .svg extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// Closed-form roots of (P^k)^(m) - a for P = z^2 - 2.
    Chebyshev {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// Companion-matrix eigenvalues; coefficients lowest degree first, `re` or `re:im`.
    #[command(allow_negative_numbers = true)]
    Companion {
        #[arg(required = true)]
        coeffs: Vec<String>,
    },
    /// Balanced-measure samples by random inverse branches.
    #[command(allow_negative_numbers = true)]
    Brolin {
        #[arg(required = true)]
        coeffs: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(value) = std::env::var("EQUIDIST_THREADS") {
        let threads: usize = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("EQUIDIST_THREADS={value:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, allow_large } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run(&cfg, RunOptions { allow_large })?;
            for r in &report.runs {
                eprintln!(
                    "k={} degree={} roots={} converged={} partial={} -> {}",
                    r.k, r.degree, r.solver.roots_found, r.solver.converged_count, r.partial, r.csv_path
                );
            }
            let full_mode_partial = report.runs.iter().any(|r| r.partial && r.solver.mode == "full");
            Ok(if full_mode_partial { EXIT_PARTIAL } else { 0 })
        }
        Command::Oracle { oracle } => {
            let points = match oracle {
                Oracle::Chebyshev { k, m, a } => oracle::chebyshev(k, m, a)?,
                Oracle::Companion { coeffs } => oracle::companion(&parse_coeffs(&coeffs)?)?,
                Oracle::Brolin { coeffs, n, depth, seed } => oracle::brolin(&parse_coeffs(&coeffs)?, n, depth, seed)?,
            };
            print!("{}", points_csv(&points));
            Ok(0)
        }
        Command::Render { csv, config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = out.unwrap_or_else(|| csv.with_extension("svg"));
            let written = equidist::run::render_csv(&csv, &cfg, &out)?;
            eprintln!("wrote {}", written.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("equidist: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
