use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinpair_cli::figures::{recipe, FigureOptions};
use spinpair_cli::{run_evolve, run_sweep, run_validate, CliError, RunConfig, SweepConfig, SweepOutput};

#[derive(Parser)]
#[command(name = "spinpair", version, about = "Two exchange-coupled qubits in non-Markovian baths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and write its observables as CSV.
    Evolve {
        config: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run a parameter sweep, writing one CSV per value plus a gnuplot script.
    Sweep {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Cross-check the closed form against the master-equation integrator.
    Validate {
        config: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Also run the randomized physicality suite with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate one of the built-in figure sweeps.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        /// γ₀/K for figure 4.
        #[arg(long)]
        gamma0_over_k: Option<f64>,
    },
}

fn load_run(path: &Path, samples: Option<usize>, tolerance: Option<f64>) -> Result<RunConfig, CliError> {
    let mut overrides = Vec::new();
    if let Some(n) = samples {
        overrides.push(("horizon.samples", n.to_string()));
    }
    if let Some(tol) = tolerance {
        overrides.push(("validate.tolerance", format!("{tol:e}")));
    }
    RunConfig::load_with(path, &overrides)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish_sweep(output: SweepOutput, dir: &Path) -> Result<(), CliError> {
    for path in output.write_to(dir)? {
        eprintln!("wrote {}", path.display());
    }
    if output.failed_validation.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "oracle deviation above tolerance for {}",
            output.failed_validation.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve { config, out, samples } => {
            let config = load_run(&config, samples, None)?;
            let result = run_evolve(&config)?;
            emit(out.as_deref(), &result.csv)?;
            if !result.passed() {
                return Err(CliError::Validation(format!(
                    "max oracle deviation {:e} exceeds {:e}",
                    result.deviation.unwrap_or(f64::NAN),
                    result.tolerance
                )));
            }
            Ok(())
        }
        Command::Sweep { config, out, samples } => {
            let mut sweep = SweepConfig::load(&config)?;
            if let Some(n) = samples {
                sweep.set("horizon.samples", n.to_string())?;
            }
            finish_sweep(run_sweep(&sweep)?, &out)
        }
        Command::Validate {
            config,
            tolerance,
            seed,
            samples,
            out,
        } => {
            let config = load_run(&config, samples, tolerance)?;
            let report = run_validate(&config, seed)?;
            emit(out.as_deref(), &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Validation("see report".into()))
            }
        }
        Command::Figure {
            number,
            outdir,
            samples,
            gamma0_over_k,
        } => {
            let sweep = recipe(number, FigureOptions { samples, gamma0_over_k })?;
            finish_sweep(run_sweep(&sweep)?, &outdir)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are configuration errors; clap's own status would read as a validation failure
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
