use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use sta_cli::{parse_config, render_table, run_checks, RunOptions, ScenarioConfig, VerifyOptions};
use sta_core::observables::clamp_rounding;

#[derive(Parser)]
#[command(
    name = "sta",
    version,
    about = "Counterdiabatic driving of coupled oscillators"
)]
struct Cli {
    /// Directory for relative output paths
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Record every N-th integration step (overrides the config)
    #[arg(long, global = true)]
    stride: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write residual-energy CSVs
    Simulate { config: PathBuf },
    /// Write driving-coefficient traces for a scenario
    Coefficients { config: PathBuf },
    /// Cross-check the engine against the Fock-space oracle
    Verify {
        #[arg(long, default_value_t = sta_oracle::DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(long, hide = true)]
        perturb_cd_sign: bool,
    },
}

fn load(path: &PathBuf) -> Result<ScenarioConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    let opts = RunOptions {
        output_dir: cli.output_dir,
        stride: cli.stride,
    };
    if opts.stride == Some(0) {
        anyhow::bail!("--stride must be positive");
    }
    match cli.command {
        Command::Simulate { config } => {
            let cfg = load(&config)?;
            let report = sta_cli::simulate(&cfg, &opts)?;
            if let Some(results) = &report.results {
                for r in &results.runs {
                    let peak = r
                        .energies
                        .iter()
                        .map(|e| clamp_rounding(e.e_r))
                        .fold(0.0, f64::max);
                    let last = r
                        .energies
                        .last()
                        .map(|e| clamp_rounding(e.e_r))
                        .unwrap_or(0.0);
                    println!(
                        "{:<10} max E_r {peak:.6e}  final E_r {last:.6e}  drift {:.2e}",
                        r.mode.as_str(),
                        r.trajectory.max_drift
                    );
                }
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Coefficients { config } => {
            let cfg = load(&config)?;
            for f in sta_cli::coefficients(&cfg, &opts)? {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Verify {
            n_max,
            perturb_cd_sign,
        } => {
            if n_max < 20 {
                anyhow::bail!("--n-max must be at least 20, got {n_max}");
            }
            let results = run_checks(&VerifyOptions {
                n_max,
                perturb_cd_sign,
            });
            print!("{}", render_table(&results));
            Ok(results.iter().all(|r| r.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
