use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use tapering::optimizer::{limiting_profile, optimize};
use tapering::report::{self, check_command, render_profiles, run_table};
use tapering::scenario::{parse_scenario, Scenario};
use tapering::{Error, FingeringModel};

const EXIT_FAILURE: u8 = 1;
const EXIT_SCENARIO: u8 = 2;
const EXIT_UNCONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tapering",
    version,
    about = "Optimize graded-viscosity polymer slug banks"
)]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output directory; defaults to the scenario's output_dir, then ".".
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the optimizer's random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal n-slug partitions for every model and slug count.
    Optimize,
    /// Limiting profile exponent, volume and gain per model.
    Limit,
    /// Gain table with the limit column.
    Table,
    /// Structural conditions on the flux factor and viscosity.
    Check,
    /// Step profiles and the limiting curve as SVG and CSV.
    Plot {
        /// Model to plot (defaults to the first model of the scenario).
        #[arg(long)]
        model: Option<FingeringModel>,
    },
}

enum Failure {
    Scenario(Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn load(cli: &Cli) -> Result<(Scenario, PathBuf), Failure> {
    let path = cli.scenario.as_ref().ok_or_else(|| {
        Failure::Scenario(Error::Validation("--scenario <path> is required".into()))
    })?;
    let mut scenario = parse_scenario(path).map_err(Failure::Scenario)?;
    if let Some(seed) = cli.seed {
        scenario.optimizer.rng_seed = seed;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out).map_err(|e| Failure::Run(e.into()))?;
    Ok((scenario, out))
}

/// Returns whether every optimization converged.
fn run(cli: &Cli) -> Result<bool, Failure> {
    let (scenario, out) = load(cli)?;
    let viscosity = scenario.viscosity_model().map_err(Failure::Scenario)?;
    match &cli.command {
        Command::Optimize => {
            let jobs: Vec<(&FingeringModel, usize)> = scenario
                .models
                .iter()
                .flat_map(|m| scenario.slug_counts.iter().map(move |&n| (m, n)))
                .collect();
            let results = jobs
                .par_iter()
                .map(|&(m, n)| optimize(m, &viscosity, n, &scenario.optimizer))
                .collect::<Result<Vec<_>, _>>()?;
            let mut all_converged = true;
            for (&(model, _), r) in jobs.iter().zip(&results) {
                let path = report::write_result(&out, model, r)?;
                all_converged &= r.converged;
                println!(
                    "{model} n={} V={:.8} gain={:.2}%{} -> {}",
                    r.slug_count(),
                    r.volume,
                    100.0 * r.gain,
                    if r.converged { "" } else { " (not converged)" },
                    path.display()
                );
            }
            Ok(all_converged)
        }
        Command::Limit => {
            let mut csv = String::from("model,beta,volume,gain\n");
            for model in &scenario.models {
                let limit = limiting_profile(model, &viscosity)?;
                println!(
                    "{model}: beta={:.6} V={:.8} gain={:.2}%",
                    limit.beta,
                    limit.volume,
                    100.0 * limit.gain
                );
                let _ = writeln!(
                    csv,
                    "{model},{},{},{}",
                    limit.beta, limit.volume, limit.gain
                );
            }
            fs::write(out.join("limits.csv"), csv).map_err(Error::from)?;
            Ok(true)
        }
        Command::Table => {
            let table = run_table(&scenario)?;
            table.write(&out)?;
            print!("{}", table.render());
            Ok(!table.any_unconverged())
        }
        Command::Check => {
            print!("{}", check_command(&scenario)?.render());
            Ok(true)
        }
        Command::Plot { model } => {
            let model = model.clone().unwrap_or_else(|| scenario.models[0].clone());
            let results = scenario
                .slug_counts
                .par_iter()
                .map(|&n| optimize(&model, &viscosity, n, &scenario.optimizer))
                .collect::<Result<Vec<_>, _>>()?;
            let limit = limiting_profile(&model, &viscosity)?;
            let svg = out.join("profiles.svg");
            render_profiles(&results, Some(&limit), &svg)?;
            println!(
                "{model}: wrote {} and {}",
                svg.display(),
                report::companion_csv_path(&svg).display()
            );
            Ok(results.iter().all(|r| r.converged))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: some optimizations did not converge; outputs were still written");
            ExitCode::from(EXIT_UNCONVERGED)
        }
        Err(Failure::Scenario(e)) => {
            eprintln!("error: invalid scenario: {e}");
            ExitCode::from(EXIT_SCENARIO)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
