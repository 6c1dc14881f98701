//! Scenario runner: executes one experiment, writes `report.json` (and
//! `samples.csv` for sampling experiments) into the output directory.
//!
//! Exit codes: 0 all checks pass, 1 a check failed or a numeric evaluation
//! broke down, 2 usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cliffem::scenario::{
    rows_to_csv, run_constitutive, run_fields, run_flip, run_retarded, run_trajectory,
    run_verify, Report, SampleRow, Scenario,
};
use cliffem::Error;

#[derive(Parser)]
#[command(name = "cliffem", about = "Spacetime-algebra electromagnetism scenario runner")]
struct Cli {
    #[command(subcommand)]
    experiment: Experiment,
    /// JSON scenario configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized identity suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for report.json and samples.csv.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Experiment {
    /// Algebraic identity suites and Maxwell formulation cross-checks.
    Verify,
    /// Sample a field preset on a grid and export it as CSV.
    Fields,
    /// Integrate a charged-particle worldline and export it as CSV.
    Trajectory,
    /// Orientation-flip experiment: invariant trajectory, convention-bound charge.
    Flip,
    /// Principal/skewon/axion decomposition of a constitutive tensor.
    Constitutive,
    /// Retarded-potential solve of a Gaussian blob source.
    Retarded,
}

fn load_scenario(cli: &Cli) -> Result<Scenario, Error> {
    match &cli.config {
        Some(path) => Scenario::from_file(path),
        None => Ok(Scenario::default()),
    }
}

fn run(cli: &Cli, scenario: &Scenario) -> Result<(Report, Option<Vec<SampleRow>>), Error> {
    Ok(match cli.experiment {
        Experiment::Verify => (run_verify(scenario, cli.seed)?, None),
        Experiment::Fields => {
            let (report, rows) = run_fields(scenario, cli.seed)?;
            (report, Some(rows))
        }
        Experiment::Trajectory => {
            let (report, rows) = run_trajectory(scenario, cli.seed)?;
            (report, Some(rows))
        }
        Experiment::Flip => (run_flip(scenario, cli.seed)?, None),
        Experiment::Constitutive => (run_constitutive(scenario, cli.seed)?, None),
        Experiment::Retarded => {
            let (report, rows) = run_retarded(scenario, cli.seed)?;
            (report, Some(rows))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match load_scenario(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cliffem: {e}");
            return ExitCode::from(2);
        }
    };
    let (report, samples) = match run(&cli, &scenario) {
        Ok(out) => out,
        Err(e @ Error::Argument(_)) => {
            eprintln!("cliffem: {e}");
            return ExitCode::from(2);
        }
        Err(e @ Error::Numeric(_)) => {
            eprintln!("cliffem: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        eprintln!("cliffem: output directory {}: {e}", cli.out.display());
        return ExitCode::from(2);
    }
    let report_path = cli.out.join("report.json");
    if let Err(e) = std::fs::write(&report_path, report.to_json()) {
        eprintln!("cliffem: {}: {e}", report_path.display());
        return ExitCode::from(2);
    }
    if let Some(rows) = samples {
        let csv_path = cli.out.join("samples.csv");
        if let Err(e) = std::fs::write(&csv_path, rows_to_csv(&rows)) {
            eprintln!("cliffem: {}: {e}", csv_path.display());
            return ExitCode::from(2);
        }
    }
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        println!(
            "{status}  {}  value={:e}  tolerance={:e}",
            check.name, check.value, check.tolerance
        );
    }
    if report.pass {
        println!("cliffem {}: all {} checks passed", report.experiment, report.checks.len());
        ExitCode::SUCCESS
    } else {
        println!("cliffem {}: FAILURES present", report.experiment);
        ExitCode::from(1)
    }
}
