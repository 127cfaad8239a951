//! Scenario runner for Loewner evolution families.
//!
//! Exit codes: 0 success, 2 when any classification is inconclusive or a
//! sweep shows a label mixture, 1 on errors.

use clap::{Parser, Subcommand};
use loewner::runner;
use loewner::scenario::Scenario;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "loewner", version, about = "Simulate and classify Loewner evolution families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario: trajectories and a classification report per grid point.
    Run {
        /// Scenario JSON file.
        file: PathBuf,
        /// Output directory for trajectory CSVs and report.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check the evolution axioms, Schwarz-Pick contraction, monotone real
    /// part and declared Herglotz data; print a pass/fail table.
    Validate {
        /// Scenario JSON file.
        file: PathBuf,
    },
    /// Classify every grid point in parallel and check label uniformity.
    Sweep {
        /// Scenario JSON file.
        file: PathBuf,
        /// Output directory for summary.csv and report.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (0 = one per core). The LOEWNER_JOBS environment
        /// variable overrides this flag.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn load(file: &Path) -> Result<Scenario, ExitCode> {
    Scenario::from_path(file).map_err(|err| {
        eprintln!("error: {err}");
        ExitCode::from(1)
    })
}

fn effective_jobs(flag: usize) -> usize {
    match std::env::var("LOEWNER_JOBS") {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                eprintln!("warning: ignoring unparsable LOEWNER_JOBS={text:?}");
                flag
            }
        },
        Err(_) => flag,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, out } => {
            let scenario = match load(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match runner::run(&scenario, &out) {
                Ok(artifacts) => {
                    println!(
                        "wrote {} trajectories and {}",
                        artifacts.trajectory_paths.len(),
                        artifacts.report_path.display()
                    );
                    if artifacts.inconclusive_points > 0 {
                        println!(
                            "{} grid point(s) classified inconclusive",
                            artifacts.inconclusive_points
                        );
                    }
                    ExitCode::from(artifacts.exit_code as u8)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Validate { file } => {
            let scenario = match load(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match runner::validate(&scenario) {
                Ok(rows) => {
                    let mut all_pass = true;
                    println!("{:<20} {:<6} detail", "check", "status");
                    for row in &rows {
                        all_pass &= row.pass;
                        println!(
                            "{:<20} {:<6} {}",
                            row.name,
                            if row.pass { "pass" } else { "FAIL" },
                            row.detail
                        );
                    }
                    if all_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Sweep { file, out, jobs } => {
            let scenario = match load(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match runner::sweep(&scenario, &out, effective_jobs(jobs)) {
                Ok(artifacts) => {
                    println!(
                        "swept {} grid points -> {}",
                        artifacts.labels.len(),
                        artifacts.summary_path.display()
                    );
                    if !artifacts.uniform {
                        println!("label mixture across the grid (see report)");
                    }
                    ExitCode::from(artifacts.exit_code as u8)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
