use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use weyl_lab::{emit_report, parse_tolerance, run_suite, Format, HarnessError, Suite, SuiteConfig};
use weyl_lab_core::io::{measure_from_json, read_points_csv};

#[derive(Parser)]
#[command(name = "weyl-lab", version, about = "Numerical checks for Weyl algebras and their states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a report.
    Verify {
        /// weyl, states, gns, torus, measures or all.
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override `check.id=value`; repeatable.
        #[arg(long = "tol", value_name = "ID=VALUE")]
        tol: Vec<String>,
        /// CSV point set used by the kernel checks.
        #[arg(long)]
        points: Option<PathBuf>,
        /// JSON atomic measure used by the measure checks.
        #[arg(long)]
        measure: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

fn read(path: &PathBuf) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let Command::Verify { suite, seed, tol, points, measure, out, format } = cli.command;
    let suite: Suite = suite.parse()?;
    let format: Format = format.parse()?;
    let mut config = SuiteConfig::new(suite, seed);
    for t in &tol {
        let (name, value) = parse_tolerance(t)?;
        config.tolerances.insert(name, value);
    }
    if let Some(p) = &points {
        let pts = read_points_csv(&read(p)?).map_err(|e| HarnessError::Input(format!("{}: {e}", p.display())))?;
        config.points = Some(pts);
    }
    if let Some(m) = &measure {
        let mu = measure_from_json(&read(m)?).map_err(|e| HarnessError::Input(format!("{}: {e}", m.display())))?;
        config.measure = Some(mu);
    }
    let report = run_suite(&config)?;
    let text = emit_report(&report, format)?;
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
