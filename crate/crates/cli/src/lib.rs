//! Command-line front end: scenario files in, observation, candidate and SVG
//! files out.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use trajectory_oracle::kinematics::simulate_observations;
use trajectory_oracle::scenario::{
    read_candidates, read_observations, read_scenario, to_json, CandidateFile, ObservationFile,
    ScenarioFile,
};
use trajectory_oracle::svg::render_svg;
use trajectory_oracle::{CaseTag, Tolerance};

pub mod error;
pub mod generate;
pub mod pipeline;

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "trajectory-oracle", version, about = "Simulate and invert threat-circle observations")]
pub struct Cli {
    /// Relative tolerance for geometric decisions.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT.relative)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward-simulate the observations leaked by the ground truth.
    Simulate {
        scenario: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reconstruct candidate routes from observations.
    Reconstruct {
        scenario: PathBuf,
        #[arg(long)]
        case: CaseTag,
        /// Observation file to use instead of the scenario's own.
        #[arg(long)]
        observations: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Simulate, reconstruct and check that the ground truth is recovered.
    Roundtrip {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        scenario: Option<PathBuf>,
        /// Defaults to the scenario's `case` metadata.
        #[arg(long)]
        case: Option<CaseTag>,
        /// Check every `*.json` scenario in a directory.
        #[arg(long, value_name = "DIR")]
        all: Option<PathBuf>,
    },
    /// Draw the scenario and, optionally, a candidate file as SVG.
    Render {
        scenario: PathBuf,
        #[arg(long)]
        candidates: Option<PathBuf>,
        /// Include auxiliary construction circles.
        #[arg(long)]
        construction: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Write a random scenario for a case.
    Generate {
        #[arg(long)]
        case: CaseTag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tolerance > 0.0 && cli.tolerance < 1.0) {
        return Err(CliError::Invariant("tolerance must lie in (0, 1)".into()));
    }
    let tol = Tolerance::new(cli.tolerance);
    match cli.command {
        Command::Simulate { scenario, out } => out.write(&simulate(&read_scenario(&scenario)?, tol)?),
        Command::Reconstruct {
            scenario,
            case,
            observations,
            out,
        } => {
            let scenario = read_scenario(&scenario)?;
            let obs = match observations {
                Some(path) => read_observations(&path)?.observations,
                None => pipeline::scenario_observations(&scenario, tol)?,
            };
            let set = pipeline::reconstruct(case, &scenario.radars, &obs, tol)?;
            out.write(&to_json(&CandidateFile::from(set)))
        }
        Command::Roundtrip { scenario, case, all } => match (scenario, all) {
            (Some(path), _) => {
                let report = roundtrip_file(&path, case, tol)?;
                println!("{}: {report}", path.display());
                Ok(())
            }
            (None, Some(dir)) => roundtrip_dir(&dir, case, tol),
            (None, None) => Err(CliError::Invariant("no scenario given".into())),
        },
        Command::Render {
            scenario,
            candidates,
            construction,
            out,
        } => {
            let scenario = read_scenario(&scenario)?;
            let set = match candidates {
                Some(path) => Some(read_candidates(&path)?.into()),
                None => None,
            };
            out.write(&render_svg(&scenario, set.as_ref(), construction))
        }
        Command::Generate { case, seed, out } => out.write(&to_json(&generate::generate(case, seed))),
    }
}

/// Observation file for the scenario's ground truth under its policy.
pub fn simulate(scenario: &ScenarioFile, tol: Tolerance) -> Result<String, CliError> {
    let truth = scenario
        .ground_truth
        .as_ref()
        .ok_or_else(|| CliError::Invariant("simulate needs a ground truth".into()))?;
    let obs = simulate_observations(truth, &scenario.radars, &scenario.policy, tol);
    Ok(to_json(&ObservationFile::new(obs)))
}

fn roundtrip_file(
    path: &Path,
    case: Option<CaseTag>,
    tol: Tolerance,
) -> Result<pipeline::RoundtripReport, CliError> {
    let scenario = read_scenario(path)?;
    let case = case.or_else(|| scenario.declared_case()).ok_or_else(|| {
        CliError::Invariant("no --case given and the scenario declares none".into())
    })?;
    let report = pipeline::roundtrip(&scenario, case, tol)?;
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::Containment(report.to_string()))
    }
}

/// Runs every scenario in `dir`, reporting each; fails with the first error's
/// exit code.
fn roundtrip_dir(dir: &Path, case: Option<CaseTag>, tol: Tolerance) -> Result<(), CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Invariant(format!("no scenarios in {}", dir.display())));
    }
    let mut first_error = None;
    for path in &paths {
        match roundtrip_file(path, case, tol) {
            Ok(report) => println!("{}: {report}", path.display()),
            Err(e) => {
                println!("{}: {e}", path.display());
                first_error.get_or_insert(e);
            }
        }
    }
    first_error.map_or(Ok(()), Err)
}
