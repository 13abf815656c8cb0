//! Command-line interface: `reconstruct`, `extract`, `solve`, `validate`.
//!
//! Exit codes: 0 on success, 1 on domain errors (parse failures,
//! extraction failures, infeasible programs), 2 on usage errors.

use crate::dsl::parse_model;
use crate::extract::{default_dictionary, extract, Dictionary, TokenTag};
use crate::ilp::{branch_and_bound, IlpProblem, SolveStatus};
use crate::pipeline::{reconstruct, PipelineError};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "actrecon",
    about = "Reconstructs activity-flow process models from structured requirements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild a model against a requirements file and write the result
    Reconstruct {
        /// Input model (.act)
        #[arg(long)]
        model: PathBuf,
        /// Requirements file, one sentence per line
        #[arg(long)]
        requirements: PathBuf,
        /// Where to write the reconstructed model
        #[arg(long)]
        out: PathBuf,
        /// Where to write the JSON report
        #[arg(long)]
        report: PathBuf,
        /// Extra dictionary rows: surface TAB canonical TAB tag
        #[arg(long)]
        dict: Option<PathBuf>,
        /// Property values for added tasks: task TAB property TAB value
        #[arg(long)]
        added_props: Option<PathBuf>,
    },
    /// Extract a constraint set and print it as JSON
    Extract {
        #[arg(long)]
        requirements: PathBuf,
        #[arg(long)]
        dict: Option<PathBuf>,
    },
    /// Solve a standalone 0/1 problem (JSON) and print the solution
    Solve {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Check that a model file parses and satisfies every invariant
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the CLI against explicit argv and output streams; `main` is a
/// thin wrapper. Keeping the streams injectable makes the process
/// behavior testable in-process.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    match cli.command {
        Command::Reconstruct {
            model,
            requirements,
            out: out_path,
            report,
            dict,
            added_props,
        } => {
            let model_text = read(&model)?;
            let requirements_text = read(&requirements)?;
            let dictionary = load_dictionary(dict.as_deref())?;
            let added = match added_props {
                Some(path) => load_added_props(&path)?,
                None => Vec::new(),
            };
            match reconstruct(&model_text, &requirements_text, &dictionary, &added) {
                Ok((model_out, report_out)) => {
                    write_file(&out_path, &model_out)?;
                    let json = serde_json::to_string_pretty(&report_out)
                        .map_err(|e| format!("encoding report: {e}"))?;
                    write_file(&report, &(json + "\n"))?;
                    Ok(EXIT_OK)
                }
                Err(PipelineError::Infeasible(report_out)) => {
                    // No model is written; the report still documents the run.
                    let json = serde_json::to_string_pretty(&*report_out)
                        .map_err(|e| format!("encoding report: {e}"))?;
                    write_file(&report, &(json + "\n"))?;
                    Err("the constraints cannot be satisfied (see report)".to_string())
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Extract { requirements, dict } => {
            let requirements_text = read(&requirements)?;
            let dictionary = load_dictionary(dict.as_deref())?;
            let set = extract(&requirements_text, &dictionary).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&set).map_err(|e| e.to_string())?;
            let _ = writeln!(out, "{json}");
            Ok(EXIT_OK)
        }
        Command::Solve { problem } => {
            let text = read(&problem)?;
            let problem: IlpProblem =
                serde_json::from_str(&text).map_err(|e| format!("parsing problem JSON: {e}"))?;
            problem.validate().map_err(|e| e.to_string())?;
            let solution = branch_and_bound(&problem);
            let json = serde_json::to_string_pretty(&solution).map_err(|e| e.to_string())?;
            let _ = writeln!(out, "{json}");
            if solution.status == SolveStatus::Infeasible {
                Err("the problem is infeasible".to_string())
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Validate { model } => {
            let text = read(&model)?;
            let parsed = parse_model(&text).map_err(|e| e.to_string())?;
            let violations = parsed.validate();
            if violations.is_empty() {
                Ok(EXIT_OK)
            } else {
                Err(violations.join("; "))
            }
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("writing {}: {e}", path.display()))
}

/// Loads `--dict` rows (surface TAB canonical TAB tag) over the default
/// dictionary. Blank lines and `#` comments are allowed.
fn load_dictionary(path: Option<&Path>) -> Result<Dictionary, String> {
    let mut dict = default_dictionary();
    let path = match path {
        None => return Ok(dict),
        Some(p) => p,
    };
    let text = read(path)?;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(format!(
                "{}:{}: expected 3 tab-separated fields, found {}",
                path.display(),
                idx + 1,
                fields.len()
            ));
        }
        if TokenTag::parse(fields[2].trim()).is_none() {
            return Err(format!(
                "{}:{}: unknown tag \"{}\" (expected keyword/relation/bound/objective/name/number/separator)",
                path.display(),
                idx + 1,
                fields[2]
            ));
        }
        dict.insert(fields[0], fields[1].trim(), fields[2].trim());
    }
    Ok(dict)
}

/// Loads `--added-props` rows: task TAB property TAB value.
fn load_added_props(path: &Path) -> Result<Vec<(String, String, f64)>, String> {
    let text = read(path)?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(format!(
                "{}:{}: expected 3 tab-separated fields, found {}",
                path.display(),
                idx + 1,
                fields.len()
            ));
        }
        let value: f64 = fields[2].trim().parse().map_err(|_| {
            format!(
                "{}:{}: invalid value \"{}\"",
                path.display(),
                idx + 1,
                fields[2]
            )
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(format!(
                "{}:{}: property values must be finite and >= 0",
                path.display(),
                idx + 1
            ));
        }
        rows.push((
            fields[0].trim().to_string(),
            fields[1].trim().to_lowercase(),
            value,
        ));
    }
    Ok(rows)
}
