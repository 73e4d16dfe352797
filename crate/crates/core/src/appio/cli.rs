//! Command line. Reports go to stdout as JSON; exit codes are 2 for
//! unparsable input, 3 for invalid parameters, 4 for failed verification.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::appio::corpus;
use crate::appio::file::CurveFile;
use crate::appio::render::{render_svg, RenderOptions, View};
use crate::appio::suite::{self, pretty};
use crate::cabling::{cable_geometric, cable_merge_with, CableParams, CableResult};
use crate::error::CurveError;
use crate::geometry::Multicurve;
use crate::invariants::{report, verify_against, IdentityCheck, InvariantReport};
use crate::obstructions::obstruction_report;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PARAMS: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cable-curves", version, about = "Immersed curves of cabled knot complements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Geometric,
    Merge,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a curve file and print it in normal form.
    Parse { input: String },
    /// Cable a curve set.
    Cable {
        input: String,
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        #[arg(long, value_enum, default_value_t = Route::Geometric)]
        route: Route,
        /// Check the tau, epsilon, Alexander and phi transfer identities.
        #[arg(long)]
        verify: bool,
        /// Also write the cabled curve file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Invariants { input: String },
    /// Obstructions to being a (p, q)-cable for 2 <= p <= pmax.
    CheckCable {
        input: String,
        #[arg(long, default_value_t = 5)]
        pmax: i64,
    },
    Render {
        input: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = View::Cylinder)]
        view: View,
        #[arg(long, default_value_t = 1)]
        columns: u32,
        #[arg(long, default_value_t = 40)]
        scale: u32,
        /// Cable parameters `p,q`, for the tiling view and the stages.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: Option<(i64, i64)>,
        #[arg(long)]
        stages: bool,
        #[arg(long)]
        no_local_systems: bool,
    },
    /// Run every acceptance criterion.
    VerifyAll {
        /// Rewrite the golden files before comparing.
        #[arg(long)]
        update_golden: bool,
    },
    /// Cable many inputs in parallel; one job `INPUT P Q` per line.
    Batch {
        /// Job file; stdin when absent.
        jobs: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected p,q")?;
    let n = |t: &str| t.trim().parse::<i64>().map_err(|e| e.to_string());
    Ok((n(a)?, n(b)?))
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Curve(#[from] CurveError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Curve(CurveError::InvalidParams(_) | CurveError::Determinant(_)) => EXIT_PARAMS,
            AppError::Curve(_) | AppError::Io { .. } => EXIT_PARSE,
            AppError::Verify(_) => EXIT_VERIFY,
        }
    }
}

/// Loads `corpus:<name>` or a curve file.
pub fn load(input: &str) -> Result<(String, Multicurve), AppError> {
    if let Some(name) = input.strip_prefix("corpus:") {
        let k = corpus::lookup(name)
            .ok_or_else(|| CurveError::InvalidMulticurve(format!("no corpus entry {name}")))?;
        return Ok((name.to_string(), k));
    }
    let text = std::fs::read_to_string(input)
        .map_err(|source| AppError::Io { path: input.to_string(), source })?;
    let f = CurveFile::from_json(&text)?;
    Ok((f.name.clone(), f.to_multicurve()?))
}

#[derive(Debug, Serialize)]
pub struct CableOutput {
    pub curve: CurveFile,
    pub report: InvariantReport,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<IdentityCheck>>,
}

pub fn cable_command(
    name: &str,
    k: &Multicurve,
    p: i64,
    q: i64,
    route: Route,
    verify: bool,
) -> Result<CableOutput, AppError> {
    let params = CableParams::new(p, q)?;
    let geometric = || cable_geometric(k, p, q);
    let merged = || cable_merge_with(k, params);
    let (result, agree): (CableResult, Option<bool>) = match route {
        Route::Geometric => (geometric()?, None),
        Route::Merge => (merged()?, None),
        Route::Both => {
            let (g, m) = (geometric()?, merged()?);
            let agree = g.curve == m.curve;
            (g, Some(agree))
        }
    };
    let cable = result.curve;
    let checks = verify.then(|| verify_against(k, &cable, p, q));
    let out = CableOutput {
        curve: CurveFile::from_multicurve(format!("{name} ({p},{q})"), &cable),
        report: report(&cable),
        route,
        routes_agree: agree,
        checks,
    };
    Ok(out)
}

fn cable_failures(out: &CableOutput) -> Vec<String> {
    let mut bad = Vec::new();
    if out.routes_agree == Some(false) {
        bad.push("geometric and merge routes differ".to_string());
    }
    for c in out.checks.iter().flatten().filter(|c| !c.pass) {
        bad.push(format!("{}: {} != {}", c.name, c.lhs, c.rhs));
    }
    bad
}

#[derive(Debug, Serialize)]
struct BatchRow {
    input: String,
    p: i64,
    q: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<InvariantReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn batch_job(line: &str) -> BatchRow {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let mut row = BatchRow { input: line.to_string(), p: 0, q: 0, gamma0: None, report: None, error: None };
    let parsed = match parts.as_slice() {
        [input, p, q] => match (p.parse(), q.parse()) {
            (Ok(p), Ok(q)) => Ok((*input, p, q)),
            _ => Err("p and q must be integers".to_string()),
        },
        _ => Err("expected INPUT P Q".to_string()),
    };
    let result = parsed.and_then(|(input, p, q)| {
        row.input = input.to_string();
        (row.p, row.q) = (p, q);
        let (_, k) = load(input).map_err(|e| e.to_string())?;
        cable_geometric(&k, p, q).map_err(|e| e.to_string())
    });
    match result {
        Ok(c) => {
            row.gamma0 = Some(c.curve.gamma0_display());
            row.report = Some(report(&c.curve));
        }
        Err(e) => row.error = Some(e),
    }
    row
}

fn write_file(path: &PathBuf, body: &str) -> Result<(), AppError> {
    std::fs::write(path, body).map_err(|source| AppError::Io { path: path.display().to_string(), source })
}

/// Runs one command, writing reports to `stdout`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, AppError> {
    let mut emit = |s: String| {
        let _ = stdout.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Parse { input } => {
            let (name, k) = load(&input)?;
            emit(CurveFile::from_multicurve(name, &k).to_json());
        }
        Command::Cable { input, p, q, route, verify, out } => {
            let (name, k) = load(&input)?;
            let res = cable_command(&name, &k, p, q, route, verify)?;
            if let Some(path) = out {
                write_file(&path, &res.curve.to_json())?;
            }
            emit(pretty(&res));
            let bad = cable_failures(&res);
            if !bad.is_empty() {
                return Err(AppError::Verify(bad.join("; ")));
            }
        }
        Command::Invariants { input } => {
            let (_, k) = load(&input)?;
            emit(pretty(&report(&k)));
        }
        Command::CheckCable { input, pmax } => {
            if pmax < 2 {
                return Err(CurveError::InvalidParams(format!("pmax must be at least 2, got {pmax}")).into());
            }
            let (_, k) = load(&input)?;
            emit(pretty(&obstruction_report(&k, pmax)));
        }
        Command::Render { input, out, view, columns, scale, cable, stages, no_local_systems } => {
            let (_, k) = load(&input)?;
            let opts = RenderOptions { view, columns, scale, stages, local_systems: !no_local_systems, cable };
            let svg = render_svg(&k, &opts)?;
            write_file(&out, &svg)?;
            emit(pretty(&serde_json::json!({ "out": out.display().to_string(), "bytes": svg.len() })));
        }
        Command::VerifyAll { update_golden } => {
            if update_golden {
                let dir = suite::golden_dir();
                suite::write_goldens(&dir)
                    .map_err(|source| AppError::Io { path: dir.display().to_string(), source })?;
            }
            let results = suite::run_all();
            emit(pretty(&results));
            let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.line()).collect();
            if !failed.is_empty() {
                return Err(AppError::Verify(failed.join("; ")));
            }
        }
        Command::Batch { jobs } => {
            let text = match jobs {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|source| AppError::Io { path: path.display().to_string(), source })?,
                None => {
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|source| AppError::Io { path: "stdin".into(), source })?;
                    s
                }
            };
            let lines: Vec<&str> =
                text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
            let rows: Vec<BatchRow> = lines.par_iter().map(|l| batch_job(l)).collect();
            emit(pretty(&rows));
        }
    }
    Ok(0)
}

/// Parses arguments and runs; errors go to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<i32, AppError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("cable-curves").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        let r = run(cli, &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    #[test]
    fn cable_trefoil_both_routes() {
        let (r, out) = run_args(&["cable", "corpus:right-trefoil", "3", "2", "--route", "both", "--verify"]);
        assert_eq!(r.unwrap(), 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["tau"], 4);
        assert_eq!(v["routes_agree"], true);
    }

    #[test]
    fn exit_codes() {
        let (r, _) = run_args(&["cable", "corpus:right-trefoil", "2", "4"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_PARAMS);
        let (r, _) = run_args(&["invariants", "/nonexistent/file.json"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_PARSE);
        let (r, _) = run_args(&["cable", "corpus:right-trefoil", "2", "-1"]);
        assert_eq!(r.unwrap(), 0);
    }

    #[test]
    fn unknot_cables_to_unknot() {
        let (r, out) = run_args(&["cable", "corpus:unknot", "5", "1"]);
        assert_eq!(r.unwrap(), 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let unknot = CurveFile::from_multicurve("", &crate::cabling::unknot());
        assert_eq!(v["curve"]["components"][0]["word"], unknot.components[0].word.as_str());
        assert_eq!(v["curve"]["components"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn batch_rows() {
        let row = batch_job("corpus:right-trefoil 2 1");
        assert!(row.error.is_none());
        assert_eq!(row.report.unwrap().tau, 2);
        assert!(batch_job("corpus:right-trefoil 2").error.is_some());
    }
}
