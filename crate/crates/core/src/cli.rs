//! Command-line front end. `run` returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::analysis::{profile, sweep, Asymptote, ExtremumReport, GridScale, Shape};
use crate::crosscheck::{oracle_check, OracleCheckReport, CHECK_XS};
use crate::geometry::{gram_validate, ValidationReport};
use crate::par;
use crate::scenario::{self, Evaluator, Scenario, PRESET_NAMES};
use crate::spin_ops::OperatorKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "relcorr", version, about = "Relativistic EPR spin correlation curves")]
pub struct Args {
    /// Built-in configuration, fig1 … fig7.
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Log-spaced grid.
    #[arg(long)]
    pub log: bool,
    /// Report interior extrema (and asymptotes) in the JSON sidecar.
    #[arg(long)]
    pub find_extrema: bool,
    /// Report x → ∞ limits in the JSON sidecar.
    #[arg(long)]
    pub asymptote: bool,
    /// Compare every closed form with the brute-force oracle on random frames.
    #[arg(long, conflicts_with_all = ["preset", "scenario"])]
    pub oracle_check: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Write `<name>.csv` and `<name>.json` here instead of stdout/stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct OperatorSummary {
    operator: OperatorKind,
    evaluation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<Shape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrema: Option<Vec<ExtremumReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptote: Option<Asymptote>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    scenario: &'a Scenario,
    validation: ValidationReport,
    backend: &'static str,
    operators: Vec<OperatorSummary>,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Formats a float with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn load(args: &Args) -> Result<Scenario, Failure> {
    let mut s = match (&args.preset, &args.scenario) {
        (Some(name), None) => scenario::preset(name).ok_or_else(|| {
            fail(
                EXIT_PARSE,
                format!("`preset`: unknown preset `{name}` (expected one of {})", PRESET_NAMES.join(", ")),
            )
        })?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| fail(EXIT_PARSE, format!("`scenario`: cannot read {}: {e}", path.display())))?;
            scenario::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("scenario error: {e}")))?
        }
        _ => return Err(fail(EXIT_PARSE, "one of --preset, --scenario or --oracle-check is required")),
    };
    if let Some(v) = args.x_min {
        s.grid.x_min = v;
    }
    if let Some(v) = args.x_max {
        s.grid.x_max = v;
    }
    if let Some(v) = args.steps {
        s.grid.steps = v;
    }
    if args.log {
        s.grid.scale = GridScale::Log;
    }
    s.find_extrema |= args.find_extrema;
    s.asymptote |= args.asymptote;
    s.grid
        .points()
        .map_err(|e| fail(EXIT_PARSE, format!("`grid`: {e}")))?;
    Ok(s)
}

fn run_scenario(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let s = load(args)?;
    let validation = gram_validate(&s.invariants);
    if !validation.abn_psd || !validation.orientation_consistent {
        return Err(fail(
            EXIT_INFEASIBLE,
            format!(
                "infeasible geometry: Gram matrix of (a, b, n) has minimum eigenvalue {:e}{}",
                validation.abn_min_eigenvalue,
                if validation.orientation_consistent { "" } else { " or n·(a×b) is inconsistent" }
            ),
        ));
    }

    let mut evaluators = Vec::new();
    for &op in &s.operators {
        let ev = Evaluator::for_scenario(&s, op)
            .map_err(|e| fail(EXIT_INFEASIBLE, format!("{op}: cannot build a frame for the oracle: {e}")))?;
        if ev.is_oracle() {
            let _ = writeln!(
                stderr,
                "note: {} has no closed form for {}; evaluating with the oracle",
                op,
                s.system
            );
        }
        evaluators.push((op, ev));
    }

    let mut curves = Vec::new();
    for (op, ev) in &evaluators {
        let curve = sweep(|x| ev.eval(x), &s.grid)
            .map_err(|e| fail(EXIT_NUMERICAL, format!("{op}: {e}")))?;
        curves.push(curve);
    }

    let mut summaries = Vec::new();
    for (op, ev) in &evaluators {
        let f = |x: f64| ev.eval(x).unwrap_or(f64::NAN);
        let mut summary = OperatorSummary {
            operator: *op,
            evaluation: if ev.is_oracle() { "oracle" } else { "closed_form" },
            shape: None,
            extrema: None,
            asymptote: None,
        };
        if s.find_extrema {
            let p = profile(f, s.grid.x_min, s.grid.x_max);
            if !p.start.is_finite() || !p.end.is_finite() || p.extrema.iter().any(|e| !e.value.is_finite()) {
                return Err(fail(EXIT_NUMERICAL, format!("{op}: non-finite value during extremum search")));
            }
            summary.extrema = Some(p.reports());
            summary.asymptote = Some(p.asymptote);
            summary.shape = Some(p.shape);
        }
        if s.asymptote && summary.asymptote.is_none() {
            summary.asymptote = Some(crate::analysis::asymptote(f));
        }
        if let Some(a) = summary.asymptote {
            if !a.converged {
                return Err(fail(
                    EXIT_NUMERICAL,
                    format!(
                        "{op}: x → ∞ limit did not settle ({} at 1e12 vs {} at 1e10)",
                        a.value, a.reference
                    ),
                ));
            }
        }
        summaries.push(summary);
    }

    let mut csv = String::from("x");
    for op in &s.operators {
        csv.push_str(&format!(",c_{}", op.tag()));
    }
    csv.push('\n');
    for i in 0..curves[0].samples.len() {
        csv.push_str(&format_value(curves[0].samples[i].0));
        for c in &curves {
            csv.push(',');
            csv.push_str(&format_value(c.samples[i].1));
        }
        csv.push('\n');
    }

    let sidecar = Sidecar {
        scenario: &s,
        validation,
        backend: par::backend(),
        operators: summaries,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");

    match &args.out {
        Some(dir) => write_outputs(dir, &s.name, &csv, &json)?,
        None => {
            let _ = stdout.write_all(csv.as_bytes());
            let _ = writeln!(stderr, "{json}");
        }
    }
    Ok(())
}

fn write_outputs(dir: &Path, name: &str, csv: &str, json: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| fail(EXIT_PARSE, format!("`out`: {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(format!("{name}.csv")), csv).map_err(io)?;
    fs::write(dir.join(format!("{name}.json")), format!("{json}\n")).map_err(io)?;
    Ok(())
}

fn run_oracle_check(args: &Args, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(fail(EXIT_PARSE, "`trials`: must be at least 1"));
    }
    let report: OracleCheckReport = oracle_check(args.seed, args.trials, &CHECK_XS)
        .map_err(|e| fail(EXIT_NUMERICAL, format!("oracle check: {e}")))?;
    for p in &report.pairs {
        let _ = writeln!(
            stdout,
            "{:<22} {:<3} max |closed - oracle| = {:.3e}",
            p.system.tag(),
            p.operator.tag(),
            p.max_deviation
        );
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(dir) = &args.out {
        write_outputs_json(dir, &json)?;
    }
    if report.success() {
        let _ = writeln!(stdout, "oracle check passed: {} trials, seed {}", report.trials, report.seed);
        return Ok(());
    }
    let w = report.worst().expect("pairs are non-empty");
    let vec3 = |v: &nalgebra::Vector3<f64>| format!("({}, {}, {})", v.x, v.y, v.z);
    let cvec3 = |v: &nalgebra::Vector3<num_complex::Complex64>| {
        let parts: Vec<String> = v.iter().map(|z| crate::matrix_io::format_complex(*z)).collect();
        format!("({})", parts.join(", "))
    };
    let mut msg = format!(
        "oracle mismatch for {} {}: deviation {:e} at x = {}\n  a = {}\n  b = {}\n  n = {}\n  pol = {}",
        w.system,
        w.operator,
        w.max_deviation,
        w.worst_x,
        vec3(&w.worst_frame.a),
        vec3(&w.worst_frame.b),
        vec3(&w.worst_frame.n),
        cvec3(&w.worst_frame.pol)
    );
    if let Some(alpha) = &w.worst_frame.alpha {
        msg.push_str(&format!("\n  alpha = {}", cvec3(alpha)));
    }
    Err(fail(EXIT_ORACLE, msg))
}

fn write_outputs_json(dir: &Path, json: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| fail(EXIT_PARSE, format!("`out`: {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("oracle_check.json"), format!("{json}\n")).map_err(io)
}

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let result = if args.oracle_check {
        run_oracle_check(&args, stdout)
    } else {
        run_scenario(&args, stdout, stderr)
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
