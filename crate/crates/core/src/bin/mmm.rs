//! `mmm`: command-line front end.
//!
//! Exit codes: 0 ok, 1 malformed input or I/O failure, 2 constraint
//! violation, 3 block/oracle mismatch, 4 LU-inequivalent, 5 invariance
//! violation.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use mmm_core::alpha::{
    named_example, parse_alpha_json, qutrit_family, validate, AlphaMatrix, NamedExample,
    QutritFamilyParams, Validation, VALIDATION_TOL,
};
use mmm_core::discrepancy::discrepancy_report;
use mmm_core::invariants::{
    block_invariants, lu_discriminate, lu_probe, oracle_invariants, BasisNorm, Verdict,
};
use mmm_core::io::canonicalize;
use mmm_core::linalg::MULTISET_TOL;
use mmm_core::par::Exec;
use mmm_core::qutrit::{grid_argmax, negativity_grid, write_grid_csv};
use mmm_core::state::{build_state, certify, StateFile};
use mmm_core::Error;

const EXIT_MALFORMED: u8 = 1;
const EXIT_CONSTRAINT: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_INEQUIVALENT: u8 = 4;
const EXIT_NOT_INVARIANT: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "mmm",
    version,
    about = "Bipartite qudit states with maximally mixed marginals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the normalization and shift constraints of an alpha matrix.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Build the density matrix and print it as JSON.
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Write the state here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block-path invariants, cross-checked against the full-matrix oracle.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "hs-orthonormal")]
        mode: BasisNorm,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Negativity of the qutrit family on an N x N angle grid, written as CSV.
    Scan {
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        exec: ExecArg,
    },
    /// Decide whether two alpha matrices are distinguishable by their invariants.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        validation: ValidationArgs,
    },
    /// Conjugate by random local unitaries and measure invariant drift.
    Probe {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        exec: ExecArg,
    },
    /// Print the convention discrepancy report with numerical evidence.
    Report {
        /// Also write a markdown rendering here.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// JSON alpha matrix file.
    path: Option<PathBuf>,
    /// Qutrit family point THETA PHI.
    #[arg(long, num_args = 2, value_names = ["THETA", "PHI"], allow_negative_numbers = true,
          conflicts_with_all = ["path", "example"])]
    family: Option<Vec<f64>>,
    /// Named example (bell-seed, uniform-diagonal, gauss-phase).
    #[arg(long, requires = "d", conflicts_with = "path")]
    example: Option<NamedExample>,
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    validation: ValidationArgs,
}

#[derive(Args, Debug)]
struct ValidationArgs {
    /// Accept inputs that violate the constraints.
    #[arg(long)]
    no_validate: bool,
    #[arg(long, default_value_t = VALIDATION_TOL)]
    validate_tol: f64,
}

#[derive(Args, Debug)]
struct TolArg {
    #[arg(long, env = "MMM_TOL", default_value_t = MULTISET_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct ExecArg {
    /// Evaluate on one thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArg {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

/// A failed run: exit code, stderr message, and an optional stdout payload.
struct Failure {
    code: u8,
    message: String,
    payload: Option<Value>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            payload: None,
        }
    }

    fn with_payload(mut self, payload: Value) -> Self {
        self.payload = Some(payload);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ComplexSpectrum { .. } | Error::Certification(_) => EXIT_MISMATCH,
            _ => EXIT_MALFORMED,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<Value, Failure>;

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn emit(mut value: Value) {
    canonicalize(&mut value);
    let text = serde_json::to_string_pretty(&value).expect("json value serializes");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn log(msg: &str) {
    eprintln!("mmm: {msg}");
}

fn check_tol(name: &str, tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_MALFORMED,
            format!("{name} must be positive, got {tol}"),
        ))
    }
}

fn read_matrix(path: &Path) -> Result<mmm_core::linalg::CMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    parse_alpha_json(&text)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

fn residual_failure(label: &str, validation: Validation, tol: f64) -> Failure {
    let residuals = match validation {
        Validation::Rejected(r) => r,
        Validation::Accepted(_) => unreachable!("only rejections are reported"),
    };
    Failure::new(EXIT_CONSTRAINT, format!("{label}: constraints violated"))
        .with_payload(json!({"valid": false, "tol": tol, "residuals": to_json(&residuals)}))
}

fn admit(
    label: &str,
    m: mmm_core::linalg::CMatrix,
    v: &ValidationArgs,
) -> Result<AlphaMatrix, Failure> {
    check_tol("--validate-tol", v.validate_tol)?;
    if v.no_validate {
        let a = AlphaMatrix::new_unchecked(m)?;
        let r = a.residuals();
        if !r.within(v.validate_tol) {
            log(&format!(
                "{label}: constraints violated (max residual {:e}); continuing",
                r.max()
            ));
        }
        return Ok(a);
    }
    match validate(&m, v.validate_tol)? {
        Validation::Accepted(a) => Ok(a),
        rejected => Err(residual_failure(label, rejected, v.validate_tol)),
    }
}

fn load_path(path: &Path, v: &ValidationArgs) -> Result<AlphaMatrix, Failure> {
    admit(&path.display().to_string(), read_matrix(path)?, v)
}

fn load_input(input: &InputArgs) -> Result<AlphaMatrix, Failure> {
    if let Some(fam) = &input.family {
        let p = QutritFamilyParams::new(fam[0], fam[1])?;
        return Ok(qutrit_family(p));
    }
    if let Some(ex) = input.example {
        let d = input.d.expect("clap enforces --d");
        return Ok(named_example(ex, d)?);
    }
    match &input.path {
        Some(path) => load_path(path, &input.validation),
        None => Err(Failure::new(
            EXIT_MALFORMED,
            "no input: give a file, --family THETA PHI, or --example NAME --d D",
        )),
    }
}

fn cmd_validate(input: &InputArgs) -> CmdResult {
    let tol = input.validation.validate_tol;
    check_tol("--validate-tol", tol)?;
    let m = match &input.path {
        Some(path) => read_matrix(path)?,
        None => load_input(input)?.matrix().clone(),
    };
    match validate(&m, tol)? {
        Validation::Accepted(a) => Ok(json!({
            "valid": true,
            "d": a.d(),
            "tol": tol,
            "residuals": to_json(&a.residuals()),
        })),
        rejected => Err(residual_failure("input", rejected, tol)),
    }
}

fn cmd_build(input: &InputArgs, out: Option<&Path>) -> CmdResult {
    let a = load_input(input)?;
    let state = build_state(&a);
    let cert = certify(&state);
    for v in cert.violations() {
        log(&format!("state check: {v}"));
    }
    let file = to_json(&StateFile::from_state(&state));
    match out {
        Some(path) => {
            let mut v = file;
            canonicalize(&mut v);
            let text = serde_json::to_string_pretty(&v).expect("json value serializes");
            fs::write(path, text + "\n")
                .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
            Ok(
                json!({"d": state.d(), "out": path.display().to_string(), "certificate": to_json(&cert)}),
            )
        }
        None => Ok(file),
    }
}

fn cmd_invariants(input: &InputArgs, mode: BasisNorm, tol: f64) -> CmdResult {
    check_tol("--tol", tol)?;
    let a = load_input(input)?;
    let inv = block_invariants(&a, mode)?;
    let mut out = to_json(&inv);
    let state = build_state(&a);
    if input.validation.no_validate && !certify(&state).is_valid() {
        log("state is not a certified density operator; oracle cross-check skipped");
        out["oracle_deviation"] = Value::Null;
        return Ok(out);
    }
    let oracle = oracle_invariants(&state, mode)?;
    let dev = inv.deviation(&oracle);
    out["oracle_deviation"] = to_json(&dev);
    let worst = dev.max().max(dev.purity).max(dev.negativity);
    if worst > tol {
        return Err(Failure::new(
            EXIT_MISMATCH,
            format!("block path disagrees with the oracle by {worst:e} (tol {tol:e})"),
        )
        .with_payload(out));
    }
    Ok(out)
}

fn cmd_scan(resolution: usize, out: &Path, exec: Exec) -> CmdResult {
    let points = negativity_grid(resolution, exec)?;
    let file = fs::File::create(out)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", out.display())))?;
    write_grid_csv(&points, BufWriter::new(file))
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", out.display())))?;
    let best = grid_argmax(&points).expect("grid is non-empty");
    log(&format!("wrote {} rows to {}", points.len(), out.display()));
    Ok(json!({
        "resolution": resolution,
        "rows": points.len(),
        "out": out.display().to_string(),
        "max_negativity": best.negativity,
        "argmax": {"theta": best.theta, "phi": best.phi},
    }))
}

fn cmd_compare(a: &Path, b: &Path, tol: f64, v: &ValidationArgs) -> CmdResult {
    check_tol("--tol", tol)?;
    let x = load_path(a, v)?;
    let y = load_path(b, v)?;
    let verdict = lu_discriminate(&x, &y, tol)?;
    let out = to_json(&verdict);
    if verdict.verdict == Verdict::LuInequivalent {
        return Err(
            Failure::new(EXIT_INEQUIVALENT, "inputs are LU-inequivalent").with_payload(out),
        );
    }
    Ok(out)
}

fn cmd_probe(input: &InputArgs, trials: usize, seed: u64, tol: f64, exec: Exec) -> CmdResult {
    check_tol("--tol", tol)?;
    let a = load_input(input)?;
    let report = lu_probe(&a, trials, seed, tol, exec)?;
    let out = to_json(&report);
    if !report.invariant {
        return Err(Failure::new(
            EXIT_NOT_INVARIANT,
            format!(
                "invariants drifted by {:e}",
                report.max_deviation.certified_max()
            ),
        )
        .with_payload(out));
    }
    Ok(out)
}

fn cmd_report(markdown: Option<&Path>) -> CmdResult {
    let report = discrepancy_report()?;
    if let Some(path) = markdown {
        fs::write(path, report.to_markdown())
            .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    }
    Ok(to_json(&report))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Build { input, out } => cmd_build(&input, out.as_deref()),
        Command::Invariants { input, mode, tol } => cmd_invariants(&input, mode, tol.tol),
        Command::Scan {
            resolution,
            out,
            exec,
        } => cmd_scan(resolution, &out, exec.exec()),
        Command::Compare {
            a,
            b,
            tol,
            validation,
        } => cmd_compare(&a, &b, tol.tol, &validation),
        Command::Probe {
            input,
            trials,
            seed,
            tol,
            exec,
        } => cmd_probe(&input, trials, seed, tol.tol, exec.exec()),
        Command::Report { markdown } => cmd_report(markdown.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_MALFORMED)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(value) => {
            emit(value);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(payload) = f.payload {
                emit(payload);
            }
            log(&f.message);
            ExitCode::from(f.code)
        }
    }
}
