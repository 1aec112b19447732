//! Command-line frontend. [`run`] is the whole program minus process I/O.
//!
//! Exit codes: 0 property holds, 1 property refuted, 2 usage or input
//! error, 3 budget exceeded.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::{generate, Generated, GeneratorSpec};
use crate::interval::{hull_is_tn_k_with, hull_is_tp_k, HullBudget, IntervalHull};
use crate::io::{corpus_entry_to_value, matrix_to_value, read_matrix, sequence_from_json};
use crate::polya::{is_pf_k_window, pf_snr_check, PfMode};
use crate::positivity::{
    bench_tp, is_p_matrix, is_tp_k_bruteforce, is_tp_k_contiguous, tn_certificate_with, tp_certificate,
    EnumerationBudget, MethodCost,
};
use crate::report::{digest, hull_report, matrix_report, sequence_report, verify_report};
use crate::scalar::{float_tolerance, set_float_tolerance, Exact, Scalar};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tpcheck", version, about = "Certified total positivity checks")]
struct Cli {
    /// Use f64 arithmetic with tolerance --eps instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Tolerance for --float sign decisions.
    #[arg(long, global = true, requires = "float")]
    eps: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Contiguous,
    Certificate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqMode {
    Pf,
    Tp,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide TP_k for a matrix.
    CheckTp {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Certificate)]
        method: Method,
    },
    /// Decide TN_k for a matrix.
    CheckTn {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        /// Lift the per-size submatrix cap.
        #[arg(long)]
        no_cap: bool,
    },
    /// Decide TP_k for the interval hull of two matrices.
    HullTp {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Decide TN_k for the interval hull of two matrices.
    HullTn {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        k: usize,
        /// Maximum number of vertex matrices to examine.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Check Toeplitz minors of a sequence window.
    PfCheck {
        seq: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SeqMode::Pf)]
        mode: SeqMode,
        /// Run the sampled sign non-reversal check with this many vectors
        /// per block instead of the minor scan (tp mode only).
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide whether a square matrix is a P-matrix.
    PMatrix { file: PathBuf },
    /// Build a matrix or hull from a generator spec (file path or inline JSON).
    Generate {
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare determinant counts of the brute-force and contiguous TP_k checks.
    Bench {
        file: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Re-validate the certificate embedded in a report.
    VerifyCert { report: PathBuf },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, value: &Value) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("json values serialize");
        stdout.push('\n');
        Self { code, stdout, stderr: String::new() }
    }

    fn error(err: &Error) -> Self {
        let code = if matches!(err, Error::BudgetExceeded(_)) { EXIT_BUDGET } else { EXIT_USAGE };
        Self { code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

fn verdict_code(holds: bool) -> i32 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_REFUTED
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let echo = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    if let Some(eps) = cli.eps {
        if let Err(e) = set_float_tolerance(eps) {
            return Outcome::error(&e);
        }
    }
    let result = if cli.float { dispatch::<f64>(&cli.command, &echo) } else { dispatch::<Exact>(&cli.command, &echo) };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Parse { position: path.display().to_string(), message: e.to_string() })
}

fn text(path: &Path, bytes: &[u8]) -> Result<String> {
    String::from_utf8(bytes.to_vec())
        .map_err(|e| Error::Parse { position: path.display().to_string(), message: e.to_string() })
}

fn load_matrix<T: Scalar>(path: &Path) -> Result<(crate::matrix::Matrix<T>, Vec<u8>)> {
    let bytes = read(path)?;
    let m = read_matrix(&text(path, &bytes)?).map_err(|e| locate(path, e))?;
    Ok((m, bytes))
}

/// Prefixes parse positions with the file name.
fn locate(path: &Path, err: Error) -> Error {
    match err {
        Error::Parse { position, message } => {
            Error::Parse { position: format!("{}: {position}", path.display()), message }
        }
        other => other,
    }
}

fn cost_json(c: &MethodCost) -> Value {
    json!({
        "determinants": c.determinants,
        "wall_time_ms": c.elapsed.as_secs_f64() * 1e3,
        "all_positive": c.all_positive,
    })
}

fn mode_label<T: Scalar>() -> String {
    T::MODE.to_string()
}

fn dispatch<T: Scalar>(command: &Command, echo: &str) -> Result<Outcome> {
    match command {
        Command::CheckTp { file, k, method } => {
            let (a, bytes) = load_matrix::<T>(file)?;
            let v = match method {
                Method::Brute => is_tp_k_bruteforce(&a, *k)?,
                Method::Contiguous => is_tp_k_contiguous(&a, *k)?,
                Method::Certificate => tp_certificate(&a, *k)?,
            };
            Ok(Outcome::report(verdict_code(v.holds), &matrix_report(echo, &digest(&bytes), &a, &v)))
        }
        Command::CheckTn { file, k, no_cap } => {
            let (a, bytes) = load_matrix::<T>(file)?;
            let budget = if *no_cap { EnumerationBudget::unlimited() } else { EnumerationBudget::default() };
            let v = tn_certificate_with(&a, *k, budget)?;
            Ok(Outcome::report(verdict_code(v.holds), &matrix_report(echo, &digest(&bytes), &a, &v)))
        }
        Command::HullTp { a, b, k } => {
            let (h, d) = load_hull::<T>(a, b)?;
            let v = hull_is_tp_k(&h, *k)?;
            Ok(Outcome::report(verdict_code(v.holds), &hull_report(echo, &d, &h, &v)))
        }
        Command::HullTn { a, b, k, budget } => {
            let (h, d) = load_hull::<T>(a, b)?;
            let mut hb = HullBudget::default();
            if let Some(n) = budget {
                hb.max_family = Some(*n);
            }
            let v = hull_is_tn_k_with(&h, *k, hb)?;
            Ok(Outcome::report(verdict_code(v.holds), &hull_report(echo, &d, &h, &v)))
        }
        Command::PfCheck { seq, k, mode, samples, seed } => {
            let bytes = read(seq)?;
            let s = sequence_from_json::<T>(&text(seq, &bytes)?).map_err(|e| locate(seq, e))?;
            let v = match (mode, samples) {
                (SeqMode::Pf, None) => is_pf_k_window(&s, *k, PfMode::Pf)?,
                (SeqMode::Tp, None) => is_pf_k_window(&s, *k, PfMode::Tp)?,
                (SeqMode::Tp, Some(n)) => {
                    let seed = seed.ok_or_else(|| Error::InvalidArgument("--samples requires --seed".into()))?;
                    pf_snr_check(&s, *k, *n, seed)?
                }
                (SeqMode::Pf, Some(_)) => {
                    return Err(Error::InvalidArgument("sampled checks apply to --mode tp only".into()))
                }
            };
            Ok(Outcome::report(verdict_code(v.holds), &sequence_report(echo, &digest(&bytes), &s, &v)))
        }
        Command::PMatrix { file } => {
            let (a, bytes) = load_matrix::<T>(file)?;
            let v = is_p_matrix(&a)?;
            Ok(Outcome::report(verdict_code(v.holds), &matrix_report(echo, &digest(&bytes), &a, &v)))
        }
        Command::Generate { spec, seed } => {
            let path = Path::new(spec);
            let spec_text = if path.is_file() { text(path, &read(path)?)? } else { spec.clone() };
            let parsed: GeneratorSpec = serde_json::from_str(&spec_text).map_err(|e| Error::Parse {
                position: format!("spec line {}, column {}", e.line(), e.column()),
                message: e.to_string(),
            })?;
            if parsed.is_randomized() && seed.is_none() {
                return Err(Error::InvalidArgument("randomized generator requires --seed".into()));
            }
            let mut out = match generate::<T>(&parsed, *seed)? {
                Generated::Matrix(entry) => corpus_entry_to_value(&entry),
                Generated::Hull(h) => json!({ "a": matrix_to_value(h.a()), "b": matrix_to_value(h.b()) }),
            };
            out["generator"] = serde_json::to_value(&parsed).expect("spec serializes");
            out["seed"] = json!(seed);
            out["mode"] = json!(mode_label::<T>());
            Ok(Outcome::report(EXIT_HOLDS, &out))
        }
        Command::Bench { file, k } => {
            let (a, bytes) = load_matrix::<T>(file)?;
            let r = bench_tp(&a, *k)?;
            let out = json!({
                "command": echo,
                "input_digest": digest(&bytes),
                "mode": mode_label::<T>(),
                "k": r.k,
                "brute_force": cost_json(&r.brute_force),
                "contiguous": cost_json(&r.contiguous),
                "contiguous_faster": r.contiguous.elapsed < r.brute_force.elapsed,
            });
            Ok(Outcome::report(EXIT_HOLDS, &out))
        }
        Command::VerifyCert { report } => {
            let bytes = read(report)?;
            let value: Value = serde_json::from_str(&text(report, &bytes)?).map_err(|e| Error::Parse {
                position: format!("{}: line {}, column {}", report.display(), e.line(), e.column()),
                message: e.to_string(),
            })?;
            verify(&value)
        }
    }
}

fn verify(report: &Value) -> Result<Outcome> {
    let mode = report.get("mode").and_then(Value::as_str).unwrap_or("exact");
    let checked = if let Some(eps) = mode.strip_prefix("numerical(eps=").and_then(|s| s.strip_suffix(')')) {
        let eps: f64 = eps
            .parse()
            .map_err(|_| Error::Parse { position: "mode".into(), message: format!("bad tolerance '{eps}'") })?;
        let previous = float_tolerance();
        set_float_tolerance(eps)?;
        let out = verify_report::<f64>(report);
        set_float_tolerance(previous)?;
        out
    } else {
        verify_report::<Exact>(report)
    };
    match checked {
        Ok(v) => Ok(Outcome::report(
            EXIT_HOLDS,
            &json!({ "valid": true, "holds": v.holds, "certificate": v.certificate_kind, "witness_checked": v.witness_checked }),
        )),
        Err(Error::InvalidCertificate(msg)) => Ok(Outcome {
            code: EXIT_REFUTED,
            stderr: format!("certificate rejected: {msg}\n"),
            ..Outcome::report(EXIT_REFUTED, &json!({ "valid": false, "reason": msg }))
        }),
        Err(e) => Err(e),
    }
}

fn load_hull<T: Scalar>(a: &Path, b: &Path) -> Result<(IntervalHull<T>, String)> {
    let (ma, ba) = load_matrix::<T>(a)?;
    let (mb, bb) = load_matrix::<T>(b)?;
    let mut both = ba;
    both.extend_from_slice(&bb);
    Ok((IntervalHull::new(ma, mb)?, digest(&both)))
}
