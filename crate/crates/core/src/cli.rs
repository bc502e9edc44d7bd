//! The `mapcone` command line. All matrices and maps are read from JSON files
//! (`-` for stdin); results are JSON on stdout or `--output`.
//!
//! Exit codes: `member` returns 0/1/2 for Member/NotMember/Unknown, `witness`
//! returns 0 when a certified witness is found and 2 otherwise, `verify`
//! returns 0 iff every check passes and 1 otherwise. Usage and grammar
//! errors exit with 64, dimension and data errors with 65, unreadable or
//! malformed input with 66.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::cones::{dual_expr, member, pair, witness_search, ConeExpr, MemberConfig, Status};
use crate::error::Error;
use crate::family::{self, PhiLambdaSpec};
use crate::linalg::ComplexMatrix;
use crate::superop::{compose, map_inner, MapDims, SuperOperator};
use crate::verifier::{self, CHECK_IDS};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INPUT: i32 = 66;

#[derive(Debug, Parser)]
#[command(
    name = "mapcone",
    version,
    about = "Cones of positive maps: Choi matrices, duality, membership and witnesses"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples used by membership searches.
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choi matrix of a map given as {"m","n","choi"} or {"kraus":[...]}.
    Choi { input: PathBuf },
    /// Map from a Choi matrix.
    FromChoi {
        matrix: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Φ(X).
    Apply { map: PathBuf, matrix: PathBuf },
    /// The adjoint map Φ*.
    Adjoint { map: PathBuf },
    /// Ψ∘Φ.
    Compose { psi: PathBuf, phi: PathBuf },
    /// Complex inner product ⟨Φ, Ψ⟩.
    Inner { phi: PathBuf, psi: PathBuf },
    /// Decide Φ ∈ C.
    Member { map: PathBuf, cone: String },
    /// Real pairing ⟨Ψ, Φ⟩ of Hermiticity-preserving maps.
    Pair { psi: PathBuf, phi: PathBuf },
    /// Dual cone expression.
    Dual {
        cone: String,
        /// Normalize aliases for these dimensions, as m,n.
        #[arg(long, value_parser = parse_dims)]
        dims: Option<MapDims>,
    },
    /// Search for a certified dual element separating Φ from C.
    Witness { map: PathBuf, cone: String },
    /// Analyse Tr − λ Ad_V from {"v": matrix, "lambda": λ}.
    PhiLambda { spec: PathBuf },
    /// Run the numerical checks.
    Verify {
        /// Dimension pairs m,n; repeat or separate with ';'.
        #[arg(long, value_delimiter = ';', value_parser = parse_dims, default_value = "2,2;2,3;3,3")]
        dims: Vec<MapDims>,
        /// Check id, or "all".
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn parse_dims(s: &str) -> Result<MapDims, String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected m,n, got '{s}'"))?;
    let m: usize = m.trim().parse().map_err(|e| format!("bad m in '{s}': {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("bad n in '{s}': {e}"))?;
    MapDims::new(m, n).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Grammar(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        CliError { code, message: e.to_string() }
    }
}

/// A command's JSON result and exit code.
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError { code: EXIT_DATA, message: e.to_string() })
}

fn ok<T: Serialize>(value: &T) -> Result<Outcome, CliError> {
    Ok(Outcome { body: to_json(value)?, code: 0 })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Unreadable files and malformed JSON are input errors; well-formed JSON
/// that does not describe a valid value is a data error.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let value: serde_json::Value = read_value(path)?;
    from_value(path, value)
}

fn read_value(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn from_value<T: DeserializeOwned>(path: &Path, value: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError { code: EXIT_DATA, message: format!("{}: {e}", path.display()) })
}

/// A map given either directly or by Kraus operators.
fn read_map(path: &Path) -> Result<SuperOperator, CliError> {
    let value = read_value(path)?;
    if let Some(kraus) = value.get("kraus") {
        let ops: Vec<ComplexMatrix> = from_value(path, kraus.clone())?;
        return Ok(SuperOperator::from_kraus(&ops)?);
    }
    from_value(path, value)
}

fn parse_cone(s: &str) -> Result<ConeExpr, CliError> {
    Ok(s.parse::<ConeExpr>()?)
}

fn member_config(g: &GlobalOpts) -> MemberConfig {
    MemberConfig { tol: g.tol, samples: g.samples, seed: g.seed, ..MemberConfig::default() }
}

fn validate(g: &GlobalOpts) -> Result<(), CliError> {
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(CliError { code: EXIT_USAGE, message: format!("--tol must be positive, got {}", g.tol) });
    }
    if g.samples == 0 {
        return Err(CliError { code: EXIT_USAGE, message: "--samples must be at least 1".into() });
    }
    Ok(())
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    validate(g)?;
    match &cli.command {
        Command::Choi { input } => ok(read_map(input)?.choi()),
        Command::FromChoi { matrix, m, n } => {
            let choi: ComplexMatrix = read_json(matrix)?;
            ok(&SuperOperator::from_choi(choi, MapDims::new(*m, *n)?)?)
        }
        Command::Apply { map, matrix } => {
            let phi = read_map(map)?;
            let x: ComplexMatrix = read_json(matrix)?;
            ok(&phi.apply(&x)?)
        }
        Command::Adjoint { map } => ok(&read_map(map)?.adjoint()),
        Command::Compose { psi, phi } => ok(&compose(&read_map(psi)?, &read_map(phi)?)?),
        Command::Inner { phi, psi } => {
            let z = map_inner(&read_map(phi)?, &read_map(psi)?)?;
            ok(&json!({ "re": z.re, "im": z.im }))
        }
        Command::Member { map, cone } => {
            let cone = parse_cone(cone)?;
            let verdict = member(&read_map(map)?, &cone, &member_config(g))?;
            let code = match verdict.status {
                Status::Member => 0,
                Status::NotMember => 1,
                Status::Unknown => 2,
            };
            Ok(Outcome { body: to_json(&verdict)?, code })
        }
        Command::Pair { psi, phi } => ok(&json!({ "pairing": pair(&read_map(psi)?, &read_map(phi)?)? })),
        Command::Dual { cone, dims } => {
            let dual = dual_expr(&parse_cone(cone)?.normalize(*dims)?)?.normalize(*dims)?;
            ok(&dual.to_string())
        }
        Command::Witness { map, cone } => {
            let cone = parse_cone(cone)?;
            let found = witness_search(&read_map(map)?, &cone, &member_config(g))?;
            let code = if found.is_some() { 0 } else { 2 };
            Ok(Outcome { body: to_json(&found)?, code })
        }
        Command::PhiLambda { spec } => {
            let spec: PhiLambdaSpec = read_json(spec)?;
            let spec = PhiLambdaSpec::new(spec.v, spec.lambda)?;
            let dims = spec.dims();
            let cp_threshold = family::cp_threshold(&spec.v)?;
            let thresholds =
                (1..=dims.min()).map(|k| family::k_positivity_threshold(&spec.v, k)).collect::<Result<Vec<_>, _>>()?;
            let k_positive: Vec<bool> = thresholds.iter().map(|t| spec.lambda <= t * (1.0 + g.tol)).collect();
            ok(&json!({
                "m": dims.m,
                "n": dims.n,
                "lambda": spec.lambda,
                "cp_threshold": cp_threshold,
                "completely_positive": spec.lambda <= cp_threshold * (1.0 + g.tol),
                "k_thresholds": thresholds,
                "k_positive": k_positive,
                "map": family::build(&spec),
            }))
        }
        Command::Verify { dims, check, trials } => {
            let ids: Vec<&str> = if check == "all" { Vec::new() } else { vec![check.as_str()] };
            if let Some(id) = ids.first() {
                if !CHECK_IDS.contains(id) {
                    return Err(CliError {
                        code: EXIT_USAGE,
                        message: format!("unknown check '{id}'; expected one of {} or all", CHECK_IDS.join(", ")),
                    });
                }
            }
            let reports = verifier::run_checks(&ids, dims, *trials, g.seed, g.tol)?;
            let code = if reports.iter().all(|r| r.pass) { 0 } else { 1 };
            Ok(Outcome { body: to_json(&reports)?, code })
        }
    }
}

fn write_output(path: Option<&Path>, body: &str) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{body}")
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            writeln!(tmp, "{body}")?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => match write_output(cli.global.output.as_deref(), &outcome.body) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("mapcone: cannot write output: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("mapcone: {}", e.message);
            e.code
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
