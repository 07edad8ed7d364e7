//! Command drivers behind the `opradius` binary, together with the JSON
//! matrix file and report envelope formats.
//!
//! Every command returns a [`ReportEnvelope`]; the binary prints it to
//! stdout and exits with [`ReportEnvelope::exit_code`]. Errors are also
//! reported as envelopes so that no outcome is conveyed by the exit code
//! alone.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::geometry::{is_orthogonal_with, is_parallel_with, GeometryOptions, OrthogonalityReport, ParallelismReport};
use crate::linalg::{c, ComplexMatrix};
use crate::oracle::{verify_orthogonality, verify_parallelism, GridSpec, OracleVerdict, DEFAULT_LAMBDA_POINTS};
use crate::radius::{rho_radius, RadiusCertificate, RhoParam, DEFAULT_RADIUS_TOL};
use crate::selftest::{run_selftest, SelftestReport};

/// Exit code for a positive answer (or a completed radius computation).
pub const EXIT_OK: i32 = 0;
/// Exit code for a negative answer or a failed selftest.
pub const EXIT_NEGATIVE: i32 = 1;
/// Exit code for an unreadable or malformed matrix file.
pub const EXIT_MALFORMED: i32 = 2;
/// Exit code for an invalid ρ, tolerance, grid size or trial count.
pub const EXIT_INVALID_PARAMETER: i32 = 3;
/// Exit code for matrices of different sizes.
pub const EXIT_DIMENSION_MISMATCH: i32 = 4;

/// Default selftest grid. Smaller than the cross-check grid because the
/// selftest runs one γ-grid per trial.
pub const SELFTEST_GRID: (usize, usize) = (24, 48);

#[derive(Debug, Parser)]
#[command(
    name = "opradius",
    version,
    about = "Operator radii w_rho of complex matrices, orthogonality and parallelism"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute w_rho(A) with an attaining-vector certificate.
    Radius {
        path: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide whether A is w_rho-orthogonal to B (exit 0 = orthogonal).
    Orthogonal {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Number of equispaced angles checked for witnesses.
        #[arg(long, default_value_t = crate::geometry::DEFAULT_THETA_SAMPLES)]
        theta_samples: usize,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Decide whether A and B are w_rho-parallel (exit 0 = parallel).
    Parallel {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Run the randomized invariant and oracle suite.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Radial points of the γ-grid oracle.
        #[arg(long)]
        grid_radial: Option<usize>,
        /// Angular points of the γ-grid oracle.
        #[arg(long)]
        grid_angular: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Radius parameter in [1e-3, 2].
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub rho: f64,
    /// Decision tolerance; defaults scale with the radii involved.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Also run the brute-force grid oracle and report its verdict.
    #[arg(long)]
    pub cross_check: bool,
    /// Radial points of the γ-grid oracle.
    #[arg(long)]
    pub grid_radial: Option<usize>,
    /// Angular points of the γ-grid oracle, or the λ-grid size for
    /// parallelism.
    #[arg(long)]
    pub grid_angular: Option<usize>,
}

/// One input matrix as named on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputRef {
    pub path: String,
    pub label: Option<String>,
    pub n: usize,
}

/// Parameters echoed back so that a report can be reproduced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_radial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_angular: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<usize>,
}

/// Payload of an envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandResult {
    Radius(RadiusCertificate),
    Orthogonality(OrthogonalityReport),
    Parallelism(ParallelismReport),
    Selftest(SelftestReport),
    Error { message: String },
}

/// Machine-readable report printed by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Vec<InputRef>,
    pub rho: Option<f64>,
    pub tolerance: Option<f64>,
    pub parameters: Parameters,
    pub result: CommandResult,
    pub cross_check: Option<OracleVerdict>,
    pub exit_code: i32,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serialization cannot fail") + "\n"
    }

    fn error(command: &str, err: &CliError) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            rho: None,
            tolerance: None,
            parameters: Parameters::default(),
            result: CommandResult::Error {
                message: err.message.clone(),
            },
            cross_check: None,
            exit_code: err.code,
        }
    }
}

/// An error together with the exit code it maps to.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn malformed(path: &Path, message: impl AsRef<str>) -> Self {
        Self {
            code: EXIT_MALFORMED,
            message: format!("{}: {}", path.display(), message.as_ref()),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID_PARAMETER,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::DimensionMismatch(_) => EXIT_DIMENSION_MISMATCH,
            Error::NonFinite(_) | Error::Empty(_) | Error::NotSquare { .. } => EXIT_MALFORMED,
            _ => EXIT_INVALID_PARAMETER,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

/// A parsed matrix file.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub label: Option<String>,
}

impl MatrixFile {
    /// Parses `{n, entries: [[re, im], ...], label?}`. Error messages name
    /// the offending field and, for entries, the index.
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::malformed(path, format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::malformed(path, "top level must be an object"))?;
        let n = match obj.get("n") {
            None => return Err(CliError::malformed(path, "missing field `n`")),
            Some(v) => v
                .as_u64()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::malformed(path, "field `n` must be a positive integer"))?,
        };
        let n = usize::try_from(n).map_err(|_| CliError::malformed(path, "field `n` is too large"))?;
        let entries = match obj.get("entries") {
            None => return Err(CliError::malformed(path, "missing field `entries`")),
            Some(v) => v
                .as_array()
                .ok_or_else(|| CliError::malformed(path, "field `entries` must be an array"))?,
        };
        let expected = n
            .checked_mul(n)
            .ok_or_else(|| CliError::malformed(path, "field `n` is too large"))?;
        if entries.len() != expected {
            return Err(CliError::malformed(
                path,
                format!(
                    "field `entries` has {} elements, expected n^2 = {expected}",
                    entries.len()
                ),
            ));
        }
        let mut data = Vec::with_capacity(expected);
        for (k, e) in entries.iter().enumerate() {
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| CliError::malformed(path, format!("field `entries[{k}]` must be a pair [re, im]")))?;
            let mut parts = [0.0; 2];
            for (slot, v) in parts.iter_mut().zip(pair) {
                *slot = v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| {
                    CliError::malformed(path, format!("field `entries[{k}]` must hold finite numbers"))
                })?;
            }
            data.push(c(parts[0], parts[1]));
        }
        let label = match obj.get("label") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(CliError::malformed(path, "field `label` must be a string")),
        };
        let matrix = ComplexMatrix::new(n, n, data).map_err(|e| CliError::malformed(path, e.to_string()))?;
        Ok(Self { n, matrix, label })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::malformed(path, format!("cannot read file: {e}")))?;
        Self::parse(&text, path)
    }

    /// Serializes a matrix in the file format.
    pub fn to_json(matrix: &ComplexMatrix, label: Option<&str>) -> String {
        let n = matrix.rows();
        let entries: Vec<[f64; 2]> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let z = matrix[(i, j)];
                [z.re, z.im]
            })
            .collect();
        let mut obj = serde_json::json!({ "n": n, "entries": entries });
        if let Some(l) = label {
            obj["label"] = Value::String(l.to_string());
        }
        obj.to_string()
    }

    fn input_ref(&self, path: &Path) -> InputRef {
        InputRef {
            path: path.display().to_string(),
            label: self.label.clone(),
            n: self.n,
        }
    }
}

fn rho_param(rho: f64) -> Result<RhoParam, CliError> {
    RhoParam::new(rho).map_err(|e| CliError::invalid(format!("--rho: {e}")))
}

fn check_tol(tol: Option<f64>) -> Result<(), CliError> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::invalid(format!(
            "--tol: must be positive and finite, got {t}"
        ))),
        _ => Ok(()),
    }
}

fn grid_spec(radial: Option<usize>, angular: Option<usize>, default: (usize, usize)) -> Result<GridSpec, CliError> {
    let grid = GridSpec {
        radial_points: radial.unwrap_or(default.0),
        angular_points: angular.unwrap_or(default.1),
        ..GridSpec::default()
    };
    if grid.radial_points == 0 {
        return Err(CliError::invalid("--grid-radial: must be at least 1"));
    }
    if grid.angular_points == 0 {
        return Err(CliError::invalid("--grid-angular: must be at least 1"));
    }
    Ok(grid)
}

fn read_pair(a: &Path, b: &Path) -> Result<(MatrixFile, MatrixFile), CliError> {
    let fa = MatrixFile::read(a)?;
    let fb = MatrixFile::read(b)?;
    if fa.n != fb.n {
        return Err(CliError {
            code: EXIT_DIMENSION_MISMATCH,
            message: format!(
                "dimension mismatch: {} has n = {}, {} has n = {}",
                a.display(),
                fa.n,
                b.display(),
                fb.n
            ),
        });
    }
    Ok((fa, fb))
}

pub fn cmd_radius(path: &Path, rho: f64, tol: Option<f64>) -> Result<ReportEnvelope, CliError> {
    let rho = rho_param(rho)?;
    check_tol(tol)?;
    let file = MatrixFile::read(path)?;
    let tolerance = tol.unwrap_or(DEFAULT_RADIUS_TOL);
    let cert = rho_radius(&file.matrix, rho, tolerance)?;
    Ok(ReportEnvelope {
        command: "radius".into(),
        inputs: vec![file.input_ref(path)],
        rho: Some(rho.value()),
        tolerance: Some(tolerance),
        parameters: Parameters::default(),
        result: CommandResult::Radius(cert),
        cross_check: None,
        exit_code: EXIT_OK,
    })
}

pub fn cmd_orthogonal(
    a: &Path,
    b: &Path,
    rho: f64,
    tol: Option<f64>,
    theta_samples: usize,
    oracle: &OracleArgs,
) -> Result<ReportEnvelope, CliError> {
    let rho = rho_param(rho)?;
    check_tol(tol)?;
    if theta_samples == 0 {
        return Err(CliError::invalid("--theta-samples: must be at least 1"));
    }
    let grid = grid_spec(oracle.grid_radial, oracle.grid_angular, (64, 128))?;
    let (fa, fb) = read_pair(a, b)?;
    let opts = GeometryOptions {
        theta_samples,
        ..GeometryOptions::default()
    };
    let report = is_orthogonal_with(&fa.matrix, &fb.matrix, rho, tol, &opts)?;
    let cross_check = if oracle.cross_check {
        Some(verify_orthogonality(&fa.matrix, &fb.matrix, &report, &grid)?)
    } else {
        None
    };
    Ok(ReportEnvelope {
        command: "orthogonal".into(),
        inputs: vec![fa.input_ref(a), fb.input_ref(b)],
        rho: Some(rho.value()),
        tolerance: Some(report.tolerance),
        parameters: Parameters {
            theta_samples: Some(theta_samples),
            grid_radial: oracle.cross_check.then_some(grid.radial_points),
            grid_angular: oracle.cross_check.then_some(grid.angular_points),
            ..Parameters::default()
        },
        exit_code: if report.orthogonal { EXIT_OK } else { EXIT_NEGATIVE },
        result: CommandResult::Orthogonality(report),
        cross_check,
    })
}

pub fn cmd_parallel(
    a: &Path,
    b: &Path,
    rho: f64,
    tol: Option<f64>,
    oracle: &OracleArgs,
) -> Result<ReportEnvelope, CliError> {
    let rho = rho_param(rho)?;
    check_tol(tol)?;
    let points = oracle.grid_angular.unwrap_or(DEFAULT_LAMBDA_POINTS);
    if points == 0 {
        return Err(CliError::invalid("--grid-angular: must be at least 1"));
    }
    let (fa, fb) = read_pair(a, b)?;
    let report = is_parallel_with(&fa.matrix, &fb.matrix, rho, tol, &GeometryOptions::default())?;
    let cross_check = if oracle.cross_check {
        Some(verify_parallelism(&fa.matrix, &fb.matrix, &report, points)?)
    } else {
        None
    };
    Ok(ReportEnvelope {
        command: "parallel".into(),
        inputs: vec![fa.input_ref(a), fb.input_ref(b)],
        rho: Some(rho.value()),
        tolerance: Some(report.tolerance),
        parameters: Parameters {
            grid_angular: oracle.cross_check.then_some(points),
            ..Parameters::default()
        },
        exit_code: if report.parallel { EXIT_OK } else { EXIT_NEGATIVE },
        result: CommandResult::Parallelism(report),
        cross_check,
    })
}

pub fn cmd_selftest(
    seed: u64,
    trials: usize,
    grid_radial: Option<usize>,
    grid_angular: Option<usize>,
) -> Result<ReportEnvelope, CliError> {
    if trials == 0 {
        return Err(CliError::invalid("--trials: must be at least 1"));
    }
    let grid = grid_spec(grid_radial, grid_angular, SELFTEST_GRID)?;
    let report = run_selftest(seed, trials, &grid)?;
    Ok(ReportEnvelope {
        command: "selftest".into(),
        inputs: Vec::new(),
        rho: None,
        tolerance: None,
        parameters: Parameters {
            grid_radial: Some(grid.radial_points),
            grid_angular: Some(grid.angular_points),
            seed: Some(seed),
            trials: Some(trials),
            ..Parameters::default()
        },
        exit_code: if report.passed { EXIT_OK } else { EXIT_NEGATIVE },
        result: CommandResult::Selftest(report),
        cross_check: None,
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Radius { .. } => "radius",
        Command::Orthogonal { .. } => "orthogonal",
        Command::Parallel { .. } => "parallel",
        Command::Selftest { .. } => "selftest",
    }
}

/// Runs a parsed command. Errors become error envelopes carrying their
/// exit code.
pub fn execute(cli: &Cli) -> ReportEnvelope {
    let outcome = match &cli.command {
        Command::Radius { path, common } => cmd_radius(path, common.rho, common.tol),
        Command::Orthogonal {
            a,
            b,
            common,
            theta_samples,
            oracle,
        } => cmd_orthogonal(a, b, common.rho, common.tol, *theta_samples, oracle),
        Command::Parallel { a, b, common, oracle } => cmd_parallel(a, b, common.rho, common.tol, oracle),
        Command::Selftest {
            seed,
            trials,
            grid_radial,
            grid_angular,
        } => cmd_selftest(*seed, *trials, *grid_radial, *grid_angular),
    };
    outcome.unwrap_or_else(|err| ReportEnvelope::error(command_name(&cli.command), &err))
}

/// Entry point shared by the binary and the tests: parses `args`, writes
/// the envelope to `stdout` and diagnostics to `stderr`, and returns the
/// exit code. Usage errors exit with [`EXIT_INVALID_PARAMETER`].
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID_PARAMETER
            } else {
                EXIT_OK
            };
        }
    };
    let envelope = execute(&cli);
    if let CommandResult::Error { message } = &envelope.result {
        let _ = writeln!(stderr, "error: {message}");
    }
    if let CommandResult::Selftest(report) = &envelope.result {
        let _ = write!(stderr, "{}", report.table());
    }
    let _ = stdout.write_all(envelope.to_json().as_bytes());
    envelope.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<MatrixFile, CliError> {
        MatrixFile::parse(text, Path::new("m.json"))
    }

    #[test]
    fn parses_matrix_file() {
        let f = parse(r#"{"n": 2, "entries": [[1,0],[0,1],[2,-1],[0,0]], "label": "x"}"#).unwrap();
        assert_eq!(f.n, 2);
        assert_eq!(f.label.as_deref(), Some("x"));
        assert_eq!(f.matrix[(1, 0)], c(2.0, -1.0));
        let back = parse(&MatrixFile::to_json(&f.matrix, Some("x"))).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_files_name_the_field() {
        let cases = [
            ("[1]", "object"),
            (r#"{"entries": []}"#, "`n`"),
            (r#"{"n": 0, "entries": []}"#, "`n`"),
            (r#"{"n": 1.5, "entries": []}"#, "`n`"),
            (r#"{"n": 1}"#, "`entries`"),
            (r#"{"n": 2, "entries": [[1,0]]}"#, "`entries`"),
            (r#"{"n": 1, "entries": [[1]]}"#, "`entries[0]`"),
            (r#"{"n": 1, "entries": [["a",0]]}"#, "`entries[0]`"),
            (r#"{"n": 1, "entries": [[1,0]], "label": 3}"#, "`label`"),
            ("{", "invalid JSON"),
        ];
        for (text, needle) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.code, EXIT_MALFORMED, "{text}");
            assert!(err.message.contains(needle), "{text}: {}", err.message);
        }
    }

    #[test]
    fn error_codes_map_from_library_errors() {
        assert_eq!(
            CliError::from(Error::DimensionMismatch("x".into())).code,
            EXIT_DIMENSION_MISMATCH
        );
        assert_eq!(CliError::from(Error::RhoOutOfRange(3.0)).code, EXIT_INVALID_PARAMETER);
        assert_eq!(CliError::from(Error::NonFinite("x".into())).code, EXIT_MALFORMED);
    }

    #[test]
    fn invalid_parameters_exit_three() {
        assert_eq!(rho_param(0.0).unwrap_err().code, EXIT_INVALID_PARAMETER);
        assert_eq!(rho_param(2.5).unwrap_err().code, EXIT_INVALID_PARAMETER);
        assert_eq!(rho_param(1e-4).unwrap_err().code, EXIT_INVALID_PARAMETER);
        assert_eq!(check_tol(Some(-1.0)).unwrap_err().code, EXIT_INVALID_PARAMETER);
        assert_eq!(cmd_selftest(1, 0, None, None).unwrap_err().code, EXIT_INVALID_PARAMETER);
        assert_eq!(
            grid_spec(Some(0), None, (1, 1)).unwrap_err().code,
            EXIT_INVALID_PARAMETER
        );
    }
}
