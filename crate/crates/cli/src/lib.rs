//! Report assembly for the `cfp` command-line tool.
//!
//! Every subcommand builds a JSON object; text output is rendered from the
//! same object so that both formats carry identical content.

pub mod mutation;

use std::fs;
use std::path::{Path, PathBuf};

use cfp_core::diagonalize::DiagonalizeError;
use cfp_core::distribution::{DistributionError, DEFAULT_SUPPORT_CAP};
use cfp_core::input::{parse_operator_list, InputError};
use cfp_core::lattice::{frame_report, LatticeError};
use cfp_core::oracle::{cross_check, mc_frame_potential, OracleError, VerificationReport};
use cfp_core::pauli::PauliError;
use cfp_core::{check_commuting_set, Analysis, BitVec, CliffordGate, LatticeVolume, PauliString, PipelineError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NON_COMMUTING: u8 = 3;
pub const EXIT_GUARD: u8 = 4;
pub const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {0}")]
    Parse(#[from] InputError),
    #[error("operator {0} is a multiple of the identity")]
    IdentityOperator(usize),
    #[error("operators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Internal(_) => EXIT_IO,
            CliError::Parse(_) | CliError::IdentityOperator(_) => EXIT_PARSE,
            CliError::NonCommuting { .. } => EXIT_NON_COMMUTING,
            CliError::Guard(_) => EXIT_GUARD,
        }
    }

    /// Machine-readable form of the error.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(SCHEMA_VERSION));
        obj.insert("error".into(), json!(self.to_string()));
        obj.insert("exit_code".into(), json!(self.exit_code()));
        match self {
            CliError::Parse(e) => {
                obj.insert("line".into(), json!(e.line));
                obj.insert("column".into(), json!(e.column));
            }
            CliError::NonCommuting { first, second } => {
                obj.insert("pair".into(), json!([first, second]));
            }
            CliError::IdentityOperator(j) => {
                obj.insert("operator".into(), json!(j));
            }
            _ => {}
        }
        Value::Object(obj)
    }
}

impl From<DistributionError> for CliError {
    fn from(e: DistributionError) -> Self {
        match e {
            DistributionError::EnumerationCap { .. } => CliError::Guard(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::QuadratureGuard { .. } => CliError::Guard(e.to_string()),
            LatticeError::Distribution(d) => d.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::QubitGuard { .. } | OracleError::OperatorGuard { .. } => CliError::Guard(e.to_string()),
            OracleError::Distribution(d) => d.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Diagonalize(DiagonalizeError::IdentityOperator(j)) => CliError::IdentityOperator(j),
            PipelineError::Diagonalize(DiagonalizeError::Pauli(PauliError::NonCommuting { first, second })) => {
                CliError::NonCommuting { first, second }
            }
            PipelineError::Distribution(d) => d.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub t_values: Vec<u32>,
    pub verify: bool,
    pub exact: bool,
    pub mc_samples: u64,
    pub seed: u64,
    pub format: OutputFormat,
}

impl AnalysisConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            t_values: vec![1],
            verify: false,
            exact: false,
            mc_samples: 0,
            seed: 0,
            format: OutputFormat::Json,
        }
    }
}

/// A finished report and the exit code it should produce.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, exit_code: EXIT_OK }
    }
}

pub fn read_operators(path: &Path) -> Result<Vec<PauliString>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_operator_list(&text)?)
}

fn commuting_ops(path: &Path) -> Result<Vec<PauliString>, CliError> {
    let ops = read_operators(path)?;
    match check_commuting_set(&ops) {
        Ok(()) => Ok(ops),
        Err(PauliError::NonCommuting { first, second }) => Err(CliError::NonCommuting { first, second }),
        Err(e) => Err(CliError::Internal(e.to_string())),
    }
}

pub fn analyze(path: &Path) -> Result<Analysis, CliError> {
    Ok(Analysis::run(&commuting_ops(path)?)?)
}

fn header(ops: &[PauliString]) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("n".into(), json!(ops[0].n()));
    obj.insert("N".into(), json!(ops.len()));
    obj.insert("commuting".into(), json!(true));
    obj
}

/// Integer as a JSON number when it fits in 64 bits, else as a decimal string.
pub fn integer_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": integer_json(r.numer()), "den": integer_json(r.denom()) })
}

pub fn gate_json(g: &CliffordGate) -> Value {
    match *g {
        CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::X(q) | CliffordGate::Z(q) => {
            json!({ "g": g.name(), "q": q })
        }
        CliffordGate::Cnot { control, target } => json!({ "g": "CNOT", "c": control, "t": target }),
        CliffordGate::Cz(a, b) => json!({ "g": "CZ", "a": a, "b": b }),
    }
}

fn bits(v: &BitVec) -> Value {
    json!(v.to_string())
}

/// `check`: commutation only.
pub fn check_report(path: &Path) -> Result<Outcome, CliError> {
    let ops = commuting_ops(path)?;
    Ok(Outcome::ok(Value::Object(header(&ops))))
}

fn insert_diagonalization(obj: &mut Map<String, Value>, a: &Analysis) {
    let d = &a.diagonalized;
    obj.insert("W".into(), Value::Array(d.circuit.gates().iter().map(gate_json).collect()));
    obj.insert("A".into(), Value::Array(d.a.row_iter().map(bits).collect()));
    obj.insert("s".into(), bits(&d.signs));
}

/// `diagonalize`: the circuit W, the matrix A and the sign vector s.
pub fn diagonalize_report(path: &Path) -> Result<Outcome, CliError> {
    let a = analyze(path)?;
    let mut obj = header(&a.ops);
    insert_diagonalization(&mut obj, &a);
    Ok(Outcome::ok(Value::Object(obj)))
}

fn insert_distribution(obj: &mut Map<String, Value>, a: &Analysis, with_points: bool) -> Result<(), CliError> {
    let d = &a.distribution;
    let support = d.support();
    obj.insert("R".into(), Value::Array((0..support.rank).map(|j| bits(&support.generators.column(j))).collect()));
    obj.insert("t_vec".into(), bits(&support.offset));
    obj.insert("r".into(), json!(d.state_rank()));
    obj.insert("rank_AR".into(), json!(d.rank()));
    obj.insert("support_size".into(), integer_json(&d.support_size()));
    obj.insert("pmf".into(), rational_json(&d.pmf_value()));
    if with_points {
        let points = d.support_points(DEFAULT_SUPPORT_CAP)?;
        obj.insert("support".into(), json!(points));
    }
    let m = &a.moments;
    obj.insert("mean".into(), Value::Array(m.mean.iter().map(rational_json).collect()));
    obj.insert(
        "covariance".into(),
        Value::Array(m.covariance.iter().map(|row| Value::Array(row.iter().map(rational_json).collect())).collect()),
    );
    obj.insert("det_cov".into(), rational_json(&m.det_cov));
    obj.insert("degenerate".into(), json!(m.degenerate));
    Ok(())
}

/// `distribution`: the law of K and its moments.
pub fn distribution_report(path: &Path) -> Result<Outcome, CliError> {
    let a = analyze(path)?;
    let mut obj = header(&a.ops);
    insert_diagonalization(&mut obj, &a);
    insert_distribution(&mut obj, &a, true)?;
    Ok(Outcome::ok(Value::Object(obj)))
}

fn insert_frame_potential(obj: &mut Map<String, Value>, a: &Analysis, config: &AnalysisConfig) -> Result<(), CliError> {
    let report = frame_report(&a.distribution, &config.t_values, config.exact)?;
    let volume = match &report.volume {
        LatticeVolume::Covolume(v) => integer_json(v),
        LatticeVolume::Degenerate { .. } => json!("degenerate"),
    };
    obj.insert("V_U".into(), volume);
    if let LatticeVolume::Degenerate { rank } = report.volume {
        obj.insert("lattice_rank".into(), json!(rank));
    }
    obj.insert("clt_coefficient".into(), json!(report.clt_coefficient));
    let mut values = Vec::with_capacity(report.values.len());
    for v in &report.values {
        let mut entry = Map::new();
        entry.insert("t".into(), json!(v.t));
        entry.insert("clt".into(), json!(v.clt));
        if config.exact {
            entry.insert("exact".into(), json!(v.exact));
        }
        if config.mc_samples > 0 {
            let (estimate, stderr) = mc_frame_potential(&a.ops, v.t, config.mc_samples, config.seed)?;
            entry.insert(
                "monte_carlo".into(),
                json!({ "estimate": estimate, "stderr": stderr, "samples": config.mc_samples, "seed": config.seed }),
            );
        }
        values.push(Value::Object(entry));
    }
    obj.insert("frame_potential".into(), Value::Array(values));
    Ok(())
}

/// `frame-potential`: lattice volume, CLT approximation and optional exact
/// and Monte-Carlo values.
pub fn frame_potential_report(config: &AnalysisConfig) -> Result<Outcome, CliError> {
    let a = analyze(&config.input)?;
    let mut obj = header(&a.ops);
    insert_frame_potential(&mut obj, &a, config)?;
    Ok(Outcome::ok(Value::Object(obj)))
}

pub fn verification_json(report: &VerificationReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut entry = Map::new();
            entry.insert("name".into(), json!(c.name));
            entry.insert("passed".into(), json!(c.passed));
            if !c.passed {
                entry.insert("detail".into(), json!(c.detail));
            }
            Value::Object(entry)
        })
        .collect();
    json!({ "passed": report.passed(), "checks": checks })
}

/// Cross-checks an analysis against the dense oracle.
pub fn verify_analysis(a: &Analysis, mc_samples: u64, seed: u64) -> Result<Outcome, CliError> {
    let report = cross_check(a, mc_samples, seed)?;
    let mut obj = header(&a.ops);
    obj.insert("verification".into(), verification_json(&report));
    let exit_code = if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Outcome { report: Value::Object(obj), exit_code })
}

/// `verify`: every oracle cross-check.
pub fn verify_report(path: &Path, mc_samples: u64, seed: u64) -> Result<Outcome, CliError> {
    verify_analysis(&analyze(path)?, mc_samples, seed)
}

/// Full pipeline report.
pub fn run_report(config: &AnalysisConfig) -> Result<Outcome, CliError> {
    let a = analyze(&config.input)?;
    let mut obj = header(&a.ops);
    insert_diagonalization(&mut obj, &a);
    insert_distribution(&mut obj, &a, false)?;
    insert_frame_potential(&mut obj, &a, config)?;
    let mut exit_code = EXIT_OK;
    if config.verify {
        let report = cross_check(&a, config.mc_samples, config.seed)?;
        if !report.passed() {
            exit_code = EXIT_VERIFY_FAILED;
        }
        obj.insert("verification".into(), verification_json(&report));
    }
    Ok(Outcome { report: Value::Object(obj), exit_code })
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(o) if o.len() == 2 && o.contains_key("num") && o.contains_key("den") => {
            let (num, den) = (text_value(&o["num"]), text_value(&o["den"]));
            if den == "1" {
                num
            } else {
                format!("{num}/{den}")
            }
        }
        Value::Array(items) => format!("[{}]", items.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::Object(o) => {
            let fields: Vec<String> = o.iter().map(|(k, v)| format!("{k}={}", text_value(v))).collect();
            format!("{{{}}}", fields.join(", "))
        }
        other => other.to_string(),
    }
}

/// One `key: value` line per top-level field; gates and rationals get compact
/// forms. Each check and each frame-potential entry gets its own line.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let Some(obj) = report.as_object() else {
        return format!("{report}\n");
    };
    for (key, value) in obj {
        match (key.as_str(), value) {
            ("schema", _) => {}
            ("W", Value::Array(gates)) => {
                let names: Vec<String> = gates
                    .iter()
                    .map(|g| {
                        let name = g["g"].as_str().unwrap_or("?");
                        let args: Vec<String> = g
                            .as_object()
                            .into_iter()
                            .flatten()
                            .filter(|(k, _)| *k != "g")
                            .map(|(_, v)| v.to_string())
                            .collect();
                        format!("{name}({})", args.join(","))
                    })
                    .collect();
                let gates = if names.is_empty() { "(empty)".to_string() } else { names.join(" ") };
                out.push_str(&format!("W: {gates}\n"));
            }
            ("frame_potential", Value::Array(entries)) => {
                for e in entries {
                    out.push_str(&format!("frame_potential: {}\n", text_value(e)));
                }
            }
            ("verification", Value::Object(v)) => {
                out.push_str(&format!(
                    "verification: {}\n",
                    if v["passed"] == json!(true) { "passed" } else { "FAILED" }
                ));
                for c in v["checks"].as_array().into_iter().flatten() {
                    let status = if c["passed"] == json!(true) { "ok" } else { "FAILED" };
                    let detail = c.get("detail").map(|d| format!(" ({})", text_value(d))).unwrap_or_default();
                    out.push_str(&format!("  {}: {status}{detail}\n", text_value(&c["name"])));
                }
            }
            _ => out.push_str(&format!("{key}: {}\n", text_value(value))),
        }
    }
    out
}

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(report),
    }
}
