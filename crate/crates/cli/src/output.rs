use std::fmt::Write as _;
use std::process::ExitCode;

use iwexp::io::vector_to_json;
use iwexp::scalar::format_rational;
use iwexp::{AlgVector, Error, LieAlgebra, ValidationReport};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::Format;

/// Result of a command that ran to completion. `ok = false` means a
/// mathematical check failed (exit 1).
pub struct Outcome {
    pub ok: bool,
    pub text: String,
    pub machine: Value,
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Core(Error),
    /// Input algebra fails the Lie axioms.
    NotLie(ValidationReport),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Io(_) => "IoError",
            CliError::Core(e) => e.name(),
            CliError::NotLie(_) => "InvalidAlgebra",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::NotLie(r) => format!("input is not a Lie algebra: {}", r.violations[0]),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Core(e) if e.is_domain() => 1,
            CliError::Core(_) => 2,
            CliError::NotLie(_) => 1,
        }
    }
}

pub fn report_json(report: &ValidationReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn emit(format: Format, result: Result<Outcome, CliError>) -> ExitCode {
    match (format, result) {
        (Format::Text, Ok(out)) => {
            print!("{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        (Format::Machine, Ok(out)) => {
            println!("{}", serde_json::to_string_pretty(&out.machine).expect("serializable"));
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        (Format::Text, Err(e)) => {
            eprintln!("error: {}: {}", e.name(), e.message());
            if let CliError::NotLie(r) = &e {
                eprintln!("{r}");
            }
            ExitCode::from(e.exit_code())
        }
        (Format::Machine, Err(e)) => {
            let mut doc = json!({
                "error": { "name": e.name(), "message": e.message() },
                "report": { "ok": false },
            });
            if let CliError::NotLie(r) = &e {
                doc["report"] = report_json(r);
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            ExitCode::from(e.exit_code())
        }
    }
}

/// `X1 - 1/2 X3`, or `0`.
pub fn combo(names: &[String], v: &AlgVector) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(&v.0) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(out, "{} ", format_rational(&mag));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Nonzero brackets `[Xa, Xb] = ...` for `a < b`.
pub fn bracket_table(alg: &LieAlgebra) -> String {
    let names = alg.names();
    let mut out = String::new();
    for a in 0..alg.dim() {
        for b in a + 1..alg.dim() {
            let v = alg.bracket(&alg.basis_vector(a), &alg.basis_vector(b)).expect("basis vectors");
            if !v.is_zero() {
                let _ = writeln!(out, "  [{}, {}] = {}", names[a], names[b], combo(names, &v));
            }
        }
    }
    if out.is_empty() {
        out.push_str("  (abelian)\n");
    }
    out
}

/// `v0; v1; ...` in the literal syntax accepted on input.
pub fn literal(vs: &[AlgVector]) -> String {
    let parts: Vec<String> = vs
        .iter()
        .map(|v| v.0.iter().map(format_rational).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", parts.join("; "))
}

pub fn vectors_json(vs: &[AlgVector]) -> Value {
    Value::Array(vs.iter().map(vector_to_json).collect())
}
