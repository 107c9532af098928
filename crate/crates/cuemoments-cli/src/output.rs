use serde_json::{json, Value};

use cuemoments::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DIAGNOSTICS: i32 = 3;
pub const EXIT_IDENTITY: i32 = 4;
pub const EXIT_INTERNAL: i32 = 1;

/// What a command produced before manifest and formatting.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub exit: i32,
    /// Header and rows for `--format csv`, table commands only.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Outcome {
    pub fn ok(result: Value, summary: impl Into<String>) -> Self {
        Outcome { result, summary: summary.into(), exit: EXIT_OK, table: None }
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, kind: "invalid_argument", message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message }, "exit_code": self.code })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::ArityBoundExceeded { .. } => "arity_bound_exceeded",
            Error::BoundExceeded(_) => "bound_exceeded",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::UnsupportedOddExponent(_) => "unsupported_odd_exponent",
            Error::Unsupported(_) => "unsupported_parameter",
            Error::ConstraintViolation(_) => "constraint_violation",
            Error::NonIntegrable(_) => "non_integrable",
            Error::TooFewSamplesForBlocks { .. } => "too_few_samples_for_blocks",
            Error::Parse(_) => "parse_error",
            Error::PoleAtEvaluationPoint(_) => "pole_at_evaluation_point",
            Error::QuadratureToleranceNotMet(_) => "quadrature_tolerance_not_met",
            Error::PrecisionUnachievable(_) => "precision_unachievable",
            _ => "internal",
        };
        let code = match kind {
            "quadrature_tolerance_not_met" | "precision_unachievable" | "internal" => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        CliError { code, kind, message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { code: EXIT_INTERNAL, kind: "internal", message: e.to_string() }
    }
}

pub fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
        .collect::<Vec<_>>()
        .join(",")
}
