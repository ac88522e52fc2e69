use serde_json::{json, Value};
use thiserror::Error;

/// Errors raised by the algebra, enumeration and front-end layers.
///
/// Each variant maps onto a stable machine-readable code (see [`Error::code`])
/// that the CLI and the C ABI report verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message} (expected one of: {})", expected.join(", "))]
    Parse { offset: usize, message: String, expected: Vec<String> },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("composition needs an inner operand with no structures on the empty set (got {constant}); E^(E^Z)-style composites are stuff types that are not structure types")]
    ComposeConstant { constant: String },

    #[error("composition produced a non-integer count {value} at size {size}")]
    NonIntegral { size: usize, value: String },

    #[error("Fock cutoff {cutoff} is too small: {reason}")]
    Cutoff { cutoff: usize, reason: String },

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("fixed-point iteration diverged: coefficient {index} changed after iteration {settled_at}")]
    Diverged { index: usize, settled_at: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("type error: {0}")]
    Type(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable code used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::UnknownIdentifier { .. } => "PARSE",
            Error::ComposeConstant { .. } => "COMPOSE_CONST",
            Error::NonIntegral { .. } => "NON_INTEGRAL",
            Error::Cutoff { .. } => "CUTOFF",
            Error::Size(_) => "SIZE",
            Error::Diverged { .. } => "DIVERGED",
            Error::Input(_) => "INPUT",
            Error::Type(_) => "TYPE",
            Error::Unsupported(_) => "UNSUPPORTED",
        }
    }

    /// `{"error": {"code", "message", ...}}`; parse errors add the byte offset
    /// and the expected tokens.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "code": self.code(), "message": self.to_string() });
        match self {
            Error::Parse { offset, expected, .. } => {
                body["offset"] = json!(offset);
                body["expected"] = json!(expected);
            }
            Error::UnknownIdentifier { offset, name } => {
                body["offset"] = json!(offset);
                body["identifier"] = json!(name);
            }
            _ => {}
        }
        json!({ "error": body })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
