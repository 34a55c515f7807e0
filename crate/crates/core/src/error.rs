use std::path::PathBuf;

use thiserror::Error;

use crate::expr::Span;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {}, column {}: {message}", .span.line, .span.col)]
    Syntax { span: Span, message: String },
    #[error("unknown identifier `{name}` at line {}, column {}", .span.line, .span.col)]
    UnknownIdentifier { span: Span, name: String },
    #[error("function `{name}` takes 1 argument but {found} were given (line {}, column {})", .span.line, .span.col)]
    Arity { span: Span, name: String, found: usize },
    #[error("domain error in `{op}` at line {}, column {}: {message}", .span.line, .span.col)]
    Domain {
        span: Span,
        op: &'static str,
        message: String,
    },
    #[error("degenerate metric at {point:?}: {detail}")]
    DegenerateMetric { point: [f64; 4], detail: String },
    #[error("almost Hermitian axiom `{axiom}` violated at {point:?}: residual {residual:e} > tolerance {tolerance:e}")]
    AxiomViolation {
        axiom: &'static str,
        point: [f64; 4],
        residual: f64,
        tolerance: f64,
    },
    #[error("point {point:?} lies outside the chart domain of `{model}`")]
    OutOfDomain { model: String, point: [f64; 4] },
    #[error("model `{0}` is not closed; index integrals are undefined")]
    NotClosed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("holomorphic sectional curvature direction must be non-zero")]
    ZeroDirection,
    #[error("constant holomorphic sectional curvature not verified: {0}")]
    ConstancyNotVerified(String),
    #[error("curvature symmetry violated ({what}): residual {residual:e}")]
    SymmetryViolation { what: &'static str, residual: f64 },
    #[error("model file {path}: {message}")]
    ModelFile { path: PathBuf, message: String },
    #[error("in {field}: {source}")]
    InField {
        field: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
