use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax error in the expression language, with the byte offset where
/// parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    /// A divisor fell below the pole threshold, or an entire function was
    /// applied to a pole.
    #[error("pole: division by a quantity of magnitude below 1e-300")]
    Pole,
    /// Numerator and denominator vanish together.
    #[error("indeterminate form 0/0")]
    Indeterminate,
    /// Overflow produced a non-finite value.
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("variable z{index} exceeds arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("analytic disc leaves the ball: {0}")]
    Containment(String),
    #[error("malformed series: {0}")]
    Series(String),
}

impl Error {
    /// Whether the failure is numeric (poles, containment) rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Eval(_) | Error::Containment(_))
    }
}
