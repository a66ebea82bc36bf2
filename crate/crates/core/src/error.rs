use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {0} is outside the open interval (1, inf)")]
    InvalidExponent(f64),

    #[error("malformed multiplier: {0}")]
    MalformedMultiplier(String),

    #[error("multiplier product exceeds the {what} cap of {cap} (got {got})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("multiplier is not invertible: {0}")]
    NotInvertible(String),

    #[error("point t = exp(i*{0}) lies in the open lower half-circle")]
    LowerHalfCircle(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "operator is not Fredholm: symbol nearly vanishes at t = exp(i*{theta}), lambda = {lambda}"
    )]
    NotFredholm { theta: f64, lambda: String },

    #[error("curve junction mismatch {gap:.3e} at {location}")]
    JunctionMismatch { location: String, gap: f64 },

    #[error("winding number is not an integer after refinement (total/2pi = {0})")]
    NonIntegerWinding(f64),

    #[error("curve passes within {0:.3e} of the origin")]
    CurveNearOrigin(f64),

    #[error("separation failed: {0}")]
    Separation(String),

    #[error("oracle precondition unmet: {0}")]
    OraclePrecondition(String),

    #[error("root finder failed: {0}")]
    RootFinder(String),

    #[error("config error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
