use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid fiber ({a}, {b}): {reason}")]
    InvalidFiber {
        a: i64,
        b: i64,
        reason: &'static str,
    },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("{b} is not invertible modulo {a}")]
    NotInvertible { b: i64, a: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("colour {color} is not in I_{r} = {{0, 2, ..., {max}}}", max = .r - 3)]
    ColorOutOfRange { color: i64, r: u32 },

    #[error("non-admissible colouring: {0}")]
    NotAdmissible(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numeric inconsistency: {0}")]
    Numeric(String),

    #[error("triangulation parse error at line {line}: {message}")]
    TriangulationParse { line: usize, message: String },

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidFiber { .. } => "invalid-fiber",
            Error::InvalidSymbol(_) => "invalid-symbol",
            Error::NotInvertible { .. } => "not-invertible",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::ColorOutOfRange { .. } => "color-out-of-range",
            Error::NotAdmissible(_) => "not-admissible",
            Error::Hypothesis(_) => "hypothesis",
            Error::Degenerate(_) => "degenerate",
            Error::Numeric(_) => "numeric-inconsistency",
            Error::TriangulationParse { .. } => "triangulation-parse",
            Error::InvalidTriangulation(_) => "invalid-triangulation",
            Error::Unsupported(_) => "unsupported",
        }
    }
}
