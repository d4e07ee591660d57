use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in {op} at t = {t}")]
    Domain { op: &'static str, t: f64 },

    #[error("quadrature failed on [{a}, {b}]: {reason}")]
    Quadrature { a: f64, b: f64, reason: String },

    #[error("curvature ell vanishes at t = {t}")]
    VanishingCurvature { t: f64 },

    #[error("frame violation at node {node}: {what} residual {residual:e}")]
    FrameViolation {
        node: usize,
        what: &'static str,
        residual: f64,
    },

    #[error("missing derivative data: {0}")]
    MissingDerivatives(&'static str),

    #[error("Frobenius analysis failed: {0}")]
    Frobenius(String),

    #[error("inconsistent data at t = {t}: {reason}")]
    Inconsistent { t: f64, reason: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Parse and configuration failures, as opposed to numerical ones.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::InvalidArgument(_)
                | Error::Config { .. }
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}
