use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation hit a pole of the dielectric function.
    #[error("pole of the Drude dielectric function at {0}")]
    Pole(String),

    /// Evaluation hit a removable-by-nothing singularity (ε = 0, Ω = 0, ...).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A tabulated model was queried outside its table.
    #[error("{value} is outside the table range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    /// A G table file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Bisection was started on an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// Newton derivative vanished.
    #[error("singular derivative at {0}")]
    SingularJacobian(String),

    /// A root finder did not reach its tolerance.
    #[error("did not converge: {0}")]
    NotConverged(String),

    /// An operation was called on a value in the wrong state.
    #[error("invalid state: {0}")]
    State(String),

    /// A request failed validation before any computation.
    #[error("invalid request: {0}")]
    Validation(String),

    /// Every point of a sweep failed.
    #[error("all {} sweep points failed", .0.len())]
    EmptySweep(Vec<(f64, String)>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
