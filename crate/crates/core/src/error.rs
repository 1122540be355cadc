use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator vanished. Carries the function name and the offending arguments.
    #[error("pole in {func}({x}, {y})")]
    Pole { func: &'static str, x: String, y: String },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// lambda_2 vanished at a point where the Bethe-vector normalisation divides by it.
    #[error("zero weight: lambda_2({0}) = 0")]
    ZeroWeight(String),

    #[error("could not draw {wanted} generic parameters after {attempts} attempts")]
    Exhaustion { wanted: usize, attempts: usize },

    #[error("vacuum is not an eigenvector of T_{i}{i}")]
    NotAnEigenvector { i: usize },

    #[error("cardinality error: {0}")]
    Cardinality(String),

    #[error("newton iteration did not converge from seed {seed} (residual {residual:e})")]
    NoConvergence { seed: u64, residual: f64 },

    #[error("config error in `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn pole(func: &'static str, x: impl std::fmt::Display, y: impl std::fmt::Display) -> Self {
        Error::Pole { func, x: x.to_string(), y: y.to_string() }
    }

    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { key: key.into(), msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
