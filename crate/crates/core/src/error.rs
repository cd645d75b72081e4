use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("parameter {name} = {value} lies outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("state family `{0}` needs a parameter")]
    MissingParameter(String),
    #[error("unknown state family `{0}`")]
    UnknownFamily(String),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("incomplete projector basis: {0}")]
    IncompleteBasis(String),
    #[error("unsupported dimension {0}: construction requires a prime")]
    UnsupportedDimension(usize),
    #[error("orbit is not a SIC (max deviation {0:.3e})")]
    NotASic(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
