use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("ill-conditioned system: estimated condition number {cond:.3e} exceeds {limit:.1e}")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("singular matrix at pivot {0}")]
    Singular(usize),
    #[error("singular profile: denominator magnitude {0:.3e}")]
    SingularProfile(f64),
    #[error("range error: {0}")]
    Range(String),
    #[error("shift {re}+{im}i rejected: {reason}")]
    ShiftRejected { re: f64, im: f64, reason: String },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
