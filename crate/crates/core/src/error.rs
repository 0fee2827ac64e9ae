use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A selection that does not belong to the instance's feasible family.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("family enumeration exceeded the cap of {cap} members")]
    Resource { cap: usize },

    /// The benchmark program has no feasible distribution.
    ///
    /// `certificate` holds one multiplier per constraint row (fairness rows
    /// first, then the normalization row) proving infeasibility: the
    /// combination has a nonnegative coefficient on every super arm and a
    /// negative right-hand side.
    #[error("benchmark infeasible (phase-one residual {residual:.3e})")]
    Infeasible { certificate: Vec<f64>, residual: f64 },

    /// No strictly positive tightness slack exists for the instance.
    #[error("fairness targets infeasible: maximum slack {delta_max:.6e} is not positive")]
    InfeasibleFairness { delta_max: f64 },

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("diagnostic unavailable: {0}")]
    DiagnosticUnavailable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible { .. } | Error::InfeasibleFairness { .. } => 3,
            _ => 2,
        }
    }
}
