use thiserror::Error;

/// Errors raised across the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (boolean domains need 1 <= n <= 30)")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight budget exceeded: sum of |weights| + |bias| = {sum} > {budget}")]
    WeightBudgetExceeded { sum: u64, budget: u64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("margin sampler gave up after {attempts} rejected draws (infeasible bound/margin)")]
    InfeasibleMargin { attempts: u64 },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("locality violation: {0}")]
    LocalityViolation(String),

    #[error("counterexample recheck failed at {point:?}: strictness tolerance {tau:e} too small for this instance")]
    ToleranceTooSmall { point: Vec<f64>, tau: f64 },

    #[error("target outside the learner's class: {0}")]
    TargetOutsideClass(String),

    #[error("search budget exceeded; best lower bound found is {lower_bound}")]
    BudgetExceeded { lower_bound: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
