use crate::pbf::VarId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("assignment has no value for variable {0}")]
    MissingVariable(VarId),

    #[error("coefficient {0} is not an integer")]
    NonIntegerCoefficient(f64),

    #[error("variable {0} has no upper bound")]
    MissingUpperBound(VarId),

    #[error("variable {0} is used but not declared")]
    UndeclaredVariable(VarId),

    #[error("constraint cannot be satisfied: {0}")]
    Unsatisfiable(String),

    #[error("constraint bound {bound} exceeds the configured cap {cap}")]
    BoundTooLarge { bound: u64, cap: u64 },

    #[error("penalty coefficients reach {magnitude:e}, beyond exact double precision")]
    InexactPenalty { magnitude: f64 },

    #[error("constraint is not linear (degree {0})")]
    NonLinearConstraint(usize),

    #[error("invalid penalty parameters: {0}")]
    InvalidPenalty(String),

    #[error("penalty coefficient must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("assignment shape does not match instance: {0}")]
    ShapeMismatch(String),

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("nothing to average: empty sample list")]
    EmptySamples,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
