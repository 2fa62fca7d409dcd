use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponential-sum evaluation at n={n} is not an integer: {value}")]
    NonIntegralValue { n: u32, value: String },

    #[error("no strictly dominant characteristic root for sequence `{name}`")]
    NoDominantRoot { name: String },

    #[error("dominant root of sequence `{name}` is not a positive real number{hint}")]
    ComplexDominantRoot { name: String, hint: String },

    #[error("precision of {bits} bits is insufficient: {what}")]
    PrecisionInsufficient { bits: u32, what: String },

    #[error("degenerate instance at n={n}: sequence values coincide ({values})")]
    DegenerateInstance { n: u32, values: String },

    #[error("root isolation found {found} sign changes, expected {expected}")]
    RootCountMismatch { found: usize, expected: usize },

    #[error("discriminant is zero (repeated root)")]
    ZeroDiscriminant,

    #[error("eta-log system is singular: {0}")]
    SingularSystem(String),

    #[error("asymptotic fit is unstable: {0}")]
    FitUnstable(String),

    #[error("fit sample at n={n} is non-positive")]
    NonPositiveSample { n: u32 },

    #[error("invalid index choice for S-unit form: {0}")]
    IndexChoiceInvalid(String),

    #[error("Baker lower bound violated: log|lambda| = {log_lambda} <= -{bound}")]
    BoundViolated { log_lambda: f64, bound: f64 },

    #[error("invalid sequence specification `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
