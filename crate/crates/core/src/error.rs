use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("({p}, {q}) is not a coprime pair with 0 < p < q")]
    BadFraction { p: i64, q: i64 },
    #[error("weight {0} is not in the open interval (0, 1)")]
    WeightOutOfRange(String),
    #[error("continued fraction digits must be non-empty and >= 2")]
    BadDigits,
    #[error("chain has no -1 curve to contract")]
    NoExceptionalCurve,
    #[error("chain [-1] contracts to a point, not a curve")]
    ContractsToPoint,
    #[error("invalid approximant chain: {0}")]
    BadChain(String),
    #[error("invalid levels: {0}")]
    BadLevels(String),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("u_{index} = {value} is not positive")]
    NonPositiveU { index: usize, value: String },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("monopole data carries no approximant chain")]
    MissingChain,
    #[error("invalid insertion position {0}")]
    BadPosition(usize),
    #[error("unknown section id {0:?}")]
    UnknownSection(String),
    #[error("invalid surface: {0}")]
    BadSurface(String),
    #[error("no candidate sections available for classification")]
    NoCandidates,
    #[error("rotation axis is the zero vector")]
    ZeroAxis,
    #[error("gluing matrix requires a strictly polystable surface")]
    NotStrictlyPolystable,
    #[error("point lies outside the half-space (x = {0})")]
    OutsideHalfSpace(f64),
    #[error("frame determinant {0} is not positive at this point")]
    DegenerateFrame(f64),
    #[error("step {h} is too large for the sampling region")]
    StepTooLarge { h: f64 },
    #[error("degenerate sample set: {0}")]
    DegenerateSamples(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
