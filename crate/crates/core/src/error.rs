use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` cannot commute with itself")]
    SelfPair(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("diagram has no generators")]
    EmptyDiagram,
    #[error("rank {0} exceeds the supported maximum of 64 generators")]
    RankTooLarge(usize),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("malformed word `{0}`")]
    MalformedWord(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("malformed element literal: {0}")]
    MalformedElement(String),
    #[error("parameter for generator `{0}` must be positive")]
    NonPositiveParameter(String),
    #[error("missing parameter for generator `{0}`")]
    MissingParameter(String),
    #[error("parameter {value} for generator `{generator}` is not the square of a rational")]
    NotASquare { generator: String, value: String },
    #[error("ball would exceed the element cap of {0}")]
    BallTooLarge(usize),
    #[error("diagram is reducible; split it into components first")]
    Reducible,
    #[error("parameter lies outside the open convergence region: {0}")]
    OutsideRegion(String),
    #[error("matrix is not self-adjoint")]
    NotSelfAdjoint,
    #[error("ball radius {have} too small, need at least {need}")]
    BallTooSmall { have: usize, need: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
