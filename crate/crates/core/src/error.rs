use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid feature identifier `{0}`")]
    InvalidFeatureName(String),
    #[error("duplicate feature `{0}`")]
    DuplicateFeature(String),
    #[error("feature space must declare at least one feature")]
    EmptySpace,
    #[error("feature space has {0} features; at most 64 are supported")]
    TooManyFeatures(usize),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{0}` is not in the support of the partial configuration")]
    NotInSupport(String),
    #[error("operands belong to different feature spaces or engines")]
    SpaceMismatch,
    #[error("oracle-too-large: {features} features exceed the oracle limit of {limit}")]
    OracleTooLarge { features: usize, limit: usize },
    #[error("effect set is not a subset of the valid configurations")]
    EffectNotInValid,
    #[error("the set of valid configurations is empty")]
    EmptyValid,
    #[error("the effect set is empty")]
    EmptyEffect,
    #[error("`{0}` is not a feature cause")]
    NotACause(String),
    #[error("not-an-effect-instance: `{0}` is not in the effect set")]
    NotAnEffectInstance(String),
    #[error("no-causes: the effect has no feature causes")]
    NoCauses,
    #[error("cover-too-large: {candidates} candidate causes exceed the exact cover limit of {limit}")]
    CoverTooLarge { candidates: usize, limit: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown feature `{name}` at {line}:{column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("duplicate feature `{name}` in configuration on line {line}")]
    DuplicateInConfig { name: String, line: usize },
    #[error("invalid decimal `{0}`")]
    InvalidDecimal(String),
    #[error("measurement table: {0}")]
    Table(String),
    #[error("measurement table does not cover valid configuration `{0}`")]
    TableIncomplete(String),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
}
