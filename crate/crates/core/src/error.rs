use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("path is not composable: {0}")]
    NotComposable(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("presentation is not special biserial: condition {condition} fails ({witness})")]
    NotSpecialBiserial { condition: String, witness: String },
    #[error("no sign assignment satisfies the sign conditions")]
    NoSignAssignment,
    #[error("path enumeration exceeded the length cap {0}")]
    PathCapExceeded(usize),
    #[error("invalid string `{word}`: {reason}")]
    InvalidString { word: String, reason: String },
    #[error("`{0}` is not a band")]
    NotBand(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("modules over different presentations")]
    MixedPresentations,
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("generic basis: extraction not attempted")]
    GenericBasis,
    #[error("random generation failed: {0}")]
    Generation(String),
}
