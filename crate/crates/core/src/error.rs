use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the shift is empty: no infinite legal point exists")]
    EmptyShift,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("cannot tokenize `{0}` over the alphabet")]
    UnknownSymbol(String),
    #[error("words must be nonempty")]
    EmptyWord,
    #[error("word `{0}` is not in the language of the shift")]
    IllegalWord(String),
    #[error("the shift is not transitive")]
    NotTransitive,
    #[error("the shift is finite")]
    FiniteShift,
    #[error("the shift map is not surjective on this presentation (vertex `{0}` has no incoming edge)")]
    NotSurjective(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("construction stuck at level {level}: {reason}")]
    ConstructionStuck { level: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for reports and exit codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyShift => "EmptyShift",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownSymbol(_) => "UnknownSymbol",
            Error::EmptyWord => "EmptyWord",
            Error::IllegalWord(_) => "IllegalWord",
            Error::NotTransitive => "NotTransitive",
            Error::FiniteShift => "FiniteShift",
            Error::NotSurjective(_) => "NotSurjective",
            Error::NotApplicable(_) => "NotApplicable",
            Error::HypothesisUnmet(_) => "HypothesisUnmet",
            Error::ConstructionStuck { .. } => "ConstructionStuck",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
