use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("strand count {0} is not supported (expected 2..={max})", max = crate::braid::MAX_STRANDS)]
    StrandCount(usize),

    #[error("letter {letter} is out of range for {strands} strands")]
    LetterOutOfRange { letter: i64, strands: usize },

    #[error("invalid permutation images {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("random word alphabet is empty")]
    EmptyAlphabet,

    #[error("generator index {index} is out of range for {strands} strands")]
    GeneratorIndex { index: usize, strands: usize },

    #[error("evaluation point has a zero coordinate at t_{0}")]
    ZeroTau(usize),

    #[error("{0} is not a prime below 2^16")]
    NotPrime(u64),

    #[error("symbolic computation exceeded the cap of {cap} terms")]
    TermCap { cap: usize },

    #[error("exact length search exceeded radius {0}")]
    RadiusCap(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("private word entry {entry} does not index the {len} published words")]
    PrivateIndex { entry: i64, len: usize },

    #[error("malformed instance: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
