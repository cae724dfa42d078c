use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{name}` at token {position}")]
    UnknownGenerator { name: String, position: usize },

    #[error("malformed token `{token}` at position {position}: {reason}")]
    MalformedToken {
        token: String,
        position: usize,
        reason: &'static str,
    },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("no image given for generator `{0}`")]
    MissingImage(String),

    #[error("degree bound must be at least 1")]
    ZeroDegree,

    #[error("series ring mismatch: {0}")]
    RingMismatch(String),

    #[error("multiindex of degree {degree} exceeds the truncation degree {q}")]
    DegreeExceeded { degree: usize, q: usize },

    #[error("degree bound {q} too small, need at least {needed}")]
    DegreeTooSmall { q: usize, needed: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid link data: {0}")]
    InvalidLink(String),

    #[error("solid torus link is not admissible: {0}")]
    NotAdmissible(String),

    #[error("preferred order gives a vanishing wedge coefficient")]
    InvalidPreferredOrder,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("series is not in the required subring: offending term {0}")]
    NotInSubring(String),

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("mathematical refusal: {0}")]
    Refusal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that mean "the input is fine but the question has no well-defined answer".
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refusal(_))
    }
}
