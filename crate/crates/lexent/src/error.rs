use thiserror::Error;

/// Errors produced by lexicon construction, model evaluation, sampling,
/// estimation, and the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lexicon has no entries")]
    EmptyLexicon,

    #[error("duplicate token id {0}")]
    DuplicateTokenId(u32),

    #[error("duplicate surface {0:?}")]
    DuplicateSurface(String),

    #[error("token ids must cover 0..{expected} densely, found id {found}")]
    NonDenseIds { expected: u32, found: u32 },

    #[error("boundary token set is empty")]
    EmptyBoundarySet,

    #[error("unknown token id {0}")]
    UnknownTokenId(u32),

    #[error("distribution has {got} entries but the vocabulary has {want}")]
    VocabMismatch { got: usize, want: usize },

    #[error("negative probability {value} at token id {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, too far from 1 to renormalize")]
    ImproperDistribution { sum: f64 },

    #[error("no probability mass on boundary tokens in this context")]
    DegenerateBoundary,

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("Rényi order must be a non-negative number, got {0}")]
    InvalidOrder(f64),

    #[error("unsupported Rényi order for this estimator: {0}")]
    UnsupportedOrder(String),

    #[error("enumeration would visit about {estimate:.0} words, over the limit of {limit:.0}")]
    Intractable { estimate: f64, limit: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: column {column:?} is required for this operation")]
    MissingColumn { path: String, column: &'static str },

    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("reading-time row references unknown corpus word {doc_id}:{word_index}")]
    UnknownItem { doc_id: String, word_index: usize },

    #[error("non-finite value in column {column:?} for word {doc_id}:{word_index}")]
    NonFiniteValue {
        column: String,
        doc_id: String,
        word_index: usize,
    },

    #[error("collinear design columns: {}", .0.join(", "))]
    CollinearColumns(Vec<String>),

    #[error("design has {rows} rows and {cols} columns; the fit needs rows > columns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("degenerate fit: residual variance {0} is below the usable floor")]
    DegenerateFit(f64),

    #[error("held-out responses differ between the models being compared")]
    PartitionMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for this error: 1 for internal faults, 2 for
    /// validation and input problems.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
