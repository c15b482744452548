//! Error type shared by all core modules.

use alloc::string::String;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("utterance `{id}` too short: {frames} frames, need at least {required}")]
    UtteranceTooShort {
        id: String,
        frames: usize,
        required: usize,
    },

    #[error("feature fingerprint mismatch: expected {expected:#018x}, got {got:#018x}")]
    FingerprintMismatch { expected: u64, got: u64 },

    #[error("need at least {clusters} points for {clusters} clusters, got {points}")]
    TooFewPoints { points: usize, clusters: usize },

    #[error("empty span")]
    EmptySpan,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("utterance `{0}` has zero tokens")]
    EmptyUtterance(String),

    #[error("unit {0} has zero occurrences in the training sequences")]
    UnitWithoutOccurrences(usize),

    #[error("token of unit {unit} spans {len} frames, below the {states}-state minimum")]
    TokenTooShort {
        unit: usize,
        len: usize,
        states: usize,
    },

    #[error("unit id {unit} out of range for inventory of size {d}")]
    UnitOutOfRange { unit: usize, d: usize },

    #[error("sequence does not match frames for `{0}`")]
    SequenceMismatch(String),

    #[error("corpus and sequence lists are inconsistent: {0}")]
    CorpusMismatch(String),

    #[error("top-P of {p} exceeds inventory size {d}")]
    TopPExceedsUnits { p: usize, d: usize },

    #[error("class {0} has no segments in the training set")]
    ClassWithoutSegments(usize),

    #[error("label `{0}` not in the declared class list")]
    UnknownLabel(String),

    #[error("empty segment batch for `{0}`")]
    EmptyBatch(String),
}
