use thiserror::Error;

/// Reasons a stream instance fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidStream {
    #[error("universe size must be positive")]
    EmptyUniverse,
    #[error("value {value} at position {position} is outside [1, {n}]")]
    OutOfRange { position: usize, value: u32, n: u32 },
    #[error("value {value} repeats at position {position}")]
    Duplicate { position: usize, value: u32 },
    #[error("permutation stream over [{n}] has length {len}")]
    WrongLength { n: u32, len: usize },
    #[error("distinct sequence over [{n}] is longer than the universe ({len})")]
    TooLong { n: u32, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence has a repeated entry {0}")]
    DuplicateEntry(u32),
    #[error("value {value} is outside [1, {n}]")]
    OutOfRange { value: u32, n: u32 },
    #[error("pattern must be a permutation of [k]: {0}")]
    NotAPermutation(String),
    #[error("invalid pattern syntax: {0}")]
    PatternSyntax(String),
    #[error("invalid stream: {0}")]
    InvalidStream(#[from] InvalidStream),
    #[error("split protocol supports patterns of length at most 3, got {0}")]
    PatternTooLong(usize),
    #[error("unsupported pattern {pattern} for {what}")]
    UnsupportedPattern { pattern: String, what: &'static str },
    #[error("value {0} was already pushed")]
    AlreadyPushed(u32),
    #[error("stream is complete; no more values can be pushed")]
    StreamExhausted,
    #[error("detector already accepted")]
    AlreadyAccepted,
    #[error("detector is finished")]
    Finished,
    #[error("engine {engine} cannot run {pattern} on a {mode} stream")]
    DispatchConflict {
        engine: &'static str,
        pattern: String,
        mode: &'static str,
    },
    #[error("invalid generator input: {0}")]
    Generator(String),
    #[error("stream file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
