//! One-pass detection of small permutation patterns in streams.
//!
//! A stream is a sequence of distinct values from `1..=n`, read once. A
//! pattern `π` occurs if some subsequence has the same relative order as `π`.

pub mod error;
pub mod format;
pub mod hardgen;
pub mod oracle;
pub mod perm;
pub mod random;
pub mod streaming;

pub use error::{Error, InvalidStream, Result};
pub use oracle::{contains_bruteforce, count_occurrences, split_protocol, SplitInput};
pub use perm::{
    complement, is_order_isomorphic, rank_normalize, reverse, Occurrence, Pattern, PatternKind,
    Point, Position, StreamInstance, StreamMode,
};
pub use streaming::{Detector, DetectorReport, Engine, Step, StreamDetector, StructureUsage};
