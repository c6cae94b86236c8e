//! Domain types shared by the detectors, the oracle and the generators.
//!
//! Values and stream positions are 1-based: a stream over universe `n` holds
//! values in `[1, n]` and its first element sits at position 1.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, InvalidStream, Result};

/// Shape class of a pattern, used to pick a detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    Increasing,
    Decreasing,
    NonMonotone3,
    Other,
}

/// A permutation pattern of `[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Pattern {
    values: Vec<u32>,
    kind: PatternKind,
}

impl Pattern {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        classify_pattern(&values)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn is_monotone(&self) -> bool {
        matches!(self.kind, PatternKind::Increasing | PatternKind::Decreasing)
    }

    /// The pattern with every value `i` replaced by `k + 1 - i`.
    pub fn complemented(&self) -> Pattern {
        let k = self.values.len() as u32;
        let values: Vec<u32> = self.values.iter().map(|&v| k + 1 - v).collect();
        classify_pattern(&values).expect("complement of a pattern is a pattern")
    }

    pub fn reversed(&self) -> Pattern {
        classify_pattern(&reverse(&self.values)).expect("reverse of a pattern is a pattern")
    }

    /// Every pattern of length `k`, in lexicographic order.
    pub fn all_of_length(k: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        let mut current: Vec<u32> = (1..=k as u32).collect();
        loop {
            out.push(classify_pattern(&current).expect("permutation"));
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.len() <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Accepts a compact digit string (`4231`) or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::PatternSyntax("empty pattern".into()));
        }
        let values: Vec<u32> = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::PatternSyntax(format!("{part:?}: {e}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::PatternSyntax(format!("unexpected character {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Pattern::new(values)
    }
}

impl TryFrom<Vec<u32>> for Pattern {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Pattern::new(values)
    }
}

impl From<Pattern> for Vec<u32> {
    fn from(p: Pattern) -> Self {
        p.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamMode {
    /// The stream is a permutation of `[n]`.
    #[serde(rename = "perm")]
    Permutation,
    /// The stream holds distinct values from `[n]`, not necessarily all of them.
    #[serde(rename = "seq")]
    DistinctSequence,
}

impl StreamMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StreamMode::Permutation => "perm",
            StreamMode::DistinctSequence => "seq",
        }
    }
}

impl FromStr for StreamMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perm" | "permutation" => Ok(StreamMode::Permutation),
            "seq" | "sequence" => Ok(StreamMode::DistinctSequence),
            other => Err(Error::Format(format!("unknown stream mode {other:?}"))),
        }
    }
}

impl fmt::Display for StreamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An input stream together with its declared universe and mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamInstance {
    pub n: u32,
    pub mode: StreamMode,
    pub elements: Vec<u32>,
}

impl StreamInstance {
    pub fn permutation(elements: Vec<u32>) -> Self {
        StreamInstance {
            n: elements.len() as u32,
            mode: StreamMode::Permutation,
            elements,
        }
    }

    pub fn sequence(n: u32, elements: Vec<u32>) -> Self {
        StreamInstance {
            n,
            mode: StreamMode::DistinctSequence,
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn validate(&self) -> Result<(), InvalidStream> {
        validate_stream(self)
    }

    pub fn is_valid(&self) -> bool {
        validate_stream(self).is_ok()
    }

    /// Complements every value with respect to `n`; positions are unchanged.
    pub fn complemented(&self) -> StreamInstance {
        StreamInstance {
            n: self.n,
            mode: self.mode,
            elements: self.elements.iter().map(|&v| self.n + 1 - v).collect(),
        }
    }
}

/// Checks distinctness, range and (for permutations) coverage of `[n]`.
pub fn validate_stream(inst: &StreamInstance) -> Result<(), InvalidStream> {
    if inst.n == 0 {
        return Err(InvalidStream::EmptyUniverse);
    }
    let n = inst.n;
    match inst.mode {
        StreamMode::Permutation if inst.elements.len() != n as usize => {
            return Err(InvalidStream::WrongLength {
                n,
                len: inst.elements.len(),
            })
        }
        StreamMode::DistinctSequence if inst.elements.len() > n as usize => {
            return Err(InvalidStream::TooLong {
                n,
                len: inst.elements.len(),
            })
        }
        _ => {}
    }
    let mut seen = vec![false; n as usize + 1];
    for (i, &value) in inst.elements.iter().enumerate() {
        let position = i + 1;
        if value == 0 || value > n {
            return Err(InvalidStream::OutOfRange { position, value, n });
        }
        if std::mem::replace(&mut seen[value as usize], true) {
            return Err(InvalidStream::Duplicate { position, value });
        }
    }
    Ok(())
}

/// Location of one witness element: a 1-based stream position, or a value
/// the detector has not read yet but which must occur later.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    At(usize),
    Future,
}

impl Position {
    pub fn index(self) -> Option<usize> {
        match self {
            Position::At(i) => Some(i),
            Position::Future => None,
        }
    }
}

/// A witnessing subsequence for a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub positions: Vec<Position>,
    pub values: Vec<u32>,
}

impl Occurrence {
    pub fn at(positions: Vec<usize>, values: Vec<u32>) -> Self {
        Occurrence {
            positions: positions.into_iter().map(Position::At).collect(),
            values,
        }
    }

    pub fn has_future(&self) -> bool {
        self.positions.contains(&Position::Future)
    }

    /// Checks the occurrence against `pattern` and the stream it was found in.
    ///
    /// Resolved positions must be strictly increasing and hold the stated
    /// values; a `Future` entry (last slot only) must name a value that
    /// appears later in `stream`.
    pub fn verify(&self, pattern: &Pattern, stream: &[u32]) -> bool {
        if self.values.len() != pattern.len() || self.positions.len() != pattern.len() {
            return false;
        }
        if !is_order_isomorphic(&self.values, pattern.values()).unwrap_or(false) {
            return false;
        }
        let mut last = 0usize;
        for (slot, (pos, &value)) in self.positions.iter().zip(&self.values).enumerate() {
            match *pos {
                Position::At(i) => {
                    if i <= last || i > stream.len() || stream[i - 1] != value {
                        return false;
                    }
                    last = i;
                }
                Position::Future => {
                    if slot + 1 != self.positions.len() {
                        return false;
                    }
                    return stream[last..].contains(&value);
                }
            }
        }
        true
    }
}

/// A stream element as a point: `x` is its position, `y` its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: usize,
    pub y: u32,
}

fn check_distinct(s: &[u32]) -> Result<()> {
    let mut seen = HashSet::with_capacity(s.len());
    for &v in s {
        if !seen.insert(v) {
            return Err(Error::DuplicateEntry(v));
        }
    }
    Ok(())
}

/// True iff `a` and `b` have equal length and compare identically at every
/// index pair.
pub fn is_order_isomorphic(a: &[u32], b: &[u32]) -> Result<bool> {
    check_distinct(a)?;
    check_distinct(b)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(rank_normalize(a) == rank_normalize(b))
}

pub fn complement(s: &[u32], n: u32) -> Result<Vec<u32>> {
    check_distinct(s)?;
    s.iter()
        .map(|&v| {
            if v == 0 || v > n {
                Err(Error::OutOfRange { value: v, n })
            } else {
                Ok(n + 1 - v)
            }
        })
        .collect()
}

pub fn reverse(s: &[u32]) -> Vec<u32> {
    s.iter().rev().copied().collect()
}

/// Replaces each value by its rank (1 = smallest). Entries must be distinct.
pub fn rank_normalize(s: &[u32]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_unstable_by_key(|&i| s[i]);
    let mut ranks = vec![0u32; s.len()];
    for (rank, i) in order.into_iter().enumerate() {
        ranks[i] = rank as u32 + 1;
    }
    ranks
}

pub fn classify_pattern(p: &[u32]) -> Result<Pattern> {
    let k = p.len();
    if k == 0 {
        return Err(Error::NotAPermutation("empty".into()));
    }
    let mut seen = vec![false; k + 1];
    for &v in p {
        if v == 0 || v as usize > k || std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::NotAPermutation(format!("{p:?}")));
        }
    }
    let kind = if p.windows(2).all(|w| w[0] < w[1]) {
        PatternKind::Increasing
    } else if p.windows(2).all(|w| w[0] > w[1]) {
        PatternKind::Decreasing
    } else if k == 3 {
        PatternKind::NonMonotone3
    } else {
        PatternKind::Other
    };
    Ok(Pattern {
        values: p.to_vec(),
        kind,
    })
}

/// Lexicographic successor in place; false once the last permutation is reached.
pub fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every permutation of `[n]` in lexicographic order.
pub fn permutations(n: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut current: Option<Vec<u32>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            current = Some(next);
        }
        Some(out)
    })
}
