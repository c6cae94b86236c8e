//! Hard instances built from set-disjointness pairs `(S, T)`.
//!
//! Each generator lays out a stream as alternating Alice/Bob segments: Alice's
//! parts depend only on `S`, Bob's only on `T`, and the stream contains the
//! target pattern exactly when `S` and `T` intersect.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Pattern, StreamInstance, StreamMode};
use crate::streaming::{Step, StreamDetector, StructureUsage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Alice,
    Bob,
}

impl Owner {
    pub fn as_str(self) -> &'static str {
        match self {
            Owner::Alice => "alice",
            Owner::Bob => "bob",
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Owner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice" => Ok(Owner::Alice),
            "bob" => Ok(Owner::Bob),
            other => Err(Error::Format(format!("unknown segment owner {other:?}"))),
        }
    }
}

/// A block of stream positions `start..=end` (1-based) produced by one party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub owner: Owner,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjInstance {
    pub n_sets: u32,
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    pub pattern: Pattern,
    pub stream: StreamInstance,
    pub segments: Vec<Segment>,
}

impl DisjInstance {
    pub fn intersects(&self) -> bool {
        let t: BTreeSet<_> = self.t.iter().collect();
        self.s.iter().any(|i| t.contains(i))
    }

    pub fn intersection_size(&self) -> usize {
        let t: BTreeSet<_> = self.t.iter().collect();
        self.s.iter().filter(|i| t.contains(i)).count()
    }

    /// Number of Alice/Bob alternations after the first segment.
    pub fn rounds(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| s.owner == Owner::Bob)
            .count()
    }
}

struct Builder {
    values: Vec<u32>,
    segments: Vec<Segment>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            values: Vec::new(),
            segments: Vec::new(),
        }
    }

    fn segment(&mut self, owner: Owner, values: impl IntoIterator<Item = u32>) {
        let start = self.values.len() + 1;
        self.values.extend(values);
        self.segments.push(Segment {
            owner,
            start,
            end: self.values.len(),
        });
    }
}

fn member_set(name: &str, set: &[u32], n_sets: u32) -> Result<BTreeSet<u32>> {
    if n_sets == 0 {
        return Err(Error::Generator("n_sets must be positive".into()));
    }
    let mut out = BTreeSet::new();
    for &i in set {
        if i == 0 || i > n_sets {
            return Err(Error::Generator(format!(
                "{name} element {i} outside 1..={n_sets}"
            )));
        }
        if !out.insert(i) {
            return Err(Error::Generator(format!("{name} lists {i} twice")));
        }
    }
    Ok(out)
}

fn finish(
    pattern: &str,
    n_sets: u32,
    s: BTreeSet<u32>,
    t: BTreeSet<u32>,
    n: u32,
    mode: StreamMode,
    b: Builder,
) -> DisjInstance {
    let stream = StreamInstance {
        n,
        mode,
        elements: b.values,
    };
    debug_assert!(stream.is_valid(), "generator produced an invalid stream");
    DisjInstance {
        n_sets,
        s: s.into_iter().collect(),
        t: t.into_iter().collect(),
        pattern: pattern.parse().expect("generator patterns are well formed"),
        stream,
        segments: b.segments,
    }
}

/// 312 on a distinct-value sequence over `[3 n_sets]`.
///
/// Alice sends `3i, 3i-2` for each `i` in `S` ascending; Bob sends `3i-1` for
/// each `i` in `T` descending.
pub fn gen_seq312(s: &[u32], t: &[u32], n_sets: u32) -> Result<DisjInstance> {
    let s = member_set("S", s, n_sets)?;
    let t = member_set("T", t, n_sets)?;
    let mut b = Builder::new();
    b.segment(Owner::Alice, s.iter().flat_map(|&i| [3 * i, 3 * i - 2]));
    b.segment(Owner::Bob, t.iter().rev().map(|&i| 3 * i - 1));
    Ok(finish(
        "312",
        n_sets,
        s,
        t,
        3 * n_sets,
        StreamMode::DistinctSequence,
        b,
    ))
}

/// Patterns starting with 4 whose tail is handled by a single Bob segment:
/// 4231, 4213, 4132 and 4123, as permutations of `[4 n_sets]`.
pub fn gen_pi4_front(pattern: &Pattern, s: &[u32], t: &[u32], n_sets: u32) -> Result<DisjInstance> {
    let p = match pattern.values() {
        p @ ([4, 2, 3, 1] | [4, 2, 1, 3] | [4, 1, 3, 2] | [4, 1, 2, 3]) => [p[0], p[1], p[2], p[3]],
        _ => {
            return Err(Error::UnsupportedPattern {
                pattern: pattern.to_string(),
                what: "front construction takes 4231, 4213, 4132 or 4123",
            })
        }
    };
    let s = member_set("S", s, n_sets)?;
    let t = member_set("T", t, n_sets)?;
    let mut b = Builder::new();
    b.segment(
        Owner::Alice,
        (1..=n_sets).flat_map(|i| {
            let base = 4 * (i - 1);
            if s.contains(&i) {
                [base + p[0], base + p[1]]
            } else {
                [base + p[1], base + p[0]]
            }
        }),
    );
    let reversed = p != [4, 2, 3, 1];
    b.segment(
        Owner::Bob,
        (1..=n_sets).flat_map(|i| {
            let d = if reversed { n_sets + 1 - i } else { i };
            let base = 4 * (d - 1);
            if t.contains(&d) {
                [base + p[2], base + p[3]]
            } else {
                [base + p[3], base + p[2]]
            }
        }),
    );
    Ok(finish(
        &pattern.to_string(),
        n_sets,
        s,
        t,
        4 * n_sets,
        StreamMode::Permutation,
        b,
    ))
}

/// 4312 as a permutation of `[3 n_sets + 1]`, in three segments (Alice, Bob, Alice).
pub fn gen_4312(s: &[u32], t: &[u32], n_sets: u32) -> Result<DisjInstance> {
    let s = member_set("S", s, n_sets)?;
    let t = member_set("T", t, n_sets)?;
    let mut b = Builder::new();
    b.segment(
        Owner::Alice,
        (1..=n_sets)
            .filter(|i| !s.contains(i))
            .map(|i| 3 * (i - 1) + 2)
            .chain([3 * n_sets + 1]),
    );
    b.segment(
        Owner::Bob,
        (1..=n_sets).flat_map(|i| {
            let base = 3 * (i - 1);
            if t.contains(&i) {
                [base + 3, base + 1]
            } else {
                [base + 1, base + 3]
            }
        }),
    );
    b.segment(Owner::Alice, s.iter().rev().map(|&i| 3 * (i - 1) + 2));
    Ok(finish(
        "4312",
        n_sets,
        s,
        t,
        3 * n_sets + 1,
        StreamMode::Permutation,
        b,
    ))
}

/// 3142 or 2143 as a permutation of `[4 n_sets]`, in three segments.
///
/// Bob's pairs walk the blocks from the top down: step `i` writes block
/// `j = n_sets + 1 - i`, ordered by whether `j` is in `T`.
pub fn gen_3142_2143(pattern: &Pattern, s: &[u32], t: &[u32], n_sets: u32) -> Result<DisjInstance> {
    let (first, last) = match pattern.values() {
        [3, 1, 4, 2] => (3, 2),
        [2, 1, 4, 3] => (2, 3),
        _ => {
            return Err(Error::UnsupportedPattern {
                pattern: pattern.to_string(),
                what: "this construction takes 3142 or 2143",
            })
        }
    };
    let s = member_set("S", s, n_sets)?;
    let t = member_set("T", t, n_sets)?;
    let mut b = Builder::new();
    let alice = |swap: bool| {
        let s = &s;
        (1..=n_sets).map(move |i| {
            let base = 4 * (i - 1);
            if s.contains(&i) != swap {
                base + first
            } else {
                base + last
            }
        })
    };
    b.segment(Owner::Alice, alice(false));
    b.segment(
        Owner::Bob,
        (1..=n_sets).flat_map(|i| {
            let j = n_sets + 1 - i;
            let base = 4 * (j - 1);
            if t.contains(&j) {
                [base + 1, base + 4]
            } else {
                [base + 4, base + 1]
            }
        }),
    );
    b.segment(Owner::Alice, alice(true));
    Ok(finish(
        &pattern.to_string(),
        n_sets,
        s,
        t,
        4 * n_sets,
        StreamMode::Permutation,
        b,
    ))
}

/// Output of [`gen_monotone_lb`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneLb {
    /// `alpha(rho)` alone, or `alpha(rho) beta` when a distinguisher is given.
    pub accepting: StreamInstance,
    /// `alpha(sigma) beta`, which avoids `12...k`.
    pub rejecting: Option<StreamInstance>,
    /// True if `rho` and `sigma` were exchanged so that `rho` is smaller at
    /// the first index where they differ.
    pub swapped: bool,
}

fn check_odd_shape(name: &str, seq: &[u32], k: usize, n: u32) -> Result<()> {
    if seq.len() + 2 != k {
        return Err(Error::Generator(format!(
            "{name} must have k - 2 = {} entries, got {}",
            k.saturating_sub(2),
            seq.len()
        )));
    }
    if seq.first() != Some(&1) {
        return Err(Error::Generator(format!("{name} must start with 1")));
    }
    if seq.iter().any(|&r| r % 2 == 0 || r >= n) {
        return Err(Error::Generator(format!(
            "{name} must hold odd values below {n}"
        )));
    }
    if !seq.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Generator(format!(
            "{name} must be strictly increasing"
        )));
    }
    Ok(())
}

/// The odd part: odd values outside `rho` in decreasing order, then `rho`.
fn alpha(rho: &[u32], n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..n)
        .rev()
        .filter(|v| v % 2 == 1 && !rho.contains(v))
        .collect();
    out.extend_from_slice(rho);
    out
}

/// Instances separating two odd sequences for the increasing pattern of length `k`.
///
/// `n` must be even and at least `2k`. The lower-bound argument wants
/// `n > k^2`; that is not enforced since smaller instances are still
/// correct whenever the values fit.
pub fn gen_monotone_lb(k: usize, n: u32, rho: &[u32], sigma: Option<&[u32]>) -> Result<MonotoneLb> {
    if k < 3 {
        return Err(Error::Generator("k must be at least 3".into()));
    }
    if !n.is_multiple_of(2) || (n as usize) < 2 * k {
        return Err(Error::Generator(format!(
            "n must be even and at least 2k, got {n}"
        )));
    }
    check_odd_shape("rho", rho, k, n)?;
    let Some(sigma) = sigma else {
        return Ok(MonotoneLb {
            accepting: StreamInstance::sequence(n, alpha(rho, n)),
            rejecting: None,
            swapped: false,
        });
    };
    check_odd_shape("sigma", sigma, k, n)?;
    let i = rho
        .iter()
        .zip(sigma)
        .position(|(r, s)| r != s)
        .ok_or_else(|| Error::Generator("rho and sigma are equal; nothing to separate".into()))?;
    let swapped = rho[i] > sigma[i];
    let (rho, sigma) = if swapped { (sigma, rho) } else { (rho, sigma) };

    // 1-based index of the first difference is i + 1, so k - (i + 1) more
    // values are needed above r_i.
    let r = rho[i];
    let rest = (k - (i + 1)) as u32;
    // r < s_i and the shape rules keep the top of beta_2 within n; beta_1
    // is empty when it would start above n.
    let top = r + 2 * rest + 1;
    debug_assert!(top - 2 <= n);
    let beta: Vec<u32> = (top..=n)
        .rev()
        .step_by(2)
        .chain((r + 1..r + 2 * rest).step_by(2))
        .chain((2..r).rev().step_by(2))
        .collect();
    let with_beta = |seq: &[u32]| {
        let mut v = alpha(seq, n);
        v.extend_from_slice(&beta);
        StreamInstance::permutation(v)
    };
    Ok(MonotoneLb {
        accepting: with_beta(rho),
        rejecting: Some(with_beta(sigma)),
        swapped,
    })
}

/// Doubles every value and appends `1, 3, ..., 2n - 1`.
///
/// If `pi2` is `pi` with one value appended whose rank is below the last
/// value of `pi2`'s prefix, the result contains `pi2` iff the input contains
/// `pi`. The mode is kept: a sequence input yields a sequence over `[2n]`.
pub fn extend_stream(inst: &StreamInstance) -> StreamInstance {
    let elements = inst
        .elements
        .iter()
        .map(|&v| 2 * v)
        .chain((1..=inst.n).map(|i| 2 * i - 1))
        .collect();
    StreamInstance {
        n: 2 * inst.n,
        mode: inst.mode,
        elements,
    }
}

/// [`extend_stream`] applied on the fly in front of a detector over `[2n]`.
#[derive(Debug, Clone)]
pub struct Extended<D> {
    inner: D,
    n: u32,
    accepted: bool,
}

impl<D: StreamDetector> Extended<D> {
    pub fn new(inner: D, n: u32) -> Self {
        Extended {
            inner,
            n,
            accepted: false,
        }
    }

    pub fn into_inner(self) -> D {
        self.inner
    }
}

impl<D: StreamDetector> StreamDetector for Extended<D> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn push(&mut self, v: u32) -> Step {
        let step = self.inner.push(2 * v);
        self.accepted |= step.is_accepted();
        step
    }

    fn finish(&mut self) -> bool {
        for i in 1..=self.n {
            if self.accepted {
                return true;
            }
            self.accepted = self.inner.push(2 * i - 1).is_accepted();
        }
        self.accepted || self.inner.finish()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        self.inner.usage()
    }
}

/// A uniformly random subset of `[n_sets]`, ascending.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n_sets: u32) -> Vec<u32> {
    (1..=n_sets).filter(|_| rng.gen_bool(0.5)).collect()
}

/// The subset of `[n_sets]` encoded by the low bits of `mask`.
pub fn subset_from_mask(mask: u32, n_sets: u32) -> Vec<u32> {
    (1..=n_sets)
        .filter(|i| mask & (1 << (i - 1)) != 0)
        .collect()
}
