//! One-pass detection of 312 in a permutation stream.
//!
//! State: the running maximum `h`, the set `A` of seen values inside the
//! window `(h - k, h]` (a bit array keyed by `h - value`), and a set `D` of
//! decreasing pairs `(a, b)` with `a - b >= k` whose intervals `[b, a]` are
//! pairwise disjoint. With `k = floor(sqrt(n log2 n))` both `A` and `D` stay
//! `O(sqrt(n log n))` in size.

use std::collections::BTreeMap;

use super::bitset::ShiftBits;
use super::{Step, StreamDetector, StructureUsage};
use crate::perm::{Occurrence, Position};

/// Window width for a universe of size `n`: `max(1, floor(sqrt(n log2 n)))`.
pub fn window_width(n: u32) -> u32 {
    let n = n as f64;
    let w = if n > 1.0 {
        (n * n.log2()).sqrt().floor()
    } else {
        0.0
    };
    let mut w = w as u32;
    // guard against float rounding at perfect squares
    while (w as f64 + 1.0).powi(2) <= n * n.log2() {
        w += 1;
    }
    while w > 0 && (w as f64).powi(2) > n * n.log2() {
        w -= 1;
    }
    w.max(1)
}

/// Which check produced an acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hit312 {
    /// `v` lies strictly inside a stored pair `(a, b)`.
    StoredPair,
    /// `v` falls in the window below an unseen value: the missing value must
    /// arrive later, so it is reported as a future witness.
    WindowGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairEntry {
    high: u32,
    high_pos: usize,
    low_pos: usize,
}

#[derive(Debug, Clone)]
pub struct Detector312 {
    n: u32,
    width: u32,
    /// Running maximum and its position.
    top: Option<(u32, usize)>,
    window: ShiftBits,
    /// Pairs keyed by their low value.
    pairs: BTreeMap<u32, PairEntry>,
    position: usize,
    hit: Option<Hit312>,
    word_bits: u64,
}

impl Detector312 {
    pub fn new(n: u32) -> Self {
        Self::with_width(n, window_width(n))
    }

    pub fn with_width(n: u32, width: u32) -> Self {
        assert!(width >= 1);
        Detector312 {
            n,
            width,
            top: None,
            window: ShiftBits::new(width as usize),
            pairs: BTreeMap::new(),
            position: 0,
            hit: None,
            word_bits: super::word_bits(n),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The window width `k`.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// The highest value pushed so far.
    pub fn top(&self) -> Option<u32> {
        self.top.map(|(v, _)| v)
    }

    /// Members of `A`, descending.
    pub fn window_values(&self) -> Vec<u32> {
        match self.top {
            None => Vec::new(),
            Some((h, _)) => self.window.iter_ones().map(|d| h - d as u32).collect(),
        }
    }

    /// Members of `D` as `(a, b)`, ordered by `b`.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.pairs.iter().map(|(&b, e)| (e.high, b)).collect()
    }

    pub fn hit(&self) -> Option<Hit312> {
        self.hit
    }

    /// Processes one value; returns an occurrence once 312 is certain.
    pub fn step(&mut self, v: u32) -> Step {
        self.position += 1;
        let pos = self.position;

        // Stored pair (a, b) with a > v > b. Intervals are disjoint, so only
        // the pair with the largest b below v can qualify.
        if let Some((&low, entry)) = self.pairs.range(..v).next_back() {
            if entry.high > v {
                self.hit = Some(Hit312::StoredPair);
                return Step::Accepted(Some(Occurrence::at(
                    vec![entry.high_pos, entry.low_pos, pos],
                    vec![entry.high, low, v],
                )));
            }
        }

        let (h, h_pos) = match self.top {
            None => {
                self.top = Some((v, pos));
                self.window.set(0);
                return Step::Continue;
            }
            Some(top) => top,
        };

        if v > h {
            self.window.shift_up((v - h) as usize);
            self.window.set(0);
            self.top = Some((v, pos));
        } else if (v as i64) > h as i64 - self.width as i64 {
            // Inside the window. Take a = h and the largest unseen c in (v, h).
            let span = (h - v) as usize;
            if let Some(d) = self.window.first_zero_in(1, span) {
                self.hit = Some(Hit312::WindowGap);
                return Step::Accepted(Some(Occurrence {
                    positions: vec![Position::At(h_pos), Position::At(pos), Position::Future],
                    values: vec![h, v, h - d as u32],
                }));
            }
            self.window.set(span);
        } else {
            // v <= h - k: pairs above v are subsumed by (h, v).
            drop(self.pairs.split_off(&(v + 1)));
            self.pairs.insert(
                v,
                PairEntry {
                    high: h,
                    high_pos: h_pos,
                    low_pos: pos,
                },
            );
        }
        Step::Continue
    }

    #[cfg(test)]
    fn from_parts(n: u32, width: u32, h: u32, window: &[u32], pairs: &[(u32, u32)]) -> Self {
        let mut d = Self::with_width(n, width);
        d.top = Some((h, 1));
        for &a in window {
            assert!(a <= h && h - a < width);
            d.window.set((h - a) as usize);
        }
        for &(a, b) in pairs {
            d.pairs.insert(
                b,
                PairEntry {
                    high: a,
                    high_pos: 1,
                    low_pos: 2,
                },
            );
        }
        d.position = 2;
        d
    }
}

impl StreamDetector for Detector312 {
    fn name(&self) -> &'static str {
        "312"
    }

    fn push(&mut self, v: u32) -> Step {
        self.step(v)
    }

    fn finish(&mut self) -> bool {
        self.hit.is_some()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        let stored_top = usize::from(self.top.is_some());
        let a = self.window.count_ones();
        let d = self.pairs.len();
        vec![
            StructureUsage::new(
                "h",
                stored_top,
                stored_top,
                2 * self.word_bits * stored_top as u64,
            ),
            // A is a bit array: its members count as cells, its storage is `k` bits.
            StructureUsage::new("A", a, a, self.width as u64),
            StructureUsage::new("D", d, d, 4 * self.word_bits * d as u64),
        ]
    }
}
