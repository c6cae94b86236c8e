//! One-pass decision of 213 containment in a permutation stream.
//!
//! The stream is cut into strips of `floor(sqrt n)` consecutive points. The
//! current strip is buffered; every finished strip leaves behind a record of
//! constant size. An occurrence `(p, q, r)` is caught by one of four checks
//! depending on how its points fall into strips:
//!
//! 1. all three in one strip: brute force when the strip closes;
//! 2. `p, q` together, `r` later: `r` exceeds the lowest top of a
//!    within-strip decreasing pair seen so far (`L`);
//! 3. `q, r` together, `p` earlier: a value range inside the strip is not
//!    fully accounted for by the strip and everything after it;
//! 4. all apart: the same counting argument anchored at the strip minimum.
//!
//! Checks 3 and 4 only conclude at end of input, so this detector decides
//! but does not always produce a witness.

use super::{Step, StreamDetector, StructureUsage};
use crate::perm::Point;

/// Which check produced an acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hit213 {
    WithinStrip,
    AboveLowBound,
    GapCounter,
    CrossStrip,
}

/// The constant-size summary kept for each finished strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripRecord {
    /// Lowest left end of an increasing pair with an outside value between its ends.
    pub ell: Option<Point>,
    /// Highest right end of such a pair.
    pub high: Option<Point>,
    /// Points seen from this strip on with value strictly between `ell` and `high`.
    pub counter: Option<u32>,
    /// Lowest point of the strip.
    pub ell_prime: Point,
    /// Highest point seen to the right of `ell_prime`.
    pub high_prime: Option<Point>,
    /// Points seen to the right of `ell_prime` and above it.
    pub counter_prime: u32,
}

impl StripRecord {
    /// Applies a point read after this strip closed.
    pub fn observe(&mut self, p: Point) {
        if let (Some(lo), Some(hi), Some(c)) = (self.ell, self.high, self.counter.as_mut()) {
            if lo.y < p.y && p.y < hi.y {
                *c += 1;
            }
        }
        if self.ell_prime.y < p.y {
            self.counter_prime += 1;
            if self.high_prime.is_none_or(|h| h.y < p.y) {
                self.high_prime = Some(p);
            }
        }
    }

    /// End-of-input test: some value in the tracked range was never counted,
    /// so it occurred before the strip.
    pub fn gap_left(&self) -> bool {
        match (self.ell, self.high, self.counter) {
            (Some(lo), Some(hi), Some(c)) => c < hi.y - lo.y - 1,
            _ => false,
        }
    }

    pub fn cross_gap_left(&self) -> bool {
        self.high_prime
            .is_some_and(|h| self.counter_prime < h.y - self.ell_prime.y)
    }

    /// Summarises a closed strip. `strip` is in stream order.
    pub fn from_strip(strip: &[Point]) -> StripRecord {
        let mut sorted: Vec<u32> = strip.iter().map(|p| p.y).collect();
        sorted.sort_unstable();
        // strip values strictly between a and b
        let inside = |a: u32, b: u32| {
            sorted.partition_point(|&y| y < b) - sorted.partition_point(|&y| y <= a)
        };

        let mut ell: Option<Point> = None;
        let mut high: Option<Point> = None;
        for (i, p) in strip.iter().enumerate() {
            for q in &strip[i + 1..] {
                if p.y < q.y && (q.y - p.y - 1) as usize > inside(p.y, q.y) {
                    if ell.is_none_or(|l| p.y < l.y) {
                        ell = Some(*p);
                    }
                    if high.is_none_or(|h| q.y > h.y) {
                        high = Some(*q);
                    }
                }
            }
        }
        let counter = match (ell, high) {
            (Some(l), Some(h)) => Some(inside(l.y, h.y) as u32),
            _ => None,
        };

        let (lowest_idx, ell_prime) = strip
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| p.y)
            .map(|(i, p)| (i, *p))
            .expect("strip is non-empty");
        let right = &strip[lowest_idx + 1..];
        let high_prime = right.iter().max_by_key(|p| p.y).copied();
        let counter_prime = right.len() as u32;

        StripRecord {
            ell,
            high,
            counter,
            ell_prime,
            high_prime,
            counter_prime,
        }
    }
}

/// True if `strip` (in stream order) contains 213.
fn strip_contains_213(strip: &[Point]) -> bool {
    for (i, p) in strip.iter().enumerate() {
        let mut seen_lower = false;
        for r in &strip[i + 1..] {
            if r.y < p.y {
                seen_lower = true;
            } else if seen_lower {
                return true;
            }
        }
    }
    false
}

/// Lowest `p.y` over points followed by a smaller point within the strip.
fn lowest_descent_top(strip: &[Point]) -> Option<u32> {
    let mut suffix_min = u32::MAX;
    let mut best = None;
    for p in strip.iter().rev() {
        if suffix_min < p.y {
            best = Some(best.map_or(p.y, |b: u32| b.min(p.y)));
        }
        suffix_min = suffix_min.min(p.y);
    }
    best
}

#[derive(Debug, Clone)]
pub struct Detector213 {
    n: u32,
    strip_size: usize,
    buffer: Vec<Point>,
    low_bound: u32,
    records: Vec<StripRecord>,
    position: usize,
    hit: Option<Hit213>,
    finished: bool,
    word_bits: u64,
}

/// `floor(sqrt n)`, at least 1.
pub fn strip_size(n: u32) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while (s + 1) * (s + 1) <= n as usize {
        s += 1;
    }
    while s > 0 && s * s > n as usize {
        s -= 1;
    }
    s.max(1)
}

impl Detector213 {
    pub fn new(n: u32) -> Self {
        Detector213 {
            n,
            strip_size: strip_size(n),
            buffer: Vec::new(),
            low_bound: n,
            records: Vec::new(),
            position: 0,
            hit: None,
            finished: false,
            word_bits: super::word_bits(n),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn strip_size(&self) -> usize {
        self.strip_size
    }

    pub fn buffered(&self) -> &[Point] {
        &self.buffer
    }

    pub fn records(&self) -> &[StripRecord] {
        &self.records
    }

    /// The value `L`: any later value above it completes a 213.
    pub fn low_bound(&self) -> u32 {
        self.low_bound
    }

    pub fn hit(&self) -> Option<Hit213> {
        self.hit
    }

    pub fn step(&mut self, v: u32) -> Step {
        self.position += 1;
        let p = Point {
            x: self.position,
            y: v,
        };
        if v > self.low_bound {
            self.hit = Some(Hit213::AboveLowBound);
            return Step::Accepted(None);
        }
        for rec in &mut self.records {
            rec.observe(p);
        }
        self.buffer.push(p);
        if self.buffer.len() == self.strip_size {
            return self.close_strip();
        }
        Step::Continue
    }

    /// Summarises and clears the buffered strip.
    pub fn close_strip(&mut self) -> Step {
        if self.buffer.is_empty() {
            return Step::Continue;
        }
        if strip_contains_213(&self.buffer) {
            self.hit = Some(Hit213::WithinStrip);
            return Step::Accepted(None);
        }
        if let Some(top) = lowest_descent_top(&self.buffer) {
            self.low_bound = self.low_bound.min(top);
        }
        self.records.push(StripRecord::from_strip(&self.buffer));
        self.buffer.clear();
        Step::Continue
    }

    /// Closes the partial last strip and runs the end-of-input counting tests.
    pub fn conclude(&mut self) -> bool {
        if self.finished || self.hit.is_some() {
            self.finished = true;
            return self.hit.is_some();
        }
        self.finished = true;
        if let Step::Accepted(_) = self.close_strip() {
            return true;
        }
        if self.records.iter().any(StripRecord::gap_left) {
            self.hit = Some(Hit213::GapCounter);
        } else if self.records.iter().any(StripRecord::cross_gap_left) {
            self.hit = Some(Hit213::CrossStrip);
        }
        self.hit.is_some()
    }

    #[cfg(test)]
    fn with_state(n: u32, low_bound: u32, records: Vec<StripRecord>, position: usize) -> Self {
        let mut d = Self::new(n);
        d.low_bound = low_bound;
        d.records = records;
        d.position = position;
        d
    }
}

impl StreamDetector for Detector213 {
    fn name(&self) -> &'static str {
        "213"
    }

    fn push(&mut self, v: u32) -> Step {
        self.step(v)
    }

    fn finish(&mut self) -> bool {
        self.conclude()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        let b = self.buffer.len();
        let r = self.records.len();
        vec![
            // L and the position counter
            StructureUsage::new("registers", 2, 2, 2 * self.word_bits),
            StructureUsage::new("buffer", b, b, 2 * self.word_bits * b as u64),
            // per record: four points and two counters, six cells, ten words
            StructureUsage::new("strips", r, 6 * r, 10 * self.word_bits * r as u64),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(values: &[u32]) -> Vec<Point> {
        values
            .iter()
            .enumerate()
            .map(|(i, &y)| Point { x: i + 1, y })
            .collect()
    }

    fn record(ell: u32, high: u32, counter: u32, ell_prime: u32, high_prime: u32) -> StripRecord {
        StripRecord {
            ell: Some(Point { x: 1, y: ell }),
            high: Some(Point { x: 2, y: high }),
            counter: Some(counter),
            ell_prime: Point { x: 1, y: ell_prime },
            high_prime: Some(Point {
                x: 2,
                y: high_prime,
            }),
            counter_prime: 1,
        }
    }

    #[test]
    fn strip_sizes() {
        assert_eq!(strip_size(1), 1);
        assert_eq!(strip_size(8), 2);
        assert_eq!(strip_size(9), 3);
        assert_eq!(strip_size(1024), 32);
        assert_eq!(strip_size(16384), 128);
    }

    #[test]
    fn value_above_low_bound_accepts() {
        let mut d = Detector213::with_state(20, 7, Vec::new(), 4);
        assert_eq!(d.step(5), Step::Continue);
        assert_eq!(d.step(9), Step::Accepted(None));
        assert_eq!(d.hit(), Some(Hit213::AboveLowBound));
    }

    #[test]
    fn counter_tracks_values_between_ends() {
        let mut rec = record(3, 9, 2, 1, 2);
        rec.observe(Point { x: 10, y: 6 });
        assert_eq!(rec.counter, Some(3));
        rec.observe(Point { x: 11, y: 12 });
        assert_eq!(rec.counter, Some(3));
    }

    #[test]
    fn cross_counter_raises_high() {
        let mut rec = record(1, 2, 0, 4, 8);
        rec.observe(Point { x: 10, y: 11 });
        assert_eq!(rec.counter_prime, 2);
        assert_eq!(rec.high_prime.unwrap().y, 11);
        rec.observe(Point { x: 11, y: 3 });
        assert_eq!(rec.counter_prime, 2);
    }

    #[test]
    fn strip_with_pattern_accepts_at_close() {
        let mut d = Detector213::new(9);
        assert_eq!(d.step(2), Step::Continue);
        assert_eq!(d.step(1), Step::Continue);
        assert_eq!(d.step(3), Step::Accepted(None));
        assert_eq!(d.hit(), Some(Hit213::WithinStrip));
    }

    #[test]
    fn increasing_strip_keeps_low_bound() {
        let mut d = Detector213::new(9);
        for v in [1, 2, 3] {
            d.step(v);
        }
        assert_eq!(d.low_bound(), 9);
        assert_eq!(d.records().len(), 1);
    }

    #[test]
    fn outside_value_marks_increasing_pair() {
        // First strip of a 16-element permutation; 4 and 5 live in other strips.
        let rec = StripRecord::from_strip(&pts(&[3, 6, 11, 14]));
        assert_eq!(rec.ell.unwrap().y, 3);
        assert_eq!(rec.high.unwrap().y, 14);
        // strip values strictly between 3 and 14
        assert_eq!(rec.counter, Some(2));
        assert_eq!(rec.ell_prime.y, 3);
        assert_eq!(rec.high_prime.unwrap().y, 14);
        assert_eq!(rec.counter_prime, 3);
    }

    #[test]
    fn consecutive_values_give_no_pair() {
        let rec = StripRecord::from_strip(&pts(&[4, 5, 6]));
        assert_eq!(rec.ell, None);
        assert_eq!(rec.counter, None);
        assert!(!rec.gap_left());
    }

    #[test]
    fn lowest_point_last_has_no_high_prime() {
        let rec = StripRecord::from_strip(&pts(&[5, 4, 1]));
        assert_eq!(rec.high_prime, None);
        assert!(!rec.cross_gap_left());
    }

    #[test]
    fn increasing_stream_rejects() {
        let mut d = Detector213::new(30);
        for v in 1..=30 {
            assert_eq!(d.step(v), Step::Continue);
        }
        assert!(!d.conclude());
        assert_eq!(d.records().len(), 6);
    }

    #[test]
    fn finish_without_input_rejects() {
        let mut d = Detector213::new(10);
        assert!(!d.conclude());
    }
}
