use super::{Step, StreamDetector, StructureUsage};

/// Early-stopping longest-increasing-subsequence state for the pattern `12…k`.
///
/// Slot `i` (0-based) holds the smallest value seen so far that ends an
/// increasing subsequence of length exactly `i + 1`. Filled slots always form
/// a prefix and are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneState {
    k: usize,
    tails: Vec<u32>,
    accepted: bool,
}

impl MonotoneState {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "pattern length must be positive");
        MonotoneState {
            k,
            tails: Vec::with_capacity(k),
            accepted: false,
        }
    }

    /// Builds a state from explicit slots (`None` = unset). Set slots must be
    /// a strictly increasing prefix.
    pub fn from_slots(slots: &[Option<u32>]) -> Self {
        let tails: Vec<u32> = slots.iter().map_while(|s| *s).collect();
        assert!(
            slots[tails.len()..].iter().all(Option::is_none),
            "set slots must form a prefix"
        );
        assert!(tails.windows(2).all(|w| w[0] < w[1]));
        MonotoneState {
            k: slots.len(),
            accepted: tails.len() == slots.len(),
            tails,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn slots(&self) -> Vec<Option<u32>> {
        (0..self.k).map(|i| self.tails.get(i).copied()).collect()
    }

    pub fn is_accepted(&self) -> bool {
        self.accepted
    }

    /// Applies one value: it replaces the first slot whose value exceeds it,
    /// or fills the first unset slot. Returns true once slot `k` is filled.
    pub fn step(&mut self, v: u32) -> bool {
        if self.accepted {
            return true;
        }
        let i = self.tails.partition_point(|&x| x < v);
        if i == self.tails.len() {
            self.tails.push(v);
        } else {
            self.tails[i] = v;
        }
        self.accepted = self.tails.len() == self.k;
        self.accepted
    }
}

/// Detects `12…k`. Decreasing patterns are served through the complement
/// adapter. Reports a verdict only: the slot array does not retain enough to
/// reconstruct a witness.
#[derive(Debug, Clone)]
pub struct MonotoneDetector {
    state: MonotoneState,
    word_bits: u64,
}

impl MonotoneDetector {
    pub fn new(k: usize, n: u32) -> Self {
        MonotoneDetector {
            state: MonotoneState::new(k),
            word_bits: super::word_bits(n),
        }
    }

    pub fn state(&self) -> &MonotoneState {
        &self.state
    }
}

impl StreamDetector for MonotoneDetector {
    fn name(&self) -> &'static str {
        "monotone"
    }

    fn push(&mut self, v: u32) -> Step {
        if self.state.step(v) {
            Step::Accepted(None)
        } else {
            Step::Continue
        }
    }

    fn finish(&mut self) -> bool {
        self.state.is_accepted()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        let filled = self.state.tails.len();
        vec![StructureUsage::new(
            "x-array",
            filled,
            filled,
            self.word_bits * filled as u64,
        )]
    }
}
