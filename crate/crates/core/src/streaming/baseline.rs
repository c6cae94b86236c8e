use super::{Step, StreamDetector, StructureUsage};
use crate::oracle::first_match;
use crate::perm::{Occurrence, Pattern, StreamInstance};

/// Stores the whole stream and searches it at the end. Linear space; used
/// for patterns without a sublinear engine and as a reference.
#[derive(Debug, Clone)]
pub struct Baseline {
    pattern: Pattern,
    stored: Vec<u32>,
    witness: Option<Occurrence>,
    word_bits: u64,
}

impl Baseline {
    pub fn new(pattern: Pattern, n: u32) -> Self {
        Baseline {
            pattern,
            stored: Vec::new(),
            witness: None,
            word_bits: super::word_bits(n),
        }
    }
}

impl StreamDetector for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn push(&mut self, v: u32) -> Step {
        self.stored.push(v);
        Step::Continue
    }

    fn finish(&mut self) -> bool {
        if self.witness.is_none() {
            self.witness = first_match(&self.stored, self.pattern.values()).map(|idx| {
                let values = idx.iter().map(|&i| self.stored[i]).collect();
                Occurrence::at(idx.into_iter().map(|i| i + 1).collect(), values)
            });
        }
        self.witness.is_some()
    }

    fn witness(&self) -> Option<Occurrence> {
        self.witness.clone()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        let s = self.stored.len();
        vec![StructureUsage::new(
            "stream",
            s,
            s,
            self.word_bits * s as u64,
        )]
    }
}

/// Decides containment by storing everything. Same answer as the oracle.
pub fn baseline_detect(inst: &StreamInstance, pattern: &Pattern) -> bool {
    let mut b = Baseline::new(pattern.clone(), inst.n);
    inst.elements.iter().for_each(|&v| {
        b.push(v);
    });
    b.finish()
}
