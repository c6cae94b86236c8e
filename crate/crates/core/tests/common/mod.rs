#![allow(dead_code)]

use permstream::perm::{complement, reverse};
use permstream::random;
use permstream::streaming::Detector312;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm<R: Rng>(rng: &mut R, n: u32) -> Vec<u32> {
    random::random_permutation(rng, n)
}

pub fn random_avoider<R: Rng>(rng: &mut R, n: u32, pattern: &str) -> Vec<u32> {
    random::random_avoider(rng, n, &pattern.parse().unwrap()).unwrap()
}

pub fn perturb<R: Rng>(rng: &mut R, mut v: Vec<u32>) -> Vec<u32> {
    random::perturb(rng, &mut v);
    v
}

/// Longest increasing subsequence by the quadratic recurrence.
pub fn lis(seq: &[u32]) -> usize {
    let mut best = vec![1usize; seq.len()];
    for j in 0..seq.len() {
        for i in 0..j {
            if seq[i] < seq[j] {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Facts about the full input used to check the 312 detector's state.
pub struct Full312 {
    tau: Vec<u32>,
    /// 1-based position of each value.
    pos: Vec<usize>,
    /// Largest value strictly before each position (0 if none), by position.
    max_before: Vec<u32>,
    /// Smallest value above `tau[p]` strictly after position `p`, by position.
    min_later_above: Vec<u32>,
}

impl Full312 {
    pub fn new(tau: &[u32]) -> Self {
        let n = tau.len();
        let mut pos = vec![0; n + 1];
        for (i, &v) in tau.iter().enumerate() {
            pos[v as usize] = i + 1;
        }
        let mut max_before = vec![0; n + 1];
        for p in 2..=n {
            max_before[p] = max_before[p - 1].max(tau[p - 2]);
        }
        let mut min_later_above = vec![u32::MAX; n + 1];
        for p in 1..=n {
            let v = tau[p - 1];
            min_later_above[p] = tau[p..]
                .iter()
                .copied()
                .filter(|&c| c > v)
                .min()
                .unwrap_or(u32::MAX);
        }
        Full312 {
            tau: tau.to_vec(),
            pos,
            max_before,
            min_later_above,
        }
    }

    /// Checks the detector state after `t` values: the running maximum, the
    /// window contents and the stored pairs against the prefix, and the two
    /// completion properties against the whole input.
    pub fn check(&self, det: &Detector312, t: usize) -> Result<(), String> {
        let prefix = &self.tau[..t];
        let k = det.width();
        let h = *prefix.iter().max().unwrap();
        // h is the prefix maximum
        if det.top() != Some(h) {
            return Err(format!("step {t}: h = {:?}, expected {h}", det.top()));
        }
        // A holds exactly the prefix values in (h - k, h]
        let mut expected: Vec<u32> = prefix.iter().copied().filter(|&v| v + k > h).collect();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        if det.window_values() != expected {
            return Err(format!(
                "step {t}: A = {:?}, expected {expected:?}",
                det.window_values()
            ));
        }
        // any decreasing pair a > b > h - k in the prefix has no later c in (b, a).
        for &b in &expected {
            let p = self.pos[b as usize];
            let a = self.max_before[p];
            if a > b && self.min_later_above[p] < a {
                return Err(format!(
                    "step {t}: pair ({a}, {b}) inside the window completes later"
                ));
            }
        }
        let pairs = det.pairs();
        // stored pairs are decreasing pairs of the prefix, at least k apart
        for &(a, b) in &pairs {
            let (pa, pb) = (self.pos[a as usize], self.pos[b as usize]);
            if a < b + k || !(pa < pb && pb <= t) {
                return Err(format!(
                    "step {t}: stored pair ({a}, {b}) is not a wide decreasing pair"
                ));
            }
        }
        // stored intervals are disjoint; pairs are ordered by b
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].1 {
                return Err(format!(
                    "step {t}: intervals {:?} and {:?} overlap",
                    w[0], w[1]
                ));
            }
        }
        // for each b read so far with some a before it and c after it
        // making 312, a stored pair must cover [b, max a].
        for p in 1..=t {
            let b = self.tau[p - 1];
            let a = self.max_before[p];
            if a > b && self.min_later_above[p] < a {
                let idx = pairs.partition_point(|&(_, lo)| lo <= b);
                let covered = idx > 0 && pairs[idx - 1].0 >= a;
                if !covered {
                    return Err(format!(
                        "step {t}: occurrence ({a}, {b}, _) not covered by D"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Quadratic 312 test: some `b` has a larger value before it and a value
/// strictly between the two after it.
pub fn contains_312_quadratic(tau: &[u32]) -> bool {
    let mut max_before = 0;
    for (j, &b) in tau.iter().enumerate() {
        if max_before > b && tau[j + 1..].iter().any(|&c| b < c && c < max_before) {
            return true;
        }
        max_before = max_before.max(b);
    }
    false
}

/// Size-3 non-monotone containment through the reverse/complement symmetries.
pub fn contains_size3(tau: &[u32], pattern: &str) -> bool {
    let n = tau.len() as u32;
    match pattern {
        "312" => contains_312_quadratic(tau),
        "213" => contains_312_quadratic(&reverse(tau)),
        "132" => contains_312_quadratic(&complement(tau, n).unwrap()),
        "231" => contains_312_quadratic(&reverse(&complement(tau, n).unwrap())),
        other => panic!("{other} is not a size-3 non-monotone pattern"),
    }
}
