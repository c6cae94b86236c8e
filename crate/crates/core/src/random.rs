//! Seeded random inputs: uniform permutations and pattern avoiders.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{complement, reverse, Pattern};

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (1..=n).collect();
    v.shuffle(rng);
    v
}

/// Random 312-avoider: `alpha 1 beta` with all of `alpha` below all of
/// `beta`, split point uniform, applied recursively.
pub fn random_312_avoider<R: Rng + ?Sized>(rng: &mut R, n: u32) -> Vec<u32> {
    let mut out = vec![0; n as usize];
    // (offset, length, smallest value)
    let mut stack = vec![(0usize, n as usize, 1u32)];
    while let Some((off, len, lo)) = stack.pop() {
        if len == 0 {
            continue;
        }
        let left = rng.gen_range(0..len);
        out[off + left] = lo;
        stack.push((off, left, lo + 1));
        stack.push((off + left + 1, len - left - 1, lo + 1 + left as u32));
    }
    out
}

/// A random permutation avoiding `pattern`, for size-3 non-monotone
/// patterns and increasing patterns of length at least 2.
pub fn random_avoider<R: Rng + ?Sized>(rng: &mut R, n: u32, pattern: &Pattern) -> Result<Vec<u32>> {
    let complemented = |v: Vec<u32>| complement(&v, n).expect("values lie in 1..=n");
    match pattern.values() {
        [3, 1, 2] => Ok(random_312_avoider(rng, n)),
        [2, 1, 3] => Ok(reverse(&random_312_avoider(rng, n))),
        [1, 3, 2] => Ok(complemented(random_312_avoider(rng, n))),
        [2, 3, 1] => Ok(complemented(reverse(&random_312_avoider(rng, n)))),
        _ if pattern.len() >= 2 && pattern.is_monotone() => {
            let runs = random_runs(rng, n, pattern.len() - 1);
            if pattern.values()[0] == 1 {
                Ok(runs)
            } else {
                Ok(complemented(runs))
            }
        }
        _ => Err(Error::UnsupportedPattern {
            pattern: pattern.to_string(),
            what: "avoiders are generated for size-3 and monotone patterns",
        }),
    }
}

/// Decreasing sequence of increasing runs of length at most `run`, so the
/// longest increasing subsequence is at most `run`.
fn random_runs<R: Rng + ?Sized>(rng: &mut R, n: u32, run: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    let mut hi = n;
    while hi > 0 {
        let len = rng.gen_range(1..=run as u32).min(hi);
        out.extend(hi - len + 1..=hi);
        hi -= len;
    }
    out
}

/// Swaps one random pair of positions.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, v: &mut [u32]) {
    if v.len() >= 2 {
        let i = rng.gen_range(0..v.len());
        let j = rng.gen_range(0..v.len());
        v.swap(i, j);
    }
}
