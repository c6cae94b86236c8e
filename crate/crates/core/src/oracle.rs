//! Exhaustive reference answers used to check every detector and generator.
//!
//! Everything here runs in `O(n^k)` time in the worst case and is meant for
//! small inputs only.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::perm::{Occurrence, Pattern, StreamInstance, StreamMode};

/// For each pattern slot, the earlier slots holding the nearest smaller and
/// nearest larger pattern value. A candidate for slot `d` must fall strictly
/// between the stream values chosen for those two slots.
struct Bounds {
    lower: Vec<Option<usize>>,
    upper: Vec<Option<usize>>,
}

impl Bounds {
    fn new(pattern: &[u32]) -> Self {
        let k = pattern.len();
        let mut lower = vec![None; k];
        let mut upper = vec![None; k];
        for d in 0..k {
            for t in 0..d {
                if pattern[t] < pattern[d] {
                    if lower[d].is_none_or(|l: usize| pattern[l] < pattern[t]) {
                        lower[d] = Some(t);
                    }
                } else if upper[d].is_none_or(|u: usize| pattern[u] > pattern[t]) {
                    upper[d] = Some(t);
                }
            }
        }
        Bounds { lower, upper }
    }
}

/// Visits every occurrence of `pattern` in `seq` in lexicographic order of
/// 0-based index tuples, until `visit` breaks.
fn for_each_match<F>(seq: &[u32], pattern: &[u32], mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let k = pattern.len();
    if k == 0 || k > seq.len() {
        return;
    }
    let bounds = Bounds::new(pattern);
    let mut chosen = Vec::with_capacity(k);
    let _ = descend(seq, &bounds, k, 0, &mut chosen, &mut visit);
}

fn descend<F>(
    seq: &[u32],
    bounds: &Bounds,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let d = chosen.len();
    if d == k {
        return visit(chosen);
    }
    let lo = bounds.lower[d].map_or(0, |t| seq[chosen[t]]);
    let hi = bounds.upper[d].map_or(u32::MAX, |t| seq[chosen[t]]);
    let last = seq.len() - (k - d);
    for j in start..=last {
        let v = seq[j];
        if v > lo && v < hi {
            chosen.push(j);
            let flow = descend(seq, bounds, k, j + 1, chosen, visit);
            chosen.pop();
            flow?;
        }
    }
    ControlFlow::Continue(())
}

/// Lexicographically first occurrence in a raw sequence, as 0-based indices.
pub fn first_match(seq: &[u32], pattern: &[u32]) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_match(seq, pattern, |idx| {
        found = Some(idx.to_vec());
        ControlFlow::Break(())
    });
    found
}

pub fn contains(seq: &[u32], pattern: &[u32]) -> bool {
    first_match(seq, pattern).is_some()
}

/// Number of index tuples of `seq` order-isomorphic to `pattern`.
pub fn count_matches(seq: &[u32], pattern: &[u32]) -> u64 {
    let mut count = 0u64;
    for_each_match(seq, pattern, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// The lexicographically smallest occurrence (by positions), if any.
pub fn contains_bruteforce(inst: &StreamInstance, pattern: &Pattern) -> Result<Option<Occurrence>> {
    inst.validate()?;
    Ok(first_match(&inst.elements, pattern.values()).map(|idx| {
        let values = idx.iter().map(|&i| inst.elements[i]).collect();
        Occurrence::at(idx.into_iter().map(|i| i + 1).collect(), values)
    }))
}

pub fn count_occurrences(inst: &StreamInstance, pattern: &Pattern) -> Result<u64> {
    inst.validate()?;
    Ok(count_matches(&inst.elements, pattern.values()))
}

/// A permutation split between a prefix holder and a suffix holder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInput {
    pub prefix: Vec<u32>,
    pub suffix: Vec<u32>,
    pub n: u32,
}

impl SplitInput {
    pub fn new(stream: &[u32], split: usize) -> Self {
        SplitInput {
            prefix: stream[..split].to_vec(),
            suffix: stream[split..].to_vec(),
            n: stream.len() as u32,
        }
    }

    pub fn joined(&self) -> StreamInstance {
        let mut elements = self.prefix.clone();
        elements.extend_from_slice(&self.suffix);
        StreamInstance {
            n: self.n,
            mode: StreamMode::Permutation,
            elements,
        }
    }
}

/// The prefix holder's single message: does the pattern occur entirely in
/// the prefix, or with only its last element outside it (completed by any
/// suffix value, all of which come later)?
pub fn split_message(input: &SplitInput, pattern: &Pattern) -> bool {
    let pat = pattern.values();
    if contains(&input.prefix, pat) {
        return true;
    }
    let mut probe = input.prefix.clone();
    probe.push(0);
    input.suffix.iter().any(|&v| {
        *probe.last_mut().expect("non-empty") = v;
        contains(&probe, pat)
    })
}

/// Runs the one-bit protocol: the suffix holder combines the message with
/// occurrences lying entirely in the suffix or missing only their first
/// element, which may be any prefix value.
pub fn split_protocol(input: &SplitInput, pattern: &Pattern) -> Result<bool> {
    if pattern.len() > 3 {
        return Err(Error::PatternTooLong(pattern.len()));
    }
    input.joined().validate()?;
    if split_message(input, pattern) {
        return Ok(true);
    }
    let pat = pattern.values();
    if contains(&input.suffix, pat) {
        return Ok(true);
    }
    let mut probe = Vec::with_capacity(input.suffix.len() + 1);
    probe.push(0);
    probe.extend_from_slice(&input.suffix);
    Ok(input.prefix.iter().any(|&v| {
        probe[0] = v;
        contains(&probe, pat)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{complement, permutations};

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn seq312_instance_first_match() {
        let inst = StreamInstance::sequence(18, vec![3, 1, 9, 7, 15, 13, 18, 16, 14, 8, 5]);
        let occ = contains_bruteforce(&inst, &pat("312")).unwrap().unwrap();
        assert_eq!(occ, Occurrence::at(vec![3, 4, 10], vec![9, 7, 8]));
    }

    #[test]
    fn negative_examples() {
        let inc = StreamInstance::permutation((1..=6).collect());
        assert_eq!(contains_bruteforce(&inc, &pat("21")).unwrap(), None);
        let small = StreamInstance::permutation(vec![2, 1, 3]);
        assert_eq!(contains_bruteforce(&small, &pat("312")).unwrap(), None);
    }

    #[test]
    fn count_examples() {
        let small = StreamInstance::permutation(vec![2, 1, 3]);
        assert_eq!(count_occurrences(&small, &pat("12")).unwrap(), 2);
        let dec = StreamInstance::permutation(vec![4, 3, 2, 1]);
        assert_eq!(count_occurrences(&dec, &pat("21")).unwrap(), 6);
        assert_eq!(count_occurrences(&dec, &pat("4321")).unwrap(), 1);
    }

    #[test]
    fn invalid_stream_is_rejected() {
        let bad = StreamInstance::sequence(3, vec![1, 1]);
        assert!(contains_bruteforce(&bad, &pat("12")).is_err());
        assert!(count_occurrences(&bad, &pat("12")).is_err());
    }

    #[test]
    fn split_examples() {
        let a = SplitInput {
            prefix: vec![3, 1],
            suffix: vec![2],
            n: 3,
        };
        assert!(split_message(&a, &pat("312")));
        assert!(split_protocol(&a, &pat("312")).unwrap());
        let b = SplitInput {
            prefix: vec![1],
            suffix: vec![2, 3],
            n: 3,
        };
        assert!(!split_message(&b, &pat("123")));
        assert!(split_protocol(&b, &pat("123")).unwrap());
        assert_eq!(
            split_protocol(&b, &pat("1234")),
            Err(Error::PatternTooLong(4))
        );
    }

    #[test]
    fn first_match_is_lexicographically_smallest() {
        // Brute force over all index triples in lexicographic order.
        for perm in permutations(6) {
            for p in Pattern::all_of_length(3) {
                let mut expected = None;
                'outer: for i in 0..6 {
                    for j in i + 1..6 {
                        for l in j + 1..6 {
                            let vals = [perm[i], perm[j], perm[l]];
                            if crate::perm::rank_normalize(&vals) == p.values() {
                                expected = Some(vec![i, j, l]);
                                break 'outer;
                            }
                        }
                    }
                }
                assert_eq!(first_match(&perm, p.values()), expected);
            }
        }
    }

    #[test]
    fn witness_and_count_agree_with_complement_duality() {
        for perm in permutations(6) {
            let inst = StreamInstance::permutation(perm.clone());
            let comp = StreamInstance::permutation(complement(&perm, 6).unwrap());
            for p in Pattern::all_of_length(3)
                .into_iter()
                .chain(Pattern::all_of_length(4))
            {
                let found = contains_bruteforce(&inst, &p).unwrap();
                let count = count_occurrences(&inst, &p).unwrap();
                assert_eq!(found.is_some(), count > 0);
                if let Some(occ) = found {
                    assert!(occ.verify(&p, &perm));
                }
                assert_eq!(count, count_occurrences(&comp, &p.complemented()).unwrap());
            }
        }
    }
}
