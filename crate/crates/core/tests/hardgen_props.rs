mod common;

use common::{lis, rng};
use permstream::hardgen::{
    gen_3142_2143, gen_4312, gen_monotone_lb, gen_pi4_front, gen_seq312, subset_from_mask,
    DisjInstance, Owner,
};
use permstream::oracle::{contains_bruteforce, count_occurrences};
use permstream::perm::Pattern;
use permstream::streaming::{Detector, Engine};
use rand::seq::SliceRandom;

fn all_pairs(
    n_sets: u32,
    mut gen: impl FnMut(&[u32], &[u32]) -> DisjInstance,
) -> Vec<DisjInstance> {
    let mut out = Vec::new();
    for sm in 0..1u32 << n_sets {
        for tm in 0..1u32 << n_sets {
            out.push(gen(
                &subset_from_mask(sm, n_sets),
                &subset_from_mask(tm, n_sets),
            ));
        }
    }
    out
}

fn every_instance() -> Vec<DisjInstance> {
    let mut all = Vec::new();
    for n in 1..=5 {
        all.extend(all_pairs(n, |s, t| gen_seq312(s, t, n).unwrap()));
    }
    for n in 1..=4 {
        for p in ["4231", "4213", "4132", "4123"] {
            let p: Pattern = p.parse().unwrap();
            all.extend(all_pairs(n, |s, t| gen_pi4_front(&p, s, t, n).unwrap()));
        }
        all.extend(all_pairs(n, |s, t| gen_4312(s, t, n).unwrap()));
        for p in ["3142", "2143"] {
            let p: Pattern = p.parse().unwrap();
            all.extend(all_pairs(n, |s, t| gen_3142_2143(&p, s, t, n).unwrap()));
        }
    }
    all
}

#[test]
fn containment_iff_intersecting() {
    for inst in every_instance() {
        let found = contains_bruteforce(&inst.stream, &inst.pattern)
            .unwrap()
            .is_some();
        assert_eq!(
            found,
            inst.intersects(),
            "{} S={:?} T={:?}",
            inst.pattern,
            inst.s,
            inst.t
        );
    }
}

#[test]
fn front_generators_have_one_occurrence_per_common_element() {
    for n in 1..=4 {
        for p in ["4231", "4213", "4132", "4123"] {
            let p: Pattern = p.parse().unwrap();
            for inst in all_pairs(n, |s, t| gen_pi4_front(&p, s, t, n).unwrap()) {
                assert_eq!(
                    count_occurrences(&inst.stream, &p).unwrap(),
                    inst.intersection_size() as u64,
                    "{p} S={:?} T={:?}",
                    inst.s,
                    inst.t
                );
            }
        }
    }
}

#[test]
fn segments_partition_the_stream() {
    for inst in every_instance() {
        assert!(inst.stream.is_valid());
        let mut next = 1;
        for seg in &inst.segments {
            assert_eq!(seg.start, next);
            next = seg.end + 1;
        }
        assert_eq!(next, inst.stream.len() + 1);
        let owners: Vec<Owner> = inst.segments.iter().map(|s| s.owner).collect();
        let expected = match inst.pattern.to_string().as_str() {
            "312" | "4231" | "4213" | "4132" | "4123" => vec![Owner::Alice, Owner::Bob],
            _ => vec![Owner::Alice, Owner::Bob, Owner::Alice],
        };
        assert_eq!(owners, expected);
    }
}

#[test]
fn dispatched_detector_agrees_on_generated_instances() {
    for inst in every_instance() {
        let report = Detector::run(&inst.pattern, &inst.stream).unwrap();
        assert_eq!(report.engine, Engine::Baseline);
        assert_eq!(report.verdict, inst.intersects());
    }
}

fn random_odd_shape<R: rand::Rng>(r: &mut R, k: usize, n: u32) -> Vec<u32> {
    let mut odds: Vec<u32> = (3..n).step_by(2).collect();
    odds.shuffle(r);
    let mut v: Vec<u32> = odds[..k - 3].to_vec();
    v.push(1);
    v.sort_unstable();
    v
}

#[test]
fn monotone_lb_separates_random_pairs() {
    let mut tested = 0;
    for seed in 0..300 {
        let mut r = rng(seed);
        let k = [4, 5][seed as usize % 2];
        // k^2 + 2, rounded up to even: the construction pairs odd and even values
        let n = ((k * k + 2) as u32).next_multiple_of(2);
        let rho = random_odd_shape(&mut r, k, n);
        let sigma = random_odd_shape(&mut r, k, n);
        if rho == sigma {
            assert!(gen_monotone_lb(k, n, &rho, Some(&sigma)).is_err());
            continue;
        }
        let out = gen_monotone_lb(k, n, &rho, Some(&sigma)).unwrap();
        let rejecting = out.rejecting.unwrap();
        assert!(out.accepting.is_valid() && rejecting.is_valid());
        let p = Pattern::new((1..=k as u32).collect()).unwrap();
        assert!(lis(&out.accepting.elements) >= k);
        assert!(lis(&rejecting.elements) < k);
        assert!(Detector::run(&p, &out.accepting).unwrap().verdict);
        assert!(!Detector::run(&p, &rejecting).unwrap().verdict);
        tested += 1;
    }
    assert!(tested > 250);
}
