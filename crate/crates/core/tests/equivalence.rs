mod common;

use common::{contains_size3, lis, perturb, random_avoider, random_perm, rng};
use permstream::oracle::{contains, contains_bruteforce};
use permstream::perm::{complement, permutations, Pattern, StreamInstance, StreamMode};
use permstream::streaming::{Detector, Engine};
use proptest::prelude::*;
use rayon::prelude::*;

fn verdict(pattern: &Pattern, stream: &[u32]) -> bool {
    Detector::run(pattern, &StreamInstance::permutation(stream.to_vec()))
        .unwrap()
        .verdict
}

fn patterns_2_to_4() -> Vec<Pattern> {
    (2..=4).flat_map(Pattern::all_of_length).collect()
}

#[test]
fn exhaustive_up_to_six() {
    let patterns = patterns_2_to_4();
    assert_eq!(patterns.len(), 32);
    for n in 1..=6 {
        let perms: Vec<_> = permutations(n).collect();
        perms.par_iter().for_each(|tau| {
            for p in &patterns {
                assert_eq!(verdict(p, tau), contains(tau, p.values()), "{p} on {tau:?}");
            }
        });
    }
}

#[test]
fn exhaustive_size3_engines_at_eight() {
    let patterns: Vec<Pattern> = ["312", "132", "213", "231"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let perms: Vec<_> = permutations(8).collect();
    perms.par_iter().for_each(|tau| {
        for p in &patterns {
            assert_eq!(verdict(p, tau), contains(tau, p.values()), "{p} on {tau:?}");
        }
    });
}

#[test]
fn avoiders_and_near_avoiders() {
    for (i, pat) in ["312", "132", "213", "231"].iter().enumerate() {
        let p: Pattern = pat.parse().unwrap();
        (0..400u64).into_par_iter().for_each(|trial| {
            let mut r = rng(1000 * i as u64 + trial);
            let n = [10, 64, 200, 1000][trial as usize % 4];
            let avoider = random_avoider(&mut r, n, pat);
            assert!(!verdict(&p, &avoider), "{pat} reported in an avoider");
            let near = perturb(&mut r, avoider);
            assert_eq!(
                verdict(&p, &near),
                contains_size3(&near, pat),
                "{pat} on {near:?}"
            );
        });
    }
}

#[test]
fn quadratic_reference_matches_oracle() {
    for tau in permutations(7) {
        for pat in ["312", "132", "213", "231"] {
            assert_eq!(
                contains_size3(&tau, pat),
                contains(&tau, pat.parse::<Pattern>().unwrap().values())
            );
        }
    }
}

#[test]
fn random_permutations_agree() {
    let patterns: Vec<Pattern> = ["312", "132", "231", "213", "123", "321", "1234", "654321"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    (0..300u64).into_par_iter().for_each(|seed| {
        let mut r = rng(seed);
        let n = [5, 12, 50, 200][seed as usize % 4];
        let tau = random_perm(&mut r, n);
        for p in &patterns {
            assert_eq!(
                verdict(p, &tau),
                contains(&tau, p.values()),
                "{p} on {tau:?}"
            );
        }
    });
}

#[test]
fn witnesses_are_real_occurrences() {
    for pat in ["312", "132", "1", "2143"] {
        let p: Pattern = pat.parse().unwrap();
        for seed in 0..200 {
            let tau = random_perm(&mut rng(seed), 30);
            let report = Detector::run(&p, &StreamInstance::permutation(tau.clone())).unwrap();
            if let Some(occ) = report.occurrence {
                assert!(occ.verify(&p, &tau), "{pat}: {occ:?} on {tau:?}");
            }
        }
    }
}

#[test]
fn sequence_mode_uses_baseline_for_size3() {
    // Sparse sequence: the unseen values must not be treated as arriving later.
    let inst = StreamInstance::sequence(10, vec![10, 5]);
    let p: Pattern = "312".parse().unwrap();
    let report = Detector::run(&p, &inst).unwrap();
    assert_eq!(report.engine, Engine::Baseline);
    assert!(!report.verdict);
    assert_eq!(report.peak_cells, 2);
}

#[test]
fn baseline_agrees_with_oracle() {
    for pat in ["2143", "4231", "312"] {
        let p: Pattern = pat.parse().unwrap();
        for tau in permutations(6) {
            let inst = StreamInstance::permutation(tau);
            let forced = {
                let mut d = Detector::with_engine(&p, 6, StreamMode::Permutation, Engine::Baseline)
                    .unwrap();
                inst.elements.iter().for_each(|&v| {
                    d.push(v).unwrap();
                });
                d.finish()
            };
            assert_eq!(
                forced.verdict,
                contains_bruteforce(&inst, &p).unwrap().is_some()
            );
            assert_eq!(forced.peak_cells, 6);
        }
    }
}

proptest! {
    #[test]
    fn increasing_detector_matches_lis(
        tau in (1u32..40).prop_flat_map(|n| Just((1..=n).collect::<Vec<u32>>()).prop_shuffle()),
        k in 2usize..7,
    ) {
        let p = Pattern::new((1..=k as u32).collect()).unwrap();
        prop_assert_eq!(verdict(&p, &tau), lis(&tau) >= k);
    }

    #[test]
    fn complement_duality(
        tau in (1u32..30).prop_flat_map(|n| Just((1..=n).collect::<Vec<u32>>()).prop_shuffle()),
        idx in 0usize..32,
    ) {
        let p = &patterns_2_to_4()[idx];
        let n = tau.len() as u32;
        let tau_c = complement(&tau, n).unwrap();
        prop_assert_eq!(verdict(p, &tau), verdict(&p.complemented(), &tau_c));
    }
}
