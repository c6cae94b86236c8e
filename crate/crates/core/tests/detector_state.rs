mod common;

use common::{random_avoider, random_perm, rng, Full312};
use permstream::perm::{Pattern, StreamInstance, StreamMode};
use permstream::streaming::{
    d213::strip_size, d312::window_width, Detector, Detector312, Hit312, Step,
};

fn check_run(tau: &[u32]) -> Result<(), String> {
    let full = Full312::new(tau);
    let mut det = Detector312::new(tau.len() as u32);
    for (t, &v) in tau.iter().enumerate() {
        if det.step(v).is_accepted() {
            return Ok(());
        }
        full.check(&det, t + 1)?;
    }
    Ok(())
}

#[test]
fn invariants_hold_on_random_inputs() {
    for seed in 0..300 {
        let mut r = rng(seed);
        let tau = random_perm(&mut r, 256);
        check_run(&tau).unwrap();
    }
}

#[test]
fn invariants_hold_on_avoiders() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let n = [16, 100, 256][seed as usize % 3];
        let tau = random_avoider(&mut r, n, "312");
        check_run(&tau).unwrap();
        check_run(&common::perturb(&mut r, tau)).unwrap();
    }
}

#[test]
fn future_witness_appears_later() {
    let p: Pattern = "312".parse().unwrap();
    let mut gaps = 0;
    for seed in 0..2000 {
        let mut r = rng(seed);
        let n = [8, 16, 64, 256][seed as usize % 4];
        let tau = random_perm(&mut r, n);
        let mut det = Detector312::new(n);
        for &v in &tau {
            if let Step::Accepted(Some(occ)) = det.step(v) {
                assert!(occ.verify(&p, &tau), "{occ:?} on {tau:?}");
                if det.hit() == Some(Hit312::WindowGap) {
                    assert!(occ.has_future());
                    gaps += 1;
                }
                break;
            }
        }
    }
    assert!(gaps > 100, "only {gaps} window-gap acceptances");
}

#[test]
fn space_312_stays_in_bounds() {
    for (seed, n) in [(1u64, 1024u32), (2, 4096)] {
        let k = window_width(n) as usize;
        let max_pairs = (n as usize).div_ceil(k);
        for tau in [
            random_perm(&mut rng(seed), n),
            random_avoider(&mut rng(seed), n, "312"),
            (1..=n).rev().collect(),
        ] {
            let mut det = Detector312::new(n);
            for &v in &tau {
                if det.step(v).is_accepted() {
                    break;
                }
                assert!(det.window_values().len() <= k);
                assert!(det.pairs().len() <= max_pairs);
            }
        }
    }
}

#[test]
fn space_231_stays_in_bounds() {
    let p: Pattern = "231".parse().unwrap();
    for n in [100u32, 1024] {
        let s = strip_size(n);
        let max_records = (n as f64).sqrt().ceil() as usize;
        let tau = random_avoider(&mut rng(n as u64), n, "231");
        let mut det = Detector::new(&p, n, StreamMode::Permutation).unwrap();
        for &v in &tau {
            det.push(v).unwrap();
            for u in det.usage() {
                match u.name {
                    "buffer" => assert!(u.count <= s),
                    "strips" => assert!(u.count <= max_records),
                    _ => {}
                }
            }
        }
        let report = det.finish();
        assert!(!report.verdict);
        assert_eq!(report.structure_peaks["strips"], (n as usize).div_ceil(s));
    }
}

#[test]
fn strip_count_for_1024() {
    let tau: Vec<u32> = (1..=1024).rev().collect();
    let report = Detector::run(&"231".parse().unwrap(), &StreamInstance::permutation(tau)).unwrap();
    assert_eq!(report.structure_peaks["strips"], 32);
}
