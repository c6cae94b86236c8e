use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use permstream::format::{write_stream_file, StreamFile};
use permstream::hardgen::{random_subset, subset_from_mask, DisjInstance};
use permstream::oracle::{contains_bruteforce, count_occurrences};
use permstream::perm::{permutations, Pattern, StreamInstance};
use permstream::random::{perturb, random_avoider, random_permutation};
use permstream::streaming::Detector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::gen::Construction;
use crate::input::trial_rng;
use crate::output::{envelope, Output};

/// Largest `n` accepted with --exhaustive: 10! = 3.6M permutations takes
/// minutes for size-3 patterns and much longer for larger ones.
const MAX_EXHAUSTIVE_N: u32 = 10;
/// Largest set universe with --exhaustive: 4^6 = 4096 (S, T) pairs.
const MAX_EXHAUSTIVE_NSETS: u32 = 6;
/// Trials per batch; a failing batch stops the run.
const BATCH: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    /// Uniform random permutations
    Random,
    /// Permutations avoiding the pattern (size-3 and monotone patterns)
    Avoider,
    /// Avoiders with one random swap
    NearAvoider,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Pattern to fuzz against the oracle
    #[arg(
        long,
        conflicts_with = "construction",
        required_unless_present = "construction"
    )]
    pattern: Option<Pattern>,

    /// Permutation size
    #[arg(long, required_unless_present = "construction")]
    n: Option<u32>,

    /// Check the iff-property of a disjointness construction instead
    #[arg(long)]
    construction: Option<Construction>,

    /// Set universe size for --construction
    #[arg(long, requires = "construction")]
    nsets: Option<u32>,

    #[arg(long, default_value_t = 1000)]
    trials: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = Family::Random)]
    family: Family,

    /// Enumerate every input (n <= 10, or nsets <= 6) instead of sampling
    #[arg(long)]
    exhaustive: bool,

    /// Directory for replay files written on failure
    #[arg(long, default_value = ".")]
    replay_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
struct Failure {
    trial: usize,
    detail: String,
    stream: Vec<u32>,
}

#[derive(Debug, Serialize)]
struct Body {
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nsets: Option<u32>,
    family: Option<Family>,
    seed: u64,
    exhaustive: bool,
    checked: usize,
    failure: Option<Failure>,
    replay: Option<String>,
    wall_ms: f64,
}

/// Runs `check` over inputs in batches, stopping after the first batch
/// with a failure. Returns the number checked and the earliest failure.
fn batched<T, I, F>(total: usize, input: I, check: F) -> (usize, Option<(usize, String, T)>)
where
    T: Send,
    I: Fn(usize) -> T + Sync,
    F: Fn(&T) -> Option<String> + Sync,
{
    let mut done = 0;
    while done < total {
        let end = (done + BATCH).min(total);
        let failure = (done..end).into_par_iter().find_map_first(|i| {
            let item = input(i);
            check(&item).map(|detail| (i, detail, item))
        });
        if let Some((i, detail, file)) = failure {
            return (i + 1, Some((i, detail, file)));
        }
        done = end;
    }
    (done, None)
}

fn pattern_check(pattern: &Pattern) -> impl Fn(&StreamFile) -> Option<String> + Sync + '_ {
    move |file| {
        let inst = &file.instance;
        let report = match Detector::run(pattern, inst) {
            Ok(r) => r,
            Err(e) => return Some(format!("detector error: {e}")),
        };
        let oracle = contains_bruteforce(inst, pattern).ok()?.is_some();
        if report.verdict != oracle {
            return Some(format!(
                "detector {} ({}) but oracle {oracle}",
                report.verdict, report.engine
            ));
        }
        match &report.occurrence {
            Some(occ) if !occ.verify(pattern, &inst.elements) => {
                Some(format!("reported occurrence {occ:?} does not verify"))
            }
            _ => None,
        }
    }
}

fn disj_check(inst: &DisjInstance, construction: &Construction) -> Option<String> {
    let oracle = contains_bruteforce(&inst.stream, &inst.pattern)
        .ok()?
        .is_some();
    let detector = Detector::run(&inst.pattern, &inst.stream).ok()?.verdict;
    let expect = inst.intersects();
    if oracle != expect || detector != expect {
        return Some(format!(
            "S={:?} T={:?}: intersect={expect} oracle={oracle} detector={detector}",
            inst.s, inst.t
        ));
    }
    if matches!(construction, Construction::Front4(_)) {
        let count = count_occurrences(&inst.stream, &inst.pattern).ok()?;
        if count != inst.intersection_size() as u64 {
            return Some(format!(
                "S={:?} T={:?}: {count} occurrences, expected {}",
                inst.s,
                inst.t,
                inst.intersection_size()
            ));
        }
    }
    None
}

/// Writes a failing input as a stream file whose `# pattern` line lets
/// `detect --check` replay it.
fn write_replay(
    dir: &Path,
    label: &str,
    seed: u64,
    trial: usize,
    detail: &str,
    file: &StreamFile,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(format!("fuzz-{label}-seed{seed}-trial{trial}.stream"));
    let rendered = write_stream_file(file);
    let (header, rest) = rendered.split_once('\n').unwrap_or((&rendered, ""));
    let body = format!("{header}\n# fuzz seed={seed} trial={trial}: {detail}\n{rest}");
    fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let start = Instant::now();
    let (checked, failure, label) = if let Some(c) = &args.construction {
        if !c.is_disjointness() {
            return Err(CliError::Usage(format!(
                "fuzz cannot check {c}; use a (S, T) construction"
            )));
        }
        let n_sets = args
            .nsets
            .ok_or_else(|| CliError::Usage("--construction needs --nsets".into()))?;
        if args.exhaustive && n_sets > MAX_EXHAUSTIVE_NSETS {
            return Err(CliError::Usage(format!(
                "--exhaustive allows nsets <= {MAX_EXHAUSTIVE_NSETS}"
            )));
        }
        // validate parameters once up front so errors are usage errors
        c.build(&[], &[], n_sets)?;
        let pairs = if args.exhaustive {
            1usize << (2 * n_sets)
        } else {
            args.trials
        };
        let build = |i: usize| -> DisjInstance {
            let (s, t) = if args.exhaustive {
                let mask = (1u32 << n_sets) - 1;
                (
                    subset_from_mask(i as u32 & mask, n_sets),
                    subset_from_mask((i as u32) >> n_sets, n_sets),
                )
            } else {
                let mut rng = trial_rng(args.seed, i as u64);
                (
                    random_subset(&mut rng, n_sets),
                    random_subset(&mut rng, n_sets),
                )
            };
            c.build(&s, &t, n_sets).expect("parameters checked above")
        };
        let (checked, failure) = batched(pairs, build, |inst| disj_check(inst, c));
        let failure = failure.map(|(i, detail, inst)| {
            let file = StreamFile {
                instance: inst.stream,
                segments: inst.segments,
                pattern: Some(inst.pattern),
            };
            (i, detail, file)
        });
        (checked, failure, format!("{c}-nsets{n_sets}"))
    } else {
        let pattern = args.pattern.clone().expect("clap requires --pattern");
        let n = args.n.expect("clap requires --n");
        if n == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        if args.family != Family::Random {
            random_avoider(&mut trial_rng(0, 0), 1, &pattern)?;
        }
        let check = pattern_check(&pattern);
        let (checked, failure) = if args.exhaustive {
            if n > MAX_EXHAUSTIVE_N {
                return Err(CliError::Usage(format!(
                    "--exhaustive allows n <= {MAX_EXHAUSTIVE_N}"
                )));
            }
            let all: Vec<Vec<u32>> = permutations(n).collect();
            batched(
                all.len(),
                |i| StreamFile::new(StreamInstance::permutation(all[i].clone())),
                &check,
            )
        } else {
            let family = args.family;
            batched(
                args.trials,
                |i| {
                    let mut rng = trial_rng(args.seed, i as u64);
                    let tau = match family {
                        Family::Random => random_permutation(&mut rng, n),
                        Family::Avoider => {
                            random_avoider(&mut rng, n, &pattern).expect("checked above")
                        }
                        Family::NearAvoider => {
                            let mut v =
                                random_avoider(&mut rng, n, &pattern).expect("checked above");
                            perturb(&mut rng, &mut v);
                            v
                        }
                    };
                    StreamFile::new(StreamInstance::permutation(tau))
                },
                &check,
            )
        };
        (
            checked,
            failure,
            format!("{}-n{n}", pattern.to_string().replace(',', "_")),
        )
    };

    let mut replay = None;
    let failure = match failure {
        Some((trial, detail, mut file)) => {
            if file.pattern.is_none() {
                file.pattern = args.pattern.clone();
            }
            let path = write_replay(&args.replay_dir, &label, args.seed, trial, &detail, &file)?;
            replay = Some(path.display().to_string());
            Some(Failure {
                trial,
                detail,
                stream: file.instance.elements,
            })
        }
        None => None,
    };

    let mut text = String::new();
    match &failure {
        None => {
            let _ = writeln!(text, "{checked} inputs checked, no disagreement");
        }
        Some(f) => {
            let _ = writeln!(text, "disagreement at trial {}: {}", f.trial, f.detail);
            let _ = writeln!(text, "stream: {:?}", f.stream);
            if let Some(p) = &replay {
                let _ = writeln!(text, "replay file: {p}");
            }
        }
    }
    let disagreement = failure.is_some();
    let body = Body {
        pattern: args.pattern.as_ref().map(ToString::to_string),
        n: args.n,
        construction: args.construction.as_ref().map(ToString::to_string),
        nsets: args.nsets,
        family: (args.construction.is_none() && !args.exhaustive).then_some(args.family),
        seed: args.seed,
        exhaustive: args.exhaustive,
        checked,
        failure,
        replay,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Output {
        json: envelope("fuzz", body),
        text,
        disagreement,
    })
}
