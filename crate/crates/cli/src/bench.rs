use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use permstream::perm::{Pattern, PatternKind, StreamInstance};
use permstream::random::{random_avoider, random_permutation};
use permstream::streaming::Detector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::input::trial_rng;
use crate::output::{envelope, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// 312, 132, 231, 213 or a monotone pattern
    #[arg(long)]
    pattern: Pattern,

    /// Permutation sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,

    /// Inputs per (n, family)
    #[arg(long, default_value_t = 10)]
    trials: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    n: u32,
    family: &'static str,
    trials: usize,
    engine: String,
    /// Mean fraction of the input read before the verdict.
    read_fraction: f64,
    peak_cells_max: usize,
    peak_cells_mean: f64,
    peak_bits_max: u64,
    structure_peaks: BTreeMap<String, usize>,
    scale_name: &'static str,
    scale: f64,
    ratio: f64,
}

fn scale(pattern: &Pattern, n: u32) -> (&'static str, f64) {
    let nf = n as f64;
    match pattern.values() {
        [3, 1, 2] | [1, 3, 2] => ("sqrt(n log2 n)", (nf * nf.log2().max(1.0)).sqrt()),
        [2, 1, 3] | [2, 3, 1] => ("sqrt(n)", nf.sqrt()),
        _ => ("k", pattern.len() as f64),
    }
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let start = Instant::now();
    let p = &args.pattern;
    if !(p.kind() == PatternKind::NonMonotone3 || p.is_monotone()) {
        return Err(CliError::Usage(format!(
            "bench covers 312, 132, 231, 213 and monotone patterns, not {p}"
        )));
    }
    if args.trials == 0 || args.n.contains(&0) {
        return Err(CliError::Usage(
            "--trials and every --n must be positive".into(),
        ));
    }

    let mut rows = Vec::new();
    for (ni, &n) in args.n.iter().enumerate() {
        for (fi, family) in ["random", "adversarial"].into_iter().enumerate() {
            let reports: Vec<_> = (0..args.trials)
                .into_par_iter()
                .map(|i| {
                    let stream = (ni * 2 + fi) as u64 * args.trials as u64 + i as u64;
                    let mut rng = trial_rng(args.seed, stream);
                    let tau = if family == "random" {
                        random_permutation(&mut rng, n)
                    } else {
                        random_avoider(&mut rng, n, p)?
                    };
                    Ok(Detector::run(p, &StreamInstance::permutation(tau))?)
                })
                .collect::<Result<_, CliError>>()?;
            let mut structure_peaks = BTreeMap::new();
            for r in &reports {
                for (name, &count) in &r.structure_peaks {
                    let e = structure_peaks.entry(name.clone()).or_insert(0);
                    *e = count.max(*e);
                }
            }
            let peak_cells_max = reports.iter().map(|r| r.peak_cells).max().unwrap_or(0);
            let (scale_name, scale) = scale(p, n);
            let t = reports.len() as f64;
            rows.push(Row {
                n,
                family,
                trials: reports.len(),
                engine: reports[0].engine.to_string(),
                read_fraction: reports
                    .iter()
                    .map(|r| r.pushed as f64 / n as f64)
                    .sum::<f64>()
                    / t,
                peak_cells_max,
                peak_cells_mean: reports.iter().map(|r| r.peak_cells as f64).sum::<f64>() / t,
                peak_bits_max: reports.iter().map(|r| r.peak_bits).max().unwrap_or(0),
                structure_peaks,
                scale_name,
                scale,
                ratio: peak_cells_max as f64 / scale,
            });
        }
    }

    let mut text = String::new();
    let scale_name = rows.first().map_or("", |r| r.scale_name);
    let _ = writeln!(
        text,
        "{:>9} {:<12} {:>6} {:>6} {:>10} {:>10} {:>12}  structures",
        "n",
        "family",
        "trials",
        "read",
        "peak",
        "mean",
        format!("peak/{scale_name}")
    );
    for r in &rows {
        let structures: Vec<String> = r
            .structure_peaks
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            text,
            "{:>9} {:<12} {:>6} {:>5.0}% {:>10} {:>10.1} {:>12.3}  {}",
            r.n,
            r.family,
            r.trials,
            r.read_fraction * 100.0,
            r.peak_cells_max,
            r.peak_cells_mean,
            r.ratio,
            structures.join(" ")
        );
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let _ = writeln!(text, "max peak/{scale_name}: {max_ratio:.3}");

    #[derive(Serialize)]
    struct Body<'a> {
        pattern: String,
        seed: u64,
        rows: &'a [Row],
        max_ratio: f64,
        wall_ms: f64,
    }
    let json = envelope(
        "bench",
        Body {
            pattern: p.to_string(),
            seed: args.seed,
            rows: &rows,
            max_ratio,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    );
    Ok(Output {
        json,
        text,
        disagreement: false,
    })
}
