use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use permstream::oracle::contains_bruteforce;
use permstream::perm::{Occurrence, Pattern, Position, StreamMode};
use permstream::streaming::{Detector, DetectorReport, Engine};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::input::{Loaded, StreamSource};
use crate::output::{envelope, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Pattern, e.g. 312 or 1,2,3,4,5,6,7,8,9,10 (default: the file's `# pattern` line)
    #[arg(long)]
    pattern: Option<Pattern>,

    /// Force an engine: trivial, monotone, 312, 213 or baseline
    #[arg(long)]
    engine: Option<Engine>,

    /// Also run the brute-force oracle and compare verdicts
    #[arg(long)]
    check: bool,

    #[command(flatten)]
    source: StreamSource,
}

#[derive(Debug, Serialize)]
struct Run {
    source: String,
    pattern: String,
    n: u32,
    mode: StreamMode,
    len: usize,
    verdict: bool,
    occurrence: Option<Occurrence>,
    engine: Engine,
    complemented: bool,
    pushed: usize,
    peak_cells: usize,
    peak_bits: u64,
    structure_peaks: BTreeMap<String, usize>,
    cells_at_peak: BTreeMap<String, usize>,
    warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

#[derive(Debug, Serialize)]
struct Summary {
    instances: usize,
    accepted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    disagreements: Option<usize>,
}

pub fn describe_occurrence(occ: &Occurrence) -> String {
    let positions: Vec<String> = occ
        .positions
        .iter()
        .map(|p| match p {
            Position::At(i) => i.to_string(),
            Position::Future => "later".into(),
        })
        .collect();
    let values: Vec<String> = occ.values.iter().map(u32::to_string).collect();
    format!(
        "values ({}) at positions ({})",
        values.join(", "),
        positions.join(", ")
    )
}

fn run_one(
    pattern: &Pattern,
    engine: Option<Engine>,
    check: bool,
    item: &Loaded,
) -> Result<Run, CliError> {
    let inst = &item.file.instance;
    let mut det = match engine {
        Some(e) => Detector::with_engine(pattern, inst.n, inst.mode, e)?,
        None => Detector::new(pattern, inst.n, inst.mode)?,
    };
    let warning = det.dispatch().warning.clone();
    for &v in &inst.elements {
        if det.push(v)?.is_accepted() {
            break;
        }
    }
    let DetectorReport {
        verdict,
        occurrence,
        engine,
        complemented,
        pushed,
        peak_cells,
        peak_bits,
        structure_peaks,
        cells_at_peak,
    } = det.finish();
    let oracle = if check {
        Some(contains_bruteforce(inst, pattern)?.is_some())
    } else {
        None
    };
    Ok(Run {
        source: item.label.clone(),
        pattern: pattern.to_string(),
        n: inst.n,
        mode: inst.mode,
        len: inst.len(),
        verdict,
        occurrence,
        engine,
        complemented,
        pushed,
        peak_cells,
        peak_bits,
        structure_peaks,
        cells_at_peak,
        warning,
        agrees: oracle.map(|o| o == verdict),
        oracle,
    })
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let start = Instant::now();
    let items = args.source.load()?;
    let runs: Vec<Run> = items
        .par_iter()
        .map(|item| {
            let pattern = args
                .pattern
                .clone()
                .or_else(|| item.file.pattern.clone())
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "{}: no --pattern and no `# pattern` line",
                        item.label
                    ))
                })?;
            run_one(&pattern, args.engine, args.check, item)
        })
        .collect::<Result<_, _>>()?;

    let disagreements = args
        .check
        .then(|| runs.iter().filter(|r| r.agrees == Some(false)).count());
    let summary = Summary {
        instances: runs.len(),
        accepted: runs.iter().filter(|r| r.verdict).count(),
        disagreements,
    };

    let mut text = String::new();
    if runs.len() == 1 {
        let r = &runs[0];
        let verdict = if r.verdict { "contains" } else { "avoids" };
        let _ = writeln!(text, "{}: {verdict} {}", r.source, r.pattern);
        if let Some(occ) = &r.occurrence {
            let _ = writeln!(text, "  occurrence: {}", describe_occurrence(occ));
        }
        let via = if r.complemented {
            " (complemented)"
        } else {
            ""
        };
        let _ = writeln!(
            text,
            "  engine: {}{via}, read {} of {}",
            r.engine, r.pushed, r.len
        );
        let _ = writeln!(text, "  peak: {} cells, {} bits", r.peak_cells, r.peak_bits);
        for (name, count) in &r.structure_peaks {
            let _ = writeln!(text, "    {name}: {count}");
        }
        if let Some(w) = &r.warning {
            let _ = writeln!(text, "  warning: {w}");
        }
        if let Some(a) = r.agrees {
            let _ = writeln!(text, "  oracle: {}", if a { "agrees" } else { "DISAGREES" });
        }
    } else {
        let _ = writeln!(
            text,
            "{} instances, {} contain the pattern",
            summary.instances, summary.accepted
        );
        if let Some(d) = disagreements {
            let _ = writeln!(text, "oracle disagreements: {d}");
            for r in runs.iter().filter(|r| r.agrees == Some(false)) {
                let _ = writeln!(
                    text,
                    "  {}: detector {} oracle {:?}",
                    r.source, r.verdict, r.oracle
                );
            }
        }
    }

    #[derive(Serialize)]
    struct Body<'a> {
        runs: &'a [Run],
        summary: &'a Summary,
        wall_ms: f64,
    }
    let json = envelope(
        "detect",
        Body {
            runs: &runs,
            summary: &summary,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    );
    Ok(Output {
        json,
        text,
        disagreement: disagreements.is_some_and(|d| d > 0),
    })
}
