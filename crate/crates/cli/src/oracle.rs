use std::fmt::Write as _;
use std::time::Instant;

use permstream::oracle::{
    contains_bruteforce, count_occurrences, split_message, split_protocol, SplitInput,
};
use permstream::perm::{Occurrence, Pattern};
use serde::Serialize;

use crate::detect::describe_occurrence;
use crate::error::CliError;
use crate::input::StreamSource;
use crate::output::{envelope, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pattern: Pattern,

    /// Also count all occurrences (exponential in the pattern length)
    #[arg(long)]
    count: bool,

    /// Run the one-bit split protocol with the first SPLIT values as the prefix
    #[arg(long)]
    split: Option<usize>,

    #[command(flatten)]
    source: StreamSource,
}

#[derive(Debug, Serialize)]
struct SplitReport {
    at: usize,
    message: bool,
    verdict: bool,
}

#[derive(Debug, Serialize)]
struct Run {
    source: String,
    contains: bool,
    occurrence: Option<Occurrence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<SplitReport>,
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut text = String::new();
    let mut disagreement = false;
    for item in args.source.load()? {
        let inst = &item.file.instance;
        let occurrence = contains_bruteforce(inst, &args.pattern)?;
        let count = if args.count {
            Some(count_occurrences(inst, &args.pattern)?)
        } else {
            None
        };
        let split = match args.split {
            Some(at) if at > inst.len() => {
                return Err(CliError::Usage(format!(
                    "--split {at} is past the stream length {}",
                    inst.len()
                )))
            }
            Some(at) => {
                let input = SplitInput::new(&inst.elements, at);
                Some(SplitReport {
                    at,
                    message: split_message(&input, &args.pattern),
                    verdict: split_protocol(&input, &args.pattern)?,
                })
            }
            None => None,
        };

        let verdict = if occurrence.is_some() {
            "contains"
        } else {
            "avoids"
        };
        let _ = writeln!(text, "{}: {verdict} {}", item.label, args.pattern);
        if let Some(occ) = &occurrence {
            let _ = writeln!(text, "  first occurrence: {}", describe_occurrence(occ));
        }
        if let Some(c) = count {
            let _ = writeln!(text, "  occurrences: {c}");
        }
        if let Some(s) = &split {
            disagreement |= s.verdict != occurrence.is_some();
            let _ = writeln!(
                text,
                "  split at {}: message bit {}, verdict {}",
                s.at, s.message as u8, s.verdict
            );
        }
        runs.push(Run {
            source: item.label,
            contains: occurrence.is_some(),
            occurrence,
            count,
            split,
        });
    }

    #[derive(Serialize)]
    struct Body<'a> {
        pattern: String,
        runs: &'a [Run],
        wall_ms: f64,
    }
    let json = envelope(
        "oracle",
        Body {
            pattern: args.pattern.to_string(),
            runs: &runs,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    );
    Ok(Output {
        json,
        text,
        disagreement,
    })
}
