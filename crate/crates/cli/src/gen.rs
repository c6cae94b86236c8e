use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use permstream::format::{write_stream_file, StreamFile};
use permstream::hardgen::{
    extend_stream, gen_3142_2143, gen_4312, gen_monotone_lb, gen_pi4_front, gen_seq312,
    random_subset, DisjInstance,
};
use permstream::perm::{Pattern, StreamInstance};
use serde::Serialize;

use crate::error::CliError;
use crate::input::{parse_values, read_file, trial_rng};
use crate::output::{envelope, join, Output};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Seq312,
    Front4(Pattern),
    C4312,
    C3142,
    C2143,
    MonotoneLb,
    Extend,
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seq312" => Ok(Construction::Seq312),
            "4312" => Ok(Construction::C4312),
            "3142" => Ok(Construction::C3142),
            "2143" => Ok(Construction::C2143),
            "monotone-lb" => Ok(Construction::MonotoneLb),
            "extend" => Ok(Construction::Extend),
            _ => match s.strip_prefix("front4:") {
                Some(p) => {
                    let p: Pattern = p.parse().map_err(|e: permstream::Error| e.to_string())?;
                    if matches!(p.values(), [4, 2, 3, 1] | [4, 2, 1, 3] | [4, 1, 3, 2] | [4, 1, 2, 3]) {
                        Ok(Construction::Front4(p))
                    } else {
                        Err(format!("front4 takes 4231, 4213, 4132 or 4123, not {p}"))
                    }
                }
                None => Err(format!(
                    "unknown construction {s:?}; expected seq312, front4:<pattern>, 4312, 3142, 2143, monotone-lb or extend"
                )),
            },
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Seq312 => f.write_str("seq312"),
            Construction::Front4(p) => write!(f, "front4:{p}"),
            Construction::C4312 => f.write_str("4312"),
            Construction::C3142 => f.write_str("3142"),
            Construction::C2143 => f.write_str("2143"),
            Construction::MonotoneLb => f.write_str("monotone-lb"),
            Construction::Extend => f.write_str("extend"),
        }
    }
}

impl Construction {
    /// True for the generators driven by a pair of sets.
    pub fn is_disjointness(&self) -> bool {
        !matches!(self, Construction::MonotoneLb | Construction::Extend)
    }

    pub fn build(&self, s: &[u32], t: &[u32], n_sets: u32) -> Result<DisjInstance, CliError> {
        let inst = match self {
            Construction::Seq312 => gen_seq312(s, t, n_sets)?,
            Construction::Front4(p) => gen_pi4_front(p, s, t, n_sets)?,
            Construction::C4312 => gen_4312(s, t, n_sets)?,
            Construction::C3142 => gen_3142_2143(&"3142".parse()?, s, t, n_sets)?,
            Construction::C2143 => gen_3142_2143(&"2143".parse()?, s, t, n_sets)?,
            Construction::MonotoneLb | Construction::Extend => {
                return Err(CliError::Usage(format!("{self} is not built from (S, T)")))
            }
        };
        Ok(inst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Which {
    Accepting,
    Rejecting,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// seq312, front4:<pattern>, 4312, 3142, 2143, monotone-lb or extend
    #[arg(long)]
    construction: Construction,

    /// Alice's set, comma separated
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,

    /// Bob's set, comma separated
    #[arg(long)]
    t: Option<String>,

    /// Size of the set universe
    #[arg(long)]
    nsets: Option<u32>,

    /// Draw S and T at random (each element kept with probability 1/2)
    #[arg(long, conflicts_with_all = ["s", "t"])]
    random_sets: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// monotone-lb: length of the increasing pattern
    #[arg(long)]
    k: Option<usize>,

    /// monotone-lb: even permutation size
    #[arg(long)]
    n: Option<u32>,

    /// monotone-lb: odd sequence for the accepting stream
    #[arg(long)]
    rho: Option<String>,

    /// monotone-lb: competing odd sequence
    #[arg(long)]
    sigma: Option<String>,

    /// monotone-lb: which of the two streams to write
    #[arg(long, value_enum, default_value_t = Which::Accepting)]
    which: Which,

    /// extend: stream file to transform
    #[arg(long)]
    input: Option<PathBuf>,

    /// Write the stream file here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Body {
    construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<DisjInstance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intersects: Option<bool>,
    stream: StreamInstance,
    #[serde(skip_serializing_if = "Option::is_none")]
    swapped: Option<bool>,
}

fn required<T: Clone>(value: &Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let c = &args.construction;
    let (file, body, note) = match c {
        Construction::MonotoneLb => {
            let k = required(&args.k, "k", "monotone-lb")?;
            let n = required(&args.n, "n", "monotone-lb")?;
            let rho = parse_values(&required(&args.rho, "rho", "monotone-lb")?)?;
            let sigma = args.sigma.as_deref().map(parse_values).transpose()?;
            let out = gen_monotone_lb(k, n, &rho, sigma.as_deref())?;
            let stream = match args.which {
                Which::Accepting => out.accepting,
                Which::Rejecting => out
                    .rejecting
                    .ok_or_else(|| CliError::Usage("--which rejecting needs --sigma".into()))?,
            };
            let note = format!(
                "construction monotone-lb k={k} rho={} sigma={} stream={:?}",
                join(&rho),
                sigma.as_deref().map(join).unwrap_or_default(),
                args.which
            );
            let mut file = StreamFile::new(stream.clone());
            file.pattern = Some(Pattern::new((1..=k as u32).collect())?);
            let body = Body {
                construction: c.to_string(),
                instance: None,
                intersects: None,
                stream,
                swapped: sigma.is_some().then_some(out.swapped),
            };
            (file, body, note)
        }
        Construction::Extend => {
            let path = required(&args.input, "input", "extend")?;
            let source = read_file(&path)?;
            let stream = extend_stream(&source.instance);
            let file = StreamFile::new(stream.clone());
            let body = Body {
                construction: c.to_string(),
                instance: None,
                intersects: None,
                stream,
                swapped: None,
            };
            (
                file,
                body,
                format!("construction extend of {}", path.display()),
            )
        }
        _ => {
            let n_sets = required(&args.nsets, "nsets", c.to_string().as_str())?;
            let (s, t) = if args.random_sets {
                let mut rng = trial_rng(args.seed, 0);
                (
                    random_subset(&mut rng, n_sets),
                    random_subset(&mut rng, n_sets),
                )
            } else {
                (
                    parse_values(args.s.as_deref().unwrap_or(""))?,
                    parse_values(args.t.as_deref().unwrap_or(""))?,
                )
            };
            let inst = c.build(&s, &t, n_sets)?;
            let note = format!(
                "construction {c} nsets={n_sets} s={} t={}",
                join(&inst.s),
                join(&inst.t)
            );
            let file = StreamFile {
                instance: inst.stream.clone(),
                segments: inst.segments.clone(),
                pattern: Some(inst.pattern.clone()),
            };
            let body = Body {
                construction: c.to_string(),
                intersects: Some(inst.intersects()),
                stream: inst.stream.clone(),
                instance: Some(inst),
                swapped: None,
            };
            (file, body, note)
        }
    };

    // the construction note goes right after the header line
    let rendered = write_stream_file(&file);
    let (header, rest) = rendered.split_once('\n').unwrap_or((&rendered, ""));
    let rendered = format!("{header}\n# {note}\n{rest}");

    let text = match &args.output {
        Some(path) => {
            fs::write(path, &rendered).map_err(|e| CliError::io(path, e))?;
            format!(
                "wrote {} values to {}\n",
                file.instance.len(),
                path.display()
            )
        }
        None => rendered,
    };
    Ok(Output {
        json: envelope("gen", body),
        text,
        disagreement: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_names_round_trip() {
        for name in [
            "seq312",
            "front4:4231",
            "front4:4123",
            "4312",
            "3142",
            "2143",
            "monotone-lb",
            "extend",
        ] {
            let c: Construction = name.parse().unwrap();
            assert_eq!(c.to_string(), name);
        }
        assert!("front4:4312".parse::<Construction>().is_err());
        assert!("front5".parse::<Construction>().is_err());
    }
}
