use std::fs;
use std::io::Read;
use std::path::PathBuf;

use permstream::format::{parse_stream_file, StreamFile};
use permstream::perm::{StreamInstance, StreamMode};
use permstream::random::random_permutation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

/// Where the input streams come from.
#[derive(Debug, clap::Args)]
pub struct StreamSource {
    /// Stream files; `-` reads stdin
    pub files: Vec<PathBuf>,

    /// Inline stream, values separated by commas or spaces
    #[arg(long, conflicts_with = "files")]
    pub stream: Option<String>,

    /// Seeded random permutations to generate instead of reading files
    #[arg(long, conflicts_with_all = ["files", "stream"], requires = "n")]
    pub random: Option<usize>,

    /// Universe size for --stream (default: largest value) or --random
    #[arg(long)]
    pub n: Option<u32>,

    /// Mode for --stream
    #[arg(long, default_value = "perm")]
    pub mode: StreamMode,

    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub label: String,
    pub file: StreamFile,
}

/// Independent generator for trial `i` of a seeded run.
pub fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

pub fn parse_values(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad value {t:?} in list")))
        })
        .collect()
}

pub fn read_file(path: &PathBuf) -> Result<StreamFile, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::io("<stdin>", e))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
    };
    let file = parse_stream_file(&text)?;
    file.instance.validate()?;
    Ok(file)
}

impl StreamSource {
    pub fn load(&self) -> Result<Vec<Loaded>, CliError> {
        if let Some(text) = &self.stream {
            let elements = parse_values(text)?;
            let n = self
                .n
                .or_else(|| elements.iter().copied().max())
                .ok_or_else(|| CliError::Usage("empty --stream needs --n".into()))?;
            let instance = StreamInstance {
                n,
                mode: self.mode,
                elements,
            };
            instance.validate()?;
            return Ok(vec![Loaded {
                label: "inline".into(),
                file: StreamFile::new(instance),
            }]);
        }
        if let Some(count) = self.random {
            let n = self.n.expect("clap requires --n with --random");
            if n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            return Ok((0..count as u64)
                .map(|i| Loaded {
                    label: format!("random seed={} trial={i}", self.seed),
                    file: StreamFile::new(StreamInstance::permutation(random_permutation(
                        &mut trial_rng(self.seed, i),
                        n,
                    ))),
                })
                .collect());
        }
        if self.files.is_empty() {
            return Err(CliError::Usage(
                "no input: give stream files, --stream or --random".into(),
            ));
        }
        self.files
            .iter()
            .map(|p| {
                Ok(Loaded {
                    label: p.display().to_string(),
                    file: read_file(p)?,
                })
            })
            .collect()
    }
}
