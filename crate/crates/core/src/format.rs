//! Text format for streams.
//!
//! ```text
//! n=16 mode=perm
//! # pattern 4231
//! # segment alice 1 8
//! 4 2 6 8 12 10 14 16
//! # segment bob 9 16
//! 1 3 7 5 11 9 13 15
//! ```
//!
//! The header comes first. Values are 1-based decimals separated by any
//! whitespace. `#` starts a comment; `segment` and `pattern` comments are
//! read back, others are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hardgen::Segment;
use crate::perm::{Pattern, StreamInstance, StreamMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamFile {
    pub instance: StreamInstance,
    pub segments: Vec<Segment>,
    pub pattern: Option<Pattern>,
}

impl StreamFile {
    pub fn new(instance: StreamInstance) -> Self {
        StreamFile {
            instance,
            segments: Vec::new(),
            pattern: None,
        }
    }
}

fn parse_header(line: &str) -> Result<(u32, StreamMode)> {
    let mut n = None;
    let mut mode = StreamMode::Permutation;
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => {
                n = Some(
                    v.parse()
                        .map_err(|_| Error::Format(format!("bad n {v:?}")))?,
                );
            }
            Some(("mode", v)) => mode = v.parse()?,
            _ => return Err(Error::Format(format!("unexpected header field {field:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Format("header is missing n=".into()))?;
    Ok((n, mode))
}

fn parse_comment(body: &str, file: &mut StreamFile) -> Result<()> {
    let words: Vec<&str> = body.split_whitespace().collect();
    match words.as_slice() {
        ["segment", owner, start, end] => {
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Format(format!("bad segment bound {s:?}")))
            };
            file.segments.push(Segment {
                owner: owner.parse()?,
                start: num(start)?,
                end: num(end)?,
            });
        }
        ["pattern", p] => file.pattern = Some(p.parse()?),
        _ => {}
    }
    Ok(())
}

/// Parses a stream file. The result is syntactically valid but not yet
/// checked against its mode; call [`StreamInstance::validate`] for that.
pub fn parse_stream_file(text: &str) -> Result<StreamFile> {
    let mut header = None;
    let mut file = StreamFile::new(StreamInstance::permutation(Vec::new()));
    let mut elements = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let (data, comment) = match raw.split_once('#') {
            Some((d, c)) => (d, Some(c)),
            None => (raw, None),
        };
        if let Some(c) = comment {
            parse_comment(c, &mut file)?;
        }
        let data = data.trim();
        if data.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(data)?);
            continue;
        }
        for tok in data.split_whitespace() {
            let v = tok
                .parse::<u32>()
                .map_err(|_| Error::Format(format!("line {}: bad value {tok:?}", lineno + 1)))?;
            elements.push(v);
        }
    }
    let (n, mode) = header.ok_or_else(|| Error::Format("empty stream file".into()))?;
    file.instance = StreamInstance { n, mode, elements };
    Ok(file)
}

/// Renders a stream file; values are written one segment per line, or
/// twenty per line without segments.
pub fn write_stream_file(file: &StreamFile) -> String {
    let inst = &file.instance;
    let mut out = format!("n={} mode={}\n", inst.n, inst.mode);
    if let Some(p) = &file.pattern {
        let _ = writeln!(out, "# pattern {}", p.to_string().replace(' ', ""));
    }
    let join = |vals: &[u32]| {
        vals.iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    if file.segments.is_empty() {
        for chunk in inst.elements.chunks(20) {
            let _ = writeln!(out, "{}", join(chunk));
        }
    } else {
        for seg in &file.segments {
            let _ = writeln!(out, "# segment {} {} {}", seg.owner, seg.start, seg.end);
            if seg.end >= seg.start {
                let _ = writeln!(out, "{}", join(&inst.elements[seg.start - 1..seg.end]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardgen::{gen_pi4_front, Owner};

    #[test]
    fn round_trip_with_segments() {
        let inst = gen_pi4_front(&"4231".parse().unwrap(), &[1, 3], &[2, 3], 4).unwrap();
        let file = StreamFile {
            instance: inst.stream.clone(),
            segments: inst.segments.clone(),
            pattern: Some(inst.pattern.clone()),
        };
        let text = write_stream_file(&file);
        assert!(text.contains("# segment alice 1 8\n4 2 6 8 12 10 14 16\n"));
        assert_eq!(parse_stream_file(&text).unwrap(), file);
    }

    #[test]
    fn comments_and_layout() {
        let text = "# leading note\nn=5 mode=seq\n5 1 # trailing\n\n  3\n";
        let file = parse_stream_file(text).unwrap();
        assert_eq!(file.instance, StreamInstance::sequence(5, vec![5, 1, 3]));
        assert!(file.segments.is_empty());
    }

    #[test]
    fn segment_comment_parses() {
        let file = parse_stream_file("n=2 mode=perm\n# segment bob 1 2\n2 1\n").unwrap();
        assert_eq!(
            file.segments,
            vec![Segment {
                owner: Owner::Bob,
                start: 1,
                end: 2
            }]
        );
    }

    #[test]
    fn malformed_input() {
        assert!(parse_stream_file("").is_err());
        assert!(parse_stream_file("mode=perm\n1\n").is_err());
        assert!(parse_stream_file("n=3 mode=perm\n1 x 2\n").is_err());
        assert!(parse_stream_file("n=3 mode=list\n").is_err());
        // parses, but fails validation
        let file = parse_stream_file("n=3\n1 1 2\n").unwrap();
        assert!(file.instance.validate().is_err());
    }

    #[test]
    fn long_patterns_use_commas() {
        let p: Pattern = "1,2,3,4,5,6,7,8,9,10".parse().unwrap();
        let mut file = StreamFile::new(StreamInstance::permutation((1..=10).collect()));
        file.pattern = Some(p.clone());
        let back = parse_stream_file(&write_stream_file(&file)).unwrap();
        assert_eq!(back.pattern, Some(p));
    }
}
