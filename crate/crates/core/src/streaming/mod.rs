//! One-pass detectors behind a common push/finish contract.
//!
//! [`Detector`] is the entry point: it validates each pushed value, routes
//! the pattern to the cheapest engine that is correct for the stream mode,
//! and records peak space usage in cells (one cell = one stored value, point
//! or pair entry).

mod baseline;
pub mod bitset;
pub mod d213;
pub mod d312;
pub mod monotone;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Occurrence, Pattern, PatternKind, StreamInstance, StreamMode};

pub use baseline::{baseline_detect, Baseline};
pub use d213::{Detector213, Hit213, StripRecord};
pub use d312::{Detector312, Hit312};
pub use monotone::{MonotoneDetector, MonotoneState};

/// Outcome of a single push.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Continue,
    /// The pattern is certainly contained. Engines that decide without a
    /// witness report `None`.
    Accepted(Option<Occurrence>),
}

impl Step {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Step::Accepted(_))
    }
}

/// Size of one stored structure at a moment in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureUsage {
    pub name: &'static str,
    /// Number of entries (values, pairs, points or records).
    pub count: usize,
    pub cells: usize,
    pub bits: u64,
}

impl StructureUsage {
    pub fn new(name: &'static str, count: usize, cells: usize, bits: u64) -> Self {
        StructureUsage {
            name,
            count,
            cells,
            bits,
        }
    }
}

/// A one-pass engine. Inputs are assumed valid; [`Detector`] does the checking.
pub trait StreamDetector {
    fn name(&self) -> &'static str;
    fn push(&mut self, v: u32) -> Step;
    /// Final verdict once the input is exhausted.
    fn finish(&mut self) -> bool;
    fn usage(&self) -> Vec<StructureUsage>;
    /// A witness found at finish time, for engines that only decide at the end.
    fn witness(&self) -> Option<Occurrence> {
        None
    }
}

/// `ceil(log2 n)`, at least 1: the width of one stored value.
pub fn word_bits(n: u32) -> u64 {
    if n <= 2 {
        1
    } else {
        (32 - (n - 1).leading_zeros()) as u64
    }
}

/// Runs an engine on the complemented stream (`v -> n + 1 - v`), so a
/// detector for `π` decides `complement(π)`. Witness values are mapped back.
#[derive(Debug, Clone)]
pub struct Complemented<D> {
    inner: D,
    n: u32,
}

impl<D: StreamDetector> Complemented<D> {
    pub fn new(inner: D, n: u32) -> Self {
        Complemented { inner, n }
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }
}

impl<D: StreamDetector> StreamDetector for Complemented<D> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn push(&mut self, v: u32) -> Step {
        match self.inner.push(self.n + 1 - v) {
            Step::Accepted(Some(mut occ)) => {
                occ.values.iter_mut().for_each(|x| *x = self.n + 1 - *x);
                Step::Accepted(Some(occ))
            }
            other => other,
        }
    }

    fn finish(&mut self) -> bool {
        self.inner.finish()
    }

    fn usage(&self) -> Vec<StructureUsage> {
        self.inner.usage()
    }

    fn witness(&self) -> Option<Occurrence> {
        self.inner.witness().map(|mut occ| {
            occ.values.iter_mut().for_each(|x| *x = self.n + 1 - *x);
            occ
        })
    }
}

/// Length-1 patterns accept on the first value; patterns longer than the
/// universe never fit.
#[derive(Debug, Clone)]
struct Trivial {
    accept_first: bool,
    accepted: bool,
    position: usize,
}

impl StreamDetector for Trivial {
    fn name(&self) -> &'static str {
        "trivial"
    }

    fn push(&mut self, v: u32) -> Step {
        self.position += 1;
        if self.accept_first && !self.accepted {
            self.accepted = true;
            return Step::Accepted(Some(Occurrence::at(vec![self.position], vec![v])));
        }
        Step::Continue
    }

    fn finish(&mut self) -> bool {
        self.accepted
    }

    fn usage(&self) -> Vec<StructureUsage> {
        Vec::new()
    }
}

/// Which engine serves a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Trivial,
    Monotone,
    #[serde(rename = "312")]
    Detector312,
    #[serde(rename = "213")]
    Detector213,
    Baseline,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Trivial => "trivial",
            Engine::Monotone => "monotone",
            Engine::Detector312 => "312",
            Engine::Detector213 => "213",
            Engine::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Engine::Trivial),
            "monotone" => Ok(Engine::Monotone),
            "312" | "132" => Ok(Engine::Detector312),
            "213" | "231" => Ok(Engine::Detector213),
            "baseline" => Ok(Engine::Baseline),
            other => Err(Error::PatternSyntax(format!("unknown engine {other:?}"))),
        }
    }
}

/// Resolved routing for a pattern: the engine, and whether it runs on the
/// complemented stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatch {
    pub engine: Engine,
    pub complemented: bool,
    pub warning: Option<String>,
}

/// Picks the engine for `pattern` over a stream of universe `n` in `mode`.
///
/// Monotone patterns use the slot array; 312 and 132 use the window/pair
/// detector; 213 and 231 use the strip detector; everything else stores the
/// whole stream. The two size-3 engines need the permutation promise, so
/// sequence streams fall back to the baseline.
pub fn dispatch(pattern: &Pattern, n: u32, mode: StreamMode) -> Dispatch {
    let plain = |engine| Dispatch {
        engine,
        complemented: false,
        warning: None,
    };
    if pattern.len() == 1 || pattern.len() > n as usize {
        return plain(Engine::Trivial);
    }
    match pattern.kind() {
        PatternKind::Increasing => plain(Engine::Monotone),
        PatternKind::Decreasing => Dispatch {
            complemented: true,
            ..plain(Engine::Monotone)
        },
        PatternKind::NonMonotone3 if mode == StreamMode::DistinctSequence => Dispatch {
            warning: Some(format!(
                "{pattern} on a distinct-value sequence needs linear space; storing the stream"
            )),
            ..plain(Engine::Baseline)
        },
        PatternKind::NonMonotone3 => match pattern.values() {
            [3, 1, 2] => plain(Engine::Detector312),
            [1, 3, 2] => Dispatch {
                complemented: true,
                ..plain(Engine::Detector312)
            },
            [2, 1, 3] => plain(Engine::Detector213),
            [2, 3, 1] => Dispatch {
                complemented: true,
                ..plain(Engine::Detector213)
            },
            _ => unreachable!("size-3 non-monotone patterns are 132, 213, 231, 312"),
        },
        PatternKind::Other => Dispatch {
            warning: Some(format!(
                "{pattern} has no sublinear one-pass detector; storing the stream"
            )),
            ..plain(Engine::Baseline)
        },
    }
}

/// Summary of a finished run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectorReport {
    pub verdict: bool,
    pub occurrence: Option<Occurrence>,
    pub engine: Engine,
    pub complemented: bool,
    pub pushed: usize,
    /// Largest total cell count over all steps.
    pub peak_cells: usize,
    /// Largest bit estimate over all steps.
    pub peak_bits: u64,
    /// Largest entry count per structure over all steps.
    pub structure_peaks: BTreeMap<String, usize>,
    /// Per-structure cells at the step where `peak_cells` was reached.
    pub cells_at_peak: BTreeMap<String, usize>,
}

/// A detector handle: validation, dispatch and space accounting around an engine.
pub struct Detector {
    pattern: Pattern,
    n: u32,
    mode: StreamMode,
    dispatch: Dispatch,
    engine: Box<dyn StreamDetector + Send>,
    // Duplicate guard for the input boundary; not part of the measured state.
    seen: Vec<u64>,
    pushed: usize,
    accepted: Option<Option<Occurrence>>,
    report: Option<DetectorReport>,
    peak_cells: usize,
    peak_bits: u64,
    structure_peaks: BTreeMap<String, usize>,
    cells_at_peak: BTreeMap<String, usize>,
}

impl fmt::Debug for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Detector")
            .field("pattern", &self.pattern)
            .field("n", &self.n)
            .field("mode", &self.mode)
            .field("dispatch", &self.dispatch)
            .field("pushed", &self.pushed)
            .finish_non_exhaustive()
    }
}

impl Detector {
    pub fn new(pattern: &Pattern, n: u32, mode: StreamMode) -> Result<Self> {
        let dispatch = dispatch(pattern, n, mode);
        Self::build(pattern, n, mode, dispatch)
    }

    /// Forces a specific engine. Fails if it cannot decide `pattern` on this mode.
    pub fn with_engine(
        pattern: &Pattern,
        n: u32,
        mode: StreamMode,
        engine: Engine,
    ) -> Result<Self> {
        let auto = dispatch(pattern, n, mode);
        let conflict = || Error::DispatchConflict {
            engine: engine.as_str(),
            pattern: pattern.to_string(),
            mode: mode.as_str(),
        };
        let chosen = match engine {
            Engine::Baseline => Dispatch {
                engine,
                complemented: false,
                warning: None,
            },
            Engine::Detector312 | Engine::Detector213 => {
                let family_ok = pattern.kind() == PatternKind::NonMonotone3
                    && matches!(
                        (engine, pattern.values()),
                        (Engine::Detector312, [3, 1, 2] | [1, 3, 2])
                            | (Engine::Detector213, [2, 1, 3] | [2, 3, 1])
                    );
                if !family_ok || mode != StreamMode::Permutation || pattern.len() > n as usize {
                    return Err(conflict());
                }
                auto
            }
            Engine::Monotone | Engine::Trivial => {
                if auto.engine != engine {
                    return Err(conflict());
                }
                auto
            }
        };
        Self::build(pattern, n, mode, chosen)
    }

    fn build(pattern: &Pattern, n: u32, mode: StreamMode, dispatch: Dispatch) -> Result<Self> {
        if n == 0 {
            return Err(crate::error::InvalidStream::EmptyUniverse.into());
        }
        let k = pattern.len();
        let engine: Box<dyn StreamDetector + Send> = match (dispatch.engine, dispatch.complemented)
        {
            (Engine::Trivial, _) => Box::new(Trivial {
                accept_first: k == 1,
                accepted: false,
                position: 0,
            }),
            (Engine::Monotone, false) => Box::new(MonotoneDetector::new(k, n)),
            (Engine::Monotone, true) => Box::new(Complemented::new(MonotoneDetector::new(k, n), n)),
            (Engine::Detector312, false) => Box::new(Detector312::new(n)),
            (Engine::Detector312, true) => Box::new(Complemented::new(Detector312::new(n), n)),
            (Engine::Detector213, false) => Box::new(Detector213::new(n)),
            (Engine::Detector213, true) => Box::new(Complemented::new(Detector213::new(n), n)),
            (Engine::Baseline, _) => Box::new(Baseline::new(pattern.clone(), n)),
        };
        Ok(Detector {
            pattern: pattern.clone(),
            n,
            mode,
            dispatch,
            engine,
            seen: vec![0; (n as usize + 1).div_ceil(64)],
            pushed: 0,
            accepted: None,
            report: None,
            peak_cells: 0,
            peak_bits: 0,
            structure_peaks: BTreeMap::new(),
            cells_at_peak: BTreeMap::new(),
        })
    }

    pub fn dispatch(&self) -> &Dispatch {
        &self.dispatch
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn pushed(&self) -> usize {
        self.pushed
    }

    pub fn is_accepted(&self) -> bool {
        self.accepted.is_some()
    }

    /// Current per-structure usage of the engine.
    pub fn usage(&self) -> Vec<StructureUsage> {
        self.engine.usage()
    }

    pub fn push(&mut self, v: u32) -> Result<Step> {
        if self.report.is_some() {
            return Err(Error::Finished);
        }
        if self.accepted.is_some() {
            return Err(Error::AlreadyAccepted);
        }
        if v == 0 || v > self.n {
            return Err(Error::OutOfRange {
                value: v,
                n: self.n,
            });
        }
        let (word, bit) = (v as usize / 64, v as usize % 64);
        if self.seen[word] & (1 << bit) != 0 {
            return Err(Error::AlreadyPushed(v));
        }
        self.seen[word] |= 1 << bit;
        self.pushed += 1;

        let step = self.engine.push(v);
        self.record_usage();
        if let Step::Accepted(occ) = &step {
            self.accepted = Some(occ.clone());
        }
        Ok(step)
    }

    fn record_usage(&mut self) {
        let usage = self.engine.usage();
        let cells: usize = usage.iter().map(|u| u.cells).sum();
        let bits: u64 = usage.iter().map(|u| u.bits).sum();
        for u in &usage {
            let peak = self.structure_peaks.entry(u.name.to_string()).or_insert(0);
            *peak = (*peak).max(u.count);
        }
        if cells > self.peak_cells || self.cells_at_peak.is_empty() {
            self.peak_cells = cells;
            self.cells_at_peak = usage
                .iter()
                .map(|u| (u.name.to_string(), u.cells))
                .collect();
        }
        self.peak_bits = self.peak_bits.max(bits);
    }

    /// Ends the stream and returns the report. Calling it again returns the
    /// same report; pushing afterwards is an error.
    pub fn finish(&mut self) -> DetectorReport {
        if let Some(report) = &self.report {
            return report.clone();
        }
        let (verdict, occurrence) = match self.accepted.clone() {
            Some(occ) => (true, occ),
            None => {
                let verdict = self.engine.finish();
                self.record_usage();
                (verdict, None)
            }
        };
        let occurrence = occurrence.or_else(|| self.engine.witness());
        let report = DetectorReport {
            verdict,
            occurrence,
            engine: self.dispatch.engine,
            complemented: self.dispatch.complemented,
            pushed: self.pushed,
            peak_cells: self.peak_cells,
            peak_bits: self.peak_bits,
            structure_peaks: self.structure_peaks.clone(),
            cells_at_peak: self.cells_at_peak.clone(),
        };
        self.report = Some(report.clone());
        report
    }

    /// Pushes a whole stream and finishes. Stops reading at the first acceptance.
    pub fn run(pattern: &Pattern, inst: &StreamInstance) -> Result<DetectorReport> {
        inst.validate()?;
        let mut det = Detector::new(pattern, inst.n, inst.mode)?;
        for &v in &inst.elements {
            if det.push(v)?.is_accepted() {
                break;
            }
        }
        Ok(det.finish())
    }
}
