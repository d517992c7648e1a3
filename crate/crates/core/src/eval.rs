//! Exact-match evaluation against hand-labelled points.

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::PipelineError;
use crate::lattice::{Chunk, ParseResult};
use crate::lexicon::is_delimiter;
use crate::parser::Parser;
use crate::slots::SlotClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledChunk {
    pub start: usize,
    pub end: usize,
    pub class: SlotClass,
    pub tags: Vec<String>,
}

impl From<&Chunk> for LabeledChunk {
    fn from(c: &Chunk) -> Self {
        LabeledChunk {
            start: c.start,
            end: c.end,
            class: c.class,
            tags: c.tags.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub input: String,
    pub chunks: Vec<LabeledChunk>,
}

impl LabeledPoint {
    /// Checks that the chunks tile the input from the first character to
    /// the last without gaps or overlaps.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.input.chars().count();
        if n == 0 {
            return Err("input is empty".into());
        }
        let mut at = 0;
        for c in &self.chunks {
            if c.start != at || c.end <= c.start {
                return Err(format!("chunk {}..{} does not continue at {at}", c.start, c.end));
            }
            at = c.end;
        }
        if at != n {
            return Err(format!("chunks cover {at} of {n} characters"));
        }
        Ok(())
    }

    pub fn matches(&self, result: &ParseResult) -> bool {
        self.chunks.len() == result.chunks.len()
            && self.chunks.iter().zip(&result.chunks).all(|(e, p)| *e == LabeledChunk::from(p))
    }
}

pub fn read_labeled(path: &Path) -> Result<Vec<LabeledPoint>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    parse_labeled(&text).map_err(|(line, message)| PipelineError::Format {
        path: path.display().to_string(),
        line,
        message,
    })
}

/// JSON lines; blank lines are skipped. Errors carry the 1-based line.
pub fn parse_labeled(text: &str) -> Result<Vec<LabeledPoint>, (usize, String)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: LabeledPoint = serde_json::from_str(line).map_err(|e| (i + 1, e.to_string()))?;
        p.validate().map_err(|e| (i + 1, e))?;
        out.push(p);
    }
    Ok(out)
}

pub fn write_labeled(points: &[LabeledPoint]) -> String {
    let mut s = String::new();
    for p in points {
        s.push_str(&serde_json::to_string(p).expect("labeled point serializes"));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiff {
    pub input: String,
    pub expected: Vec<LabeledChunk>,
    pub predicted: Option<Vec<LabeledChunk>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub total: usize,
    pub exact_matches: usize,
    pub accuracy: f64,
    pub failures: Vec<PointDiff>,
    pub oov: Vec<String>,
}

/// Splits at delimiters, lower-to-upper and letter/digit transitions, and
/// before the last capital of an upper-case run that starts a word
/// ("HHWValve" gives "HHW", "Valve").
pub fn segments(chars: &[char]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..chars.len() {
        let c = chars[i];
        if is_delimiter(c) {
            if let Some(s) = start.take() {
                out.push(s..i);
            }
            continue;
        }
        if let Some(s) = start {
            let p = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            let split = (p.is_lowercase() && c.is_uppercase())
                || (p.is_ascii_digit() != c.is_ascii_digit())
                || (p.is_uppercase() && c.is_uppercase() && next_lower);
            if split {
                out.push(s..i);
                start = Some(i);
            }
        } else {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(s..chars.len());
    }
    out
}

fn oov_tokens(parser: &Parser, point: &LabeledPoint, predicted: Option<&ParseResult>, out: &mut BTreeSet<String>) {
    let chars: Vec<char> = point.input.chars().collect();
    let segs = segments(&chars);
    let text = |r: &Range<usize>| chars[r.clone()].iter().collect::<String>().to_lowercase();
    let overlapping = |r: Range<usize>| segs.iter().filter(move |s| s.start < r.end && r.start < s.end);
    if let Some(result) = predicted {
        for c in result.chunks.iter().filter(|c| c.class == SlotClass::Unknown) {
            out.extend(overlapping(c.start..c.end).map(text));
        }
    }
    for e in point.chunks.iter().filter(|c| c.class == SlotClass::Tagset) {
        let found = predicted.is_some_and(|r| r.chunks.iter().any(|p| LabeledChunk::from(p) == *e));
        if found {
            continue;
        }
        for s in overlapping(e.start..e.end) {
            let s = s.start.max(e.start)..s.end.min(e.end);
            let unreadable = parser
                .tagset()
                .readings(&chars[s.clone()].iter().collect::<String>())
                .map_or(true, |r| r.is_empty());
            if unreadable {
                out.insert(text(&s));
            }
        }
    }
}

/// Parses every point and compares against its label. Pure: the same
/// parser and points always give the same report.
pub fn evaluate(parser: &Parser, points: &[LabeledPoint]) -> Result<EvalReport, PipelineError> {
    if points.is_empty() {
        return Err(PipelineError::Validation("labeled set is empty".into()));
    }
    let results: Vec<_> = points.par_iter().map(|p| parser.parse(&p.input)).collect();
    let mut failures = Vec::new();
    let mut oov = BTreeSet::new();
    let mut exact = 0;
    for (point, result) in points.iter().zip(&results) {
        match result {
            Ok(r) if point.matches(r) => exact += 1,
            Ok(r) => {
                oov_tokens(parser, point, Some(r), &mut oov);
                failures.push(PointDiff {
                    input: point.input.clone(),
                    expected: point.chunks.clone(),
                    predicted: Some(r.chunks.iter().map(LabeledChunk::from).collect()),
                    error: None,
                });
            }
            Err(e) => {
                oov_tokens(parser, point, None, &mut oov);
                failures.push(PointDiff {
                    input: point.input.clone(),
                    expected: point.chunks.clone(),
                    predicted: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    Ok(EvalReport {
        total: points.len(),
        exact_matches: exact,
        accuracy: exact as f64 / points.len() as f64,
        failures,
        oov: oov.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(s: &str) -> Vec<String> {
        let c: Vec<char> = s.chars().collect();
        segments(&c).into_iter().map(|r| c[r].iter().collect()).collect()
    }

    #[test]
    fn segmentation() {
        assert_eq!(seg("AHU_G2_HHWValve"), ["AHU", "G", "2", "HHW", "Valve"]);
        assert_eq!(seg("AHU-01AhrsMd"), ["AHU", "01", "Ahrs", "Md"]);
        assert_eq!(seg("zone-temp"), ["zone", "temp"]);
        assert_eq!(seg("__"), Vec::<String>::new());
        assert_eq!(seg("MOAD"), ["MOAD"]);
    }

    #[test]
    fn labels_must_tile() {
        let chunk = |start, end| LabeledChunk {
            start,
            end,
            class: SlotClass::Tagset,
            tags: vec!["fan".into()],
        };
        let ok = LabeledPoint {
            input: "fan".into(),
            chunks: vec![chunk(0, 3)],
        };
        assert!(ok.validate().is_ok());
        let gap = LabeledPoint {
            input: "fan".into(),
            chunks: vec![chunk(0, 2)],
        };
        assert!(gap.validate().is_err());
        let overlap = LabeledPoint {
            input: "fan".into(),
            chunks: vec![chunk(0, 2), chunk(1, 3)],
        };
        assert!(overlap.validate().is_err());
        let line = write_labeled(&[ok.clone()]);
        assert_eq!(parse_labeled(&line).unwrap(), vec![ok]);
        assert_eq!(parse_labeled("\n{").unwrap_err().0, 2);
    }
}
