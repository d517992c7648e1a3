//! Interactive review: prompts for expansions of unknown substrings and
//! folds the answers back into the bundle.

use std::io::{self, BufRead, Write};

use crate::bundle::{add_expansion, ModelBundle, PipelineError};
use crate::eval::segments;
use crate::lattice::ParseResult;
use crate::ngram::word_tokens;
use crate::slots::SlotClass;

const SHOWN_ALTERNATIVES: usize = 3;

#[derive(Debug)]
pub struct ReviewOutcome {
    pub bundle: ModelBundle,
    /// Expansions that were applied, in order.
    pub added: Vec<(String, Vec<String>)>,
    /// False when the answer stream ended before every input was reviewed.
    pub completed: bool,
}

/// Lowercased segments of `result.input` that contain an unknown chunk.
pub fn unknown_surfaces(result: &ParseResult) -> Vec<String> {
    let chars: Vec<char> = result.input.chars().collect();
    let mut out: Vec<String> = Vec::new();
    for seg in segments(&chars) {
        let hit = result
            .chunks
            .iter()
            .any(|c| c.class == SlotClass::Unknown && c.start < seg.end && seg.start < c.end);
        let text: String = chars[seg].iter().collect::<String>().to_lowercase();
        if hit && !out.contains(&text) {
            out.push(text);
        }
    }
    out
}

pub fn render(result: &ParseResult) -> String {
    result
        .chunks
        .iter()
        .map(|c| {
            let text = c.text(&result.input);
            if c.tags.is_empty() {
                format!("{}({text:?})", c.class)
            } else {
                format!("{}({text:?} -> {})", c.class, c.tags.join(" "))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_answer(answers: &mut impl BufRead) -> io::Result<Option<String>> {
    let mut line = String::new();
    if answers.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

/// Parses each input; when a parse has unknown chunks, shows the best
/// alternatives and asks for an expansion of each unknown segment. An empty
/// answer skips the segment. End of the answer stream ends the session and
/// returns the bundle as updated so far.
pub fn interactive_review(
    bundle: &ModelBundle,
    inputs: &[String],
    mut answers: impl BufRead,
    mut out: impl Write,
) -> Result<ReviewOutcome, PipelineError> {
    let io_err = |e: io::Error| PipelineError::Io {
        path: "<terminal>".into(),
        source: e,
    };
    let mut current = bundle.clone();
    let mut parser = current.parser()?;
    let mut added = Vec::new();
    for input in inputs {
        let alternatives = match parser.k_best(input, SHOWN_ALTERNATIVES) {
            Ok(a) => a,
            Err(e) => {
                writeln!(out, "{input}: {e}").map_err(io_err)?;
                continue;
            }
        };
        let best = &alternatives[0];
        if !best.has_unknown() {
            writeln!(out, "{input}: {}", render(best)).map_err(io_err)?;
            continue;
        }
        writeln!(out, "{input}: unknown characters").map_err(io_err)?;
        for (i, alt) in alternatives.iter().enumerate() {
            writeln!(out, "  {}. [{:.3}] {}", i + 1, alt.total_weight.value(), render(alt)).map_err(io_err)?;
        }
        let mut changed = false;
        for surface in unknown_surfaces(best) {
            write!(out, "expansion for {surface:?} (blank to skip): ").map_err(io_err)?;
            out.flush().map_err(io_err)?;
            let Some(answer) = read_answer(&mut answers).map_err(io_err)? else {
                writeln!(out).map_err(io_err)?;
                return Ok(ReviewOutcome {
                    bundle: current,
                    added,
                    completed: false,
                });
            };
            if answer.is_empty() {
                continue;
            }
            let tags = word_tokens(&answer);
            match add_expansion(&current, &surface, &tags) {
                Ok(next) => {
                    current = next;
                    changed = true;
                    added.push((surface, tags));
                }
                Err(e) => writeln!(out, "  rejected: {e}").map_err(io_err)?,
            }
        }
        if changed {
            parser = current.parser()?;
            match parser.parse(input) {
                Ok(r) => writeln!(out, "{input}: {}", render(&r)).map_err(io_err)?,
                Err(e) => writeln!(out, "{input}: {e}").map_err(io_err)?,
            }
        }
    }
    Ok(ReviewOutcome {
        bundle: current,
        added,
        completed: true,
    })
}
