//! Line-oriented batch parsing with JSON-lines output.

use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::fst::Weight;
use crate::lattice::{Chunk, ParseResult};
use crate::parser::Parser;

const BLOCK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alternative {
    pub chunks: Vec<Chunk>,
    pub total_weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Record {
    Parsed {
        input: String,
        chunks: Vec<Chunk>,
        total_weight: Weight,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        alternatives: Vec<Alternative>,
    },
    Failed {
        line: usize,
        input: String,
        error: String,
    },
}

impl Record {
    pub fn is_error(&self) -> bool {
        matches!(self, Record::Failed { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Parses one raw input line (without its terminator). `k > 1` adds the
/// next-best parses as alternatives.
pub fn parse_line(parser: &Parser, line_no: usize, raw: &[u8], k: usize) -> Record {
    let failed = |error: String| Record::Failed {
        line: line_no,
        input: String::from_utf8_lossy(raw).into_owned(),
        error,
    };
    let text = match std::str::from_utf8(raw) {
        Ok(t) => t,
        Err(e) => return failed(format!("invalid UTF-8: {e}")),
    };
    match parser.k_best(text, k.max(1)) {
        Ok(results) => {
            let mut it = results.into_iter();
            let ParseResult {
                input,
                chunks,
                total_weight,
            } = it.next().expect("a non-empty input has at least one parse");
            Record::Parsed {
                input,
                chunks,
                total_weight,
                alternatives: it
                    .map(|r| Alternative {
                        chunks: r.chunks,
                        total_weight: r.total_weight,
                    })
                    .collect(),
            }
        }
        Err(e) => failed(e.to_string()),
    }
}

fn strip_terminator(mut line: Vec<u8>) -> Vec<u8> {
    if line.last() == Some(&b'\n') {
        line.pop();
        if line.last() == Some(&b'\r') {
            line.pop();
        }
    }
    line
}

/// Parses every line of `input` and writes one JSON record per line, in
/// input order. Lines are parsed in parallel blocks. Returns the number of
/// records and the number of error records.
pub fn parse_batch(parser: &Parser, mut input: impl BufRead, mut out: impl Write, k: usize) -> io::Result<(usize, usize)> {
    let mut line_no = 0;
    let mut total = 0;
    let mut errors = 0;
    loop {
        let mut block = Vec::with_capacity(BLOCK);
        for _ in 0..BLOCK {
            let mut buf = Vec::new();
            if input.read_until(b'\n', &mut buf)? == 0 {
                break;
            }
            line_no += 1;
            block.push((line_no, strip_terminator(buf)));
        }
        if block.is_empty() {
            break;
        }
        let records: Vec<Record> = block.par_iter().map(|(n, raw)| parse_line(parser, *n, raw, k)).collect();
        for r in &records {
            writeln!(out, "{}", r.to_json())?;
            errors += r.is_error() as usize;
        }
        total += records.len();
    }
    out.flush()?;
    Ok((total, errors))
}
