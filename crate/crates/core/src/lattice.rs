//! Slot lattice over one input string.
//!
//! Junction nodes are the character positions `0..=n`. Every slot over
//! `[i, j)` is grafted between node `i` and node `j`, and a start and a
//! final state are attached to nodes `0` and `n`. Start-to-final paths are
//! exactly the slot sequences whose spans partition the input.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::fst::{k_shortest_paths, shortest_path, Arc, FstError, Path, StateId, Weight, Wfst, WfstBuilder, EPSILON};
use crate::parser::{ParseError, Parser};
use crate::slots::{Slot, SlotClass, SlotMatcher};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chunk {
    pub start: usize,
    pub end: usize,
    pub class: SlotClass,
    pub tags: Vec<String>,
    pub weight: Weight,
}

impl Chunk {
    /// The chunk's characters in `input`.
    pub fn text(&self, input: &str) -> String {
        input.chars().skip(self.start).take(self.end - self.start).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseResult {
    pub input: String,
    pub chunks: Vec<Chunk>,
    pub total_weight: Weight,
}

impl ParseResult {
    pub fn has_unknown(&self) -> bool {
        self.chunks.iter().any(|c| c.class == SlotClass::Unknown)
    }

    /// (start, end, class, tags) of every chunk, ignoring weights.
    pub fn labels(&self) -> Vec<(usize, usize, SlotClass, Vec<String>)> {
        self.chunks
            .iter()
            .map(|c| (c.start, c.end, c.class, c.tags.clone()))
            .collect()
    }
}

#[derive(Debug)]
pub struct Lattice {
    input: String,
    slots: Vec<Slot>,
    combined: Wfst,
    /// Entry state of each grafted slot fragment.
    entries: HashMap<StateId, usize>,
}

/// Enumerates substrings, matches every slot class, joins adjacent slots at
/// junction nodes and adds start and final states.
pub fn build_lattice(input: &str, parser: &Parser) -> Result<Lattice, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    if chars.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let max = parser.config().max_input_len;
    if chars.len() > max {
        return Err(ParseError::InputTooLong { len: chars.len(), max });
    }
    let matcher = SlotMatcher::new(parser, &chars);
    let slots = matcher.all_slots()?;

    let mut b = WfstBuilder::new(matcher.isymbols().clone(), matcher.osymbols().clone());
    let nodes: Vec<StateId> = (0..=chars.len()).map(|_| b.add_state()).collect();
    let start = b.add_state();
    let fin = b.add_state();
    b.set_start(start);
    b.set_final(fin, Weight::ONE);
    b.add_arc(start, Arc::new(EPSILON, EPSILON, Weight::ONE, nodes[0]));
    b.add_arc(nodes[chars.len()], Arc::new(EPSILON, EPSILON, Weight::ONE, fin));
    let mut entries = HashMap::new();
    for (idx, slot) in slots.iter().enumerate() {
        let entry = b.graft(&slot.fst, nodes[slot.span.start], nodes[slot.span.end])?;
        entries.insert(entry, idx);
    }
    Ok(Lattice {
        input: input.to_string(),
        slots,
        combined: b.build()?,
        entries,
    })
}

impl Lattice {
    pub fn input(&self) -> &str {
        &self.input
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn combined(&self) -> &Wfst {
        &self.combined
    }

    fn to_result(&self, path: &Path) -> ParseResult {
        let chunks: Vec<Chunk> = path
            .states
            .iter()
            .filter_map(|s| self.entries.get(s))
            .map(|&i| {
                let s = &self.slots[i];
                Chunk {
                    start: s.span.start,
                    end: s.span.end,
                    class: s.class,
                    tags: s.tags.clone(),
                    weight: s.weight,
                }
            })
            .collect();
        ParseResult {
            input: self.input.clone(),
            chunks,
            total_weight: path.total,
        }
    }

    /// Best slot sequence.
    pub fn decode(&self) -> Result<ParseResult, ParseError> {
        let path = shortest_path(&self.combined)?;
        Ok(self.to_result(&path))
    }

    /// Up to `k` lowest-weight slot sequences, ascending.
    pub fn k_best(&self, k: usize) -> Result<Vec<ParseResult>, ParseError> {
        let paths = k_shortest_paths(&self.combined, k)?;
        Ok(paths.iter().map(|p| self.to_result(p)).collect())
    }

    /// Number of distinct start-to-final paths, counted over junction nodes.
    pub fn path_count(&self) -> Result<u128, FstError> {
        let n = self.input.chars().count();
        let mut count = vec![0u128; n + 1];
        count[0] = 1;
        for j in 1..=n {
            count[j] = self
                .slots
                .iter()
                .filter(|s| s.span.end == j)
                .map(|s| count[s.span.start])
                .sum();
        }
        Ok(count[n])
    }
}
