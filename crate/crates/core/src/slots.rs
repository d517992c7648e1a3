//! The four slot classes: delimiter, equipment, tagset and unknown.
//!
//! A slot is a class-labelled reading of one substring: a small transducer
//! that accepts exactly the matched characters and emits the slot's tags,
//! plus a weight. Delimiter slots cost nothing, unknown slots cost a fixed
//! constant, equipment and tagset slots are scored by their language model.

use std::fmt;
use std::ops::Range;
use std::sync::Arc as Shared;

use serde::{Deserialize, Serialize};

use crate::abbrev::rank_readings;
use crate::fst::{FstError, Label, SymbolTable, Weight, Wfst};
use crate::lexicon::{is_delimiter, EquipmentTypeSpec, Lexicon};
use crate::ngram::char_tokens;
use crate::parser::Parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotClass {
    Delimiter,
    Equipment,
    Tagset,
    Unknown,
}

impl fmt::Display for SlotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotClass::Delimiter => "delimiter",
            SlotClass::Equipment => "equipment",
            SlotClass::Tagset => "tagset",
            SlotClass::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Slot {
    pub class: SlotClass,
    /// Half-open character interval over the input.
    pub span: Range<usize>,
    pub tags: Vec<String>,
    pub weight: Weight,
    pub fst: Wfst,
}

/// Builds slots over one input string. The input alphabet is the set of
/// characters of the input; the output alphabet is the lexicon's.
pub struct SlotMatcher<'a> {
    parser: &'a Parser,
    input: &'a [char],
    isymbols: Shared<SymbolTable>,
    osymbols: Shared<SymbolTable>,
}

impl<'a> SlotMatcher<'a> {
    pub fn new(parser: &'a Parser, input: &'a [char]) -> Self {
        SlotMatcher {
            parser,
            input,
            isymbols: Shared::new(SymbolTable::from_chars(input.iter().copied())),
            osymbols: parser.tagset().fst().osymbols().clone(),
        }
    }

    pub fn isymbols(&self) -> &Shared<SymbolTable> {
        &self.isymbols
    }

    pub fn osymbols(&self) -> &Shared<SymbolTable> {
        &self.osymbols
    }

    fn slot(&self, class: SlotClass, span: Range<usize>, tags: Vec<String>, weight: Weight) -> Result<Slot, FstError> {
        let input: Vec<Label> = self.input[span.clone()]
            .iter()
            .map(|&c| self.isymbols.find_char(c).expect("alphabet built from input"))
            .collect();
        let output = tags
            .iter()
            .map(|t| self.osymbols.find(t).ok_or_else(|| FstError::RejectedInput(t.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let fst = Wfst::linear(self.isymbols.clone(), self.osymbols.clone(), &input, &output, weight)?;
        Ok(Slot {
            class,
            span,
            tags,
            weight,
            fst,
        })
    }

    pub fn match_delimiter(&self, span: Range<usize>) -> Result<Option<Slot>, FstError> {
        match &self.input[span.clone()] {
            [c] if is_delimiter(*c) => Ok(Some(self.slot(SlotClass::Delimiter, span, Vec::new(), Weight::ONE)?)),
            _ => Ok(None),
        }
    }

    /// Any single non-delimiter character.
    pub fn match_unknown(&self, span: Range<usize>) -> Result<Option<Slot>, FstError> {
        match &self.input[span.clone()] {
            [c] if !is_delimiter(*c) => {
                let w = Weight::new(self.parser.config().unknown_weight);
                Ok(Some(self.slot(SlotClass::Unknown, span, Vec::new(), w)?))
            }
            _ => Ok(None),
        }
    }

    pub fn match_equipment(&self, span: Range<usize>) -> Result<Vec<Slot>, FstError> {
        let text = &self.input[span.clone()];
        let types = equipment_types(text, self.parser.lexicon());
        if types.is_empty() {
            return Ok(Vec::new());
        }
        let s: String = text.iter().collect();
        let weight = self
            .parser
            .char_lm()
            .slot_weight(&char_tokens(&s))
            .expect("equipment text is non-empty");
        types
            .into_iter()
            .map(|t| self.slot(SlotClass::Equipment, span.clone(), vec![t.tag.clone()], weight))
            .collect()
    }

    pub fn match_tagset(&self, span: Range<usize>) -> Result<Vec<Slot>, FstError> {
        let s: String = self.input[span.clone()].iter().collect();
        let readings = self.parser.tagset().readings(&s)?;
        self.tagset_slots(span, readings)
    }

    fn tagset_slots(&self, span: Range<usize>, readings: Vec<Vec<String>>) -> Result<Vec<Slot>, FstError> {
        rank_readings(readings, self.parser.word_lm(), self.parser.config().k_best)
            .into_iter()
            .map(|(tags, w)| self.slot(SlotClass::Tagset, span.clone(), tags, w))
            .collect()
    }

    /// All slots of every class for one span, tested independently.
    pub fn match_span(&self, span: Range<usize>) -> Result<Vec<Slot>, FstError> {
        let mut out = Vec::new();
        out.extend(self.match_delimiter(span.clone())?);
        out.extend(self.match_equipment(span.clone())?);
        out.extend(self.match_tagset(span.clone())?);
        out.extend(self.match_unknown(span)?);
        Ok(out)
    }

    /// Every slot over every substring up to the configured span cap. Tagset
    /// readings for all ends sharing a start are computed in one pass.
    pub fn all_slots(&self) -> Result<Vec<Slot>, FstError> {
        let n = self.input.len();
        let cap = self.parser.config().max_span;
        let mut out = Vec::new();
        for i in 0..n {
            let end = n.min(i + cap);
            let mut tagsets = self.parser.tagset().prefix_readings(&self.input[i..end])?.into_iter();
            for j in i + 1..=end {
                if j == i + 1 {
                    out.extend(self.match_delimiter(i..j)?);
                    out.extend(self.match_unknown(i..j)?);
                }
                out.extend(self.match_equipment(i..j)?);
                let readings = tagsets.next().unwrap_or_default();
                out.extend(self.tagset_slots(i..j, readings)?);
            }
        }
        Ok(out)
    }
}

/// Equipment types whose grammar consumes all of `text`:
/// `<type> <delimiter>? <identifier> (<delimiter> <identifier>)*`, where
/// identifiers are alphanumeric groups with at least one digit overall.
pub fn equipment_types<'l>(text: &[char], lexicon: &'l Lexicon) -> Vec<&'l EquipmentTypeSpec> {
    lexicon
        .equipment()
        .iter()
        .filter(|spec| {
            spec.abbreviations.iter().any(|abbr| {
                let abbr: Vec<char> = abbr.chars().collect();
                text.len() > abbr.len()
                    && text
                        .iter()
                        .zip(&abbr)
                        .all(|(a, b)| a.to_lowercase().eq(b.to_lowercase()))
                    && is_identifier(&text[abbr.len()..], spec.max_identifier_len)
            })
        })
        .collect()
}

fn is_identifier(rest: &[char], max_len: usize) -> bool {
    let id = match rest.first() {
        Some(c) if is_delimiter(*c) => &rest[1..],
        _ => rest,
    };
    if id.is_empty() || id.len() > max_len {
        return false;
    }
    if is_delimiter(id[0]) || is_delimiter(id[id.len() - 1]) {
        return false;
    }
    if id.windows(2).any(|w| is_delimiter(w[0]) && is_delimiter(w[1])) {
        return false;
    }
    id.iter().all(|&c| c.is_alphanumeric() || is_delimiter(c)) && id.iter().any(char::is_ascii_digit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::lexicon::LexiconParts;
    use crate::ngram::NgramModel;

    fn parser() -> Parser {
        let lex = Lexicon::new(LexiconParts {
            tags: ["supply", "air", "fan", "room", "temperature"].iter().map(|s| s.to_string()).collect(),
            phrases: vec![vec!["supply".into(), "air".into(), "fan".into()]],
            equipment: vec![EquipmentTypeSpec::new("Air_Handling_Unit", &["AHU"])],
            ..Default::default()
        })
        .unwrap();
        let words: Vec<Vec<String>> = ["supply air fan", "room temperature"]
            .iter()
            .map(|l| crate::ngram::word_tokens(l))
            .collect();
        let names: Vec<Vec<String>> = ["AHU-01", "AHU_G2"].iter().map(|n| char_tokens(n)).collect();
        Parser::new(
            lex,
            NgramModel::train(&words, 0.5).unwrap(),
            NgramModel::train(&names, 0.5).unwrap(),
            Config::default(),
        )
        .unwrap()
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn delimiter_and_unknown() {
        let p = parser();
        let input = chars("_-x7 Q--");
        let m = SlotMatcher::new(&p, &input);
        let d = m.match_delimiter(0..1).unwrap().unwrap();
        assert_eq!((d.class, d.weight), (SlotClass::Delimiter, Weight::ONE));
        assert!(d.tags.is_empty());
        assert!(m.match_delimiter(1..2).unwrap().is_some());
        assert!(m.match_delimiter(4..5).unwrap().is_some());
        assert!(m.match_delimiter(2..3).unwrap().is_none());
        assert!(m.match_delimiter(6..8).unwrap().is_none());
        let u = m.match_unknown(5..6).unwrap().unwrap();
        assert_eq!((u.class, u.weight), (SlotClass::Unknown, Weight::new(20.0)));
        assert!(m.match_unknown(3..4).unwrap().is_some());
        assert!(m.match_unknown(1..2).unwrap().is_none());
        // the slot machine accepts exactly its text and emits nothing
        let t = u.fst.transduce_str("Q").unwrap();
        assert_eq!(t, vec![(vec![], Weight::new(20.0))]);
        assert!(u.fst.transduce_str("x").unwrap().is_empty());
    }

    #[test]
    fn equipment_grammar() {
        let p = parser();
        let lex = p.lexicon();
        for ok in ["AHU-01", "AHU_G2", "ahu01", "AHU-L01-02", "AHU01A", "AHU_G_1"] {
            assert_eq!(equipment_types(&chars(ok), lex).len(), 1, "{ok}");
        }
        for bad in ["Valve", "AHU", "AHU-", "AHU-G", "AHU--01", "AHU-01-", "AHU-01__2", "XAHU01", "AHU-01234567890123456"] {
            assert!(equipment_types(&chars(bad), lex).is_empty(), "{bad}");
        }
        let input = chars("AHU_G2");
        let m = SlotMatcher::new(&p, &input);
        let slots = m.match_equipment(0..6).unwrap();
        assert_eq!(slots.len(), 1);
        assert_eq!(slots[0].tags, vec!["Air_Handling_Unit"]);
        let expect = p.char_lm().slot_weight(&char_tokens("ahu_g2")).unwrap();
        assert_eq!(slots[0].weight, expect);
    }

    #[test]
    fn tagset_slots() {
        let p = parser();
        let input = chars("SAF zz RmTemp");
        let m = SlotMatcher::new(&p, &input);
        let saf = m.match_tagset(0..3).unwrap();
        assert_eq!(saf[0].tags, vec!["supply", "air", "fan"]);
        assert_eq!(saf[0].weight, p.word_lm().slot_weight(&["supply", "air", "fan"]).unwrap());
        assert!(m.match_tagset(4..6).unwrap().is_empty());
        let rm = m.match_tagset(7..13).unwrap();
        assert_eq!(rm[0].tags, vec!["room", "temperature"]);
        let out = rm[0].fst.transduce_str("RmTemp").unwrap();
        assert_eq!(rm[0].fst.output_symbols(&out[0].0), vec!["room", "temperature"]);
    }

    #[test]
    fn all_slots_agrees_with_per_span_matching() {
        let p = parser();
        let input = chars("AHU_01SAF-RmTemp");
        let m = SlotMatcher::new(&p, &input);
        let key = |s: &Slot| (s.span.start, s.span.end, s.class, s.tags.clone(), s.weight);
        let mut fast: Vec<_> = m.all_slots().unwrap().iter().map(key).collect();
        let mut slow = Vec::new();
        for i in 0..input.len() {
            for j in i + 1..=input.len() {
                slow.extend(m.match_span(i..j).unwrap().iter().map(key));
            }
        }
        fast.sort_by(|a, b| a.partial_cmp(b).unwrap());
        slow.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(fast, slow);
    }
}
