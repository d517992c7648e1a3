//! Abbreviation forms and the tagset transducer.
//!
//! Word forms come from the rule-based practices (truncation, vowel
//! deletion, contraction); phrase forms add initialisms and mixed
//! concatenations. Everything else (syllable-division, phonetic, single
//! letters) must be declared as an explicit lexicon entry.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc as Shared;

use crate::fst::{Arc, FstError, Label, StateId, SymbolTable, Weight, Wfst, WfstBuilder, EPSILON};
use crate::lexicon::{Lexicon, LexiconError, DELIMITERS};
use crate::ngram::NgramModel;

pub const MIN_TRUNCATION: usize = 2;
pub const PHRASE_FORM_CAP: usize = 4096;
pub const DEFAULT_K_BEST: usize = 8;
/// Live configuration cap while running the tagset transducer.
pub const MAX_LIVE_READINGS: usize = 4096;

const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbbreviationRule {
    Identity,
    Truncation,
    VowelDeletion,
    TruncatedVowelDeletion,
    Contraction,
    Initialism,
    /// Phrase form built from per-word forms.
    Compound,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbbreviationForm {
    /// Lowercase surface text.
    pub surface: String,
    pub source: Vec<String>,
    pub rule: AbbreviationRule,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AbbrevError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Fst(#[from] FstError),
    #[error("cannot expand empty text")]
    EmptyInput,
}

fn check_word(word: &str) -> Result<(), LexiconError> {
    if !word.is_empty() && word.chars().all(|c| c.is_alphabetic() && !c.is_uppercase()) {
        Ok(())
    } else {
        Err(LexiconError::NonAlphabetic(word.to_string()))
    }
}

/// Removes vowels except the first character and a word-initial vowel run
/// ("hours" -> "hrs", "air" -> "air").
pub fn delete_vowels(word: &str) -> String {
    let mut out = String::new();
    let mut leading = true;
    for c in word.chars() {
        let vowel = VOWELS.contains(&c);
        if leading && vowel {
            out.push(c);
            continue;
        }
        if out.is_empty() {
            out.push(c);
        } else if !vowel {
            out.push(c);
        }
        leading = false;
    }
    out
}

/// Rule-generated surfaces of a single tag word, deduplicated with the first
/// applicable rule winning.
pub fn generate_word_forms(word: &str) -> Result<Vec<AbbreviationForm>, LexiconError> {
    check_word(word)?;
    let chars: Vec<char> = word.chars().collect();
    let mut forms: Vec<AbbreviationForm> = Vec::new();
    let mut push = |surface: String, rule| {
        if !surface.is_empty() && !forms.iter().any(|f| f.surface == surface) {
            forms.push(AbbreviationForm {
                surface,
                source: vec![word.to_string()],
                rule,
            });
        }
    };
    push(word.to_string(), AbbreviationRule::Identity);
    for n in MIN_TRUNCATION..chars.len() {
        push(chars[..n].iter().collect(), AbbreviationRule::Truncation);
    }
    let deleted: Vec<char> = delete_vowels(word).chars().collect();
    push(deleted.iter().collect(), AbbreviationRule::VowelDeletion);
    for n in MIN_TRUNCATION..deleted.len() {
        push(deleted[..n].iter().collect(), AbbreviationRule::TruncatedVowelDeletion);
    }
    if chars.len() >= 3 {
        push([chars[0], chars[chars.len() - 1]].iter().collect(), AbbreviationRule::Contraction);
    }
    Ok(forms)
}

/// Word forms plus explicit entries that expand to exactly this word.
pub fn lexicon_word_forms(lexicon: &Lexicon, word: &str) -> Result<Vec<AbbreviationForm>, LexiconError> {
    let mut forms = generate_word_forms(word)?;
    for (surface, targets) in lexicon.explicit() {
        if targets.iter().any(|t| t.len() == 1 && t[0] == word) && !forms.iter().any(|f| &f.surface == surface) {
            forms.push(AbbreviationForm {
                surface: surface.clone(),
                source: vec![word.to_string()],
                rule: AbbreviationRule::Explicit,
            });
        }
    }
    Ok(forms)
}

/// Per-word choices inside a phrase: the word's forms and its first letter.
fn phrase_word_choices(lexicon: &Lexicon, word: &str) -> Result<Vec<String>, LexiconError> {
    let mut choices: Vec<String> = lexicon_word_forms(lexicon, word)?.into_iter().map(|f| f.surface).collect();
    let initial: String = word.chars().take(1).collect();
    if !choices.contains(&initial) {
        choices.push(initial);
    }
    Ok(choices)
}

/// Initialism first, then concatenations of per-word choices joined with no
/// delimiter or a single delimiter, capped at [`PHRASE_FORM_CAP`] surfaces.
pub fn generate_phrase_forms(lexicon: &Lexicon, phrase: &[String]) -> Result<Vec<AbbreviationForm>, LexiconError> {
    if phrase.len() < 2 {
        return Err(LexiconError::PhraseTooShort(phrase.join(" ")));
    }
    for w in phrase {
        if !lexicon.contains_tag(w) {
            return Err(LexiconError::UnknownTag(w.clone()));
        }
    }
    let choices = phrase
        .iter()
        .map(|w| phrase_word_choices(lexicon, w))
        .collect::<Result<Vec<_>, _>>()?;
    let initialism: String = phrase.iter().filter_map(|w| w.chars().next()).collect();
    let mut forms = vec![AbbreviationForm {
        surface: initialism,
        source: phrase.to_vec(),
        rule: AbbreviationRule::Initialism,
    }];
    let mut seen: BTreeSet<String> = forms.iter().map(|f| f.surface.clone()).collect();

    let joins: Vec<String> = std::iter::once(String::new())
        .chain(DELIMITERS.iter().map(|d| d.to_string()))
        .collect();
    // undelimited concatenations come first so the cap drops delimited variants
    let join_patterns = odometer(&vec![joins.len(); phrase.len() - 1]);
    let word_patterns = odometer(&choices.iter().map(Vec::len).collect::<Vec<_>>());
    'outer: for jp in &join_patterns {
        for wp in &word_patterns {
            if seen.len() >= PHRASE_FORM_CAP {
                break 'outer;
            }
            let mut s = choices[0][wp[0]].clone();
            for i in 1..phrase.len() {
                s.push_str(&joins[jp[i - 1]]);
                s.push_str(&choices[i][wp[i]]);
            }
            if seen.insert(s.clone()) {
                let rule = if wp.iter().all(|&i| i == 0) {
                    AbbreviationRule::Identity
                } else {
                    AbbreviationRule::Compound
                };
                forms.push(AbbreviationForm {
                    surface: s,
                    source: phrase.to_vec(),
                    rule,
                });
            }
        }
    }
    Ok(forms)
}

/// All index tuples below `radices`, last position varying fastest.
fn odometer(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// Character-input, tag-output transducer for tagset text.
#[derive(Debug, Clone)]
pub struct TagsetTransducer {
    fst: Wfst,
}

struct Trie<'b> {
    b: &'b mut WfstBuilder,
    syms: &'b SymbolTable,
    edges: HashMap<(StateId, char), StateId>,
}

impl Trie<'_> {
    fn insert(&mut self, root: StateId, surface: &str) -> StateId {
        let mut state = root;
        for c in surface.chars() {
            state = match self.edges.get(&(state, c)) {
                Some(&next) => next,
                None => {
                    let next = self.b.add_state();
                    for variant in case_variants(c) {
                        let l = self.syms.find_char(variant).expect("alphabet covers lexicon");
                        self.b.add_arc(state, Arc::new(l, EPSILON, Weight::ONE, next));
                    }
                    self.edges.insert((state, c), next);
                    next
                }
            };
        }
        state
    }
}

fn case_variants(c: char) -> Vec<char> {
    let mut v = vec![c];
    let mut upper = c.to_uppercase();
    if let (Some(u), None) = (upper.next(), upper.next()) {
        if u != c {
            v.push(u);
        }
    }
    v
}

/// Emits `tags` on epsilon-input arcs from `from` to `to`.
fn emit(b: &mut WfstBuilder, osyms: &SymbolTable, from: StateId, tags: &[String], to: StateId) {
    let mut state = from;
    for (i, t) in tags.iter().enumerate() {
        let next = if i + 1 == tags.len() { to } else { b.add_state() };
        let l = osyms.find(t).expect("output alphabet covers tags");
        b.add_arc(state, Arc::new(EPSILON, l, Weight::ONE, next));
        state = next;
    }
}

/// Accepts any sequence of word forms, explicit entries and phrase forms,
/// optionally separated by single delimiters, and emits the canonical tags.
/// Matching is case-insensitive and every arc has weight zero.
pub fn compile_tagset_fst(lexicon: &Lexicon) -> Result<TagsetTransducer, AbbrevError> {
    let osyms = Shared::new(lexicon.output_symbols());

    // word surfaces, explicit surfaces and phrase choices
    let mut words: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for tag in lexicon.tags() {
        words.insert(tag.clone(), generate_word_forms(tag)?.into_iter().map(|f| f.surface).collect());
    }
    let phrase_choices = lexicon
        .phrases()
        .iter()
        .map(|p| p.iter().map(|w| phrase_word_choices(lexicon, w)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;

    let mut alphabet = BTreeSet::new();
    let surfaces = words
        .values()
        .flatten()
        .chain(lexicon.explicit().keys())
        .chain(phrase_choices.iter().flatten().flatten());
    for s in surfaces {
        for c in s.chars() {
            alphabet.extend(case_variants(c));
        }
    }
    alphabet.extend(DELIMITERS);
    let isyms = Shared::new(SymbolTable::from_chars(alphabet));

    let mut b = WfstBuilder::new(isyms.clone(), osyms.clone());
    let start = b.add_state();
    let hub = b.add_state();
    let after_delim = b.add_state();
    b.set_start(start);
    b.set_final(hub, Weight::ONE);
    b.add_arc(hub, Arc::new(EPSILON, EPSILON, Weight::ONE, start));
    for d in DELIMITERS {
        let l = isyms.find_char(d).expect("delimiters are in the alphabet");
        b.add_arc(hub, Arc::new(l, EPSILON, Weight::ONE, after_delim));
    }
    b.add_arc(after_delim, Arc::new(EPSILON, EPSILON, Weight::ONE, start));

    let mut emitted: BTreeSet<(StateId, Vec<String>, StateId)> = BTreeSet::new();
    let mut trie = Trie {
        b: &mut b,
        syms: &isyms,
        edges: HashMap::new(),
    };
    let mut ends: Vec<(StateId, Vec<String>, StateId)> = Vec::new();
    for (tag, forms) in &words {
        for f in forms {
            ends.push((trie.insert(start, f), vec![tag.clone()], hub));
        }
    }
    for (surface, targets) in lexicon.explicit() {
        let end = trie.insert(start, surface);
        for t in targets {
            ends.push((end, t.clone(), hub));
        }
    }

    for (phrase, choices) in lexicon.phrases().iter().zip(&phrase_choices) {
        let mut entry = start;
        for (i, (word, surfaces)) in phrase.iter().zip(choices).enumerate() {
            let root = trie.b.add_state();
            trie.b.add_arc(entry, Arc::new(EPSILON, EPSILON, Weight::ONE, root));
            let last = i + 1 == phrase.len();
            let junction = if last { hub } else { trie.b.add_state() };
            for s in surfaces {
                ends.push((trie.insert(root, s), vec![word.clone()], junction));
            }
            if !last {
                let gap = trie.b.add_state();
                for d in DELIMITERS {
                    let l = isyms.find_char(d).expect("delimiters are in the alphabet");
                    trie.b.add_arc(junction, Arc::new(l, EPSILON, Weight::ONE, gap));
                }
                let next_entry = trie.b.add_state();
                trie.b.add_arc(junction, Arc::new(EPSILON, EPSILON, Weight::ONE, next_entry));
                trie.b.add_arc(gap, Arc::new(EPSILON, EPSILON, Weight::ONE, next_entry));
                entry = next_entry;
            }
        }
    }
    for end in ends {
        if emitted.insert(end.clone()) {
            emit(&mut b, &osyms, end.0, &end.1, end.2);
        }
    }
    Ok(TagsetTransducer { fst: b.build()? })
}

impl TagsetTransducer {
    pub fn fst(&self) -> &Wfst {
        &self.fst
    }

    fn labels(&self, text: &str) -> Option<Vec<Label>> {
        text.chars().map(|c| self.fst.isymbols().find_char(c)).collect()
    }

    /// Distinct tag sequences the text transduces to.
    pub fn readings(&self, text: &str) -> Result<Vec<Vec<String>>, FstError> {
        let Some(labels) = self.labels(text) else {
            return Ok(Vec::new());
        };
        let mut runner = self.fst.runner(MAX_LIVE_READINGS)?;
        for l in labels {
            runner.step(l)?;
            if runner.is_dead() {
                return Ok(Vec::new());
            }
        }
        Ok(self.render(runner.accepted()))
    }

    /// Readings of every prefix `text[..j]` for `j` in `1..=text.len()`
    /// (in characters), in one left-to-right pass.
    pub fn prefix_readings(&self, text: &[char]) -> Result<Vec<Vec<Vec<String>>>, FstError> {
        let mut out = Vec::with_capacity(text.len());
        let mut runner = self.fst.runner(MAX_LIVE_READINGS)?;
        for &c in text {
            let Some(l) = self.fst.isymbols().find_char(c) else { break };
            runner.step(l)?;
            if runner.is_dead() {
                break;
            }
            out.push(self.render(runner.accepted()));
        }
        out.resize(text.len(), Vec::new());
        Ok(out)
    }

    fn render(&self, accepted: Vec<(Vec<Label>, Weight)>) -> Vec<Vec<String>> {
        accepted.into_iter().map(|(o, _)| self.fst.output_symbols(&o)).collect()
    }
}

/// Scores each reading with the word model and keeps the `k_best` lowest.
pub fn rank_readings(readings: Vec<Vec<String>>, lm: &NgramModel, k_best: usize) -> Vec<(Vec<String>, Weight)> {
    let mut scored: Vec<(Vec<String>, Weight)> = readings
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let w = lm.slot_weight(&r).expect("non-empty reading");
            (r, w)
        })
        .collect();
    scored.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k_best);
    scored
}

/// Ranked tagset readings of `text`; an empty list means no reading.
pub fn expand_token(
    text: &str,
    tagset: &TagsetTransducer,
    lm: &NgramModel,
    k_best: usize,
) -> Result<Vec<(Vec<String>, Weight)>, AbbrevError> {
    if text.is_empty() {
        return Err(AbbrevError::EmptyInput);
    }
    Ok(rank_readings(tagset.readings(text)?, lm, k_best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconParts;

    fn surfaces(forms: &[AbbreviationForm]) -> Vec<&str> {
        forms.iter().map(|f| f.surface.as_str()).collect()
    }

    fn lexicon(tags: &[&str], phrases: &[&str]) -> Lexicon {
        Lexicon::new(LexiconParts {
            tags: tags.iter().map(|s| s.to_string()).collect(),
            phrases: phrases
                .iter()
                .map(|p| p.split(' ').map(str::to_string).collect())
                .collect(),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn zone_forms() {
        let forms = generate_word_forms("zone").unwrap();
        let s = surfaces(&forms);
        for want in ["zone", "zo", "zon", "zn", "ze"] {
            assert!(s.contains(&want), "{want} missing from {s:?}");
        }
        let zn = forms.iter().find(|f| f.surface == "zn").unwrap();
        assert_eq!(zn.rule, AbbreviationRule::VowelDeletion);
    }

    #[test]
    fn single_letter_collapses_to_identity() {
        let forms = generate_word_forms("a").unwrap();
        assert_eq!(surfaces(&forms), vec!["a"]);
        assert!(generate_word_forms("co2").is_err());
        assert!(generate_word_forms("").is_err());
    }

    #[test]
    fn vowel_deletion_keeps_leading_vowels() {
        assert_eq!(delete_vowels("air"), "air");
        assert_eq!(delete_vowels("hours"), "hrs");
        assert_eq!(delete_vowels("outside"), "outsd");
        assert_eq!(delete_vowels("mode"), "md");
    }

    #[test]
    fn phrase_forms() {
        let lex = lexicon(
            &["supply", "air", "fan", "zone", "temperature", "after", "hours", "mode"],
            &["supply air fan", "zone temperature", "after hours mode"],
        );
        for (phrase, want) in [("supply air fan", "saf"), ("zone temperature", "znt"), ("after hours mode", "ahrsmd")] {
            let p: Vec<String> = phrase.split(' ').map(str::to_string).collect();
            let forms = generate_phrase_forms(&lex, &p).unwrap();
            assert!(surfaces(&forms).contains(&want), "{want} not generated for {phrase}");
            assert_eq!(forms[0].rule, AbbreviationRule::Initialism);
            assert_eq!(forms[0].surface.chars().count(), p.len());
        }
        assert!(generate_phrase_forms(&lex, &["supply".to_string()]).is_err());
        assert!(generate_phrase_forms(&lex, &["supply".to_string(), "water".to_string()]).is_err());
    }

    #[test]
    fn tagset_transducer_outputs() {
        let lex = lexicon(
            &["supply", "air", "fan", "heating", "hot", "water", "valve"],
            &["supply air fan", "heating hot water"],
        );
        let fst = compile_tagset_fst(&lex).unwrap();
        let words = |s: &str| s.split(' ').map(str::to_string).collect::<Vec<_>>();
        assert!(fst.readings("SAF").unwrap().contains(&words("supply air fan")));
        assert!(fst.readings("HHWValve").unwrap().contains(&words("heating hot water valve")));
        assert!(fst.readings("Supply_Air").unwrap().contains(&words("supply air")));
        assert!(fst.readings("qqq").unwrap().is_empty());
        assert!(fst.readings("_fan").unwrap().is_empty());
        assert!(fst.readings("fan_").unwrap().is_empty());
        assert!(fst.readings("fan__air").unwrap().is_empty());
    }

    #[test]
    fn prefix_readings_agree_with_whole_text() {
        let lex = lexicon(
            &["supply", "air", "fan", "heating", "hot", "water", "valve"],
            &["supply air fan", "heating hot water"],
        );
        let fst = compile_tagset_fst(&lex).unwrap();
        let text: Vec<char> = "HHW_ValveSAFx".chars().collect();
        let prefixes = fst.prefix_readings(&text).unwrap();
        for j in 1..=text.len() {
            let s: String = text[..j].iter().collect();
            assert_eq!(prefixes[j - 1], fst.readings(&s).unwrap(), "prefix {s}");
        }
    }

    #[test]
    fn language_model_ranks_ambiguous_expansions() {
        let lex = lexicon(&["zone", "temperature", "time"], &["zone temperature", "zone time"]);
        let fst = compile_tagset_fst(&lex).unwrap();
        let corpus: Vec<Vec<String>> = ["zone temperature", "zone temperature", "zone time"]
            .iter()
            .map(|l| crate::ngram::word_tokens(l))
            .collect();
        let lm = NgramModel::train(&corpus, 0.5).unwrap();
        let ranked = expand_token("ZnT", &fst, &lm, DEFAULT_K_BEST).unwrap();
        assert_eq!(ranked.len(), 2);
        assert_eq!(ranked[0].0, vec!["zone", "temperature"]);
        assert_eq!(ranked[1].0, vec!["zone", "time"]);
        assert!(ranked[0].1 < ranked[1].1);
        assert_eq!(expand_token("", &fst, &lm, 8), Err(AbbrevError::EmptyInput));
    }
}
