//! Span-cover dynamic program over slot weights computed directly from the
//! lexicon and the two language models, with no transducers involved.

use std::collections::{BTreeSet, HashMap};

use bastag::abbrev::generate_word_forms;
use bastag::lexicon::Lexicon;
use bastag::ngram::char_tokens;
use bastag::parser::Parser;

const DELIMS: [char; 4] = [' ', '-', '_', '.'];

fn is_delim(c: char) -> bool {
    DELIMS.contains(&c)
}

pub struct Oracle<'a> {
    parser: &'a Parser,
    word_forms: HashMap<String, Vec<String>>,
    phrase_choices: Vec<(Vec<String>, Vec<Vec<String>>)>,
}

impl<'a> Oracle<'a> {
    pub fn new(parser: &'a Parser) -> Self {
        let lex = parser.lexicon();
        let word_forms: HashMap<String, Vec<String>> = lex
            .tags()
            .iter()
            .map(|t| {
                let forms = generate_word_forms(t).unwrap().into_iter().map(|f| f.surface).collect();
                (t.clone(), forms)
            })
            .collect();
        let phrase_choices = lex
            .phrases()
            .iter()
            .map(|p| {
                let choices = p.iter().map(|w| choices_for(lex, &word_forms, w)).collect();
                (p.clone(), choices)
            })
            .collect();
        Oracle {
            parser,
            word_forms,
            phrase_choices,
        }
    }

    /// Tag sequences for one unit: a word form, an explicit surface or a
    /// whole phrase. Only phrases may contain delimiters, between words.
    fn unit_readings(&self, t: &str) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        if !t.chars().any(is_delim) {
            for (tag, forms) in &self.word_forms {
                if forms.iter().any(|f| f == t) {
                    out.push(vec![tag.clone()]);
                }
            }
            if let Some(targets) = self.parser.lexicon().explicit().get(t) {
                out.extend(targets.iter().cloned());
            }
        }
        let chars: Vec<char> = t.chars().collect();
        for (phrase, choices) in &self.phrase_choices {
            if phrase_matches(choices, &chars, 0, 0) {
                out.push(phrase.clone());
            }
        }
        out
    }

    /// All readings of `t` as units optionally separated by single delimiters.
    pub fn readings(&self, text: &str) -> BTreeSet<Vec<String>> {
        let t: Vec<char> = text.chars().flat_map(char::to_lowercase).collect();
        let n = t.len();
        let mut suffix: Vec<BTreeSet<Vec<String>>> = vec![BTreeSet::new(); n + 1];
        for i in (0..n).rev() {
            let mut here = BTreeSet::new();
            for j in i + 1..=n {
                let unit: String = t[i..j].iter().collect();
                for u in self.unit_readings(&unit) {
                    if j == n {
                        here.insert(u.clone());
                        continue;
                    }
                    for rest in &suffix[j] {
                        here.insert([u.clone(), rest.clone()].concat());
                    }
                    if is_delim(t[j]) && j + 1 < n {
                        for rest in &suffix[j + 1] {
                            here.insert([u.clone(), rest.clone()].concat());
                        }
                    }
                }
            }
            suffix[i] = here;
        }
        suffix.swap_remove(0)
    }

    fn tagset_weight(&self, text: &str) -> Option<f64> {
        self.readings(text)
            .iter()
            .map(|r| self.parser.word_lm().slot_weight(r).unwrap().value())
            .min_by(f64::total_cmp)
    }

    fn equipment_weight(&self, text: &[char]) -> Option<f64> {
        let ok = self.parser.lexicon().equipment().iter().any(|e| {
            e.abbreviations.iter().any(|a| {
                let a: Vec<char> = a.chars().collect();
                text.len() > a.len()
                    && a.iter().zip(text).all(|(x, y)| x.eq_ignore_ascii_case(y))
                    && identifier_ok(&text[a.len()..], e.max_identifier_len)
            })
        });
        ok.then(|| {
            let s: String = text.iter().collect();
            self.parser.char_lm().slot_weight(&char_tokens(&s)).unwrap().value()
        })
    }

    /// Cheapest slot over `chars[i..j]`, any class.
    pub fn span_weight(&self, chars: &[char]) -> Option<f64> {
        let mut best: Option<f64> = None;
        let mut consider = |w: Option<f64>| {
            if let Some(w) = w {
                best = Some(best.map_or(w, |b| b.min(w)));
            }
        };
        if chars.len() == 1 {
            consider(Some(if is_delim(chars[0]) {
                0.0
            } else {
                self.parser.config().unknown_weight
            }));
        }
        consider(self.equipment_weight(chars));
        consider(self.tagset_weight(&chars.iter().collect::<String>()));
        best
    }

    /// Minimum total weight over all covers of the input by slots.
    pub fn best_cover(&self, input: &str) -> f64 {
        let chars: Vec<char> = input.chars().collect();
        let n = chars.len();
        let cap = self.parser.config().max_span;
        let mut best = vec![f64::INFINITY; n + 1];
        best[0] = 0.0;
        for j in 1..=n {
            for i in j.saturating_sub(cap)..j {
                if best[i].is_finite() {
                    if let Some(w) = self.span_weight(&chars[i..j]) {
                        best[j] = best[j].min(best[i] + w);
                    }
                }
            }
        }
        best[n]
    }
}

fn choices_for(lex: &Lexicon, word_forms: &HashMap<String, Vec<String>>, word: &str) -> Vec<String> {
    let mut c = word_forms[word].clone();
    for (surface, targets) in lex.explicit() {
        if targets.iter().any(|t| t.len() == 1 && t[0] == word) {
            c.push(surface.clone());
        }
    }
    c.push(word[..1].to_string());
    c.sort();
    c.dedup();
    c
}

fn phrase_matches(choices: &[Vec<String>], t: &[char], word: usize, at: usize) -> bool {
    if word == choices.len() {
        return at == t.len();
    }
    choices[word].iter().any(|c| {
        let c: Vec<char> = c.chars().collect();
        if !t[at..].starts_with(&c) {
            return false;
        }
        let next = at + c.len();
        if word + 1 == choices.len() {
            return next == t.len();
        }
        phrase_matches(choices, t, word + 1, next)
            || (next < t.len() && is_delim(t[next]) && phrase_matches(choices, t, word + 1, next + 1))
    })
}

fn identifier_ok(rest: &[char], max_len: usize) -> bool {
    let id = if rest.first().is_some_and(|c| is_delim(*c)) {
        &rest[1..]
    } else {
        rest
    };
    if id.is_empty() || id.len() > max_len {
        return false;
    }
    let groups: Vec<&[char]> = id.split(|c| is_delim(*c)).collect();
    groups.iter().all(|g| !g.is_empty() && g.iter().all(|c| c.is_alphanumeric()))
        && id.iter().any(|c| c.is_ascii_digit())
}
