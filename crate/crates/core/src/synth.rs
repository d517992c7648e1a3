//! Seeded generator of labelled synthetic point names.
//!
//! Each point is an equipment name followed by one lexicon phrase. Every
//! word of the phrase is abbreviated by a randomly chosen rule (or the whole
//! phrase becomes its initialism) and the point is written in one of five
//! case and delimiter conventions.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abbrev::delete_vowels;
use crate::config::SynthConfig;
use crate::eval::{LabeledChunk, LabeledPoint};
use crate::lexicon::Lexicon;
use crate::slots::SlotClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Camel,
    Pascal,
    Snake,
    Kebab,
    Upper,
}

const CONVENTIONS: [Convention; 5] = [
    Convention::Camel,
    Convention::Pascal,
    Convention::Snake,
    Convention::Kebab,
    Convention::Upper,
];

impl Convention {
    fn delimiter(self) -> Option<char> {
        match self {
            Convention::Snake => Some('_'),
            Convention::Kebab => Some('-'),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SynthError {
    #[error("n must be at least 1")]
    Empty,
    #[error("lexicon needs at least one phrase and one equipment type")]
    Lexicon,
    #[error("invalid generator weights: {0}")]
    Weights(String),
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c.flat_map(char::to_lowercase)).collect(),
        None => String::new(),
    }
}

fn truncate(word: &str, rng: &mut impl Rng, min: usize) -> String {
    let n = word.chars().count();
    if n <= min {
        return word.to_string();
    }
    let keep = rng.gen_range(min..n);
    word.chars().take(keep).collect()
}

fn abbreviate(word: &str, rule: usize, rng: &mut impl Rng, min: usize) -> String {
    match rule {
        1 => truncate(word, rng, min),
        2 => delete_vowels(word),
        3 => truncate(&delete_vowels(word), rng, min),
        4 if word.chars().count() >= 3 => {
            let first = word.chars().next().unwrap();
            let last = word.chars().last().unwrap();
            format!("{first}{last}")
        }
        _ => word.to_string(),
    }
}

fn identifier(rng: &mut impl Rng, delimited: bool) -> Vec<String> {
    match rng.gen_range(0..4) {
        1 => vec![rng.gen_range(1..10).to_string()],
        2 => vec![format!("{}{}", ['G', 'L', 'B'].choose(rng).unwrap(), rng.gen_range(1..10))],
        3 if delimited => vec![format!("L{:02}", rng.gen_range(1..13)), format!("{:02}", rng.gen_range(1..21))],
        _ => vec![format!("{:02}", rng.gen_range(1..21))],
    }
}

/// `n` labelled points, identical for identical `(lexicon, n, seed, config)`.
pub fn generate_synthetic(
    lexicon: &Lexicon,
    n: usize,
    seed: u64,
    config: &SynthConfig,
) -> Result<Vec<LabeledPoint>, SynthError> {
    if n == 0 {
        return Err(SynthError::Empty);
    }
    let phrases = lexicon.phrases();
    let types: Vec<(&str, &str)> = lexicon
        .equipment()
        .iter()
        .flat_map(|e| e.abbreviations.iter().map(move |a| (e.tag.as_str(), a.as_str())))
        .collect();
    if phrases.is_empty() || types.is_empty() {
        return Err(SynthError::Lexicon);
    }
    let weights = |w: &[f64]| WeightedIndex::new(w).map_err(|e| SynthError::Weights(e.to_string()));
    let rules = weights(&config.word_rules)?;
    let conventions = weights(&config.conventions)?;
    if !(0.0..=1.0).contains(&config.initialism) {
        return Err(SynthError::Weights(format!("initialism probability {}", config.initialism)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let conv = CONVENTIONS[conventions.sample(&mut rng)];
        let (type_tag, abbr) = *types.choose(&mut rng).unwrap();
        let phrase = phrases.choose(&mut rng).unwrap();
        let delim = conv.delimiter();

        let mut equip = match conv {
            Convention::Camel => abbr.to_lowercase(),
            Convention::Pascal => capitalize(abbr),
            _ => abbr.to_uppercase(),
        };
        let groups = identifier(&mut rng, delim.is_some());
        if let Some(d) = delim {
            if rng.gen_bool(0.5) {
                equip.push(d);
            }
        }
        let sep = delim.map(String::from).unwrap_or_default();
        let id = groups.join(&sep);
        equip.push_str(&match conv {
            Convention::Camel | Convention::Pascal => id.to_lowercase(),
            _ => id,
        });

        let words: Vec<String> = if rng.gen_bool(config.initialism) {
            let init: String = phrase.iter().filter_map(|w| w.chars().next()).collect();
            vec![match conv {
                Convention::Snake | Convention::Kebab => init,
                _ => init.to_uppercase(),
            }]
        } else {
            phrase
                .iter()
                .map(|w| {
                    let a = abbreviate(w, rules.sample(&mut rng), &mut rng, config.min_truncation);
                    match conv {
                        Convention::Camel | Convention::Pascal => capitalize(&a),
                        Convention::Upper => a.to_uppercase(),
                        _ => a,
                    }
                })
                .collect()
        };
        let tagset = words.join(&sep);

        let e_len = equip.chars().count();
        let mut chunks = vec![LabeledChunk {
            start: 0,
            end: e_len,
            class: SlotClass::Equipment,
            tags: vec![type_tag.to_string()],
        }];
        let mut input = equip;
        let mut at = e_len;
        if let Some(d) = delim {
            input.push(d);
            chunks.push(LabeledChunk {
                start: at,
                end: at + 1,
                class: SlotClass::Delimiter,
                tags: Vec::new(),
            });
            at += 1;
        }
        input.push_str(&tagset);
        chunks.push(LabeledChunk {
            start: at,
            end: at + tagset.chars().count(),
            class: SlotClass::Tagset,
            tags: phrase.clone(),
        });
        out.push(LabeledPoint { input, chunks });
    }
    Ok(out)
}
