//! Tag vocabulary, phrases, explicit abbreviations and equipment types.
//!
//! Lexicon files are TOML:
//!
//! ```toml
//! version = 1
//! tags = ["supply", "air", "fan", "zone", "temperature", "setpoint"]
//! phrases = ["supply air fan", "zone temperature setpoint"]
//!
//! [[explicit]]
//! surface = "setpt"
//! tags = "setpoint"
//!
//! [[equipment]]
//! type = "Air_Handling_Unit"
//! abbreviations = ["AHU"]
//! max_identifier_len = 16   # optional
//! ```
//!
//! Tags are lowercase letters. Every phrase word and every explicit target
//! must be a declared tag. Explicit entries cover forms that cannot be
//! generated by rule (syllable division, phonetic spellings, single letters).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fst::SymbolTable;

pub const DELIMITERS: [char; 4] = [' ', '-', '_', '.'];
pub const DEFAULT_MAX_IDENTIFIER_LEN: usize = 16;
pub const LEXICON_FILE_VERSION: u32 = 1;

pub fn is_delimiter(c: char) -> bool {
    DELIMITERS.contains(&c)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LexiconError {
    #[error("{0}")]
    Syntax(String),
    #[error("line {line}: {source}")]
    At {
        line: usize,
        source: Box<LexiconError>,
    },
    #[error("tag {0:?} must be non-empty lowercase letters")]
    InvalidTag(String),
    #[error("{0:?} is not a declared tag")]
    UnknownTag(String),
    #[error("phrase {0:?} needs at least two tags")]
    PhraseTooShort(String),
    #[error("surface {0:?} must be non-empty and alphanumeric")]
    InvalidSurface(String),
    #[error("explicit entry {0:?} has no tags")]
    EmptyExpansion(String),
    #[error("equipment type {0:?}: {1}")]
    InvalidEquipment(String, String),
    #[error("word {0:?} is not lowercase alphabetic")]
    NonAlphabetic(String),
    #[error("unsupported lexicon version {0}")]
    Version(u32),
    #[error("lexicon declares no tags")]
    NoTags,
}

impl LexiconError {
    fn at(self, line: usize) -> LexiconError {
        LexiconError::At {
            line,
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquipmentTypeSpec {
    #[serde(rename = "type")]
    pub tag: String,
    pub abbreviations: Vec<String>,
    #[serde(default = "default_max_identifier_len")]
    pub max_identifier_len: usize,
}

fn default_max_identifier_len() -> usize {
    DEFAULT_MAX_IDENTIFIER_LEN
}

impl EquipmentTypeSpec {
    pub fn new(tag: &str, abbreviations: &[&str]) -> Self {
        EquipmentTypeSpec {
            tag: tag.to_string(),
            abbreviations: abbreviations.iter().map(|s| s.to_string()).collect(),
            max_identifier_len: DEFAULT_MAX_IDENTIFIER_LEN,
        }
    }

    fn validate(&self) -> Result<(), LexiconError> {
        let bad = |why: &str| Err(LexiconError::InvalidEquipment(self.tag.clone(), why.to_string()));
        if self.tag.is_empty() || self.tag.chars().any(char::is_whitespace) {
            return bad("type tag must be non-empty without whitespace");
        }
        if self.abbreviations.is_empty() {
            return bad("needs at least one abbreviation");
        }
        if self
            .abbreviations
            .iter()
            .any(|a| a.is_empty() || !a.chars().all(char::is_alphanumeric))
        {
            return bad("abbreviations must be non-empty and alphanumeric");
        }
        if self.max_identifier_len == 0 {
            return bad("max_identifier_len must be positive");
        }
        Ok(())
    }
}

/// Plain data form used for serialization; [`Lexicon`] is the validated form.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LexiconParts {
    pub tags: BTreeSet<String>,
    pub phrases: Vec<Vec<String>>,
    pub explicit: BTreeMap<String, Vec<Vec<String>>>,
    pub equipment: Vec<EquipmentTypeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LexiconParts", into = "LexiconParts")]
pub struct Lexicon {
    parts: LexiconParts,
}

impl TryFrom<LexiconParts> for Lexicon {
    type Error = LexiconError;

    fn try_from(parts: LexiconParts) -> Result<Self, LexiconError> {
        Lexicon::new(parts)
    }
}

impl From<Lexicon> for LexiconParts {
    fn from(l: Lexicon) -> Self {
        l.parts
    }
}

pub fn validate_tag(tag: &str) -> Result<(), LexiconError> {
    if !tag.is_empty() && tag.chars().all(|c| c.is_alphabetic() && !c.is_uppercase()) {
        Ok(())
    } else {
        Err(LexiconError::InvalidTag(tag.to_string()))
    }
}

fn validate_surface(surface: &str) -> Result<(), LexiconError> {
    if !surface.is_empty() && surface.chars().all(char::is_alphanumeric) {
        Ok(())
    } else {
        Err(LexiconError::InvalidSurface(surface.to_string()))
    }
}

impl Lexicon {
    pub fn new(parts: LexiconParts) -> Result<Self, LexiconError> {
        if parts.tags.is_empty() {
            return Err(LexiconError::NoTags);
        }
        for t in &parts.tags {
            validate_tag(t)?;
        }
        let known = |w: &String| {
            if parts.tags.contains(w) {
                Ok(())
            } else {
                Err(LexiconError::UnknownTag(w.clone()))
            }
        };
        let mut seen = BTreeSet::new();
        let mut phrases = Vec::new();
        for p in &parts.phrases {
            if p.len() < 2 {
                return Err(LexiconError::PhraseTooShort(p.join(" ")));
            }
            p.iter().try_for_each(known)?;
            if seen.insert(p.clone()) {
                phrases.push(p.clone());
            }
        }
        let mut explicit = BTreeMap::new();
        for (surface, targets) in &parts.explicit {
            validate_surface(surface)?;
            let mut sorted: Vec<Vec<String>> = Vec::new();
            for t in targets {
                if t.is_empty() {
                    return Err(LexiconError::EmptyExpansion(surface.clone()));
                }
                t.iter().try_for_each(known)?;
                if !sorted.contains(t) {
                    sorted.push(t.clone());
                }
            }
            sorted.sort();
            if !sorted.is_empty() {
                explicit.insert(surface.to_lowercase(), sorted);
            }
        }
        for e in &parts.equipment {
            e.validate()?;
        }
        Ok(Lexicon {
            parts: LexiconParts {
                tags: parts.tags,
                phrases,
                explicit,
                equipment: parts.equipment,
            },
        })
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.parts.tags
    }

    pub fn phrases(&self) -> &[Vec<String>] {
        &self.parts.phrases
    }

    pub fn explicit(&self) -> &BTreeMap<String, Vec<Vec<String>>> {
        &self.parts.explicit
    }

    pub fn equipment(&self) -> &[EquipmentTypeSpec] {
        &self.parts.equipment
    }

    pub fn contains_tag(&self, tag: &str) -> bool {
        self.parts.tags.contains(tag)
    }

    pub fn has_explicit(&self, surface: &str, tags: &[String]) -> bool {
        self.parts
            .explicit
            .get(&surface.to_lowercase())
            .is_some_and(|ts| ts.iter().any(|t| t == tags))
    }

    /// Output alphabet: every tag followed by every equipment type tag.
    pub fn output_symbols(&self) -> SymbolTable {
        let mut t = SymbolTable::new();
        for tag in &self.parts.tags {
            t.add(tag);
        }
        for e in &self.parts.equipment {
            t.add(&e.tag);
        }
        t
    }

    /// A copy with `surface -> tags` added as an explicit entry; tags not yet
    /// declared are added to the vocabulary.
    pub fn with_expansion(&self, surface: &str, tags: &[String]) -> Result<Lexicon, LexiconError> {
        if tags.is_empty() {
            return Err(LexiconError::EmptyExpansion(surface.to_string()));
        }
        validate_surface(surface)?;
        for t in tags {
            validate_tag(t)?;
        }
        let mut parts = self.parts.clone();
        parts.tags.extend(tags.iter().cloned());
        parts
            .explicit
            .entry(surface.to_lowercase())
            .or_default()
            .push(tags.to_vec());
        Lexicon::new(parts)
    }

    pub fn load(path: &Path) -> Result<Lexicon, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.display().to_string(), e))?;
        Lexicon::from_toml_str(&text).map_err(|e| LoadError::Lexicon(path.display().to_string(), e))
    }

    pub fn from_toml_str(text: &str) -> Result<Lexicon, LexiconError> {
        let file: LexiconFile = toml::from_str(text).map_err(|e| LexiconError::Syntax(e.to_string().trim_end().to_string()))?;
        let line_of = |span: std::ops::Range<usize>| 1 + text[..span.start.min(text.len())].matches('\n').count();
        if file.version.get_ref() != &LEXICON_FILE_VERSION {
            return Err(LexiconError::Version(*file.version.get_ref()).at(line_of(file.version.span())));
        }

        let mut parts = LexiconParts::default();
        for t in &file.tags {
            validate_tag(t.get_ref()).map_err(|e| e.at(line_of(t.span())))?;
            parts.tags.insert(t.get_ref().clone());
        }
        if parts.tags.is_empty() {
            return Err(LexiconError::NoTags);
        }
        let known = |w: &str, line: usize| {
            if parts.tags.contains(w) {
                Ok(())
            } else {
                Err(LexiconError::UnknownTag(w.to_string()).at(line))
            }
        };
        for p in &file.phrases {
            let line = line_of(p.span());
            let words: Vec<String> = p.get_ref().split_whitespace().map(str::to_string).collect();
            if words.len() < 2 {
                return Err(LexiconError::PhraseTooShort(p.get_ref().clone()).at(line));
            }
            for w in &words {
                known(w, line)?;
            }
            parts.phrases.push(words);
        }
        for entry in &file.explicit {
            let line = line_of(entry.span());
            let e = entry.get_ref();
            validate_surface(&e.surface).map_err(|err| err.at(line))?;
            let words: Vec<String> = e.tags.split_whitespace().map(str::to_string).collect();
            if words.is_empty() {
                return Err(LexiconError::EmptyExpansion(e.surface.clone()).at(line));
            }
            for w in &words {
                known(w, line)?;
            }
            parts.explicit.entry(e.surface.to_lowercase()).or_default().push(words);
        }
        for eq in &file.equipment {
            eq.get_ref().validate().map_err(|err| err.at(line_of(eq.span())))?;
            parts.equipment.push(eq.get_ref().clone());
        }
        Lexicon::new(parts)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Lexicon(String, #[source] LexiconError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    version: toml::Spanned<u32>,
    tags: Vec<toml::Spanned<String>>,
    #[serde(default)]
    phrases: Vec<toml::Spanned<String>>,
    #[serde(default)]
    explicit: Vec<toml::Spanned<ExplicitEntry>>,
    #[serde(default)]
    equipment: Vec<toml::Spanned<EquipmentTypeSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitEntry {
    surface: String,
    tags: String,
}
