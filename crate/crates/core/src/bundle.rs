//! Versioned model bundle: lexicon, both language models and configuration
//! in one pretty-printed JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abbrev::AbbrevError;
use crate::config::{Config, ConfigError};
use crate::lexicon::{validate_tag, is_delimiter, Lexicon, LexiconError, LoadError};
use crate::ngram::{char_tokens, word_tokens, LmError, NgramModel};
use crate::parser::{ParseError, Parser};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Lexicon {
        path: String,
        #[source]
        source: LexiconError,
    },
    #[error("{path}: {source}")]
    Training {
        path: String,
        #[source]
        source: LmError,
    },
    #[error("{path}: line {line}: {message}")]
    Format { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Bundle { path: String, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compile(#[from] AbbrevError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Validation(String),
}

impl PipelineError {
    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io { .. } => 2,
            _ => 1,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> PipelineError {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<LoadError> for PipelineError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(path, source) => PipelineError::Io { path, source },
            LoadError::Lexicon(path, source) => PipelineError::Lexicon { path, source },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBundle {
    pub format_version: u32,
    pub config: Config,
    pub lexicon: Lexicon,
    pub word_lm: NgramModel,
    pub char_lm: NgramModel,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<u32>,
}

impl ModelBundle {
    pub fn new(lexicon: Lexicon, word_lm: NgramModel, char_lm: NgramModel, config: Config) -> ModelBundle {
        ModelBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            config,
            lexicon,
            word_lm,
            char_lm,
        }
    }

    /// Compiles the lexicon into a ready parser. The bundle's config is used
    /// as is; callers apply environment overrides beforehand.
    pub fn parser(&self) -> Result<Parser, AbbrevError> {
        Parser::new(
            self.lexicon.clone(),
            self.word_lm.clone(),
            self.char_lm.clone(),
            self.config.clone(),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ModelBundle, String> {
        let probe: VersionProbe = serde_json::from_str(text).map_err(|e| e.to_string())?;
        match probe.format_version {
            Some(BUNDLE_FORMAT_VERSION) => {}
            Some(v) => return Err(format!("unsupported bundle format version {v}")),
            None => return Err("missing format_version".into()),
        }
        let bundle: ModelBundle = serde_json::from_str(text).map_err(|e| e.to_string())?;
        bundle.config.validate().map_err(|e| e.to_string())?;
        Ok(bundle)
    }

    pub fn load(path: &Path) -> Result<ModelBundle, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        ModelBundle::from_json(&text).map_err(|message| PipelineError::Bundle {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        std::fs::write(path, self.to_json()).map_err(|e| PipelineError::io(path, e))
    }
}

/// Non-blank lines that are not `#` comments, with 1-based line numbers.
fn corpus_lines(path: &Path) -> Result<Vec<(usize, String)>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

/// Reads a phrase corpus (one space-separated tag sequence per line). Every
/// word must be a well-formed tag.
pub fn read_phrase_corpus(path: &Path) -> Result<Vec<Vec<String>>, PipelineError> {
    let mut out = Vec::new();
    for (line, text) in corpus_lines(path)? {
        let words = word_tokens(&text);
        if let Some(bad) = words.iter().find(|w| validate_tag(w).is_err()) {
            return Err(PipelineError::Format {
                path: path.display().to_string(),
                line,
                message: format!("{bad:?} is not a valid tag"),
            });
        }
        out.push(words);
    }
    Ok(out)
}

/// Reads an equipment-name corpus (one name per line) as character tokens.
pub fn read_equipment_corpus(path: &Path) -> Result<Vec<Vec<String>>, PipelineError> {
    Ok(corpus_lines(path)?.into_iter().map(|(_, l)| char_tokens(&l)).collect())
}

pub fn train_models(
    lexicon_path: &Path,
    phrases_path: &Path,
    equipment_path: &Path,
    config: Config,
) -> Result<ModelBundle, PipelineError> {
    config.validate()?;
    let lexicon = Lexicon::load(lexicon_path)?;
    let phrases = read_phrase_corpus(phrases_path)?;
    let names = read_equipment_corpus(equipment_path)?;
    let training = |path: &Path| {
        let path = path.display().to_string();
        move |source| PipelineError::Training { path, source }
    };
    let word_lm = NgramModel::train(&phrases, config.smoothing).map_err(training(phrases_path))?;
    let char_lm = NgramModel::train(&names, config.smoothing).map_err(training(equipment_path))?;
    let bundle = ModelBundle::new(lexicon, word_lm, char_lm, config);
    bundle.parser()?;
    Ok(bundle)
}

/// Returns a new bundle with `surface -> tags` in the lexicon and the tag
/// sequence appended to the word model's corpus. Adding an entry that is
/// already present returns an identical bundle.
pub fn add_expansion(bundle: &ModelBundle, surface: &str, tags: &[String]) -> Result<ModelBundle, PipelineError> {
    if surface.is_empty() {
        return Err(PipelineError::Validation("surface must not be empty".into()));
    }
    if tags.is_empty() {
        return Err(PipelineError::Validation("expansion needs at least one tag".into()));
    }
    if let Some(t) = tags.iter().find(|t| t.chars().any(is_delimiter)) {
        return Err(PipelineError::Validation(format!("tag {t:?} contains a delimiter")));
    }
    let to_validation = |e: LexiconError| PipelineError::Validation(e.to_string());
    for t in tags {
        validate_tag(t).map_err(to_validation)?;
    }
    if bundle.lexicon.has_explicit(surface, tags) {
        return Ok(bundle.clone());
    }
    let lexicon = bundle.lexicon.with_expansion(surface, tags).map_err(to_validation)?;
    let word_lm = bundle
        .word_lm
        .extended(&[tags.to_vec()])
        .map_err(|e| PipelineError::Validation(e.to_string()))?;
    let next = ModelBundle::new(lexicon, word_lm, bundle.char_lm.clone(), bundle.config.clone());
    next.parser()?;
    Ok(next)
}
