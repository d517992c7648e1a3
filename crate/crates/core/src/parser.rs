use crate::abbrev::{compile_tagset_fst, AbbrevError, TagsetTransducer};
use crate::config::Config;
use crate::fst::FstError;
use crate::lattice::{build_lattice, ParseResult};
use crate::lexicon::Lexicon;
use crate::ngram::NgramModel;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParseError {
    #[error("input is empty")]
    EmptyInput,
    #[error("input has {len} characters, the limit is {max}")]
    InputTooLong { len: usize, max: usize },
    #[error("lattice construction failed: {0}")]
    Fst(#[from] FstError),
}

/// Compiled lexicon plus both language models. Immutable and `Sync`, so a
/// single parser can serve concurrent requests.
#[derive(Debug, Clone)]
pub struct Parser {
    lexicon: Lexicon,
    tagset: TagsetTransducer,
    word_lm: NgramModel,
    char_lm: NgramModel,
    config: Config,
}

impl Parser {
    pub fn new(lexicon: Lexicon, word_lm: NgramModel, char_lm: NgramModel, config: Config) -> Result<Parser, AbbrevError> {
        let tagset = compile_tagset_fst(&lexicon)?;
        Ok(Parser {
            lexicon,
            tagset,
            word_lm,
            char_lm,
            config,
        })
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn tagset(&self) -> &TagsetTransducer {
        &self.tagset
    }

    pub fn word_lm(&self) -> &NgramModel {
        &self.word_lm
    }

    pub fn char_lm(&self) -> &NgramModel {
        &self.char_lm
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Same models with different runtime settings (unknown weight, caps).
    pub fn with_config(mut self, config: Config) -> Parser {
        self.config = config;
        self
    }

    pub fn parse(&self, input: &str) -> Result<ParseResult, ParseError> {
        build_lattice(input, self)?.decode()
    }

    pub fn k_best(&self, input: &str, k: usize) -> Result<Vec<ParseResult>, ParseError> {
        build_lattice(input, self)?.k_best(k)
    }
}
