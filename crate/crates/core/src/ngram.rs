//! Count-based bigram language model with add-k (Lidstone) smoothing.
//!
//! `P(t | h) = (count(h, t) + k) / (count(h) + k * |V|)` where `V` is the set
//! of observed tokens plus `<s>`, `</s>` and `<unk>`. Sequences are padded as
//! `<s> t1 .. tn </s>`, so a sequence of `n` tokens has `n + 1` scored
//! transitions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::fst::Weight;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

pub const DEFAULT_SMOOTHING: f64 = 0.5;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LmError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("sequence {0} of the training corpus is empty")]
    EmptyTrainingSequence(usize),
    #[error("token {0:?} is reserved")]
    ReservedToken(String),
    #[error("smoothing parameter must be positive and finite, got {0}")]
    InvalidSmoothing(f64),
    #[error("only order 2 is supported, got {0}")]
    UnsupportedOrder(usize),
    #[error("cannot score an empty sequence")]
    EmptySequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct NgramCounts {
    order: usize,
    smoothing: f64,
    unigrams: BTreeMap<String, u64>,
    bigrams: BTreeMap<String, BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NgramCounts", into = "NgramCounts")]
pub struct NgramModel {
    counts: NgramCounts,
    history_totals: BTreeMap<String, u64>,
    vocab_size: usize,
}

impl TryFrom<NgramCounts> for NgramModel {
    type Error = LmError;

    fn try_from(counts: NgramCounts) -> Result<Self, LmError> {
        if counts.order != 2 {
            return Err(LmError::UnsupportedOrder(counts.order));
        }
        check_smoothing(counts.smoothing)?;
        Ok(NgramModel::from_counts(counts))
    }
}

impl From<NgramModel> for NgramCounts {
    fn from(m: NgramModel) -> Self {
        m.counts
    }
}

fn check_smoothing(k: f64) -> Result<(), LmError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(LmError::InvalidSmoothing(k))
    }
}

impl NgramModel {
    fn from_counts(counts: NgramCounts) -> Self {
        let history_totals = counts
            .bigrams
            .iter()
            .map(|(h, next)| (h.clone(), next.values().sum()))
            .collect();
        let mut vocab_size = counts.unigrams.len();
        for reserved in [BOS, EOS, UNK] {
            if !counts.unigrams.contains_key(reserved) {
                vocab_size += 1;
            }
        }
        NgramModel {
            counts,
            history_totals,
            vocab_size,
        }
    }

    pub fn train<S: AsRef<str>>(corpus: &[Vec<S>], smoothing: f64) -> Result<Self, LmError> {
        check_smoothing(smoothing)?;
        let empty = NgramModel::from_counts(NgramCounts {
            order: 2,
            smoothing,
            unigrams: BTreeMap::new(),
            bigrams: BTreeMap::new(),
        });
        empty.extended(corpus)
    }

    /// A new model whose counts also include `corpus`. Equivalent to
    /// retraining on the union of the original corpus and `corpus`.
    pub fn extended<S: AsRef<str>>(&self, corpus: &[Vec<S>]) -> Result<Self, LmError> {
        if corpus.is_empty() {
            return Err(LmError::EmptyCorpus);
        }
        let mut counts = self.counts.clone();
        for (i, seq) in corpus.iter().enumerate() {
            if seq.is_empty() {
                return Err(LmError::EmptyTrainingSequence(i));
            }
            if let Some(bad) = seq.iter().find(|t| [BOS, EOS, UNK].contains(&t.as_ref())) {
                return Err(LmError::ReservedToken(bad.as_ref().to_string()));
            }
            let padded: Vec<&str> = std::iter::once(BOS)
                .chain(seq.iter().map(AsRef::as_ref))
                .chain(std::iter::once(EOS))
                .collect();
            for t in &padded {
                *counts.unigrams.entry(t.to_string()).or_default() += 1;
            }
            for pair in padded.windows(2) {
                *counts
                    .bigrams
                    .entry(pair[0].to_string())
                    .or_default()
                    .entry(pair[1].to_string())
                    .or_default() += 1;
            }
        }
        Ok(NgramModel::from_counts(counts))
    }

    pub fn order(&self) -> usize {
        self.counts.order
    }

    pub fn smoothing(&self) -> f64 {
        self.counts.smoothing
    }

    /// |V| including the reserved symbols.
    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn vocabulary(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.counts.unigrams.keys().map(String::as_str).collect();
        for reserved in [BOS, EOS, UNK] {
            if !self.counts.unigrams.contains_key(reserved) {
                v.push(reserved);
            }
        }
        v.sort_unstable();
        v
    }

    pub fn contains(&self, token: &str) -> bool {
        self.counts.unigrams.contains_key(token) || token == UNK
    }

    pub fn unigram_count(&self, token: &str) -> u64 {
        self.counts.unigrams.get(token).copied().unwrap_or(0)
    }

    pub fn bigram_count(&self, history: &str, token: &str) -> u64 {
        self.counts
            .bigrams
            .get(history)
            .and_then(|n| n.get(token))
            .copied()
            .unwrap_or(0)
    }

    /// Histories with at least one observed continuation.
    pub fn histories(&self) -> impl Iterator<Item = &str> {
        self.history_totals.keys().map(String::as_str)
    }

    fn map_oov<'a>(&self, token: &'a str) -> &'a str {
        if self.contains(token) {
            token
        } else {
            UNK
        }
    }

    /// Smoothed conditional probability; OOV tokens are scored as `<unk>`.
    pub fn prob(&self, history: &str, token: &str) -> f64 {
        let h = self.map_oov(history);
        let t = self.map_oov(token);
        let k = self.counts.smoothing;
        let total = self.history_totals.get(h).copied().unwrap_or(0) as f64;
        (self.bigram_count(h, t) as f64 + k) / (total + k * self.vocab_size as f64)
    }

    /// `sum ln P(t_i | t_{i-1})` over the padded sequence.
    pub fn sequence_logprob<S: AsRef<str>>(&self, seq: &[S]) -> Result<f64, LmError> {
        if seq.is_empty() {
            return Err(LmError::EmptySequence);
        }
        let mut lp = 0.0;
        let mut prev = BOS;
        for t in seq.iter().map(AsRef::as_ref).chain(std::iter::once(EOS)) {
            lp += self.prob(prev, t).ln();
            prev = t;
        }
        Ok(lp)
    }

    pub fn perplexity<S: AsRef<str>>(&self, seq: &[S]) -> Result<f64, LmError> {
        let lp = self.sequence_logprob(seq)?;
        Ok((-lp / (seq.len() + 1) as f64).exp())
    }

    /// Negative log-likelihood of the sequence, i.e. `N * ln(perplexity)`.
    pub fn slot_weight<S: AsRef<str>>(&self, seq: &[S]) -> Result<Weight, LmError> {
        let lp = self.sequence_logprob(seq)?;
        Ok(Weight::new((0.0 - lp).max(0.0)))
    }
}

/// Tokens for the character model: one token per lowercased character.
pub fn char_tokens(text: &str) -> Vec<String> {
    text.chars().flat_map(char::to_lowercase).map(String::from).collect()
}

/// Tokens for the word model: whitespace-separated, lowercased.
pub fn word_tokens(line: &str) -> Vec<String> {
    line.split_whitespace().map(str::to_lowercase).collect()
}
