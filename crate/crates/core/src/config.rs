use serde::{Deserialize, Serialize};

use crate::abbrev::DEFAULT_K_BEST;
use crate::ngram::DEFAULT_SMOOTHING;

pub const DEFAULT_UNKNOWN_WEIGHT: f64 = 20.0;
pub const DEFAULT_MAX_SPAN: usize = 64;
pub const DEFAULT_MAX_INPUT_LEN: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Add-k constant for both language models.
    pub smoothing: f64,
    /// Weight of one unknown character.
    pub unknown_weight: f64,
    /// Tagset readings kept per substring.
    pub k_best: usize,
    /// Longest substring tested against the equipment and tagset slots.
    pub max_span: usize,
    pub max_input_len: usize,
    pub synth: SynthConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            smoothing: DEFAULT_SMOOTHING,
            unknown_weight: DEFAULT_UNKNOWN_WEIGHT,
            k_best: DEFAULT_K_BEST,
            max_span: DEFAULT_MAX_SPAN,
            max_input_len: DEFAULT_MAX_INPUT_LEN,
            synth: SynthConfig::default(),
        }
    }
}

/// Relative frequencies used by the synthetic point generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    /// Probability that a multi-word tagset is written as its initialism.
    pub initialism: f64,
    /// Per-word rule weights: identity, truncation, vowel deletion,
    /// truncated vowel deletion, contraction.
    pub word_rules: [f64; 5],
    /// Case convention weights: camelCase, PascalCase, snake_case,
    /// kebab-case, UPPERCASE.
    pub conventions: [f64; 5],
    /// Shortest truncation the generator produces.
    pub min_truncation: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            initialism: 0.15,
            word_rules: [0.3, 0.25, 0.2, 0.15, 0.1],
            conventions: [1.0; 5],
            min_truncation: 3,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{name}={value:?} is not a valid value")]
    Env { name: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

pub const ENV_SMOOTHING: &str = "BASTAG_SMOOTHING";
pub const ENV_UNKNOWN_WEIGHT: &str = "BASTAG_UNKNOWN_WEIGHT";
pub const ENV_K_BEST: &str = "BASTAG_K_BEST";
pub const ENV_MAX_SPAN: &str = "BASTAG_MAX_SPAN";
pub const ENV_MAX_INPUT_LEN: &str = "BASTAG_MAX_INPUT_LEN";

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return Err(ConfigError::Invalid(format!("smoothing must be positive, got {}", self.smoothing)));
        }
        if !(self.unknown_weight >= 0.0 && self.unknown_weight.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "unknown_weight must be non-negative, got {}",
                self.unknown_weight
            )));
        }
        if self.k_best == 0 || self.max_span == 0 || self.max_input_len == 0 {
            return Err(ConfigError::Invalid("k_best, max_span and max_input_len must be positive".into()));
        }
        Ok(())
    }

    /// Applies `BASTAG_*` overrides from the process environment.
    pub fn with_env_overrides(self) -> Result<Config, ConfigError> {
        self.with_overrides(|name| std::env::var(name).ok())
    }

    pub fn with_overrides(mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        fn parse<T: std::str::FromStr>(name: &str, value: String) -> Result<T, ConfigError> {
            value.trim().parse().map_err(|_| ConfigError::Env {
                name: name.to_string(),
                value,
            })
        }
        if let Some(v) = lookup(ENV_SMOOTHING) {
            self.smoothing = parse(ENV_SMOOTHING, v)?;
        }
        if let Some(v) = lookup(ENV_UNKNOWN_WEIGHT) {
            self.unknown_weight = parse(ENV_UNKNOWN_WEIGHT, v)?;
        }
        if let Some(v) = lookup(ENV_K_BEST) {
            self.k_best = parse(ENV_K_BEST, v)?;
        }
        if let Some(v) = lookup(ENV_MAX_SPAN) {
            self.max_span = parse(ENV_MAX_SPAN, v)?;
        }
        if let Some(v) = lookup(ENV_MAX_INPUT_LEN) {
            self.max_input_len = parse(ENV_MAX_INPUT_LEN, v)?;
        }
        self.validate()?;
        Ok(self)
    }
}
