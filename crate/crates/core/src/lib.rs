pub mod abbrev;
pub mod batch;
pub mod bundle;
pub mod config;
pub mod eval;
pub mod fst;
pub mod lattice;
pub mod lexicon;
pub mod ngram;
pub mod parser;
pub mod review;
pub mod slots;
pub mod synth;
