#![allow(dead_code)]

pub mod dag;
pub mod oracle;
pub mod props;

use std::path::PathBuf;
use std::sync::OnceLock;

use bastag::bundle::{train_models, ModelBundle};
use bastag::config::Config;
use bastag::eval::{read_labeled, LabeledPoint};
use bastag::parser::Parser;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn train_fixture() -> ModelBundle {
    train_models(
        &fixture("lexicon.toml"),
        &fixture("phrases.txt"),
        &fixture("equipment.txt"),
        Config::default(),
    )
    .expect("fixture models train")
}

pub fn fixture_bundle() -> &'static ModelBundle {
    static B: OnceLock<ModelBundle> = OnceLock::new();
    B.get_or_init(train_fixture)
}

pub fn fixture_parser() -> &'static Parser {
    static P: OnceLock<Parser> = OnceLock::new();
    P.get_or_init(|| fixture_bundle().parser().expect("fixture lexicon compiles"))
}

pub fn regression_points() -> Vec<LabeledPoint> {
    read_labeled(&fixture("regression.jsonl")).expect("regression fixtures load")
}

pub fn oov_points() -> Vec<LabeledPoint> {
    read_labeled(&fixture("oov.jsonl")).expect("oov fixtures load")
}

/// Building blocks for generated point names.
pub const PIECES: &[&str] = &[
    "AHU", "FCU", "PU", "VAV", "01", "2", "G", "L3", "_", "-", " ", ".", "Zn", "T", "Sp", "sup", "Air", "Fan",
    "SAF", "hrs", "Md", "tmp", "chw", "Vlv", "x", "Q", "7", "OA", "D", "Stpt", "RAT", "hhw", "a",
];

pub fn join_pieces(pieces: &[&str], max_len: usize) -> String {
    let s: String = pieces.concat();
    s.chars().take(max_len).collect()
}
