//! Property suites shared by the integration tests and the acceptance run.
//! Each returns `Err` with the minimal failing case.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestRng, TestRunner};

use bastag::bundle::ModelBundle;
use bastag::config::Config;
use bastag::fst::Weight;
use bastag::lattice::ParseResult;
use bastag::lexicon::{EquipmentTypeSpec, Lexicon, LexiconParts};
use bastag::ngram::{char_tokens, NgramModel};
use bastag::slots::SlotClass;

use super::{fixture_bundle, fixture_parser, join_pieces, PIECES};

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn point_name(max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(PIECES), 1..7).prop_map(move |p| join_pieces(&p, max_len))
}

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        9 => (0u32..4000).prop_map(|q| Weight::new(q as f64 * 0.25)),
        1 => Just(Weight::ZERO),
    ]
}

pub fn semiring_laws(cases: u32) -> Result<(), String> {
    run(cases, (weight(), weight(), weight()), |(a, b, c)| {
        prop_assert_eq!(a.plus(b).plus(c), a.plus(b.plus(c)));
        prop_assert_eq!(a.times(b).times(c), a.times(b.times(c)));
        prop_assert_eq!(a.plus(b), b.plus(a));
        prop_assert_eq!(a.times(b), b.times(a));
        prop_assert_eq!(a.plus(Weight::ZERO), a);
        prop_assert_eq!(a.times(Weight::ONE), a);
        prop_assert_eq!(a.times(Weight::ZERO), Weight::ZERO);
        prop_assert_eq!(a.plus(a), a);
        prop_assert_eq!(a.times(b.plus(c)), a.times(b).plus(a.times(c)));
        prop_assert_eq!(b.plus(c).times(a), b.times(a).plus(c.times(a)));
        Ok(())
    })
}

fn check_cover(r: &ParseResult) -> Result<(), TestCaseError> {
    let n = r.input.chars().count();
    let mut at = 0;
    let mut sum = 0.0;
    for c in &r.chunks {
        prop_assert_eq!(c.start, at, "gap or overlap in {:?}", r.input);
        prop_assert!(c.end > c.start);
        at = c.end;
        sum += c.weight.value();
    }
    prop_assert_eq!(at, n);
    prop_assert_eq!(sum, r.total_weight.value());
    Ok(())
}

pub fn cover_exactness(cases: u32) -> Result<(), String> {
    let parser = fixture_parser();
    run(cases, point_name(24), |s| {
        let r = parser.parse(&s).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check_cover(&r)?;
        for alt in parser.k_best(&s, 3).map_err(|e| TestCaseError::fail(e.to_string()))? {
            check_cover(&alt)?;
        }
        Ok(())
    })
}

pub fn case_invariance(cases: u32) -> Result<(), String> {
    let parser = fixture_parser();
    run(cases, point_name(24), |s| {
        let base = parser.parse(&s).unwrap();
        for variant in [s.to_uppercase(), s.to_lowercase()] {
            let v = parser.parse(&variant).unwrap();
            prop_assert_eq!(v.labels(), base.labels(), "{:?} vs {:?}", variant, s);
            prop_assert_eq!(v.total_weight, base.total_weight);
        }
        Ok(())
    })
}

/// Inserting one delimiter at a boundary between two non-delimiter chunks
/// keeps every other chunk's class and tags, and the total weight.
pub fn delimiter_transparency(cases: u32) -> Result<(), String> {
    let parser = fixture_parser();
    let strategy = (point_name(20), any::<prop::sample::Index>(), prop::sample::select(&[' ', '-', '_', '.'][..]));
    run(cases, strategy, |(s, pick, d)| {
        let base = parser.parse(&s).unwrap();
        let boundaries: Vec<usize> = base
            .chunks
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].class != SlotClass::Delimiter && w[1].class != SlotClass::Delimiter)
            .map(|(i, _)| i)
            .collect();
        if boundaries.is_empty() {
            return Ok(());
        }
        let k = boundaries[pick.index(boundaries.len())];
        let at = base.chunks[k].end;
        let chars: Vec<char> = s.chars().collect();
        let inserted: String = chars[..at].iter().chain(std::iter::once(&d)).chain(&chars[at..]).collect();
        let r = parser.parse(&inserted).unwrap();

        let mut expected: Vec<(usize, usize, SlotClass, Vec<String>)> = Vec::new();
        for (i, c) in base.chunks.iter().enumerate() {
            let shift = (i > k) as usize;
            expected.push((c.start + shift, c.end + shift, c.class, c.tags.clone()));
            if i == k {
                expected.push((at, at + 1, SlotClass::Delimiter, Vec::new()));
            }
        }
        prop_assert_eq!(r.labels(), expected, "{:?} -> {:?}", s, inserted);
        prop_assert_eq!(r.total_weight, base.total_weight);
        Ok(())
    })
}

fn tag_word() -> impl Strategy<Value = String> {
    "[a-z]{1,8}"
}

fn random_bundle() -> impl Strategy<Value = ModelBundle> {
    let tags = prop::collection::btree_set(tag_word(), 2..8);
    (tags, 0.01f64..5.0, 0.0f64..100.0, 1usize..16, prop::collection::vec("[A-Za-z0-9_-]{1,10}", 1..6))
        .prop_flat_map(|(tags, k, unk, kbest, names)| {
            let tags: Vec<String> = tags.into_iter().collect();
            let n = tags.len();
            let phrase = prop::collection::vec(0..n, 2..4);
            let corpus = prop::collection::vec(prop::collection::vec(0..n, 1..5), 1..6);
            (
                Just(tags),
                prop::collection::vec(phrase, 0..4),
                corpus,
                Just((k, unk, kbest, names)),
            )
        })
        .prop_map(|(tags, phrases, corpus, (k, unk, kbest, names))| {
            let pick = |ix: &Vec<usize>| ix.iter().map(|&i| tags[i].clone()).collect::<Vec<String>>();
            let lexicon = Lexicon::new(LexiconParts {
                tags: tags.iter().cloned().collect::<BTreeSet<_>>(),
                phrases: phrases.iter().map(pick).collect(),
                equipment: vec![EquipmentTypeSpec::new("Air_Handling_Unit", &["AHU"])],
                ..Default::default()
            })
            .unwrap();
            let config = Config {
                smoothing: k,
                unknown_weight: unk,
                k_best: kbest,
                ..Config::default()
            };
            let words: Vec<Vec<String>> = corpus.iter().map(pick).collect();
            let chars: Vec<Vec<String>> = names.iter().map(|s| char_tokens(s)).collect();
            ModelBundle::new(
                lexicon,
                NgramModel::train(&words, k).unwrap(),
                NgramModel::train(&chars, k).unwrap(),
                config,
            )
        })
}

pub fn bundle_round_trip(cases: u32) -> Result<(), String> {
    run(cases, random_bundle(), |b| {
        let text = b.to_json();
        let back = ModelBundle::from_json(&text).map_err(TestCaseError::fail)?;
        prop_assert_eq!(&back, &b);
        prop_assert_eq!(back.to_json(), text);
        Ok(())
    })
}

pub fn determinism(cases: u32) -> Result<(), String> {
    let parser = fixture_parser();
    let fresh = fixture_bundle().parser().unwrap();
    run(cases, point_name(24), |s| {
        let a = parser.parse(&s).unwrap();
        prop_assert_eq!(&parser.parse(&s).unwrap(), &a);
        prop_assert_eq!(&fresh.parse(&s).unwrap(), &a);
        let k1 = parser.k_best(&s, 4).unwrap();
        prop_assert_eq!(&k1, &fresh.k_best(&s, 4).unwrap());
        prop_assert_eq!(&k1[0], &a);
        Ok(())
    })
}
