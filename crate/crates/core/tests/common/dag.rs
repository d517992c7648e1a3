//! Seeded random acyclic transducers and brute-force path enumeration.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bastag::fst::{Arc as Transition, SymbolTable, Weight, Wfst, WfstBuilder};

/// Up to 12 states; arcs only go from lower to higher state ids; weights
/// are multiples of 0.25 so every sum is exact.
pub fn random_dag(seed: u64) -> Wfst {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let syms = Arc::new(SymbolTable::from_chars("abc".chars()));
    let mut b = WfstBuilder::new(syms.clone(), syms);
    let n = rng.gen_range(1..=12);
    for _ in 0..n {
        b.add_state();
    }
    b.set_start(0);
    for s in 0..n {
        if s + 1 < n {
            for _ in 0..rng.gen_range(0..=3) {
                let next = rng.gen_range(s + 1..n);
                let il = rng.gen_range(0..=3);
                let ol = rng.gen_range(0..=3);
                let w = Weight::new(rng.gen_range(0..40) as f64 * 0.25);
                b.add_arc(s, Transition::new(il, ol, w, next));
            }
        }
        if rng.gen_bool(0.3) || s + 1 == n {
            b.set_final(s, Weight::new(rng.gen_range(0..8) as f64 * 0.25));
        }
    }
    b.build().unwrap()
}

/// Minimum over every start-to-final path of arc weights plus final weight,
/// by exhaustive depth-first enumeration. `None` if nothing is accepted.
pub fn brute_force_min(fst: &Wfst) -> Option<f64> {
    fn walk(fst: &Wfst, s: usize, acc: f64, best: &mut Option<f64>) {
        if let Some(fw) = fst.final_weight(s) {
            let t = acc + fw.value();
            *best = Some(best.map_or(t, |b: f64| b.min(t)));
        }
        for a in fst.arcs(s) {
            walk(fst, a.next, acc + a.weight.value(), best);
        }
    }
    let mut best = None;
    walk(fst, fst.start(), 0.0, &mut best);
    best
}

pub fn count_paths(fst: &Wfst) -> usize {
    fn walk(fst: &Wfst, s: usize) -> usize {
        fst.final_weight(s).is_some() as usize + fst.arcs(s).iter().map(|a| walk(fst, a.next)).sum::<usize>()
    }
    walk(fst, fst.start())
}
