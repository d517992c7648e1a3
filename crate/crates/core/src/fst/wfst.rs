use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc as Shared;

use super::symbols::{Label, SymbolTable, EPSILON};
use super::weight::Weight;
use super::FstError;

pub type StateId = usize;

/// A transition. Either label may be [`EPSILON`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub ilabel: Label,
    pub olabel: Label,
    pub weight: Weight,
    pub next: StateId,
}

impl Arc {
    pub fn new(ilabel: Label, olabel: Label, weight: Weight, next: StateId) -> Self {
        Arc {
            ilabel,
            olabel,
            weight,
            next,
        }
    }
}

/// Immutable weighted transducer over the tropical semiring.
#[derive(Debug, Clone)]
pub struct Wfst {
    isymbols: Shared<SymbolTable>,
    osymbols: Shared<SymbolTable>,
    arcs: Vec<Vec<Arc>>,
    finals: Vec<Option<Weight>>,
    start: StateId,
}

/// Mutable construction handle for a [`Wfst`].
#[derive(Debug, Clone)]
pub struct WfstBuilder {
    isymbols: Shared<SymbolTable>,
    osymbols: Shared<SymbolTable>,
    arcs: Vec<Vec<Arc>>,
    finals: Vec<Option<Weight>>,
    start: Option<StateId>,
}

impl WfstBuilder {
    pub fn new(isymbols: Shared<SymbolTable>, osymbols: Shared<SymbolTable>) -> Self {
        WfstBuilder {
            isymbols,
            osymbols,
            arcs: Vec::new(),
            finals: Vec::new(),
            start: None,
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.arcs.push(Vec::new());
        self.finals.push(None);
        self.arcs.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn set_start(&mut self, state: StateId) {
        self.start = Some(state);
    }

    pub fn set_final(&mut self, state: StateId, weight: Weight) {
        self.finals[state] = Some(weight);
    }

    pub fn add_arc(&mut self, from: StateId, arc: Arc) {
        self.arcs[from].push(arc);
    }

    /// Copies `fragment` into this machine, wiring `from` to the fragment's
    /// start with an epsilon arc and each fragment final state to `to` with an
    /// epsilon arc carrying the final weight. Returns the id that the
    /// fragment's start state received.
    pub fn graft(&mut self, fragment: &Wfst, from: StateId, to: StateId) -> Result<StateId, FstError> {
        if !same_table(&self.isymbols, &fragment.isymbols)
            || !same_table(&self.osymbols, &fragment.osymbols)
        {
            return Err(FstError::SymbolTableMismatch);
        }
        let offset = self.arcs.len();
        for state_arcs in &fragment.arcs {
            self.arcs.push(
                state_arcs
                    .iter()
                    .map(|a| Arc::new(a.ilabel, a.olabel, a.weight, a.next + offset))
                    .collect(),
            );
            self.finals.push(None);
        }
        for (state, fw) in fragment.finals.iter().enumerate() {
            if let Some(fw) = fw {
                self.arcs[state + offset].push(Arc::new(EPSILON, EPSILON, *fw, to));
            }
        }
        let entry = fragment.start + offset;
        self.arcs[from].push(Arc::new(EPSILON, EPSILON, Weight::ONE, entry));
        Ok(entry)
    }

    pub fn build(self) -> Result<Wfst, FstError> {
        let n = self.arcs.len();
        let start = self.start.ok_or(FstError::InvalidState(usize::MAX))?;
        if start >= n {
            return Err(FstError::InvalidState(start));
        }
        for arcs in &self.arcs {
            for arc in arcs {
                if arc.next >= n {
                    return Err(FstError::InvalidState(arc.next));
                }
                if !self.isymbols.contains(arc.ilabel) || !self.osymbols.contains(arc.olabel) {
                    return Err(FstError::UnknownLabel(arc.ilabel.max(arc.olabel)));
                }
            }
        }
        Ok(Wfst {
            isymbols: self.isymbols,
            osymbols: self.osymbols,
            arcs: self.arcs,
            finals: self.finals,
            start,
        })
    }
}

fn same_table(a: &Shared<SymbolTable>, b: &Shared<SymbolTable>) -> bool {
    Shared::ptr_eq(a, b) || a == b
}

/// Distinct output sequences with their best weight, sorted by weight then
/// output labels.
pub type Transductions = Vec<(Vec<Label>, Weight)>;

impl Wfst {
    /// Machine with a single non-final state: accepts nothing.
    pub fn empty(isymbols: Shared<SymbolTable>, osymbols: Shared<SymbolTable>) -> Wfst {
        let mut b = WfstBuilder::new(isymbols, osymbols);
        let s = b.add_state();
        b.set_start(s);
        b.build().expect("empty machine is valid")
    }

    /// Linear chain consuming `input` then emitting `output`, with `weight`
    /// on the first arc (or on the final state when both are empty).
    pub fn linear(
        isymbols: Shared<SymbolTable>,
        osymbols: Shared<SymbolTable>,
        input: &[Label],
        output: &[Label],
        weight: Weight,
    ) -> Result<Wfst, FstError> {
        let mut b = WfstBuilder::new(isymbols, osymbols);
        let mut state = b.add_state();
        b.set_start(state);
        let mut pending = Some(weight);
        let labels = input
            .iter()
            .map(|&i| (i, EPSILON))
            .chain(output.iter().map(|&o| (EPSILON, o)));
        for (ilabel, olabel) in labels {
            let next = b.add_state();
            b.add_arc(state, Arc::new(ilabel, olabel, pending.take().unwrap_or(Weight::ONE), next));
            state = next;
        }
        b.set_final(state, pending.unwrap_or(Weight::ONE));
        b.build()
    }

    pub fn isymbols(&self) -> &Shared<SymbolTable> {
        &self.isymbols
    }

    pub fn osymbols(&self) -> &Shared<SymbolTable> {
        &self.osymbols
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn arcs(&self, state: StateId) -> &[Arc] {
        &self.arcs[state]
    }

    pub fn final_weight(&self, state: StateId) -> Option<Weight> {
        self.finals[state]
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state].is_some()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.arcs.len()
    }

    fn check_compatible(&self, other: &Wfst) -> Result<(), FstError> {
        if same_table(&self.isymbols, &other.isymbols) && same_table(&self.osymbols, &other.osymbols) {
            Ok(())
        } else {
            Err(FstError::SymbolTableMismatch)
        }
    }

    /// Accepts `u·v` for every `u` accepted by `self` and `v` accepted by
    /// `other`; the join is an epsilon arc from each final state of `self`
    /// carrying its final weight.
    pub fn concatenate(&self, other: &Wfst) -> Result<Wfst, FstError> {
        self.check_compatible(other)?;
        let mut b = WfstBuilder::new(self.isymbols.clone(), self.osymbols.clone());
        for _ in 0..self.num_states() + other.num_states() {
            b.add_state();
        }
        let offset = self.num_states();
        for s in self.states() {
            for arc in &self.arcs[s] {
                b.add_arc(s, *arc);
            }
            if let Some(fw) = self.finals[s] {
                b.add_arc(s, Arc::new(EPSILON, EPSILON, fw, other.start + offset));
            }
        }
        for s in other.states() {
            for arc in &other.arcs[s] {
                b.add_arc(s + offset, Arc::new(arc.ilabel, arc.olabel, arc.weight, arc.next + offset));
            }
            if let Some(fw) = other.finals[s] {
                b.set_final(s + offset, fw);
            }
        }
        b.set_start(self.start);
        b.build()
    }

    /// Swaps input and output labels (and symbol tables) on every arc.
    pub fn invert(&self) -> Wfst {
        Wfst {
            isymbols: self.osymbols.clone(),
            osymbols: self.isymbols.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|arcs| arcs.iter().map(|a| Arc::new(a.olabel, a.ilabel, a.weight, a.next)).collect())
                .collect(),
            finals: self.finals.clone(),
            start: self.start,
        }
    }

    /// Accepts the union of both languages via a fresh start state.
    pub fn union(&self, other: &Wfst) -> Result<Wfst, FstError> {
        self.check_compatible(other)?;
        let mut b = WfstBuilder::new(self.isymbols.clone(), self.osymbols.clone());
        let start = b.add_state();
        b.set_start(start);
        for m in [self, other] {
            let offset = b.num_states();
            for _ in m.states() {
                b.add_state();
            }
            for s in m.states() {
                for arc in &m.arcs[s] {
                    b.add_arc(s + offset, Arc::new(arc.ilabel, arc.olabel, arc.weight, arc.next + offset));
                }
                if let Some(fw) = m.finals[s] {
                    b.set_final(s + offset, fw);
                }
            }
            b.add_arc(start, Arc::new(EPSILON, EPSILON, Weight::ONE, m.start + offset));
        }
        b.build()
    }

    /// Every distinct output reachable by an accepting path for `input`, each
    /// with its minimum weight. Labels outside the input table are rejected.
    pub fn transduce(&self, input: &[Label]) -> Result<Transductions, FstError> {
        if let Some(&bad) = input.iter().find(|&&l| l == EPSILON || !self.isymbols.contains(l)) {
            return Err(FstError::RejectedInput(format!("label {bad}")));
        }
        let mut runner = self.runner(DEFAULT_CONFIG_LIMIT)?;
        for &label in input {
            runner.step(label)?;
            if runner.is_dead() {
                break;
            }
        }
        Ok(runner.accepted())
    }

    /// Character-level convenience over [`Wfst::transduce`].
    pub fn transduce_str(&self, input: &str) -> Result<Transductions, FstError> {
        let labels = input
            .chars()
            .map(|c| {
                self.isymbols
                    .find_char(c)
                    .ok_or_else(|| FstError::RejectedInput(c.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.transduce(&labels)
    }

    /// Output labels rendered through the output table, epsilon skipped.
    pub fn output_symbols(&self, labels: &[Label]) -> Vec<String> {
        labels
            .iter()
            .filter(|&&l| l != EPSILON)
            .filter_map(|&l| self.osymbols.symbol(l).map(str::to_string))
            .collect()
    }

    /// Incremental left-to-right application, used for prefix matching.
    pub fn runner(&self, config_limit: usize) -> Result<Runner<'_>, FstError> {
        let mut configs = BTreeMap::new();
        configs.insert((self.start, Vec::new()), Weight::ONE);
        let mut runner = Runner {
            fst: self,
            configs,
            limit: config_limit,
        };
        runner.close()?;
        Ok(runner)
    }

    /// Line-oriented dump: `src\tdst\tilabel\tolabel\tweight` per arc, then
    /// `state\tweight` per final state. The start state is listed first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let order = std::iter::once(self.start).chain(self.states().filter(|&s| s != self.start));
        for s in order.clone() {
            for arc in &self.arcs[s] {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    s,
                    arc.next,
                    self.isymbols.symbol(arc.ilabel).unwrap_or("?"),
                    self.osymbols.symbol(arc.olabel).unwrap_or("?"),
                    arc.weight
                );
            }
        }
        for s in order {
            if let Some(fw) = self.finals[s] {
                let _ = writeln!(out, "{s}\t{fw}");
            }
        }
        out
    }
}

pub const DEFAULT_CONFIG_LIMIT: usize = 1 << 16;

/// Set of live (state, output-so-far) configurations.
#[derive(Debug, Clone)]
pub struct Runner<'a> {
    fst: &'a Wfst,
    configs: BTreeMap<(StateId, Vec<Label>), Weight>,
    limit: usize,
}

impl Runner<'_> {
    fn close(&mut self) -> Result<(), FstError> {
        let mut stack: Vec<(StateId, Vec<Label>)> = self.configs.keys().cloned().collect();
        while let Some(key) = stack.pop() {
            let w = self.configs[&key];
            for arc in &self.fst.arcs[key.0] {
                if arc.ilabel != EPSILON {
                    continue;
                }
                let mut out = key.1.clone();
                if arc.olabel != EPSILON {
                    out.push(arc.olabel);
                }
                let nw = w.times(arc.weight);
                let nk = (arc.next, out);
                if matches!(self.configs.get(&nk), Some(&old) if old <= nw) {
                    continue;
                }
                self.configs.insert(nk.clone(), nw);
                if self.configs.len() > self.limit {
                    return Err(FstError::TooManyConfigurations(self.limit));
                }
                stack.push(nk);
            }
        }
        Ok(())
    }

    /// Consumes one input label.
    pub fn step(&mut self, label: Label) -> Result<(), FstError> {
        let mut next: BTreeMap<(StateId, Vec<Label>), Weight> = BTreeMap::new();
        for ((state, out), w) in &self.configs {
            for arc in &self.fst.arcs[*state] {
                if arc.ilabel != label {
                    continue;
                }
                let mut o = out.clone();
                if arc.olabel != EPSILON {
                    o.push(arc.olabel);
                }
                let nw = w.times(arc.weight);
                let slot = next.entry((arc.next, o)).or_insert(Weight::ZERO);
                *slot = slot.plus(nw);
            }
        }
        if next.len() > self.limit {
            return Err(FstError::TooManyConfigurations(self.limit));
        }
        self.configs = next;
        self.close()
    }

    pub fn is_dead(&self) -> bool {
        self.configs.is_empty()
    }

    /// Outputs accepted at the current position.
    pub fn accepted(&self) -> Transductions {
        let mut best: BTreeMap<Vec<Label>, Weight> = BTreeMap::new();
        for ((state, out), w) in &self.configs {
            if let Some(fw) = self.fst.finals[*state] {
                let slot = best.entry(out.clone()).or_insert(Weight::ZERO);
                *slot = slot.plus(w.times(fw));
            }
        }
        let mut result: Transductions = best.into_iter().collect();
        result.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        result
    }
}
