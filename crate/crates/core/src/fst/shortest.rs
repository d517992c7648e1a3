//! Shortest paths over acyclic machines.
//!
//! Paths are ordered by total weight, then by number of arcs, then by the
//! output label sequence, then by the visited state sequence. Both
//! [`shortest_path`] and [`k_shortest_paths`] use this order, so the first
//! k-best entry is always the shortest path.

use std::cmp::Ordering;

use super::symbols::{Label, EPSILON};
use super::weight::Weight;
use super::wfst::{Arc, StateId, Wfst};
use super::FstError;

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    /// Visited states, `arcs.len() + 1` entries starting at the start state.
    pub states: Vec<StateId>,
    pub arcs: Vec<Arc>,
    pub total: Weight,
    /// Non-epsilon output labels.
    pub output: Vec<Label>,
}

impl Path {
    fn from_arcs(fst: &Wfst, states: Vec<StateId>, arcs: Vec<Arc>) -> Path {
        let mut total = Weight::ONE;
        for a in &arcs {
            total = total.times(a.weight);
        }
        let last = *states.last().expect("path has a state");
        total = total.times(fst.final_weight(last).expect("path ends in a final state"));
        let output = arcs.iter().map(|a| a.olabel).filter(|&l| l != EPSILON).collect();
        Path {
            states,
            arcs,
            total,
            output,
        }
    }

    fn order(&self, other: &Path) -> Ordering {
        self.total
            .cmp(&other.total)
            .then(self.arcs.len().cmp(&other.arcs.len()))
            .then_with(|| self.output.cmp(&other.output))
            .then_with(|| self.states.cmp(&other.states))
    }
}

/// Topological order of the states reachable from the start state.
pub fn topological_order(fst: &Wfst) -> Result<Vec<StateId>, FstError> {
    let n = fst.num_states();
    let mut reachable = vec![false; n];
    let mut stack = vec![fst.start()];
    reachable[fst.start()] = true;
    while let Some(s) = stack.pop() {
        for a in fst.arcs(s) {
            if !reachable[a.next] {
                reachable[a.next] = true;
                stack.push(a.next);
            }
        }
    }
    let mut indegree = vec![0usize; n];
    for s in fst.states().filter(|&s| reachable[s]) {
        for a in fst.arcs(s) {
            indegree[a.next] += 1;
        }
    }
    let mut order = Vec::new();
    let mut ready = vec![fst.start()];
    if indegree[fst.start()] != 0 {
        return Err(FstError::Cycle);
    }
    while let Some(s) = ready.pop() {
        order.push(s);
        for a in fst.arcs(s) {
            indegree[a.next] -= 1;
            if indegree[a.next] == 0 {
                ready.push(a.next);
            }
        }
    }
    if order.len() != reachable.iter().filter(|&&r| r).count() {
        return Err(FstError::Cycle);
    }
    Ok(order)
}

type Cost = (Weight, usize);

fn extend(c: Cost, w: Weight) -> Cost {
    (c.0.times(w), c.1 + 1)
}

/// Minimum-weight accepting path of an acyclic machine.
pub fn shortest_path(fst: &Wfst) -> Result<Path, FstError> {
    let order = topological_order(fst)?;
    let n = fst.num_states();
    let unreached: Cost = (Weight::ZERO, usize::MAX);
    let mut dist = vec![unreached; n];
    dist[fst.start()] = (Weight::ONE, 0);
    for &s in &order {
        if dist[s].0.is_zero() {
            continue;
        }
        for a in fst.arcs(s) {
            let cand = extend(dist[s], a.weight);
            if cand < dist[a.next] {
                dist[a.next] = cand;
            }
        }
    }
    let finished = |s: StateId| -> Option<Cost> {
        let fw = fst.final_weight(s)?;
        if dist[s].0.is_zero() {
            return None;
        }
        let c = (dist[s].0.times(fw), dist[s].1);
        (!c.0.is_zero()).then_some(c)
    };
    let best = order
        .iter()
        .filter_map(|&s| finished(s))
        .min()
        .ok_or(FstError::NoAcceptingPath)?;

    // Among optimal-cost paths (tight arcs only), pick the smallest
    // (output, states) suffix from each state, walking backwards.
    #[derive(Clone)]
    struct Suffix {
        output: Vec<Label>,
        states: Vec<StateId>,
        arc: Option<Arc>,
    }
    let mut suffix: Vec<Option<Suffix>> = vec![None; n];
    for &s in order.iter().rev() {
        if dist[s].0.is_zero() {
            continue;
        }
        let mut chosen: Option<Suffix> = None;
        let mut offer = |cand: Suffix| {
            let better = match &chosen {
                None => true,
                Some(cur) => (&cand.output, &cand.states) < (&cur.output, &cur.states),
            };
            if better {
                chosen = Some(cand);
            }
        };
        if finished(s) == Some(best) {
            offer(Suffix {
                output: Vec::new(),
                states: vec![s],
                arc: None,
            });
        }
        for a in fst.arcs(s) {
            if extend(dist[s], a.weight) != dist[a.next] {
                continue;
            }
            let Some(rest) = &suffix[a.next] else { continue };
            let mut output = Vec::with_capacity(rest.output.len() + 1);
            if a.olabel != EPSILON {
                output.push(a.olabel);
            }
            output.extend_from_slice(&rest.output);
            let mut states = Vec::with_capacity(rest.states.len() + 1);
            states.push(s);
            states.extend_from_slice(&rest.states);
            offer(Suffix {
                output,
                states,
                arc: Some(*a),
            });
        }
        suffix[s] = chosen;
    }

    let mut states = vec![fst.start()];
    let mut arcs = Vec::new();
    let mut s = fst.start();
    while let Some(a) = suffix[s].as_ref().and_then(|x| x.arc) {
        arcs.push(a);
        s = a.next;
        states.push(s);
    }
    Ok(Path::from_arcs(fst, states, arcs))
}

/// Up to `k` distinct accepting paths with the lowest weights, ascending.
pub fn k_shortest_paths(fst: &Wfst, k: usize) -> Result<Vec<Path>, FstError> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let order = topological_order(fst)?;

    #[derive(Clone, Copy)]
    struct Partial {
        cost: Cost,
        back: Option<(StateId, usize, Arc)>,
    }

    // Keeps every entry whose cost does not exceed the k-th best cost, so
    // ties at the cut survive for the final output/state tie-break.
    fn prune(list: &mut Vec<Partial>, k: usize) {
        list.sort_by(|a, b| a.cost.cmp(&b.cost));
        if list.len() > k {
            let cut = list[k - 1].cost;
            list.retain(|p| p.cost <= cut);
        }
    }

    let n = fst.num_states();
    let mut lists: Vec<Vec<Partial>> = vec![Vec::new(); n];
    lists[fst.start()].push(Partial {
        cost: (Weight::ONE, 0),
        back: None,
    });
    for &s in &order {
        prune(&mut lists[s], k);
        let current = std::mem::take(&mut lists[s]);
        for (i, p) in current.iter().enumerate() {
            for a in fst.arcs(s) {
                let cost = extend(p.cost, a.weight);
                if cost.0.is_zero() {
                    continue;
                }
                lists[a.next].push(Partial {
                    cost,
                    back: Some((s, i, *a)),
                });
            }
        }
        lists[s] = current;
    }

    let mut complete: Vec<(Cost, StateId, usize)> = Vec::new();
    for &s in &order {
        if let Some(fw) = fst.final_weight(s) {
            for (i, p) in lists[s].iter().enumerate() {
                let cost = (p.cost.0.times(fw), p.cost.1);
                if !cost.0.is_zero() {
                    complete.push((cost, s, i));
                }
            }
        }
    }
    complete.sort_by(|a, b| a.0.cmp(&b.0));
    if complete.len() > k {
        let cut = complete[k - 1].0;
        complete.retain(|c| c.0 <= cut);
    }

    let mut paths: Vec<Path> = complete
        .into_iter()
        .map(|(_, s, i)| {
            let mut states = vec![s];
            let mut arcs = Vec::new();
            let mut cursor = lists[s][i];
            while let Some((prev, idx, arc)) = cursor.back {
                arcs.push(arc);
                states.push(prev);
                cursor = lists[prev][idx];
            }
            states.reverse();
            arcs.reverse();
            Path::from_arcs(fst, states, arcs)
        })
        .collect();
    paths.sort_by(|a, b| a.order(b));
    paths.truncate(k);
    Ok(paths)
}
