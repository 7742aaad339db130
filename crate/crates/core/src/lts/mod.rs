//! Labelled transition systems: representation, construction from process
//! terms, restriction and hiding applied at the LTS level, and exchange
//! formats.
//!
//! An [`Lts`] is immutable once built. Transitions are kept both as a flat
//! sorted edge list and as per-state forward and backward adjacency, so
//! equivalence checking and the run-based oracle can walk in either
//! direction without rebuilding anything.

mod aut;
mod build;
mod dot;

pub use aut::{export_aut, import_aut, AutError};
pub use build::{build_lts, build_lts_in, BuildError, BuildLimits};
pub use dot::export_dot;

use std::collections::HashMap;

use crate::syntax::{Action, ActionSet};

/// Index of a state in an [`Lts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(u32);

impl StateId {
    pub fn new(index: usize) -> StateId {
        StateId(u32::try_from(index).expect("state index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index into an [`Lts`]'s label table. Label 0 is always `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(u32);

impl LabelId {
    pub const TAU: LabelId = LabelId(0);

    pub fn new(index: usize) -> LabelId {
        LabelId(u32::try_from(index).expect("label index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_tau(self) -> bool {
        self.0 == 0
    }
}

/// A finite labelled transition system.
///
/// States carry display names (the process terms they stand for, when built
/// from a model). The `live` flag marks states reachable from the initial
/// state; [`restrict_high`] keeps deleted-edge orphans around but clears
/// their flag, and [`pruned`] drops them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    labels: Vec<Action>,
    names: Vec<String>,
    initial: StateId,
    edges: Vec<(StateId, LabelId, StateId)>,
    succ_off: Vec<u32>,
    succ_dat: Vec<(LabelId, StateId)>,
    pred_off: Vec<u32>,
    pred_dat: Vec<(LabelId, StateId)>,
    live: Vec<bool>,
}

impl Lts {
    /// Assembles an LTS from raw parts. `labels[0]` must be `tau`; edges may
    /// arrive unsorted and with duplicates (transitions form a set). Panics
    /// on out-of-range indices, which are programming errors here.
    pub fn from_parts(
        names: Vec<String>,
        initial: StateId,
        labels: Vec<Action>,
        edges: Vec<(StateId, LabelId, StateId)>,
    ) -> Lts {
        Self::with_roots(names, initial, labels, edges, None)
    }

    /// Like [`Lts::from_parts`] but marks states live when reachable from
    /// any of `roots` rather than from `initial` alone. Used by
    /// [`disjoint_union`], where both halves stay live.
    fn with_roots(
        names: Vec<String>,
        initial: StateId,
        labels: Vec<Action>,
        mut edges: Vec<(StateId, LabelId, StateId)>,
        roots: Option<&[StateId]>,
    ) -> Lts {
        let n = names.len();
        assert!(initial.index() < n, "initial state out of range");
        assert_eq!(labels.first(), Some(&Action::Tau), "label 0 must be tau");
        for &(s, l, t) in &edges {
            assert!(s.index() < n && t.index() < n, "edge endpoint out of range");
            assert!(l.index() < labels.len(), "edge label out of range");
        }
        edges.sort_unstable();
        edges.dedup();

        let (succ_off, succ_dat) = adjacency(n, edges.iter().map(|&(s, l, t)| (s, l, t)));
        let (pred_off, pred_dat) = adjacency(n, edges.iter().map(|&(s, l, t)| (t, l, s)));

        let mut lts = Lts {
            labels,
            names,
            initial,
            edges,
            succ_off,
            succ_dat,
            pred_off,
            pred_dat,
            live: vec![false; n],
        };
        match roots {
            Some(rs) => lts.mark_live(rs),
            None => lts.mark_live(&[initial]),
        }
        lts
    }

    fn mark_live(&mut self, roots: &[StateId]) {
        let mut live = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = Vec::new();
        for &r in roots {
            if !live[r.index()] {
                live[r.index()] = true;
                stack.push(r);
            }
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in self.succ(s) {
                if !live[t.index()] {
                    live[t.index()] = true;
                    stack.push(t);
                }
            }
        }
        self.live = live;
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[Action] {
        &self.labels
    }

    pub fn label(&self, l: LabelId) -> &Action {
        &self.labels[l.index()]
    }

    pub fn label_id(&self, a: &Action) -> Option<LabelId> {
        self.labels.iter().position(|x| x == a).map(LabelId::new)
    }

    pub fn edges(&self) -> &[(StateId, LabelId, StateId)] {
        &self.edges
    }

    /// Outgoing transitions of `s`, sorted by (label, target).
    pub fn succ(&self, s: StateId) -> &[(LabelId, StateId)] {
        let i = s.index();
        &self.succ_dat[self.succ_off[i] as usize..self.succ_off[i + 1] as usize]
    }

    /// Incoming transitions of `s` as (label, source), sorted.
    pub fn pred(&self, s: StateId) -> &[(LabelId, StateId)] {
        let i = s.index();
        &self.pred_dat[self.pred_off[i] as usize..self.pred_off[i + 1] as usize]
    }

    pub fn is_live(&self, s: StateId) -> bool {
        self.live[s.index()]
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId::new)
    }

    pub fn live_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&s| self.is_live(s))
    }

    /// Label ids whose action is a visible name in `set`.
    fn label_ids_in(&self, set: &ActionSet) -> Vec<LabelId> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, a)| set.contains_action(a))
            .map(|(i, _)| LabelId::new(i))
            .collect()
    }
}

fn adjacency(
    n: usize,
    items: impl Iterator<Item = (StateId, LabelId, StateId)> + Clone,
) -> (Vec<u32>, Vec<(LabelId, StateId)>) {
    let mut off = vec![0u32; n + 1];
    for (s, _, _) in items.clone() {
        off[s.index() + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut cursor = off.clone();
    let mut dat = vec![(LabelId::TAU, StateId(0)); off[n] as usize];
    for (s, l, t) in items {
        dat[cursor[s.index()] as usize] = (l, t);
        cursor[s.index()] += 1;
    }
    for i in 0..n {
        dat[off[i] as usize..off[i + 1] as usize].sort_unstable();
    }
    (off, dat)
}

/// Deletes every transition whose label is in `high`. States are kept; ones
/// no longer reachable from the initial state lose their live flag.
pub fn restrict_high(l: &Lts, high: &ActionSet) -> Lts {
    let banned = l.label_ids_in(high);
    let edges = l
        .edges
        .iter()
        .filter(|(_, lab, _)| !banned.contains(lab))
        .copied()
        .collect();
    Lts::from_parts(l.names.clone(), l.initial, l.labels.clone(), edges)
}

/// Relabels every transition whose label is in `high` to `tau`. The state
/// set and reachability are unchanged; a relabeled edge that collides with
/// an existing tau edge merges with it.
pub fn hide_high(l: &Lts, high: &ActionSet) -> Lts {
    let hidden = l.label_ids_in(high);
    let edges = l
        .edges
        .iter()
        .map(|&(s, lab, t)| {
            if hidden.contains(&lab) {
                (s, LabelId::TAU, t)
            } else {
                (s, lab, t)
            }
        })
        .collect();
    Lts::from_parts(l.names.clone(), l.initial, l.labels.clone(), edges)
}

/// Forward-transitive closure of `s`, including `s` itself, in ascending
/// state order.
pub fn reachable(l: &Lts, s: StateId) -> Vec<StateId> {
    let mut seen = vec![false; l.num_states()];
    let mut stack = vec![s];
    seen[s.index()] = true;
    while let Some(x) = stack.pop() {
        for &(_, t) in l.succ(x) {
            if !seen[t.index()] {
                seen[t.index()] = true;
                stack.push(t);
            }
        }
    }
    (0..l.num_states())
        .filter(|&i| seen[i])
        .map(StateId::new)
        .collect()
}

/// Places two LTSs side by side with no cross transitions, returning the
/// union and the state injections of each operand. The union's initial state
/// is the image of `a`'s; both injected halves are marked live from their
/// own initial states.
pub fn disjoint_union(a: &Lts, b: &Lts) -> (Lts, Vec<StateId>, Vec<StateId>) {
    let mut labels = a.labels.clone();
    let mut index: HashMap<&Action, LabelId> = a
        .labels
        .iter()
        .enumerate()
        .map(|(i, act)| (act, LabelId::new(i)))
        .collect();
    let b_label_map: Vec<LabelId> = b
        .labels
        .iter()
        .map(|act| {
            *index.entry(act).or_insert_with(|| {
                labels.push(act.clone());
                LabelId::new(labels.len() - 1)
            })
        })
        .collect();

    let offset = a.num_states();
    let left: Vec<StateId> = (0..offset).map(StateId::new).collect();
    let right: Vec<StateId> = (0..b.num_states())
        .map(|i| StateId::new(offset + i))
        .collect();

    let mut names = a.names.clone();
    names.extend(b.names.iter().cloned());
    let mut edges = a.edges.clone();
    edges.extend(
        b.edges
            .iter()
            .map(|&(s, lab, t)| (right[s.index()], b_label_map[lab.index()], right[t.index()])),
    );

    let initial = a.initial;
    let roots = [initial, right[b.initial.index()]];
    let lts = Lts::with_roots(names, initial, labels, edges, Some(&roots));
    (lts, left, right)
}

/// Drops dead states, renumbering the survivors in ascending order. The
/// label table is kept whole so label ids remain comparable with the input.
pub fn pruned(l: &Lts) -> Lts {
    let mut remap: Vec<Option<StateId>> = vec![None; l.num_states()];
    let mut names = Vec::new();
    for s in l.live_states() {
        remap[s.index()] = Some(StateId::new(names.len()));
        names.push(l.names[s.index()].clone());
    }
    let edges = l
        .edges
        .iter()
        .filter_map(|&(s, lab, t)| Some((remap[s.index()]?, lab, remap[t.index()]?)))
        .collect();
    let initial = remap[l.initial.index()].expect("initial state is always live");
    Lts::from_parts(names, initial, l.labels.clone(), edges)
}
