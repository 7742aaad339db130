//! Independent reference implementations for the integration suites.
//!
//! The checkers here are deliberately naive greatest-fixpoint shrinkers
//! over explicit relation matrices, structured nothing like the partition
//! refiners in the library. Agreement between the two is the evidence the
//! suites are after, so nothing from `ninfer_core::equiv` beyond the
//! `Relation` enum is used.
//!
//! Each test target pulls in a different subset of these helpers, so a
//! helper unused by one target is expected.
#![allow(dead_code)]

use ninfer_core::lts::{LabelId, Lts, StateId};
use ninfer_core::Relation;

/// All states reachable from `s` through tau transitions, `s` included.
fn tau_closure(l: &Lts, s: StateId) -> Vec<StateId> {
    let mut seen = vec![false; l.num_states()];
    let mut stack = vec![s];
    seen[s.index()] = true;
    let mut out = Vec::new();
    while let Some(u) = stack.pop() {
        out.push(u);
        for &(lab, v) in l.succ(u) {
            if lab.is_tau() && !seen[v.index()] {
                seen[v.index()] = true;
                stack.push(v);
            }
        }
    }
    out.sort_unstable_by_key(|x| x.index());
    out
}

/// Pairs (t1, t2) with t ⇒tau* t1, t1 -a-> t2. The caller appends the
/// trailing tau* when the game calls for it.
fn weak_step_candidates(l: &Lts, t: StateId, a: LabelId) -> Vec<(StateId, StateId)> {
    let mut out = Vec::new();
    for t1 in tau_closure(l, t) {
        for &(lab, t2) in l.succ(t1) {
            if lab == a {
                out.push((t1, t2));
            }
        }
    }
    out
}

/// Naive bisimilarity matrix: `result[s][t]` iff s and t are related by
/// the greatest `rel`-bisimulation. Starts from the universal relation
/// and deletes pairs until stable.
pub fn naive_bisimilarity(l: &Lts, rel: Relation) -> Vec<Vec<bool>> {
    let n = l.num_states();
    let mut related = vec![vec![true; n]; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !related[s][t] {
                    continue;
                }
                let sid = StateId::new(s);
                let tid = StateId::new(t);
                let ok =
                    simulates(l, sid, tid, rel, &related) && simulates(l, tid, sid, rel, &related);
                if !ok {
                    related[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return related;
        }
    }
}

/// One half of the bisimulation game: every move of `s` has an answer
/// from `t` under the current candidate relation.
fn simulates(l: &Lts, s: StateId, t: StateId, rel: Relation, related: &[Vec<bool>]) -> bool {
    for &(a, s2) in l.succ(s) {
        let answered = match rel {
            Relation::Strong => l
                .succ(t)
                .iter()
                .any(|&(b, t2)| b == a && related[s2.index()][t2.index()]),
            Relation::Weak => {
                if a.is_tau() {
                    // s -tau-> s2 is answered by t ⇒tau* t2.
                    tau_closure(l, t)
                        .into_iter()
                        .any(|t2| related[s2.index()][t2.index()])
                } else {
                    // Answered by t ⇒tau* -a-> ⇒tau* t3.
                    weak_step_candidates(l, t, a).into_iter().any(|(_, t2)| {
                        tau_closure(l, t2)
                            .into_iter()
                            .any(|t3| related[s2.index()][t3.index()])
                    })
                }
            }
            Relation::Branching => {
                // Answered by staying put (tau only) or by t ⇒tau* t1
                // -a-> t2 with the intermediate t1 still related to s.
                let stay = a.is_tau() && related[s2.index()][t.index()];
                stay || {
                    weak_step_candidates(l, t, a).into_iter().any(|(t1, t2)| {
                        related[s.index()][t1.index()] && related[s2.index()][t2.index()]
                    })
                }
            }
        };
        if !answered {
            return false;
        }
    }
    true
}

/// Exact isomorphism test: a label-respecting bijection between state
/// sets mapping initial to initial and edges onto edges. Backtracking
/// over candidate images, pruned by in/out degree per label name.
pub fn isomorphic(a: &Lts, b: &Lts) -> bool {
    if a.num_states() != b.num_states() || a.num_transitions() != b.num_transitions() {
        return false;
    }
    let n = a.num_states();

    // Label ids are private to each LTS; compare through names.
    let sig = |l: &Lts, s: StateId| {
        let mut out: Vec<String> = l
            .succ(s)
            .iter()
            .map(|&(lab, _)| format!(">{}", l.label(lab)))
            .chain(
                l.pred(s)
                    .iter()
                    .map(|&(lab, _)| format!("<{}", l.label(lab))),
            )
            .collect();
        out.sort();
        out
    };
    let sig_a: Vec<_> = (0..n).map(|s| sig(a, StateId::new(s))).collect();
    let sig_b: Vec<_> = (0..n).map(|s| sig(b, StateId::new(s))).collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn edges_consistent(a: &Lts, b: &Lts, s: usize, map: &[usize]) -> bool {
        for &(lab, t) in a.succ(StateId::new(s)) {
            if map[t.index()] != usize::MAX {
                let image_has = b
                    .succ(StateId::new(map[s]))
                    .iter()
                    .any(|&(bl, bt)| bt.index() == map[t.index()] && b.label(bl) == a.label(lab));
                if !image_has {
                    return false;
                }
            }
        }
        for &(lab, p) in a.pred(StateId::new(s)) {
            if map[p.index()] != usize::MAX {
                let image_has = b
                    .pred(StateId::new(map[s]))
                    .iter()
                    .any(|&(bl, bp)| bp.index() == map[p.index()] && b.label(bl) == a.label(lab));
                if !image_has {
                    return false;
                }
            }
        }
        true
    }

    fn assign(
        a: &Lts,
        b: &Lts,
        sig_a: &[Vec<String>],
        sig_b: &[Vec<String>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        s: usize,
    ) -> bool {
        let n = a.num_states();
        if s == n {
            return true;
        }
        for image in 0..n {
            if used[image] || sig_a[s] != sig_b[image] {
                continue;
            }
            if (s == a.initial().index()) != (image == b.initial().index()) {
                continue;
            }
            map[s] = image;
            used[image] = true;
            if edges_consistent(a, b, s, map) && assign(a, b, sig_a, sig_b, map, used, s + 1) {
                return true;
            }
            map[s] = usize::MAX;
            used[image] = false;
        }
        false
    }

    assign(a, b, &sig_a, &sig_b, &mut map, &mut used, 0)
}
