//! Seeded generators for test inputs: LTSs, process models, and
//! equivalent-by-construction model pairs.
//!
//! Everything here is deterministic in the seed, so failing test cases
//! can be replayed. Sizes are kept at desk scale on purpose: the
//! partition refiners and the run-based oracle are compared exhaustively,
//! which is only cheap when state spaces stay tiny.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lts::{LabelId, Lts, StateId};
use crate::syntax::{parse_spec, Action, SpecModel};

/// The fixed RNG for all generators.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label_table(visible: &[&str]) -> Vec<Action> {
    let mut labels = vec![Action::Tau];
    labels.extend(visible.iter().map(|a| Action::visible(*a)));
    labels
}

/// A random acyclic LTS with up to `max_states` states and
/// `max_transitions` transitions over labels {tau, a, b}. Every edge goes
/// from a lower-numbered state to a higher-numbered one, so runs are
/// finite by construction.
pub fn random_acyclic_lts(rng: &mut ChaCha8Rng, max_states: usize, max_transitions: usize) -> Lts {
    assert!(max_states >= 1);
    let n = rng.gen_range(1..=max_states);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let labels = label_table(&["a", "b"]);
    let mut edges = Vec::new();
    if n > 1 {
        let m = rng.gen_range(0..=max_transitions);
        for _ in 0..m {
            let s = rng.gen_range(0..n - 1);
            let t = rng.gen_range(s + 1..n);
            let l = rng.gen_range(0..labels.len());
            edges.push((StateId::new(s), LabelId::new(l), StateId::new(t)));
        }
    }
    Lts::from_parts(names, StateId::new(0), labels, edges)
}

/// A random LTS that may contain cycles and self-loops, over labels
/// {tau, a, b}.
pub fn random_lts(rng: &mut ChaCha8Rng, max_states: usize, max_transitions: usize) -> Lts {
    assert!(max_states >= 1);
    let n = rng.gen_range(1..=max_states);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let labels = label_table(&["a", "b"]);
    let m = rng.gen_range(0..=max_transitions);
    let mut edges = Vec::new();
    for _ in 0..m {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let l = rng.gen_range(0..labels.len());
        edges.push((StateId::new(s), LabelId::new(l), StateId::new(t)));
    }
    Lts::from_parts(names, StateId::new(0), labels, edges)
}

/// Closed process terms, generated structurally and rendered to `.ni`
/// text. Fully parenthesized rendering keeps reparsing unambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
enum GenTerm {
    Nil,
    Prefix(String, Box<GenTerm>),
    Choice(Box<GenTerm>, Box<GenTerm>),
    Parallel(Box<GenTerm>, Box<GenTerm>, BTreeSet<String>),
    Restrict(Box<GenTerm>, BTreeSet<String>),
    Hide(Box<GenTerm>, BTreeSet<String>),
}

impl GenTerm {
    fn render(&self) -> String {
        match self {
            GenTerm::Nil => "0".to_string(),
            GenTerm::Prefix(a, p) => format!("{a} . ({})", p.render()),
            GenTerm::Choice(l, r) => format!("({} + {})", l.render(), r.render()),
            GenTerm::Parallel(l, r, set) => {
                let actions: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
                format!("({} |[{}]| {})", l.render(), actions.join(", "), r.render())
            }
            GenTerm::Restrict(p, set) => {
                let actions: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
                format!("({} \\ {{{}}})", p.render(), actions.join(", "))
            }
            GenTerm::Hide(p, set) => {
                let actions: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
                format!("({} / {{{}}})", p.render(), actions.join(", "))
            }
        }
    }
}

/// Action pools for term generation: low names, high names, and tau.
struct Pools {
    low: Vec<&'static str>,
    high: Vec<&'static str>,
}

impl Pools {
    fn new(max_high: usize) -> Pools {
        let all_high = ["h1", "h2"];
        Pools {
            low: vec!["l1", "l2"],
            high: all_high[..max_high.min(2)].to_vec(),
        }
    }

    fn any_action(&self, rng: &mut ChaCha8Rng) -> String {
        // Tau shows up often enough to exercise the silent machinery.
        let roll = rng.gen_range(0..6);
        if roll == 0 {
            "tau".to_string()
        } else if roll <= 4 || self.high.is_empty() {
            self.low.choose(rng).unwrap().to_string()
        } else {
            self.high.choose(rng).unwrap().to_string()
        }
    }

    fn action_subset(&self, rng: &mut ChaCha8Rng) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for a in self.low.iter().chain(self.high.iter()) {
            if rng.gen_bool(0.35) {
                set.insert(a.to_string());
            }
        }
        set
    }
}

/// A random closed term with at most `ops` operators. Constants are not
/// generated, so the result is guarded and finite-state by construction.
fn gen_term(rng: &mut ChaCha8Rng, pools: &Pools, ops: usize) -> GenTerm {
    if ops == 0 {
        return GenTerm::Nil;
    }
    // Prefix and choice dominate; the wrapping operators appear but do
    // not overwhelm the state spaces.
    let pick = rng.gen_range(0..10);
    match pick {
        0..=4 => GenTerm::Prefix(
            pools.any_action(rng),
            Box::new(gen_term(rng, pools, ops - 1)),
        ),
        5..=7 => {
            let left_budget = rng.gen_range(0..ops);
            GenTerm::Choice(
                Box::new(gen_term(rng, pools, left_budget)),
                Box::new(gen_term(rng, pools, ops - 1 - left_budget)),
            )
        }
        8 => {
            let left_budget = rng.gen_range(0..ops);
            GenTerm::Parallel(
                Box::new(gen_term(rng, pools, left_budget)),
                Box::new(gen_term(rng, pools, ops - 1 - left_budget)),
                pools.action_subset(rng),
            )
        }
        _ => {
            let set = pools.action_subset(rng);
            let body = Box::new(gen_term(rng, pools, ops - 1));
            if rng.gen_bool(0.5) {
                GenTerm::Restrict(body, set)
            } else {
                GenTerm::Hide(body, set)
            }
        }
    }
}

fn model_text(high: &[&str], defs: &[(&str, &GenTerm)]) -> String {
    let mut text = String::new();
    if !high.is_empty() {
        text.push_str(&format!("high {};\n", high.join(", ")));
    }
    for (name, term) in defs {
        text.push_str(&format!("{name} := {};\n", term.render()));
    }
    text
}

/// A random guarded model defining `P`, with at most `max_ops` operators
/// and `max_high` distinct high actions (the pool is {h1, h2}).
pub fn random_model(rng: &mut ChaCha8Rng, max_ops: usize, max_high: usize) -> SpecModel {
    let pools = Pools::new(max_high);
    let ops = rng.gen_range(1..=max_ops.max(1));
    let term = gen_term(rng, &pools, ops);
    let text = model_text(&["h1", "h2"][..max_high.min(2)], &[("P", &term)]);
    parse_spec(&text).expect("generated model parses")
}

/// Rewrites that preserve branching bisimilarity, applied at a random
/// position: stretching a prefix with an inner tau, duplicating a choice
/// operand, and swapping commutative operands.
fn rewrite_once(rng: &mut ChaCha8Rng, term: &GenTerm) -> GenTerm {
    // Collect a path to a random node by walking with random descent.
    fn walk(rng: &mut ChaCha8Rng, t: &GenTerm, budget: usize) -> GenTerm {
        if budget == 0 {
            return apply(rng, t);
        }
        match t {
            GenTerm::Nil => apply(rng, t),
            GenTerm::Prefix(a, p) => GenTerm::Prefix(a.clone(), Box::new(walk(rng, p, budget - 1))),
            GenTerm::Choice(l, r) => {
                if rng.gen_bool(0.5) {
                    GenTerm::Choice(Box::new(walk(rng, l, budget - 1)), r.clone())
                } else {
                    GenTerm::Choice(l.clone(), Box::new(walk(rng, r, budget - 1)))
                }
            }
            GenTerm::Parallel(l, r, set) => {
                if rng.gen_bool(0.5) {
                    GenTerm::Parallel(Box::new(walk(rng, l, budget - 1)), r.clone(), set.clone())
                } else {
                    GenTerm::Parallel(l.clone(), Box::new(walk(rng, r, budget - 1)), set.clone())
                }
            }
            GenTerm::Restrict(p, set) => {
                GenTerm::Restrict(Box::new(walk(rng, p, budget - 1)), set.clone())
            }
            GenTerm::Hide(p, set) => GenTerm::Hide(Box::new(walk(rng, p, budget - 1)), set.clone()),
        }
    }

    fn apply(rng: &mut ChaCha8Rng, t: &GenTerm) -> GenTerm {
        match t {
            // a . x  becomes  a . tau . x; sound because a tau directly
            // under a prefix is invisible even to branching bisimilarity.
            GenTerm::Prefix(a, p) if rng.gen_bool(0.6) => GenTerm::Prefix(
                a.clone(),
                Box::new(GenTerm::Prefix("tau".to_string(), p.clone())),
            ),
            // x + y  becomes  (x + y) + y; duplicating an existing
            // alternative adds nothing observable.
            GenTerm::Choice(l, r) => {
                if rng.gen_bool(0.5) {
                    GenTerm::Choice(Box::new(t.clone()), r.clone())
                } else {
                    GenTerm::Choice(r.clone(), l.clone())
                }
            }
            GenTerm::Parallel(l, r, set) => GenTerm::Parallel(r.clone(), l.clone(), set.clone()),
            other => other.clone(),
        }
    }

    let budget = rng.gen_range(0..3);
    walk(rng, term, budget)
}

/// A model defining `P1` and `P2` with `P1` branching bisimilar to `P2`
/// by construction: `P2` is `P1` after a few equivalence-preserving
/// rewrites. `max_high` may be 0 for pure low/tau pairs.
pub fn random_branching_pair(rng: &mut ChaCha8Rng, max_ops: usize, max_high: usize) -> SpecModel {
    let pools = Pools::new(max_high);
    let ops = rng.gen_range(1..=max_ops.max(1));
    let p1 = gen_term(rng, &pools, ops);
    let mut p2 = p1.clone();
    for _ in 0..rng.gen_range(1..=3) {
        p2 = rewrite_once(rng, &p2);
    }
    let text = model_text(
        &["h1", "h2"][..max_high.min(2)],
        &[("P1", &p1), ("P2", &p2)],
    );
    parse_spec(&text).expect("generated pair parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{equivalent, Relation};
    use crate::lts::{build_lts, BuildLimits};

    #[test]
    fn acyclic_generator_respects_bounds_and_order() {
        let mut r = rng(7);
        for _ in 0..50 {
            let l = random_acyclic_lts(&mut r, 8, 12);
            assert!(l.num_states() <= 8);
            assert!(l.num_transitions() <= 12);
            for &(s, _, t) in l.edges() {
                assert!(s.index() < t.index(), "edge must increase");
            }
        }
    }

    #[test]
    fn generators_are_deterministic_in_the_seed() {
        let a = random_lts(&mut rng(42), 10, 20);
        let b = random_lts(&mut rng(42), 10, 20);
        assert_eq!(a, b);
        let ma = random_model(&mut rng(42), 6, 2);
        let mb = random_model(&mut rng(42), 6, 2);
        assert_eq!(
            ma.render(ma.def("P").unwrap()),
            mb.render(mb.def("P").unwrap())
        );
    }

    #[test]
    fn random_models_build_finite_ltss() {
        let mut r = rng(3);
        let limits = BuildLimits::default();
        for _ in 0..100 {
            let m = random_model(&mut r, 6, 2);
            let (arena, root) = m.parse_root("P").unwrap();
            let l = crate::lts::build_lts_in(arena, &|n| m.def(n), root, &limits).unwrap();
            assert!(l.num_states() >= 1);
        }
    }

    #[test]
    fn branching_pairs_are_branching_equivalent() {
        let mut r = rng(11);
        let limits = BuildLimits::default();
        for _ in 0..60 {
            let m = random_branching_pair(&mut r, 5, 1);
            let a = build_lts(&m, m.def("P1").unwrap(), &limits).unwrap();
            let b = build_lts(&m, m.def("P2").unwrap(), &limits).unwrap();
            assert!(
                equivalent(&a, a.initial(), &b, b.initial(), Relation::Branching),
                "rewrite broke equivalence: P1 = {}, P2 = {}",
                m.render(m.def("P1").unwrap()),
                m.render(m.def("P2").unwrap())
            );
        }
    }
}
