//! Brute-force back-and-forth bisimilarity on acyclic LTSs.
//!
//! A run is a state paired with the path taken to reach it; runs move
//! forward by appending one transition and backward by removing the last
//! one. Two states are back-and-forth bisimilar when their empty runs are
//! related by a relation on runs that transfers both directions. The strong
//! variant matches single steps exactly; the weak variant matches a tau
//! step by a (possibly empty) tau path and a visible step by a tau* a tau*
//! path, again in both directions.
//!
//! On acyclic LTSs run sets are finite, so the relation can be computed as
//! a greatest fixpoint over all run pairs. This is deliberately naive: the
//! value of this module is that it shares nothing with the partition
//! engines it cross-checks. The strong variant agrees with strong
//! bisimilarity; the weak variant agrees with branching bisimilarity, whose
//! sensitivity to when a choice is made is exactly what backward moves
//! detect.

use std::collections::HashMap;

use crate::lts::{Lts, StateId};
use crate::syntax::Action;

/// Default cap on the total number of runs enumerated across both inputs.
pub const DEFAULT_ORACLE_BOUND: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfMode {
    Strong,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BfError {
    /// Runs of a cyclic LTS form an infinite set; the oracle does not
    /// decide those. Cyclic inputs are handled by the partition engines.
    #[error("back-and-forth oracle requires acyclic input")]
    CyclicInput,
    #[error("back-and-forth oracle gave up after enumerating {runs} runs")]
    OracleBoundExceeded { runs: usize },
}

/// A state together with the path executed to reach it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub origin: StateId,
    pub steps: Vec<(StateId, Action, StateId)>,
}

impl Run {
    /// The state this run currently sits in.
    pub fn last(&self) -> StateId {
        self.steps.last().map_or(self.origin, |s| s.2)
    }
}

/// All runs from `from`, in breadth-first order starting with the empty
/// run. Fails on cyclic input or when more than `bound` runs exist.
pub fn enumerate_runs(l: &Lts, from: StateId, bound: usize) -> Result<Vec<Run>, BfError> {
    if !is_acyclic(l) {
        return Err(BfError::CyclicInput);
    }
    let mut runs = vec![Run {
        origin: from,
        steps: Vec::new(),
    }];
    let mut i = 0;
    while i < runs.len() {
        let here = runs[i].last();
        for &(lab, t) in l.succ(here) {
            if runs.len() >= bound {
                return Err(BfError::OracleBoundExceeded { runs: runs.len() });
            }
            let mut steps = runs[i].steps.clone();
            steps.push((here, l.label(lab).clone(), t));
            runs.push(Run {
                origin: from,
                steps,
            });
        }
        i += 1;
    }
    Ok(runs)
}

/// Decides back-and-forth bisimilarity of `sa` in `a` and `sb` in `b` by
/// the greatest fixpoint over run pairs. `bound` caps the total run count
/// over both inputs; [`DEFAULT_ORACLE_BOUND`] is a sensible default.
pub fn bf_bisimilar_oracle(
    a: &Lts,
    sa: StateId,
    b: &Lts,
    sb: StateId,
    mode: BfMode,
    bound: usize,
) -> Result<bool, BfError> {
    if !is_acyclic(a) || !is_acyclic(b) {
        return Err(BfError::CyclicInput);
    }

    // Shared label space: index 0 is tau on both sides.
    let mut alphabet: Vec<&Action> = vec![&Action::Tau];
    let ua = unify_labels(a, &mut alphabet);
    let ub = unify_labels(b, &mut alphabet);

    let side_a = Side::enumerate(a, sa, &ua, 0, bound)?;
    let side_b = Side::enumerate(b, sb, &ub, side_a.runs.len(), bound)?;

    let na = side_a.runs.len();
    let nb = side_b.runs.len();
    let mut rel = vec![true; na * nb];

    loop {
        let mut changed = false;
        for x in 0..na {
            for y in 0..nb {
                if rel[x * nb + y] && !pair_ok(&side_a, x, &side_b, y, mode, &rel, nb) {
                    rel[x * nb + y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(rel[0])
}

fn unify_labels<'a>(l: &'a Lts, alphabet: &mut Vec<&'a Action>) -> Vec<usize> {
    l.labels()
        .iter()
        .map(|act| match alphabet.iter().position(|x| *x == act) {
            Some(i) => i,
            None => {
                alphabet.push(act);
                alphabet.len() - 1
            }
        })
        .collect()
}

/// One input's run universe with the move structure the transfer clauses
/// consult. Labels are unified alphabet indices; 0 is tau.
struct Side {
    runs: Vec<RunNode>,
    /// Forward single steps per run.
    children: Vec<Vec<(usize, usize)>>,
    /// Runs reachable by extending with zero or more tau steps (self
    /// included).
    tau_ext: Vec<Vec<usize>>,
    /// Runs reachable by extending with tau* a tau*, per visible label.
    vis_ext: Vec<HashMap<usize, Vec<usize>>>,
    /// Prefixes whose suffix up to here is all tau (self included).
    tau_pref: Vec<Vec<usize>>,
    /// Prefixes whose suffix up to here reads tau* a tau*, per visible label.
    vis_pref: Vec<HashMap<usize, Vec<usize>>>,
}

struct RunNode {
    /// Strip-last-step pointer: the run this one extends, with the label
    /// of the stripped step. None for the empty run.
    parent: Option<(usize, usize)>,
    last: StateId,
}

impl Side {
    fn enumerate(
        l: &Lts,
        from: StateId,
        ulabel: &[usize],
        already: usize,
        bound: usize,
    ) -> Result<Side, BfError> {
        let mut runs = vec![RunNode {
            parent: None,
            last: from,
        }];
        let mut children: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut i = 0;
        while i < runs.len() {
            let here = runs[i].last;
            let mut kids = Vec::new();
            for &(lab, t) in l.succ(here) {
                if already + runs.len() >= bound {
                    return Err(BfError::OracleBoundExceeded {
                        runs: already + runs.len(),
                    });
                }
                runs.push(RunNode {
                    parent: Some((i, ulabel[lab.index()])),
                    last: t,
                });
                kids.push((ulabel[lab.index()], runs.len() - 1));
            }
            children.push(kids);
            i += 1;
        }

        let n = runs.len();
        let mut tau_ext: Vec<Vec<usize>> = vec![Vec::new(); n];
        // Children have larger indices than parents, so computing closures
        // from the back makes every child's set ready when needed.
        for r in (0..n).rev() {
            let mut ext = vec![r];
            for &(a, c) in &children[r] {
                if a == 0 {
                    ext.extend_from_slice(&tau_ext[c]);
                }
            }
            ext.sort_unstable();
            ext.dedup();
            tau_ext[r] = ext;
        }

        let mut vis_ext: Vec<HashMap<usize, Vec<usize>>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
            for &mid in &tau_ext[r] {
                for &(a, c) in &children[mid] {
                    if a != 0 {
                        by_label
                            .entry(a)
                            .or_default()
                            .extend_from_slice(&tau_ext[c]);
                    }
                }
            }
            for v in by_label.values_mut() {
                v.sort_unstable();
                v.dedup();
            }
            vis_ext.push(by_label);
        }

        let mut tau_pref: Vec<Vec<usize>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut pref = vec![r];
            let mut cur = r;
            while let Some((p, a)) = runs[cur].parent {
                if a != 0 {
                    break;
                }
                pref.push(p);
                cur = p;
            }
            tau_pref.push(pref);
        }

        let mut vis_pref: Vec<HashMap<usize, Vec<usize>>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
            for &p in &tau_pref[r] {
                if let Some((q, a)) = runs[p].parent {
                    if a != 0 {
                        by_label
                            .entry(a)
                            .or_default()
                            .extend_from_slice(&tau_pref[q]);
                    }
                }
            }
            for v in by_label.values_mut() {
                v.sort_unstable();
                v.dedup();
            }
            vis_pref.push(by_label);
        }

        Ok(Side {
            runs,
            children,
            tau_ext,
            vis_ext,
            tau_pref,
            vis_pref,
        })
    }
}

fn pair_ok(a: &Side, x: usize, b: &Side, y: usize, mode: BfMode, rel: &[bool], nb: usize) -> bool {
    let related = |x2: usize, y2: usize| rel[x2 * nb + y2];
    match mode {
        BfMode::Strong => {
            let fwd = a.children[x].iter().all(|&(lab, x2)| {
                b.children[y]
                    .iter()
                    .any(|&(lb, y2)| lb == lab && related(x2, y2))
            }) && b.children[y].iter().all(|&(lab, y2)| {
                a.children[x]
                    .iter()
                    .any(|&(la, x2)| la == lab && related(x2, y2))
            });
            let bwd = match (a.runs[x].parent, b.runs[y].parent) {
                (None, None) => true,
                (Some((px, la)), Some((py, lb))) => la == lb && related(px, py),
                _ => false,
            };
            fwd && bwd
        }
        BfMode::Weak => {
            let fwd_x = a.children[x].iter().all(|&(lab, x2)| {
                candidates(b, y, lab, Dir::Forward)
                    .iter()
                    .any(|&y2| related(x2, y2))
            });
            let fwd_y = b.children[y].iter().all(|&(lab, y2)| {
                candidates(a, x, lab, Dir::Forward)
                    .iter()
                    .any(|&x2| related(x2, y2))
            });
            let bwd_x = match a.runs[x].parent {
                None => true,
                Some((px, lab)) => candidates(b, y, lab, Dir::Backward)
                    .iter()
                    .any(|&y2| related(px, y2)),
            };
            let bwd_y = match b.runs[y].parent {
                None => true,
                Some((py, lab)) => candidates(a, x, lab, Dir::Backward)
                    .iter()
                    .any(|&x2| related(x2, py)),
            };
            fwd_x && fwd_y && bwd_x && bwd_y
        }
    }
}

enum Dir {
    Forward,
    Backward,
}

const NO_RUNS: &[usize] = &[];

fn candidates(side: &Side, r: usize, label: usize, dir: Dir) -> &[usize] {
    match (dir, label) {
        (Dir::Forward, 0) => &side.tau_ext[r],
        (Dir::Forward, a) => side.vis_ext[r].get(&a).map_or(NO_RUNS, |v| v),
        (Dir::Backward, 0) => &side.tau_pref[r],
        (Dir::Backward, a) => side.vis_pref[r].get(&a).map_or(NO_RUNS, |v| v),
    }
}

fn is_acyclic(l: &Lts) -> bool {
    // Iterative three-color DFS over every state.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = l.num_states();
    let mut color = vec![WHITE; n];
    for root in 0..n {
        if color[root] != WHITE {
            continue;
        }
        // Stack of (state, next successor position).
        let mut stack = vec![(root, 0usize)];
        color[root] = GRAY;
        while let Some(&mut (s, ref mut pos)) = stack.last_mut() {
            let succ = l.succ(StateId::new(s));
            if *pos < succ.len() {
                let t = succ[*pos].1.index();
                *pos += 1;
                match color[t] {
                    GRAY => return false,
                    WHITE => {
                        color[t] = GRAY;
                        stack.push((t, 0));
                    }
                    _ => {}
                }
            } else {
                color[s] = BLACK;
                stack.pop();
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{build_lts_in, BuildLimits};
    use crate::syntax::parse_spec;

    fn build(src: &str, root: &str) -> Lts {
        let model = parse_spec(src).unwrap();
        let (arena, id) = model.parse_root(root).unwrap();
        build_lts_in(arena, &|n| model.def(n), id, &BuildLimits::default()).unwrap()
    }

    fn oracle(left: &str, right: &str, mode: BfMode) -> Result<bool, BfError> {
        let defs = format!("L := {left}; R := {right};");
        let a = build(&defs, "L");
        let b = build(&defs, "R");
        bf_bisimilar_oracle(&a, a.initial(), &b, b.initial(), mode, DEFAULT_ORACLE_BOUND)
    }

    #[test]
    fn run_enumeration_counts() {
        let chain = build("P := a . b . 0;", "P");
        assert_eq!(
            enumerate_runs(&chain, chain.initial(), 100).unwrap().len(),
            3
        );
        let diamond = build("P := a . 0 |[]| b . 0;", "P");
        let runs = enumerate_runs(&diamond, diamond.initial(), 100).unwrap();
        // Empty, a, b, ab, ba: the two full interleavings stay distinct
        // runs even though they end in the same state.
        assert_eq!(runs.len(), 5);
        assert_eq!(runs[0].steps.len(), 0);
        assert_eq!(runs[0].last(), diamond.initial());
    }

    #[test]
    fn cyclic_input_is_refused() {
        let l = build("P := a . P;", "P");
        assert_eq!(
            enumerate_runs(&l, l.initial(), 100).unwrap_err(),
            BfError::CyclicInput
        );
        assert_eq!(
            bf_bisimilar_oracle(&l, l.initial(), &l, l.initial(), BfMode::Weak, 100).unwrap_err(),
            BfError::CyclicInput
        );
    }

    #[test]
    fn bound_is_respected() {
        let l = build("P := a . 0 |[]| b . 0;", "P");
        let err =
            bf_bisimilar_oracle(&l, l.initial(), &l, l.initial(), BfMode::Strong, 7).unwrap_err();
        assert!(matches!(err, BfError::OracleBoundExceeded { runs: 7 }));
    }

    #[test]
    fn identity_holds_in_both_modes() {
        for mode in [BfMode::Strong, BfMode::Weak] {
            assert_eq!(
                oracle(
                    "tau . a . 0 + b . (c . 0 + tau . 0)",
                    "tau . a . 0 + b . (c . 0 + tau . 0)",
                    mode
                ),
                Ok(true)
            );
        }
    }

    #[test]
    fn strong_mode_tells_apart_distributed_choice() {
        let l = "a . (l1 . 0 + l2 . 0)";
        let r = "a . l1 . 0 + a . l2 . 0";
        assert_eq!(oracle(l, r, BfMode::Strong), Ok(false));
        assert_eq!(oracle(l, r, BfMode::Weak), Ok(false));
    }

    #[test]
    fn weak_mode_absorbs_inert_tau() {
        assert_eq!(
            oracle("a . tau . l . 0", "a . l . 0", BfMode::Weak),
            Ok(true)
        );
        assert_eq!(
            oracle("a . tau . l . 0", "a . l . 0", BfMode::Strong),
            Ok(false)
        );
    }

    #[test]
    fn backward_moves_reject_the_weakly_equivalent_pair() {
        // These two are weakly bisimilar, yet the weak back-and-forth game
        // is lost: after the right side's tau the left can undo moves the
        // right cannot mirror. This is the pair that separates the oracle
        // from plain weak bisimilarity and aligns it with branching.
        let l = "tau . a . 0 + a . 0 + b . 0";
        let r = "tau . a . 0 + b . 0";
        assert_eq!(oracle(l, r, BfMode::Weak), Ok(false));
        assert_eq!(oracle(l, r, BfMode::Strong), Ok(false));
    }
}
