//! Worklist construction of the LTS of a process term.
//!
//! Successor computation implements one SOS rule per operator: action
//! prefix fires its action; choice passes both operands' moves through
//! unchanged (the choice context is discarded); parallel interleaves moves
//! outside the synchronization set and pairs up equal labels inside it;
//! restriction drops moves in its set; hiding renames moves in its set to
//! tau; a constant borrows the moves of its body.
//!
//! State identity is the term itself, with constants kept folded: the
//! successor of `a . Auth` is the state `Auth`, not its unfolding. This is
//! what keeps recursive systems finite.

use std::collections::{HashMap, VecDeque};

use super::{LabelId, Lts, StateId};
use crate::syntax::{render_term, Action, SpecModel, Term, TermArena, TermId};

/// Exploration bounds for [`build_lts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildLimits {
    pub max_states: usize,
    pub max_transitions: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_states: 100_000,
            max_transitions: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    /// The exploration hit a limit. The counts report how far it got; a
    /// partial LTS is never returned because verdicts over one would be
    /// unsound.
    #[error("state space limit exceeded ({states} states, {transitions} transitions explored)")]
    StateSpaceExceeded { states: usize, transitions: usize },
    /// Constant unfolding looped without passing an action prefix.
    #[error("unguarded recursion through constant {constant}")]
    UnguardedRecursion { constant: String },
}

/// Builds the LTS of `root`, a term of `model`'s arena.
pub fn build_lts(model: &SpecModel, root: TermId, limits: &BuildLimits) -> Result<Lts, BuildError> {
    build_lts_in(model.arena().clone(), &|n| model.def(n), root, limits)
}

/// Builds the LTS of `root` inside an owned arena, resolving constant bodies
/// through `def`. Serves callers that extended a model's arena with new
/// terms (inline roots, attacker compositions).
pub fn build_lts_in(
    mut arena: TermArena,
    def: &dyn Fn(&str) -> Option<TermId>,
    root: TermId,
    limits: &BuildLimits,
) -> Result<Lts, BuildError> {
    let mut state_of: HashMap<TermId, StateId> = HashMap::new();
    let mut names = vec![render_term(&arena, root)];
    let mut labels = vec![Action::Tau];
    let mut label_of: HashMap<Action, LabelId> = HashMap::new();
    label_of.insert(Action::Tau, LabelId::TAU);
    let mut edges: Vec<(StateId, LabelId, StateId)> = Vec::new();

    state_of.insert(root, StateId::new(0));
    let mut queue = VecDeque::from([root]);

    while let Some(term) = queue.pop_front() {
        let src = state_of[&term];
        let mut out = Vec::new();
        moves(&mut arena, def, term, &mut Vec::new(), &mut out)?;
        for (action, succ_term) in out {
            let dst = match state_of.get(&succ_term) {
                Some(&d) => d,
                None => {
                    if state_of.len() >= limits.max_states {
                        return Err(BuildError::StateSpaceExceeded {
                            states: state_of.len(),
                            transitions: edges.len(),
                        });
                    }
                    let d = StateId::new(names.len());
                    names.push(render_term(&arena, succ_term));
                    state_of.insert(succ_term, d);
                    queue.push_back(succ_term);
                    d
                }
            };
            let lab = *label_of.entry(action).or_insert_with_key(|a| {
                labels.push(a.clone());
                LabelId::new(labels.len() - 1)
            });
            edges.push((src, lab, dst));
            if edges.len() > limits.max_transitions {
                return Err(BuildError::StateSpaceExceeded {
                    states: state_of.len(),
                    transitions: edges.len(),
                });
            }
        }
    }

    Ok(Lts::from_parts(names, StateId::new(0), labels, edges))
}

/// Collects the transitions of `term` in derivation order (left operand
/// rules before right, interleaving before synchronization). `visiting`
/// holds the constants currently being unfolded; meeting one again means
/// the unfolding cannot make progress.
fn moves(
    arena: &mut TermArena,
    def: &dyn Fn(&str) -> Option<TermId>,
    term: TermId,
    visiting: &mut Vec<String>,
    out: &mut Vec<(Action, TermId)>,
) -> Result<(), BuildError> {
    match arena.get(term).clone() {
        Term::Nil => {}
        Term::Prefix(a, cont) => out.push((a, cont)),
        Term::Choice(l, r) => {
            moves(arena, def, l, visiting, out)?;
            moves(arena, def, r, visiting, out)?;
        }
        Term::Parallel(l, r, set) => {
            let mut lm = Vec::new();
            moves(arena, def, l, visiting, &mut lm)?;
            let mut rm = Vec::new();
            moves(arena, def, r, visiting, &mut rm)?;
            for (a, l2) in &lm {
                if !set.contains_action(a) {
                    let t = arena.add(Term::Parallel(*l2, r, set.clone()));
                    out.push((a.clone(), t));
                }
            }
            for (a, r2) in &rm {
                if !set.contains_action(a) {
                    let t = arena.add(Term::Parallel(l, *r2, set.clone()));
                    out.push((a.clone(), t));
                }
            }
            for (a, l2) in &lm {
                if set.contains_action(a) {
                    for (b, r2) in &rm {
                        if b == a {
                            let t = arena.add(Term::Parallel(*l2, *r2, set.clone()));
                            out.push((a.clone(), t));
                        }
                    }
                }
            }
        }
        Term::Restrict(body, set) => {
            let mut bm = Vec::new();
            moves(arena, def, body, visiting, &mut bm)?;
            for (a, b2) in bm {
                if !set.contains_action(&a) {
                    let t = arena.add(Term::Restrict(b2, set.clone()));
                    out.push((a, t));
                }
            }
        }
        Term::Hide(body, set) => {
            let mut bm = Vec::new();
            moves(arena, def, body, visiting, &mut bm)?;
            for (a, b2) in bm {
                let t = arena.add(Term::Hide(b2, set.clone()));
                let label = if set.contains_action(&a) {
                    Action::Tau
                } else {
                    a
                };
                out.push((label, t));
            }
        }
        Term::Const(name) => {
            if visiting.iter().any(|v| v == &name) {
                return Err(BuildError::UnguardedRecursion { constant: name });
            }
            let body = def(&name).expect("parser rejects undefined constants");
            visiting.push(name);
            moves(arena, def, body, visiting, out)?;
            visiting.pop();
        }
    }
    Ok(())
}
