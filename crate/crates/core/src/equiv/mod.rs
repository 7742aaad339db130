//! Bisimilarity checking by partition refinement.
//!
//! One refinement engine serves all three relations. Strong bisimilarity
//! splits blocks on (label, successor-block) signatures directly. Weak
//! bisimilarity is strong bisimilarity on the saturated LTS, whose
//! transitions are the tau-closed observations. Branching bisimilarity
//! splits on signatures that ignore block-internal tau moves but let them
//! carry their target's options backwards along the block.
//!
//! The [`bf`] submodule holds the independent back-and-forth oracle used to
//! cross-check the branching engine on acyclic inputs.

mod bf;

pub use bf::{bf_bisimilar_oracle, enumerate_runs, BfError, BfMode, Run, DEFAULT_ORACLE_BOUND};

use std::collections::{BTreeSet, HashMap};

use crate::lts::{disjoint_union, LabelId, Lts, StateId};

/// The three behavioural equivalences decided here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Strong,
    Weak,
    Branching,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Strong => "strong",
            Relation::Weak => "weak",
            Relation::Branching => "branching",
        })
    }
}

/// A stable partition of an LTS's states. Block ids are assigned in order
/// of each block's smallest state, so partitions are deterministic and
/// comparable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    relation: Relation,
    block_of: Vec<u32>,
    blocks: Vec<Vec<StateId>>,
}

impl Partition {
    fn from_block_of(relation: Relation, raw: Vec<u32>) -> Partition {
        let mut renumber: HashMap<u32, u32> = HashMap::new();
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        let mut block_of = vec![0u32; raw.len()];
        for (i, &old) in raw.iter().enumerate() {
            let id = *renumber.entry(old).or_insert_with(|| {
                blocks.push(Vec::new());
                (blocks.len() - 1) as u32
            });
            block_of[i] = id;
            blocks[id as usize].push(StateId::new(i));
        }
        Partition {
            relation,
            block_of,
            blocks,
        }
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s.index()] as usize
    }

    /// Blocks in ascending order of smallest member; members ascend within
    /// each block.
    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn same_block(&self, a: StateId, b: StateId) -> bool {
        self.block_of[a.index()] == self.block_of[b.index()]
    }
}

/// Coarsest strong bisimulation partition, by iterated signature splitting.
pub fn partition_strong(l: &Lts) -> Partition {
    Partition::from_block_of(Relation::Strong, refine_strong(l))
}

fn refine_strong(l: &Lts) -> Vec<u32> {
    let n = l.num_states();
    let mut block_of = vec![0u32; n];
    let mut num_blocks = 1usize;
    loop {
        let mut ids: HashMap<(u32, BTreeSet<(LabelId, u32)>), u32> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let sig: BTreeSet<(LabelId, u32)> = l
                .succ(StateId::new(s))
                .iter()
                .map(|&(a, t)| (a, block_of[t.index()]))
                .collect();
            let fresh = ids.len() as u32;
            next.push(*ids.entry((block_of[s], sig)).or_insert(fresh));
        }
        let count = ids.len();
        block_of = next;
        if count == num_blocks {
            return block_of;
        }
        num_blocks = count;
    }
}

/// Weak-closure of an LTS: tau edges become the reflexive-transitive tau
/// closure (every state gains a tau self-loop) and each visible label `a`
/// connects all pairs related by tau* a tau*. States, names, and the label
/// table are unchanged.
pub fn saturate(l: &Lts) -> Lts {
    let n = l.num_states();
    let closure: Vec<Vec<StateId>> = (0..n).map(|s| tau_closure(l, StateId::new(s))).collect();

    let mut edges: Vec<(StateId, LabelId, StateId)> = Vec::new();
    for (s, reach) in closure.iter().enumerate() {
        for &t in reach {
            edges.push((StateId::new(s), LabelId::TAU, t));
        }
    }
    for (s, reach) in closure.iter().enumerate() {
        for &mid in reach {
            for &(a, v) in l.succ(mid) {
                if !a.is_tau() {
                    for &t in &closure[v.index()] {
                        edges.push((StateId::new(s), a, t));
                    }
                }
            }
        }
    }
    Lts::from_parts(l.names().to_vec(), l.initial(), l.labels().to_vec(), edges)
}

fn tau_closure(l: &Lts, from: StateId) -> Vec<StateId> {
    let mut seen = vec![false; l.num_states()];
    seen[from.index()] = true;
    let mut stack = vec![from];
    while let Some(s) = stack.pop() {
        for &(a, t) in l.succ(s) {
            if a.is_tau() && !seen[t.index()] {
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

/// Coarsest weak bisimulation partition: strong refinement over the
/// saturated LTS, read back over the original states.
pub fn partition_weak(l: &Lts) -> Partition {
    Partition::from_block_of(Relation::Weak, refine_strong(&saturate(l)))
}

/// A state's refinement signature: the (label, target block) moves that
/// are not inert under the current partition.
type MoveSig = BTreeSet<(LabelId, u32)>;

/// Coarsest branching bisimulation partition (divergence-blind).
///
/// Each round builds per-state signatures of non-inert moves, where a move
/// is inert when it is a tau into the state's own current block. Inert
/// moves instead propagate the target's signature back to the source, so a
/// state answers for everything it can silently commit to. Rounds repeat
/// until no block splits.
pub fn partition_branching(l: &Lts) -> Partition {
    let n = l.num_states();
    let mut block_of = vec![0u32; n];
    let mut num_blocks = 1usize;
    loop {
        let mut sig: Vec<MoveSig> = (0..n)
            .map(|s| {
                l.succ(StateId::new(s))
                    .iter()
                    .filter(|&&(a, t)| !(a.is_tau() && block_of[t.index()] == block_of[s]))
                    .map(|&(a, t)| (a, block_of[t.index()]))
                    .collect()
            })
            .collect();

        let inert: Vec<(usize, usize)> = l
            .edges()
            .iter()
            .filter(|&&(s, a, t)| {
                a.is_tau() && s != t && block_of[s.index()] == block_of[t.index()]
            })
            .map(|&(s, _, t)| (s.index(), t.index()))
            .collect();
        loop {
            let mut changed = false;
            for &(s, t) in &inert {
                let missing: Vec<_> = sig[t].difference(&sig[s]).cloned().collect();
                if !missing.is_empty() {
                    sig[s].extend(missing);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut ids: HashMap<(u32, &MoveSig), u32> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let fresh = ids.len() as u32;
            next.push(*ids.entry((block_of[s], &sig[s])).or_insert(fresh));
        }
        let count = ids.len();
        drop(ids);
        block_of = next;
        if count == num_blocks {
            return Partition::from_block_of(Relation::Branching, block_of);
        }
        num_blocks = count;
    }
}

/// Partition for the chosen relation.
pub fn partition(l: &Lts, rel: Relation) -> Partition {
    match rel {
        Relation::Strong => partition_strong(l),
        Relation::Weak => partition_weak(l),
        Relation::Branching => partition_branching(l),
    }
}

/// Whether state `sa` of `a` and state `sb` of `b` are related: they share
/// a block in the partition of the disjoint union.
pub fn equivalent(a: &Lts, sa: StateId, b: &Lts, sb: StateId, rel: Relation) -> bool {
    let (u, left, right) = disjoint_union(a, b);
    partition(&u, rel).same_block(left[sa.index()], right[sb.index()])
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

    fn agree(left: &str, right: &str, rel: Relation) -> bool {
        let defs = format!("L := {left}; R := {right};");
        let a = build(&defs, "L");
        let b = build(&defs, "R");
        equivalent(&a, a.initial(), &b, b.initial(), rel)
    }

    #[test]
    fn strong_tells_apart_distributed_choice() {
        let l = "a . (l1 . 0 + l2 . 0)";
        let r = "a . l1 . 0 + a . l2 . 0";
        assert!(!agree(l, r, Relation::Strong));
        assert!(!agree(l, r, Relation::Weak));
        assert!(!agree(l, r, Relation::Branching));
    }

    #[test]
    fn every_relation_is_reflexive_on_a_sample() {
        let src = "P := tau . a . P + b . (c . 0 + tau . 0);";
        let a = build(src, "P");
        for rel in [Relation::Strong, Relation::Weak, Relation::Branching] {
            assert!(equivalent(&a, a.initial(), &a, a.initial(), rel));
        }
    }

    #[test]
    fn strong_does_not_abstract_tau() {
        assert!(!agree("a . tau . 0", "a . 0", Relation::Strong));
        assert!(agree("a . tau . 0", "a . 0", Relation::Weak));
        assert!(agree("a . tau . 0", "a . 0", Relation::Branching));
    }

    #[test]
    fn the_classic_weak_but_not_branching_pair() {
        // Left offers a both immediately and after a tau that forgets b;
        // right reaches a only through such a tau.
        let l = "tau . a . 0 + a . 0 + b . 0";
        let r = "tau . a . 0 + b . 0";
        assert!(agree(l, r, Relation::Weak));
        assert!(!agree(l, r, Relation::Branching));
        assert!(!agree(l, r, Relation::Strong));
    }

    #[test]
    fn choice_with_tau_guard_is_weakly_transparent() {
        assert!(agree("l . 0", "l . 0 + tau . l . 0", Relation::Weak));
        assert!(agree("l . 0", "l . 0 + tau . l . 0", Relation::Branching));
    }

    #[test]
    fn saturate_composes_observations() {
        let l = build("P := tau . a . 0;", "P");
        let s = saturate(&l);
        // init -a-> both middle (nothing) and final: the tau prefix folds in.
        let init = s.initial();
        let a = s.label_id(&crate::syntax::Action::visible("a")).unwrap();
        assert!(s.succ(init).iter().any(|&(lab, _)| lab == a));
        // Every state gains a tau self-loop.
        for st in s.states() {
            assert!(s.succ(st).iter().any(|&(lab, t)| lab.is_tau() && t == st));
        }
    }

    #[test]
    fn saturate_of_tau_free_lts_only_adds_self_loops() {
        let l = build("P := a . b . 0;", "P");
        let s = saturate(&l);
        assert_eq!(s.num_transitions(), l.num_transitions() + l.num_states());
    }

    #[test]
    fn weak_partition_is_strong_over_saturation() {
        let l = build("P := tau . (a . 0 + tau . b . 0) + c . tau . 0;", "P");
        let direct = partition_weak(&l);
        let via = partition_strong(&saturate(&l));
        assert_eq!(direct.blocks(), via.blocks());
    }

    #[test]
    fn partitions_refine_along_the_relation_chain() {
        let l = build(
            "P := tau . a . 0 + a . 0 + b . 0 + tau . (tau . b . 0 + a . tau . 0);",
            "P",
        );
        let strong = partition_strong(&l);
        let branching = partition_branching(&l);
        let weak = partition_weak(&l);
        for a in l.states() {
            for b in l.states() {
                if strong.same_block(a, b) {
                    assert!(branching.same_block(a, b), "strong refines branching");
                }
                if branching.same_block(a, b) {
                    assert!(weak.same_block(a, b), "branching refines weak");
                }
            }
        }
    }

    #[test]
    fn branching_propagates_through_tau_cycles() {
        // Two states on a tau cycle, both able to do a: one block with the
        // post-a state separate, and the cycle states are branching
        // bisimilar to a single tau-less a-state.
        let cyclic = build("P := tau . Q + a . 0; Q := tau . P + a . 0;", "P");
        let single = build("P := a . 0;", "P");
        assert!(equivalent(
            &cyclic,
            cyclic.initial(),
            &single,
            single.initial(),
            Relation::Branching
        ));
    }

    #[test]
    fn block_ids_are_ordered_by_smallest_member() {
        let l = build("P := a . 0 + b . 0;", "P");
        let p = partition_strong(&l);
        assert_eq!(p.block_of(l.initial()), 0);
        let mut prev = None;
        for block in p.blocks() {
            let smallest = block[0];
            if let Some(q) = prev {
                assert!(smallest > q);
            }
            prev = Some(smallest);
        }
    }
}
