//! Replays every expectation frozen in the corpus manifest: property
//! verdicts with their pinned witnesses, and equivalence queries across
//! all five relations.

mod support;

use ninfer_core::equiv::{bf_bisimilar_oracle, BfMode, DEFAULT_ORACLE_BOUND};
use ninfer_core::equivalent;
use ninfer_core::fixtures::{load_corpus, QueryRelation};
use ninfer_core::lts::{build_lts_in, BuildLimits, Lts};
use ninfer_core::security::{check_property, NdcBounds};
use ninfer_core::syntax::SpecModel;

/// Builds the LTS of the process named `name`, rooted at the constant
/// node itself rather than its unfolded body.
fn build_named(model: &SpecModel, name: &str, limits: &BuildLimits) -> Lts {
    let (arena, root) = model.parse_root(name).unwrap();
    build_lts_in(arena, &|n| model.def(n), root, limits).unwrap()
}

#[test]
fn every_property_expectation_reproduces() {
    let limits = BuildLimits::default();
    let bounds = NdcBounds::default();
    let mut checked = 0usize;
    for fixture in load_corpus().unwrap() {
        let model = fixture.model();
        for exp in &fixture.properties {
            let verdict = check_property(&model, &exp.process, exp.property, &bounds, &limits)
                .unwrap_or_else(|e| {
                    panic!("{}: {} on {}: {e}", fixture.name, exp.property, exp.process)
                });
            assert_eq!(
                verdict.outcome,
                exp.expect,
                "{}: {} on {} expected {}, got {} ({})",
                fixture.name,
                exp.property,
                exp.process,
                exp.expect,
                verdict.outcome,
                verdict
                    .evidence
                    .as_ref()
                    .map(|e| e.describe())
                    .unwrap_or_default()
            );
            if let Some(witness) = &exp.witness {
                let evidence = verdict.evidence.as_ref().unwrap_or_else(|| {
                    panic!(
                        "{}: {} on {} failed without evidence",
                        fixture.name, exp.property, exp.process
                    )
                });
                assert!(
                    witness.matches(evidence),
                    "{}: {} on {} wrong witness: {}",
                    fixture.name,
                    exp.property,
                    exp.process,
                    evidence.describe()
                );
            }
            checked += 1;
        }
    }
    assert!(checked >= 100, "manifest should pin a broad verdict table");
}

#[test]
fn every_equivalence_expectation_reproduces() {
    let limits = BuildLimits::default();
    for fixture in load_corpus().unwrap() {
        let model = fixture.model();
        for exp in &fixture.equivalences {
            let a = build_named(&model, &exp.left, &limits);
            let b = build_named(&model, &exp.right, &limits);
            let got = match exp.relation.partition_relation() {
                Some(rel) => equivalent(&a, a.initial(), &b, b.initial(), rel),
                None => {
                    let mode = match exp.relation {
                        QueryRelation::StrongBf => BfMode::Strong,
                        _ => BfMode::Weak,
                    };
                    bf_bisimilar_oracle(
                        &a,
                        a.initial(),
                        &b,
                        b.initial(),
                        mode,
                        DEFAULT_ORACLE_BOUND,
                    )
                    .unwrap()
                }
            };
            assert_eq!(
                got, exp.equivalent,
                "{}: {} vs {} under {:?}",
                fixture.name, exp.left, exp.right, exp.relation
            );
        }
    }
}

/// The corpus is also the cross-check bed for the naive reference
/// checkers: on every fixture LTS, the partition refiners and the naive
/// matrix shrinkers agree on every state pair under all three relations.
#[test]
fn partitions_agree_with_naive_oracles_on_corpus() {
    use ninfer_core::equiv::partition;
    use ninfer_core::Relation;

    let limits = BuildLimits::default();
    for fixture in load_corpus().unwrap() {
        let model = fixture.model();
        let names: Vec<String> = model.defs().map(|(n, _)| n.to_string()).collect();
        for name in names {
            let l = build_named(&model, &name, &limits);
            if l.num_states() > 16 {
                continue;
            }
            for rel in [Relation::Strong, Relation::Weak, Relation::Branching] {
                let p = partition(&l, rel);
                let naive = support::naive_bisimilarity(&l, rel);
                for s in l.states() {
                    for t in l.states() {
                        assert_eq!(
                            p.same_block(s, t),
                            naive[s.index()][t.index()],
                            "{}: {} {:?} disagree on ({}, {})",
                            fixture.name,
                            name,
                            rel,
                            l.name(s),
                            l.name(t)
                        );
                    }
                }
            }
        }
    }
}
