//! Corpus loading.
//!
//! The corpus is a set of `.ni` files plus `manifest.json`, both living
//! in the crate's `corpus/` directory. The manifest freezes the expected
//! verdict for every property and equivalence query the fixtures answer,
//! so the test suites (and the CLI end-to-end tests) replay it verbatim.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::equiv::Relation;
use crate::security::{Evidence, Outcome, PropertyId};
use crate::syntax::{parse_spec, ActionSet, SpecModel};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest is not valid JSON: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error("fixture {name}: unknown property name {property:?}")]
    BadProperty { name: String, property: String },
    #[error("fixture {name}: unknown expected outcome {expect:?}")]
    BadOutcome { name: String, expect: String },
}

/// Which equivalence a manifest query runs: the three partition-based
/// relations or the two run-based ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryRelation {
    Strong,
    Weak,
    Branching,
    StrongBf,
    WeakBf,
}

impl QueryRelation {
    /// The partition relation behind this query, if it has one.
    pub fn partition_relation(self) -> Option<Relation> {
        match self {
            QueryRelation::Strong => Some(Relation::Strong),
            QueryRelation::Weak => Some(Relation::Weak),
            QueryRelation::Branching => Some(Relation::Branching),
            QueryRelation::StrongBf | QueryRelation::WeakBf => None,
        }
    }
}

/// Expected witness shape for a failing property, mirrored from
/// [`Evidence`] minus the shapes that never appear in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExpectedWitness {
    InsecureState {
        state: String,
    },
    HighTransition {
        source: String,
        action: String,
        target: String,
    },
    Attacker {
        attacker: String,
        #[serde(rename = "sync-set")]
        sync_set: Vec<String>,
    },
}

impl ExpectedWitness {
    /// Whether `evidence` is exactly this witness.
    pub fn matches(&self, evidence: &Evidence) -> bool {
        match (self, evidence) {
            (ExpectedWitness::InsecureState { state }, Evidence::InsecureState { state: s }) => {
                state == s
            }
            (
                ExpectedWitness::HighTransition {
                    source,
                    action,
                    target,
                },
                Evidence::HighTransition {
                    source: s,
                    action: a,
                    target: t,
                },
            ) => source == s && action == a && target == t,
            (
                ExpectedWitness::Attacker { attacker, sync_set },
                Evidence::Attacker {
                    attacker: a,
                    sync_set: l,
                },
            ) => {
                let expected: ActionSet = sync_set.iter().cloned().collect();
                attacker == a && &expected == l
            }
            _ => false,
        }
    }
}

/// One frozen property expectation.
#[derive(Debug, Clone)]
pub struct PropertyExpectation {
    /// Process to check; defaults to the fixture's process.
    pub process: String,
    pub property: PropertyId,
    pub expect: Outcome,
    /// When present, the failing verdict must carry exactly this witness.
    pub witness: Option<ExpectedWitness>,
}

/// One frozen equivalence expectation between two defined processes.
#[derive(Debug, Clone)]
pub struct EquivExpectation {
    pub left: String,
    pub right: String,
    pub relation: QueryRelation,
    pub equivalent: bool,
}

pub struct Fixture {
    pub name: String,
    /// Absolute path of the `.ni` file, for end-to-end tests.
    pub path: PathBuf,
    /// The `.ni` source text.
    pub source: String,
    /// Default process for property expectations.
    pub process: Option<String>,
    /// What the fixture demonstrates.
    pub note: String,
    pub properties: Vec<PropertyExpectation>,
    pub equivalences: Vec<EquivExpectation>,
}

impl Fixture {
    /// Parses the fixture's source. The corpus is trusted input; a parse
    /// failure here means the corpus itself is corrupted.
    pub fn model(&self) -> SpecModel {
        parse_spec(&self.source)
            .unwrap_or_else(|e| panic!("corpus fixture {} does not parse: {e}", self.name))
    }
}

#[derive(Deserialize)]
struct RawManifest {
    fixtures: Vec<RawFixture>,
}

#[derive(Deserialize)]
struct RawFixture {
    name: String,
    file: String,
    #[serde(default)]
    process: Option<String>,
    #[serde(default)]
    note: String,
    #[serde(default)]
    properties: Vec<RawProperty>,
    #[serde(default)]
    equivalences: Vec<RawEquiv>,
}

#[derive(Deserialize)]
struct RawProperty {
    #[serde(default)]
    process: Option<String>,
    property: String,
    expect: String,
    #[serde(default)]
    witness: Option<ExpectedWitness>,
}

#[derive(Deserialize)]
struct RawEquiv {
    left: String,
    right: String,
    relation: QueryRelation,
    equivalent: bool,
}

/// The crate-local corpus directory.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Loads every fixture listed in the corpus manifest.
pub fn load_corpus() -> Result<Vec<Fixture>, CorpusError> {
    load_corpus_from(&corpus_dir())
}

/// Loads a corpus from an explicit directory holding `manifest.json`.
pub fn load_corpus_from(dir: &Path) -> Result<Vec<Fixture>, CorpusError> {
    let manifest_path = dir.join("manifest.json");
    let text = fs::read_to_string(&manifest_path).map_err(|source| CorpusError::Io {
        path: manifest_path,
        source,
    })?;
    let raw: RawManifest = serde_json::from_str(&text)?;

    let mut fixtures = Vec::with_capacity(raw.fixtures.len());
    for rf in raw.fixtures {
        let path = dir.join(&rf.file);
        let source = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;

        let mut properties = Vec::with_capacity(rf.properties.len());
        for rp in rf.properties {
            let property: PropertyId =
                rp.property.parse().map_err(|_| CorpusError::BadProperty {
                    name: rf.name.clone(),
                    property: rp.property.clone(),
                })?;
            let expect = match rp.expect.as_str() {
                "Holds" => Outcome::Holds,
                "Fails" => Outcome::Fails,
                "Unknown" => Outcome::Unknown,
                other => {
                    return Err(CorpusError::BadOutcome {
                        name: rf.name.clone(),
                        expect: other.to_string(),
                    })
                }
            };
            let process = rp
                .process
                .or_else(|| rf.process.clone())
                .unwrap_or_else(|| {
                    panic!(
                        "fixture {}: property row without a process and no fixture default",
                        rf.name
                    )
                });
            properties.push(PropertyExpectation {
                process,
                property,
                expect,
                witness: rp.witness,
            });
        }

        let equivalences = rf
            .equivalences
            .into_iter()
            .map(|re| EquivExpectation {
                left: re.left,
                right: re.right,
                relation: re.relation,
                equivalent: re.equivalent,
            })
            .collect();

        fixtures.push(Fixture {
            name: rf.name,
            path,
            source,
            process: rf.process,
            note: rf.note,
            properties,
            equivalences,
        });
    }
    Ok(fixtures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads_and_parses() {
        let fixtures = load_corpus().expect("corpus loads");
        assert!(fixtures.len() >= 15, "need at least 15 fixtures");
        for f in &fixtures {
            let model = f.model();
            for p in &f.properties {
                assert!(
                    model.def(&p.process).is_some(),
                    "fixture {}: process {} not defined",
                    f.name,
                    p.process
                );
            }
            for e in &f.equivalences {
                assert!(model.def(&e.left).is_some() && model.def(&e.right).is_some());
            }
        }
    }

    #[test]
    fn required_fixtures_present() {
        let fixtures = load_corpus().unwrap();
        let names: Vec<&str> = fixtures.iter().map(|f| f.name.as_str()).collect();
        for required in [
            "auth",
            "weak-not-branching",
            "snni-intro",
            "bndc-cex",
            "strict-sbrsnni",
            "strict-brndc",
            "strict-brsnni",
            "incomp-brndc",
            "family-gap",
            "tau-absorb",
            "tau-subsume",
            "noncomp-choice",
            "noncomp-parallel",
        ] {
            assert!(names.contains(&required), "missing fixture {required}");
        }
    }

    #[test]
    fn witness_matching_is_exact() {
        let w = ExpectedWitness::Attacker {
            attacker: "h . 0".into(),
            sync_set: vec!["h".into()],
        };
        let good = Evidence::Attacker {
            attacker: "h . 0".into(),
            sync_set: ["h".to_string()].into_iter().collect(),
        };
        let bad = Evidence::Attacker {
            attacker: "h . 0".into(),
            sync_set: ActionSet::empty(),
        };
        assert!(w.matches(&good));
        assert!(!w.matches(&bad));
    }
}
