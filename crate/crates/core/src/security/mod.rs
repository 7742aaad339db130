//! Noninterference checking.
//!
//! Every property compares low-level views of a process: the restricted
//! view, where high actions are forbidden, against the hidden view, where
//! they happen silently. Ten properties arise from five check shapes, each
//! taken with weak or branching bisimilarity:
//!
//! * SNNI: the two views of the initial state are equivalent.
//! * Strong SNNI: the two views of every reachable state are equivalent.
//! * Persistent NDC: identical to strong SNNI (a theorem, checked cheaply).
//! * Strong NDC: every high transition leaves the restricted view
//!   unchanged, block-wise.
//! * NDC: no high-level attacker composed in parallel changes the low
//!   view. The attacker universe is infinite, so this check is
//!   three-valued: it holds when strong SNNI holds, fails on a concrete
//!   refuting attacker, and is otherwise unknown.

mod attackers;

pub use attackers::{enumerate_attackers, Attacker};

use std::fmt;

use crate::equiv::{equivalent, partition, Relation};
use crate::lts::{
    build_lts_in, disjoint_union, hide_high, restrict_high, BuildError, BuildLimits, Lts,
};
use crate::syntax::{
    occurring_high_in, render_term, ActionSet, ParseError, SpecModel, Term, TermArena, TermId,
};

/// The five check shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyBase {
    Snni,
    Ndc,
    StrongSnni,
    PersistentNdc,
    StrongNdc,
}

/// A named noninterference property: a check shape paired with the
/// bisimilarity it uses. The ten supported combinations pair the five
/// bases with [`Relation::Weak`] or [`Relation::Branching`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropertyId {
    pub base: PropertyBase,
    pub relation: Relation,
}

impl PropertyId {
    pub const fn new(base: PropertyBase, relation: Relation) -> PropertyId {
        PropertyId { base, relation }
    }

    /// The ten properties in report row order: the weak family, then the
    /// branching family, each from weakest to strongest requirement.
    pub const ALL: [PropertyId; 10] = [
        PropertyId::new(PropertyBase::Snni, Relation::Weak),
        PropertyId::new(PropertyBase::Ndc, Relation::Weak),
        PropertyId::new(PropertyBase::StrongSnni, Relation::Weak),
        PropertyId::new(PropertyBase::PersistentNdc, Relation::Weak),
        PropertyId::new(PropertyBase::StrongNdc, Relation::Weak),
        PropertyId::new(PropertyBase::Snni, Relation::Branching),
        PropertyId::new(PropertyBase::Ndc, Relation::Branching),
        PropertyId::new(PropertyBase::StrongSnni, Relation::Branching),
        PropertyId::new(PropertyBase::PersistentNdc, Relation::Branching),
        PropertyId::new(PropertyBase::StrongNdc, Relation::Branching),
    ];
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.base, self.relation) {
            (PropertyBase::Snni, Relation::Weak) => "BSNNI",
            (PropertyBase::Ndc, Relation::Weak) => "BNDC",
            (PropertyBase::StrongSnni, Relation::Weak) => "SBSNNI",
            (PropertyBase::PersistentNdc, Relation::Weak) => "P_BNDC",
            (PropertyBase::StrongNdc, Relation::Weak) => "SBNDC",
            (PropertyBase::Snni, Relation::Branching) => "BrSNNI",
            (PropertyBase::Ndc, Relation::Branching) => "BrNDC",
            (PropertyBase::StrongSnni, Relation::Branching) => "SBrSNNI",
            (PropertyBase::PersistentNdc, Relation::Branching) => "P_BrNDC",
            (PropertyBase::StrongNdc, Relation::Branching) => "SBrNDC",
            // Strong-relation variants are not named properties; spell
            // them out for debugging rather than panic.
            (base, Relation::Strong) => return write!(f, "{base:?}(strong)"),
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown property name {0:?} (expected one of BSNNI, BNDC, SBSNNI, P_BNDC, SBNDC, BrSNNI, BrNDC, SBrSNNI, P_BrNDC, SBrNDC)")]
pub struct ParsePropertyError(pub String);

impl std::str::FromStr for PropertyId {
    type Err = ParsePropertyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        for p in PropertyId::ALL {
            if p.to_string().eq_ignore_ascii_case(s) {
                return Ok(p);
            }
        }
        Err(ParsePropertyError(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "Holds",
            Outcome::Fails => "Fails",
            Outcome::Unknown => "Unknown",
        })
    }
}

/// Why a verdict came out the way it did. Witness terms are rendered in
/// `.ni` syntax and re-parse against the same model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// The restricted and hidden views of this reachable state differ.
    InsecureState { state: String },
    /// This high transition changes the restricted view.
    HighTransition {
        source: String,
        action: String,
        target: String,
    },
    /// This attacker, synchronized on this set, changes the low view.
    Attacker {
        attacker: String,
        sync_set: ActionSet,
    },
    /// The property holds because the named stronger property holds.
    ByImplication { from: &'static str },
    /// Refutation search finished without a witness.
    BoundsExhausted { attackers: usize, subsets: usize },
}

impl Evidence {
    pub fn describe(&self) -> String {
        match self {
            Evidence::InsecureState { state } => {
                format!("low views of reachable state `{state}` differ")
            }
            Evidence::HighTransition {
                source,
                action,
                target,
            } => format!("`{source}` -{action}-> `{target}` changes the restricted view"),
            Evidence::Attacker { attacker, sync_set } => {
                format!("attacker `{attacker}` synchronized on {sync_set}")
            }
            Evidence::ByImplication { from } => format!("implied by {from}"),
            Evidence::BoundsExhausted { attackers, subsets } => {
                format!("no refutation among {attackers} attackers x {subsets} sync sets")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub evidence: Option<Evidence>,
}

impl Verdict {
    fn holds() -> Verdict {
        Verdict {
            outcome: Outcome::Holds,
            evidence: None,
        }
    }

    fn holds_by(from: &'static str) -> Verdict {
        Verdict {
            outcome: Outcome::Holds,
            evidence: Some(Evidence::ByImplication { from }),
        }
    }

    fn fails(evidence: Evidence) -> Verdict {
        Verdict {
            outcome: Outcome::Fails,
            evidence: Some(evidence),
        }
    }

    fn unknown(evidence: Evidence) -> Verdict {
        Verdict {
            outcome: Outcome::Unknown,
            evidence: Some(evidence),
        }
    }
}

/// Search bounds for the NDC refutation loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdcBounds {
    /// Maximum attacker nesting depth.
    pub attacker_depth: usize,
    /// Cap on enumerated attackers (smallest kept).
    pub max_attackers: usize,
    /// Cap on enumerated synchronization subsets (smallest kept).
    pub max_subsets: usize,
}

impl Default for NdcBounds {
    fn default() -> Self {
        NdcBounds {
            attacker_depth: 3,
            max_attackers: 512,
            max_subsets: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// SNNI: the restricted and hidden views of the initial state are
/// `rel`-equivalent.
pub fn check_snni(
    model: &SpecModel,
    root: &str,
    rel: Relation,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    Ok(Ctx::new(model, root, limits)?.snni(rel))
}

/// Strong SNNI: SNNI at every reachable state.
pub fn check_strong_snni(
    model: &SpecModel,
    root: &str,
    rel: Relation,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    Ok(Ctx::new(model, root, limits)?.strong_snni(rel))
}

/// Persistent NDC: equal to strong SNNI; the verdict is the strong SNNI
/// verdict, marked as obtained through that equality when it holds.
pub fn check_persistent_ndc(
    model: &SpecModel,
    root: &str,
    rel: Relation,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    Ok(Ctx::new(model, root, limits)?.persistent_ndc(rel))
}

/// Strong NDC: for every high transition s -h-> t, states s and t are
/// `rel`-equivalent in the restricted view.
pub fn check_sndc(
    model: &SpecModel,
    root: &str,
    rel: Relation,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    Ok(Ctx::new(model, root, limits)?.sndc(rel))
}

/// NDC, three-valued: Holds by the strong SNNI implication, Fails on a
/// concrete (attacker, sync set) refutation within `bounds`, Unknown
/// otherwise.
pub fn check_ndc(
    model: &SpecModel,
    root: &str,
    rel: Relation,
    bounds: &NdcBounds,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    Ctx::new(model, root, limits)?.ndc(rel, bounds, limits)
}

/// Runs one property check by id.
pub fn check_property(
    model: &SpecModel,
    root: &str,
    property: PropertyId,
    bounds: &NdcBounds,
    limits: &BuildLimits,
) -> Result<Verdict, CheckError> {
    let ctx = Ctx::new(model, root, limits)?;
    ctx.property(property, bounds, limits)
}

/// Shared per-root state: the LTS and its two low views.
struct Ctx<'m> {
    model: &'m SpecModel,
    arena: TermArena,
    root: TermId,
    lts: Lts,
    restricted: Lts,
    hidden: Lts,
    high: ActionSet,
}

impl<'m> Ctx<'m> {
    fn new(model: &'m SpecModel, root: &str, limits: &BuildLimits) -> Result<Ctx<'m>, CheckError> {
        let (arena, root) = model.parse_root(root)?;
        let def = |n: &str| model.def(n);
        let lts = build_lts_in(arena.clone(), &def, root, limits)?;
        let high = model.high_action_set();
        let restricted = restrict_high(&lts, &high);
        let hidden = hide_high(&lts, &high);
        Ok(Ctx {
            model,
            arena,
            root,
            lts,
            restricted,
            hidden,
            high,
        })
    }

    fn property(
        &self,
        property: PropertyId,
        bounds: &NdcBounds,
        limits: &BuildLimits,
    ) -> Result<Verdict, CheckError> {
        let rel = property.relation;
        Ok(match property.base {
            PropertyBase::Snni => self.snni(rel),
            PropertyBase::StrongSnni => self.strong_snni(rel),
            PropertyBase::PersistentNdc => self.persistent_ndc(rel),
            PropertyBase::StrongNdc => self.sndc(rel),
            PropertyBase::Ndc => self.ndc(rel, bounds, limits)?,
        })
    }

    fn snni(&self, rel: Relation) -> Verdict {
        let init = self.lts.initial();
        if equivalent(&self.restricted, init, &self.hidden, init, rel) {
            Verdict::holds()
        } else {
            Verdict::fails(Evidence::InsecureState {
                state: self.lts.name(init).to_string(),
            })
        }
    }

    fn strong_snni(&self, rel: Relation) -> Verdict {
        // Both views share the state space of the underlying LTS, whose
        // states are exactly the reachable processes. One partition of the
        // side-by-side union answers every per-state question; states dead
        // in the restricted view still carry their rooted behavior.
        let (union, left, right) = disjoint_union(&self.restricted, &self.hidden);
        let p = partition(&union, rel);
        for s in self.lts.states() {
            if !p.same_block(left[s.index()], right[s.index()]) {
                return Verdict::fails(Evidence::InsecureState {
                    state: self.lts.name(s).to_string(),
                });
            }
        }
        Verdict::holds()
    }

    fn persistent_ndc(&self, rel: Relation) -> Verdict {
        let from = match rel {
            Relation::Branching => "SBrSNNI",
            _ => "SBSNNI",
        };
        let v = self.strong_snni(rel);
        match v.outcome {
            Outcome::Holds => Verdict::holds_by(from),
            _ => v,
        }
    }

    fn sndc(&self, rel: Relation) -> Verdict {
        let p = partition(&self.restricted, rel);
        for &(s, lab, t) in self.lts.edges() {
            let action = self.lts.label(lab);
            if self.high.contains_action(action) && !p.same_block(s, t) {
                return Verdict::fails(Evidence::HighTransition {
                    source: self.lts.name(s).to_string(),
                    action: action.to_string(),
                    target: self.lts.name(t).to_string(),
                });
            }
        }
        Verdict::holds()
    }

    fn ndc(
        &self,
        rel: Relation,
        bounds: &NdcBounds,
        limits: &BuildLimits,
    ) -> Result<Verdict, CheckError> {
        let strong = self.strong_snni(rel);
        if strong.outcome == Outcome::Holds {
            return Ok(Verdict::holds_by(match rel {
                Relation::Branching => "SBrSNNI",
                _ => "SBSNNI",
            }));
        }

        // Attackers can only interact through high actions the process
        // itself performs, so both the alphabet and the sync sets are
        // drawn from those.
        let occurring: Vec<String> = occurring_high_in(
            &self.arena,
            &|n| self.model.def(n),
            self.model.high_set(),
            self.root,
        )
        .into_iter()
        .collect();
        let alphabet: ActionSet = occurring.iter().cloned().collect();
        let (attackers, _) = attackers::enumerate_attackers_capped(
            &alphabet,
            bounds.attacker_depth,
            bounds.max_attackers,
        );
        let (subsets, _) = subsets_in_order(&occurring, bounds.max_subsets);

        let def = |n: &str| self.model.def(n);
        for sync_set in &subsets {
            for attacker in &attackers {
                let mut arena = self.arena.clone();
                let q = attacker.intern(&mut arena);
                let composed = arena.add(Term::Parallel(self.root, q, sync_set.clone()));
                let raw = build_lts_in(arena.clone(), &def, composed, limits)?;
                let view = restrict_high(&hide_high(&raw, sync_set), &self.high);
                if !equivalent(
                    &self.restricted,
                    self.lts.initial(),
                    &view,
                    view.initial(),
                    rel,
                ) {
                    return Ok(Verdict::fails(Evidence::Attacker {
                        attacker: render_term(&arena, q),
                        sync_set: sync_set.clone(),
                    }));
                }
            }
        }
        Ok(Verdict::unknown(Evidence::BoundsExhausted {
            attackers: attackers.len(),
            subsets: subsets.len(),
        }))
    }
}

/// Subsets of `items` in size-then-lexicographic order, capped.
fn subsets_in_order(items: &[String], cap: usize) -> (Vec<ActionSet>, bool) {
    let n = items.len();
    let mut out: Vec<ActionSet> = Vec::new();
    for k in 0..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        'combos: loop {
            if out.len() == cap {
                return (out, true);
            }
            out.push(idx.iter().map(|&i| items[i].clone()).collect());
            let mut i = k;
            while i > 0 {
                i -= 1;
                // Position i may still grow while leaving room for the
                // positions after it.
                if idx[i] < i + n - k {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
    (out, false)
}

/// A full taxonomy evaluation: the ten verdicts plus internal consistency
/// checking of the implication lattice between them.
#[derive(Debug, Clone)]
pub struct TaxonomyReport {
    pub rows: Vec<(PropertyId, Verdict)>,
    /// Implication violations: a property held while one it implies
    /// failed. Always empty unless a checker is unsound.
    pub violations: Vec<String>,
}

impl TaxonomyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<10} {:<8} note\n", "property", "verdict"));
        for (id, v) in &self.rows {
            let note = v
                .evidence
                .as_ref()
                .map(|e| e.describe())
                .unwrap_or_default();
            out.push_str(&format!(
                "{:<10} {:<8} {}\n",
                id.to_string(),
                v.outcome.to_string(),
                note
            ));
        }
        for violation in &self.violations {
            out.push_str(&format!("INCONSISTENT: {violation}\n"));
        }
        out
    }
}

/// Implication arrows between the ten properties: `(source, target)` with
/// source-holds forcing target-holds. The persistent/strong-SNNI pairs are
/// equalities, so they appear in both directions.
const ARROWS: [(usize, usize); 15] = [
    // Weak family: SBNDC -> SBSNNI <-> P_BNDC, SBSNNI -> BNDC -> BSNNI.
    (4, 2),
    (2, 3),
    (3, 2),
    (2, 1),
    (1, 0),
    // Branching family, same shape.
    (9, 7),
    (7, 8),
    (8, 7),
    (7, 6),
    (6, 5),
    // Branching implies weak, property by property.
    (5, 0),
    (6, 1),
    (7, 2),
    (8, 3),
    (9, 4),
];

/// Evaluates all ten properties of `root` and cross-checks every
/// implication arrow between the verdicts. `Unknown` is compatible with
/// anything; a reported violation means a checker bug, and callers are
/// expected to surface it loudly.
pub fn taxonomy_report(
    model: &SpecModel,
    root: &str,
    bounds: &NdcBounds,
    limits: &BuildLimits,
) -> Result<TaxonomyReport, CheckError> {
    let ctx = Ctx::new(model, root, limits)?;
    let mut rows = Vec::with_capacity(10);
    for id in PropertyId::ALL {
        let verdict = ctx.property(id, bounds, limits)?;
        rows.push((id, verdict));
    }
    let mut violations = Vec::new();
    for (src, dst) in ARROWS {
        let (src_id, src_v) = &rows[src];
        let (dst_id, dst_v) = &rows[dst];
        if src_v.outcome == Outcome::Holds && dst_v.outcome == Outcome::Fails {
            violations.push(format!(
                "{src_id} holds but {dst_id} fails, contradicting {src_id} => {dst_id}"
            ));
        }
    }
    Ok(TaxonomyReport { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_spec;

    fn limits() -> BuildLimits {
        BuildLimits::default()
    }

    #[test]
    fn subset_order_is_size_then_lex() {
        let items = vec!["h1".to_string(), "h2".to_string(), "h3".to_string()];
        let (subs, capped) = subsets_in_order(&items, 100);
        assert!(!capped);
        let texts: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            texts,
            [
                "{}",
                "{h1}",
                "{h2}",
                "{h3}",
                "{h1, h2}",
                "{h1, h3}",
                "{h2, h3}",
                "{h1, h2, h3}"
            ]
        );
        let (first, capped) = subsets_in_order(&items, 3);
        assert!(capped);
        assert_eq!(first.len(), 3);
    }

    #[test]
    fn intro_example_is_secure_both_ways() {
        let m = parse_spec("high h; P := l . 0 + h . l . 0;").unwrap();
        for rel in [Relation::Weak, Relation::Branching] {
            let v = check_snni(&m, "P", rel, &limits()).unwrap();
            assert_eq!(v.outcome, Outcome::Holds);
            let v = check_sndc(&m, "P", rel, &limits()).unwrap();
            assert_eq!(v.outcome, Outcome::Holds);
        }
    }

    #[test]
    fn two_step_high_sequence_leaks_under_an_attacker() {
        let m = parse_spec("high h1, h2; P := l . 0 + h1 . h2 . l . 0;").unwrap();
        let v = check_snni(&m, "P", Relation::Weak, &limits()).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        let v = check_ndc(&m, "P", Relation::Weak, &NdcBounds::default(), &limits()).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert_eq!(
            v.evidence,
            Some(Evidence::Attacker {
                attacker: "h1 . 0".into(),
                sync_set: ["h1".to_string()].into_iter().collect(),
            })
        );
    }

    #[test]
    fn persistent_ndc_tracks_strong_snni() {
        let m = parse_spec("high h; P := l . 0 + h . h . l . 0;").unwrap();
        for rel in [Relation::Weak, Relation::Branching] {
            let s = check_strong_snni(&m, "P", rel, &limits()).unwrap();
            let p = check_persistent_ndc(&m, "P", rel, &limits()).unwrap();
            assert_eq!(s.outcome, p.outcome);
        }
    }

    #[test]
    fn high_transition_witness_is_the_first_edge() {
        let src = "high h;\n\
                   Auth := l_pwd . Auth + (h . l_sso . Auth + h . l_2fa . Auth)\n\
                     + tau . (tau . l_sso . Auth + tau . l_2fa . Auth);";
        let m = parse_spec(src).unwrap();
        let v = check_sndc(&m, "Auth", Relation::Weak, &limits()).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert_eq!(
            v.evidence,
            Some(Evidence::HighTransition {
                source: "Auth".into(),
                action: "h".into(),
                target: "l_sso . Auth".into(),
            })
        );
    }

    #[test]
    fn nil_satisfies_everything() {
        let m = parse_spec("P := 0;").unwrap();
        let report = taxonomy_report(&m, "P", &NdcBounds::default(), &limits()).unwrap();
        assert!(report.is_consistent());
        for (_, v) in &report.rows {
            assert_eq!(v.outcome, Outcome::Holds);
        }
    }

    #[test]
    fn property_names_round_trip() {
        for id in PropertyId::ALL {
            let name = id.to_string();
            let back: PropertyId = name.parse().unwrap();
            assert_eq!(back, id);
        }
        assert!("BSNNI".parse::<PropertyId>().is_ok());
        assert!("brsnni".parse::<PropertyId>().is_ok());
        assert!("nope".parse::<PropertyId>().is_err());
    }
}
