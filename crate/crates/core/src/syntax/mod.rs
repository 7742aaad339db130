//! Abstract syntax, parsing, and static checks for the specification language.
//!
//! A specification is a sequence of `high` declarations and constant
//! definitions written in `.ni` concrete syntax:
//!
//! ```text
//! high h;
//! Auth := l_pwd . Auth + (h . l_sso . Auth + h . l_2fa . Auth)
//!       + tau . (tau . l_sso . Auth + tau . l_2fa . Auth);
//! ```
//!
//! Operators, loosest to tightest: choice `+`, parallel `|[a,b]|` with an
//! explicit synchronization set, action prefix `a . P`, and the postfix
//! transforms `\ {a,b}` (restriction) and `/ {a,b}` (hiding). `0` is the
//! terminated process, `tau` the internal action.
//!
//! Terms live in a [`TermArena`]. Node identity in the arena is what the LTS
//! builder uses for state identity, so the interning policy is part of the
//! semantics: `Nil`, `Prefix`, and `Choice` nodes are occurrence-unique
//! (two textual occurrences of `l . 0` stay distinct), while `Parallel`,
//! `Restrict`, and `Hide` nodes are hash-consed on their child ids and action
//! set (so the two interleavings of `a . 0 |[]| b . 0` converge on the same
//! final state, and derived wrapper states close their self-loops). Constants
//! are canonical by name.

mod lexer;
mod parser;
mod print;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use parser::ParseError;

/// An action of the calculus: the internal action `tau` or a visible action
/// carrying an identifier name.
///
/// `tau` is never a member of the high or low sets and never appears inside
/// synchronization, restriction, or hiding sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Tau,
    Visible(String),
}

impl Action {
    pub fn visible(name: impl Into<String>) -> Self {
        Action::Visible(name.into())
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    /// Visible action name, if any.
    pub fn name(&self) -> Option<&str> {
        match self {
            Action::Tau => None,
            Action::Visible(n) => Some(n),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str("tau"),
            Action::Visible(n) => f.write_str(n),
        }
    }
}

/// A sorted, duplicate-free set of visible action names, as used in
/// synchronization, restriction, and hiding positions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionSet {
    names: Vec<String>,
}

impl ActionSet {
    pub fn new(mut names: Vec<String>) -> Self {
        names.sort();
        names.dedup();
        ActionSet { names }
    }

    pub fn empty() -> Self {
        ActionSet { names: Vec::new() }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .is_ok()
    }

    /// True iff the set contains the given action. `tau` is never a member.
    pub fn contains_action(&self, a: &Action) -> bool {
        match a {
            Action::Tau => false,
            Action::Visible(n) => self.contains(n),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.names.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            f.write_str(n)?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<String> for ActionSet {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        ActionSet::new(iter.into_iter().collect())
    }
}

/// Index of a term node in a [`TermArena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of a process term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// `0`, the terminated process.
    Nil,
    /// `a . P`.
    Prefix(Action, TermId),
    /// `P + Q`.
    Choice(TermId, TermId),
    /// `P |[L]| Q`: interleaving outside `L`, CSP-style synchronization
    /// (label preserved) inside `L`.
    Parallel(TermId, TermId, ActionSet),
    /// `P \ L`: actions in `L` are prevented.
    Restrict(TermId, ActionSet),
    /// `P / L`: actions in `L` are relabeled to `tau`.
    Hide(TermId, ActionSet),
    /// Reference to a defined constant.
    Const(String),
}

/// Arena of term nodes. See the module docs for the interning policy; the
/// arena is the sole authority on node identity.
#[derive(Debug, Clone, Default)]
pub struct TermArena {
    nodes: Vec<Term>,
    // Interning tables for the shared node kinds only.
    consed: HashMap<Term, TermId>,
    consts: HashMap<String, TermId>,
}

impl TermArena {
    pub fn new() -> Self {
        TermArena::default()
    }

    pub fn get(&self, id: TermId) -> &Term {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Adds a node, applying the identity policy for its kind.
    pub fn add(&mut self, term: Term) -> TermId {
        match &term {
            Term::Nil | Term::Prefix(..) | Term::Choice(..) => self.push(term),
            Term::Const(name) => {
                if let Some(&id) = self.consts.get(name) {
                    return id;
                }
                let name = name.clone();
                let id = self.push(term);
                self.consts.insert(name, id);
                id
            }
            Term::Parallel(..) | Term::Restrict(..) | Term::Hide(..) => {
                if let Some(&id) = self.consed.get(&term) {
                    return id;
                }
                let key = term.clone();
                let id = self.push(term);
                self.consed.insert(key, id);
                id
            }
        }
    }

    fn push(&mut self, term: Term) -> TermId {
        let id = TermId(u32::try_from(self.nodes.len()).expect("term arena overflow"));
        self.nodes.push(term);
        id
    }
}

/// Security level of an action relative to a model's declarations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    High,
    Low,
    Internal,
}

/// A parsed specification: constant definitions plus the declared high set.
///
/// Visible actions partition into the declared high set and the (derived)
/// low set; undeclared visible actions are low. The model owns the term
/// arena for all definition bodies.
#[derive(Debug, Clone)]
pub struct SpecModel {
    arena: TermArena,
    defs: Vec<(String, TermId)>,
    def_index: HashMap<String, usize>,
    high: BTreeSet<String>,
}

impl SpecModel {
    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    /// Definition bodies in source order.
    pub fn defs(&self) -> impl Iterator<Item = (&str, TermId)> {
        self.defs.iter().map(|(n, t)| (n.as_str(), *t))
    }

    pub fn def(&self, name: &str) -> Option<TermId> {
        self.def_index.get(name).map(|&i| self.defs[i].1)
    }

    pub fn high_set(&self) -> &BTreeSet<String> {
        &self.high
    }

    /// Declared-high actions as an [`ActionSet`].
    pub fn high_action_set(&self) -> ActionSet {
        self.high.iter().cloned().collect()
    }

    /// All visible action names occurring anywhere in the definitions
    /// (prefixes and operator sets alike).
    pub fn occurring_visible(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for node in &self.arena.nodes {
            match node {
                Term::Prefix(Action::Visible(n), _) => {
                    out.insert(n.clone());
                }
                Term::Parallel(_, _, set) | Term::Restrict(_, set) | Term::Hide(_, set) => {
                    out.extend(set.iter().map(str::to_owned));
                }
                _ => {}
            }
        }
        out
    }

    /// Derived low set: every visible action mentioned in the definitions
    /// that is not declared high.
    pub fn low_set(&self) -> BTreeSet<String> {
        self.occurring_visible()
            .into_iter()
            .filter(|n| !self.high.contains(n))
            .collect()
    }

    pub fn classify(&self, a: &Action) -> Level {
        match a {
            Action::Tau => Level::Internal,
            Action::Visible(n) => {
                if self.high.contains(n) {
                    Level::High
                } else {
                    Level::Low
                }
            }
        }
    }

    /// High actions that occur as prefixes in the term reachable from
    /// `root`, following constant references. This is the finite universe
    /// attacker synchronization sets are drawn from.
    pub fn occurring_high_from(&self, root: TermId) -> BTreeSet<String> {
        occurring_high_in(&self.arena, &|n| self.def(n), &self.high, root)
    }

    /// Renders a term back into parseable `.ni` syntax.
    pub fn render(&self, id: TermId) -> String {
        print::render(&self.arena, id)
    }

    /// Parses `text` as a standalone term (a bare constant name or any
    /// inline term) against this model's definitions, into a fresh copy of
    /// the arena. The copy shares all ids with the original, so definition
    /// bodies remain valid in it.
    pub fn parse_root(&self, text: &str) -> Result<(TermArena, TermId), ParseError> {
        let mut arena = self.arena.clone();
        let id = parser::parse_term_text(text, &mut arena, |name| self.def(name).is_some())?;
        Ok((arena, id))
    }
}

/// Parses specification source into a [`SpecModel`].
///
/// Errors cover lexical and grammatical problems, duplicate constant
/// definitions, references to undefined constants, and `tau` used inside a
/// high declaration or an operator's action set. Constant references may be
/// forward or (self-)recursive; guardedness is a separate check.
pub fn parse_spec(text: &str) -> Result<SpecModel, ParseError> {
    parser::parse_spec_text(text)
}

/// Renders a term from an arbitrary arena back into parseable `.ni` syntax.
/// [`SpecModel::render`] is the usual entry point; this variant serves code
/// that works on an extended copy of a model's arena.
pub fn render_term(arena: &TermArena, id: TermId) -> String {
    print::render(arena, id)
}

/// Arena-level form of [`SpecModel::occurring_high_from`], for terms that
/// live in an extended copy of a model's arena.
pub fn occurring_high_in(
    arena: &TermArena,
    def: &dyn Fn(&str) -> Option<TermId>,
    high: &BTreeSet<String>,
    root: TermId,
) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut seen_consts = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        match arena.get(id) {
            Term::Nil => {}
            Term::Prefix(a, k) => {
                if let Action::Visible(n) = a {
                    if high.contains(n) {
                        out.insert(n.clone());
                    }
                }
                stack.push(*k);
            }
            Term::Choice(l, r) | Term::Parallel(l, r, _) => {
                stack.push(*l);
                stack.push(*r);
            }
            Term::Restrict(b, _) | Term::Hide(b, _) => stack.push(*b),
            Term::Const(name) => {
                if seen_consts.insert(name.clone()) {
                    if let Some(body) = def(name) {
                        stack.push(body);
                    }
                }
            }
        }
    }
    out
}

/// Classifies an action against a model: `tau` is internal, declared names
/// are high, every other visible action is low.
pub fn classify_action(a: &Action, model: &SpecModel) -> Level {
    model.classify(a)
}

/// An unguarded constant occurrence: `constant` appears in the body of
/// definition `definition` with no action prefix above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unguarded {
    pub definition: String,
    pub constant: String,
}

impl fmt::Display for Unguarded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unguarded occurrence of {} in definition of {}",
            self.constant, self.definition
        )
    }
}

/// Checks that every constant occurrence in every definition body sits
/// beneath at least one action prefix. The check is purely syntactic and
/// per-body: `P := Q; Q := a . P;` is rejected (Q occurs unguarded in P)
/// even though its unfolding happens to be well-behaved.
pub fn check_guardedness(model: &SpecModel) -> Result<(), Vec<Unguarded>> {
    let mut diags = Vec::new();
    for (def_name, body) in &model.defs {
        collect_unguarded(&model.arena, *body, def_name, &mut diags);
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn collect_unguarded(arena: &TermArena, id: TermId, def_name: &str, out: &mut Vec<Unguarded>) {
    match arena.get(id) {
        Term::Nil | Term::Prefix(..) => {}
        Term::Choice(l, r) | Term::Parallel(l, r, _) => {
            collect_unguarded(arena, *l, def_name, out);
            collect_unguarded(arena, *r, def_name, out);
        }
        Term::Restrict(b, _) | Term::Hide(b, _) => collect_unguarded(arena, *b, def_name, out),
        Term::Const(c) => out.push(Unguarded {
            definition: def_name.to_owned(),
            constant: c.clone(),
        }),
    }
}
