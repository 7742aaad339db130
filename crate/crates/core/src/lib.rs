//! Core library of the `ninfer` workspace.
//!
//! The pipeline: a `.ni` specification is parsed into a [`syntax::SpecModel`],
//! a labelled transition system is built from it by [`lts::build_lts`], and
//! behavioural equivalences and information-flow properties are decided over
//! that LTS by the [`equiv`] and [`security`] modules.

pub mod equiv;
pub mod fixtures;
pub mod lts;
pub mod random;
pub mod security;
pub mod syntax;

pub use equiv::{equivalent, BfMode, Partition, Relation};
pub use lts::{build_lts, BuildLimits, Lts, StateId};
pub use security::{taxonomy_report, Outcome, PropertyId, Verdict};
pub use syntax::{check_guardedness, classify_action, parse_spec, Action, Level, SpecModel};
