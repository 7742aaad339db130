//! Shared input generators for the benchmark suite.
//!
//! Both families are deterministic, so runs are comparable across
//! checkouts. State counts grow exponentially for the toggle family and
//! linearly for the tau chain; the chain exists to stress saturation,
//! whose weak closure is quadratic in the chain length.

use ninfer_core::lts::{build_lts_in, BuildLimits, Lts};
use ninfer_core::syntax::{parse_spec, SpecModel};

/// `n` independent two-state toggles interleaved without synchronization.
/// The product LTS has `2^n` states and `n * 2^n` transitions.
pub fn toggle_spec(n: usize) -> String {
    let mut s = String::from("high h;\n\n");
    for i in 0..n {
        s.push_str(&format!("T{i} := a{i} . b{i} . T{i};\n"));
    }
    let body: Vec<String> = (0..n).map(|i| format!("T{i}")).collect();
    s.push_str(&format!("Sys := {};\n", body.join(" |[]| ")));
    s
}

/// A descending tau chain of length `n` ending in one visible action.
/// Weak saturation relates every state to every later one.
pub fn tau_chain_spec(n: usize) -> String {
    let mut s = String::from("high h;\n\nC0 := l . 0;\n");
    for k in 1..=n {
        s.push_str(&format!("C{k} := tau . C{} + l . 0;\n", k - 1));
    }
    s.push_str(&format!("Sys := C{n};\n"));
    s
}

pub fn model_of(source: &str) -> SpecModel {
    parse_spec(source).expect("benchmark specs parse")
}

pub fn build_named(model: &SpecModel, name: &str) -> Lts {
    let limits = BuildLimits {
        max_states: 1 << 22,
        max_transitions: 1 << 26,
    };
    let (arena, root) = model.parse_root(name).expect("name resolves");
    build_lts_in(arena, &|n| model.def(n), root, &limits).expect("state space fits")
}
