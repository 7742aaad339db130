//! Graphviz DOT export.

use std::fmt::Write as _;

use super::Lts;
use crate::equiv::Partition;
use crate::syntax::Action;

const PALETTE: [&str; 8] = [
    "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99", "#e0e0e0", "#b3e2cd",
];

/// Renders the LTS as a DOT digraph: the initial state is a double circle,
/// tau edges are dashed, dead states are dotted. With `highlight`, states
/// are filled by partition block (colors cycle past eight blocks).
pub fn export_dot(l: &Lts, highlight: Option<&Partition>) -> String {
    let mut out = String::from("digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in l.states() {
        let mut attrs = vec![format!("label=\"{}\"", escape(l.name(s)))];
        if s == l.initial() {
            attrs.push("shape=doublecircle".into());
        }
        if !l.is_live(s) {
            attrs.push("style=dotted".into());
        }
        if let Some(p) = highlight {
            let color = PALETTE[p.block_of(s) % PALETTE.len()];
            attrs.push(format!("style=filled, fillcolor=\"{color}\""));
        }
        let _ = writeln!(out, "  s{} [{}];", s.index(), attrs.join(", "));
    }
    for &(s, lab, t) in l.edges() {
        let (text, style) = match l.label(lab) {
            Action::Tau => ("tau".to_string(), ", style=dashed"),
            Action::Visible(n) => (escape(n), ""),
        };
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{}\"{}];",
            s.index(),
            t.index(),
            text,
            style
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
