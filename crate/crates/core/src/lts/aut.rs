//! Aldebaran (.aut) import and export.
//!
//! Export is bit-exact: header `des (I,T,S)`, then one `(src,"label",dst)`
//! line per transition, ordered by source index, then label text, then
//! target index. Internal actions are written as `"tau"`.

use std::fmt::Write as _;

use super::{Lts, StateId};
use crate::syntax::Action;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("line {line}: expected {expected}")]
    Malformed { line: usize, expected: &'static str },
    #[error("line {line}: state index {found} out of range (header declares {states} states)")]
    BadIndex {
        line: usize,
        found: usize,
        states: usize,
    },
    #[error("header declares {declared} transitions but {found} were listed")]
    CountMismatch { declared: usize, found: usize },
}

pub fn export_aut(l: &Lts) -> String {
    let mut rows: Vec<(usize, &str, usize)> = l
        .edges()
        .iter()
        .map(|&(s, lab, t)| {
            let name = match l.label(lab) {
                Action::Tau => "tau",
                Action::Visible(n) => n.as_str(),
            };
            (s.index(), name, t.index())
        })
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "des ({},{},{})",
        l.initial().index(),
        rows.len(),
        l.num_states()
    );
    for (s, name, t) in rows {
        let _ = writeln!(out, "({s},\"{name}\",{t})");
    }
    out
}

/// Parses AUT text into an LTS. Labels may be quoted or bare; the label
/// `tau` (either way) becomes the internal action. States are named by
/// their index.
pub fn import_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    let (_, header) = lines.next().ok_or(AutError::Malformed {
        line: 1,
        expected: "a `des (initial,transitions,states)` header",
    })?;
    let header_err = AutError::Malformed {
        line: 1,
        expected: "a `des (initial,transitions,states)` header",
    };
    let rest = header
        .trim()
        .strip_prefix("des")
        .ok_or_else(|| header_err.clone())?;
    let (initial, declared, states) = match parse_triple(rest) {
        Some((i, Field::Bare(t), s)) => {
            let t: usize = t.parse().ok().ok_or_else(|| header_err.clone())?;
            (i, t, s)
        }
        _ => return Err(header_err),
    };
    if initial >= states {
        return Err(AutError::BadIndex {
            line: 1,
            found: initial,
            states,
        });
    }

    let mut labels = vec![Action::Tau];
    let mut edges = Vec::new();
    let mut count = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let (src, label, dst) = match parse_triple(line.trim()) {
            Some(t) => t,
            None => {
                return Err(AutError::Malformed {
                    line: lineno,
                    expected: "a `(src,\"label\",dst)` transition",
                })
            }
        };
        for s in [src, dst] {
            if s >= states {
                return Err(AutError::BadIndex {
                    line: lineno,
                    found: s,
                    states,
                });
            }
        }
        let action = match label.text() {
            "tau" => Action::Tau,
            name => Action::visible(name),
        };
        let lab = match labels.iter().position(|a| a == &action) {
            Some(i) => super::LabelId::new(i),
            None => {
                labels.push(action);
                super::LabelId::new(labels.len() - 1)
            }
        };
        edges.push((StateId::new(src), lab, StateId::new(dst)));
        count += 1;
    }
    if count != declared {
        return Err(AutError::CountMismatch {
            declared,
            found: count,
        });
    }

    let names = (0..states).map(|i| i.to_string()).collect();
    Ok(Lts::from_parts(names, StateId::new(initial), labels, edges))
}

enum Field<'a> {
    Bare(&'a str),
    Quoted(&'a str),
}

impl<'a> Field<'a> {
    fn text(&self) -> &'a str {
        match self {
            Field::Bare(s) | Field::Quoted(s) => s,
        }
    }
}

/// Parses `(first,middle,last)` where first and last are numbers and middle
/// is a bare or quoted field. The middle field never contains commas in
/// either role accepted here (counts or action names).
fn parse_triple(s: &str) -> Option<(usize, Field<'_>, usize)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (first, rest) = inner.split_once(',')?;
    let (mid, last) = rest.rsplit_once(',')?;
    let first: usize = first.trim().parse().ok()?;
    let last: usize = last.trim().parse().ok()?;
    let mid = mid.trim();
    let field = match mid.strip_prefix('"') {
        Some(q) => Field::Quoted(q.strip_suffix('"')?),
        None => Field::Bare(mid),
    };
    Some((first, field, last))
}
