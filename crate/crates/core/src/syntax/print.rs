//! Term pretty-printer. Output re-parses to a structurally equal term.

use super::{Term, TermArena, TermId};

// Binding strength of each construct; parentheses are inserted whenever a
// subterm binds looser than the position it appears in.
const CHOICE: u8 = 0;
const PARALLEL: u8 = 1;
const PREFIX: u8 = 2;
const POSTFIX: u8 = 3;
const ATOM: u8 = 4;

fn level(term: &Term) -> u8 {
    match term {
        Term::Nil | Term::Const(_) => ATOM,
        Term::Restrict(..) | Term::Hide(..) => POSTFIX,
        Term::Prefix(..) => PREFIX,
        Term::Parallel(..) => PARALLEL,
        Term::Choice(..) => CHOICE,
    }
}

pub(super) fn render(arena: &TermArena, id: TermId) -> String {
    let mut out = String::new();
    go(arena, id, CHOICE, &mut out);
    out
}

fn go(arena: &TermArena, id: TermId, ctx: u8, out: &mut String) {
    let term = arena.get(id);
    let parens = level(term) < ctx;
    if parens {
        out.push('(');
    }
    match term {
        Term::Nil => out.push('0'),
        Term::Const(name) => out.push_str(name),
        Term::Prefix(a, k) => {
            out.push_str(&a.to_string());
            out.push_str(" . ");
            go(arena, *k, PREFIX, out);
        }
        Term::Choice(l, r) => {
            go(arena, *l, CHOICE, out);
            out.push_str(" + ");
            go(arena, *r, PARALLEL, out);
        }
        Term::Parallel(l, r, set) => {
            go(arena, *l, PARALLEL, out);
            out.push_str(" |[");
            out.push_str(&set.iter().collect::<Vec<_>>().join(", "));
            out.push_str("]| ");
            go(arena, *r, PREFIX, out);
        }
        Term::Restrict(body, set) => {
            go(arena, *body, POSTFIX, out);
            out.push_str(" \\ ");
            out.push_str(&set.to_string());
        }
        Term::Hide(body, set) => {
            go(arena, *body, POSTFIX, out);
            out.push_str(" / ");
            out.push_str(&set.to_string());
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_spec;

    fn roundtrip(body: &str) -> String {
        let src = format!("high h; P := {body};");
        let m = parse_spec(&src).unwrap();
        m.render(m.def("P").unwrap())
    }

    #[test]
    fn atoms_and_prefix() {
        assert_eq!(roundtrip("0"), "0");
        assert_eq!(roundtrip("a.b.0"), "a . b . 0");
        assert_eq!(roundtrip("tau . 0"), "tau . 0");
    }

    #[test]
    fn parens_only_where_needed() {
        assert_eq!(roundtrip("a . (b . 0 + c . 0)"), "a . (b . 0 + c . 0)");
        assert_eq!(
            roundtrip("(a . 0 + b . 0) + c . 0"),
            "a . 0 + b . 0 + c . 0"
        );
        assert_eq!(
            roundtrip("a . 0 + (b . 0 + c . 0)"),
            "a . 0 + (b . 0 + c . 0)"
        );
        assert_eq!(roundtrip("(a . 0) \\ {a}"), "(a . 0) \\ {a}");
        assert_eq!(roundtrip("a . 0 \\ {a}"), "a . 0 \\ {a}");
    }

    #[test]
    fn parallel_sets_and_associativity() {
        assert_eq!(roundtrip("0 |[]| 0"), "0 |[]| 0");
        assert_eq!(roundtrip("0 |[b, a]| 0"), "0 |[a, b]| 0");
        assert_eq!(roundtrip("0 |[a]| 0 |[b]| 0"), "0 |[a]| 0 |[b]| 0");
        assert_eq!(roundtrip("0 |[a]| (0 |[b]| 0)"), "0 |[a]| (0 |[b]| 0)");
    }

    #[test]
    fn hide_chain() {
        assert_eq!(roundtrip("0 \\ {a} / {b}"), "0 \\ {a} / {b}");
    }

    #[test]
    fn rendering_reparses_to_same_term() {
        let cases = [
            "(a . 0 + tau . b . 0) \\ {a} / {b}",
            "(P |[h, l]| a' . 0) + 0",
            "h . (0 |[x]| (x . 0 + tau . 0))",
        ];
        for body in cases {
            let src = format!("high h; P := {body};");
            let m = parse_spec(&src).unwrap();
            let id = m.def("P").unwrap();
            let printed = m.render(id);
            let (arena2, id2) = m.parse_root(&printed).unwrap();
            // Compare structurally by rendering both from their own arenas.
            assert_eq!(super::render(&arena2, id2), printed, "case {body}");
        }
    }
}
