//! Recursive-descent parser for the `.ni` specification language.
//!
//! Precedence, loosest to tightest: `+` (left-assoc), `|[L]|` (left-assoc),
//! `.` (right-assoc), postfix `\ {L}` and `/ {L}`. Parentheses everywhere.

use std::collections::{BTreeSet, HashMap};

use super::lexer::{lex, Tok, Token};
use super::{Action, ActionSet, SpecModel, Term, TermArena, TermId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: unexpected character `{ch}`")]
    Lex { line: u32, col: u32, ch: char },
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Unexpected {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: duplicate definition of constant {name}")]
    DuplicateConst { line: u32, col: u32, name: String },
    #[error("{line}:{col}: reference to undefined constant {name}")]
    UndefinedConst { line: u32, col: u32, name: String },
    #[error("{line}:{col}: tau is not allowed in a {place}")]
    TauNotAllowed {
        line: u32,
        col: u32,
        place: &'static str,
    },
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    arena: &'a mut TermArena,
    // Every constant reference with its position, validated after parsing.
    const_refs: Vec<(String, u32, u32)>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, arena: &'a mut TermArena) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            arena,
            const_refs: Vec::new(),
        })
    }

    fn cur(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: impl Into<String>) -> ParseError {
        let t = self.cur();
        ParseError::Unexpected {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.cur().tok == want {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn term(&mut self) -> Result<TermId, ParseError> {
        let mut acc = self.parallel()?;
        while self.cur().tok == Tok::Plus {
            self.advance();
            let rhs = self.parallel()?;
            acc = self.arena.add(Term::Choice(acc, rhs));
        }
        Ok(acc)
    }

    fn parallel(&mut self) -> Result<TermId, ParseError> {
        let mut acc = self.prefix()?;
        while self.cur().tok == Tok::ParOpen {
            self.advance();
            let set = self.action_list(Tok::ParClose, "synchronization set")?;
            self.expect(Tok::ParClose, "`]|`")?;
            let rhs = self.prefix()?;
            acc = self.arena.add(Term::Parallel(acc, rhs, set));
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<TermId, ParseError> {
        // An identifier (or tau) followed by `.` is a prefix action; an
        // identifier not followed by `.` is a constant reference.
        let action = match &self.cur().tok {
            Tok::Tau => {
                if *self.peek() != Tok::Dot {
                    self.advance();
                    return Err(self.unexpected("`.` (tau can only prefix a process)"));
                }
                self.advance();
                Some(Action::Tau)
            }
            Tok::Ident(name) if *self.peek() == Tok::Dot => {
                let name = name.clone();
                self.advance();
                Some(Action::Visible(name))
            }
            _ => None,
        };
        match action {
            Some(a) => {
                self.expect(Tok::Dot, "`.`")?;
                let cont = self.prefix()?;
                Ok(self.arena.add(Term::Prefix(a, cont)))
            }
            None => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<TermId, ParseError> {
        let mut acc = self.atom()?;
        loop {
            let hide = match self.cur().tok {
                Tok::Backslash => false,
                Tok::Slash => true,
                _ => break,
            };
            self.advance();
            self.expect(Tok::LBrace, "`{`")?;
            let place = if hide {
                "hiding set"
            } else {
                "restriction set"
            };
            let set = self.action_list(Tok::RBrace, place)?;
            self.expect(Tok::RBrace, "`}`")?;
            acc = self.arena.add(if hide {
                Term::Hide(acc, set)
            } else {
                Term::Restrict(acc, set)
            });
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<TermId, ParseError> {
        match self.cur().tok.clone() {
            Tok::Zero => {
                self.advance();
                Ok(self.arena.add(Term::Nil))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                let t = self.advance();
                self.const_refs.push((name.clone(), t.line, t.col));
                Ok(self.arena.add(Term::Const(name)))
            }
            _ => Err(self.unexpected("a process term")),
        }
    }

    fn action_list(&mut self, closer: Tok, place: &'static str) -> Result<ActionSet, ParseError> {
        let mut names = Vec::new();
        if self.cur().tok == closer {
            return Ok(ActionSet::empty());
        }
        loop {
            match self.cur().tok.clone() {
                Tok::Ident(name) => {
                    self.advance();
                    names.push(name);
                }
                Tok::Tau => {
                    let t = self.cur();
                    return Err(ParseError::TauNotAllowed {
                        line: t.line,
                        col: t.col,
                        place,
                    });
                }
                _ => return Err(self.unexpected("an action name")),
            }
            if self.cur().tok == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        Ok(ActionSet::new(names))
    }
}

pub(super) fn parse_spec_text(text: &str) -> Result<SpecModel, ParseError> {
    let mut arena = TermArena::new();
    let mut p = Parser::new(text, &mut arena)?;
    let mut defs: Vec<(String, TermId)> = Vec::new();
    let mut def_index: HashMap<String, usize> = HashMap::new();
    let mut high: BTreeSet<String> = BTreeSet::new();

    loop {
        match p.cur().tok.clone() {
            Tok::Eof => break,
            Tok::High => {
                p.advance();
                loop {
                    match p.cur().tok.clone() {
                        Tok::Ident(name) => {
                            p.advance();
                            high.insert(name);
                        }
                        Tok::Tau => {
                            let t = p.cur();
                            return Err(ParseError::TauNotAllowed {
                                line: t.line,
                                col: t.col,
                                place: "high declaration",
                            });
                        }
                        _ => return Err(p.unexpected("an action name")),
                    }
                    if p.cur().tok == Tok::Comma {
                        p.advance();
                    } else {
                        break;
                    }
                }
                p.expect(Tok::Semi, "`;`")?;
            }
            Tok::Ident(name) if *p.peek() == Tok::Assign => {
                let t = p.advance();
                p.advance(); // :=
                let body = p.term()?;
                p.expect(Tok::Semi, "`;`")?;
                if def_index.contains_key(&name) {
                    return Err(ParseError::DuplicateConst {
                        line: t.line,
                        col: t.col,
                        name,
                    });
                }
                def_index.insert(name.clone(), defs.len());
                defs.push((name, body));
            }
            _ => return Err(p.unexpected("a `high` declaration or a constant definition")),
        }
    }

    for (name, line, col) in &p.const_refs {
        if !def_index.contains_key(name) {
            return Err(ParseError::UndefinedConst {
                line: *line,
                col: *col,
                name: name.clone(),
            });
        }
    }

    Ok(SpecModel {
        arena,
        defs,
        def_index,
        high,
    })
}

pub(super) fn parse_term_text(
    text: &str,
    arena: &mut TermArena,
    defined: impl Fn(&str) -> bool,
) -> Result<TermId, ParseError> {
    let mut p = Parser::new(text, arena)?;
    let id = p.term()?;
    if p.cur().tok != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    for (name, line, col) in &p.const_refs {
        if !defined(name) {
            return Err(ParseError::UndefinedConst {
                line: *line,
                col: *col,
                name: name.clone(),
            });
        }
    }
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::super::parse_spec;
    use super::*;

    fn body_of(src: &str, name: &str) -> (SpecModel, TermId) {
        let m = parse_spec(src).unwrap();
        let id = m.def(name).unwrap();
        (m, id)
    }

    #[test]
    fn precedence_choice_loosest() {
        // a . P + Q |[x]| R parses as (a.P) + (Q |[x]| R)
        let (m, id) = body_of("P := a . 0 + 0 |[x]| 0;", "P");
        let Term::Choice(l, r) = m.arena().get(id) else {
            panic!()
        };
        assert!(matches!(m.arena().get(*l), Term::Prefix(..)));
        assert!(matches!(m.arena().get(*r), Term::Parallel(..)));
    }

    #[test]
    fn postfix_binds_tighter_than_prefix() {
        // a . 0 \ {x} parses as a . (0 \ {x})
        let (m, id) = body_of("P := a . 0 \\ {x};", "P");
        let Term::Prefix(_, k) = m.arena().get(id) else {
            panic!()
        };
        assert!(matches!(m.arena().get(*k), Term::Restrict(..)));
    }

    #[test]
    fn prefix_is_right_associative() {
        let (m, id) = body_of("P := a . b . 0;", "P");
        let Term::Prefix(a, k) = m.arena().get(id) else {
            panic!()
        };
        assert_eq!(a, &Action::visible("a"));
        assert!(matches!(m.arena().get(*k), Term::Prefix(..)));
    }

    #[test]
    fn choice_is_left_associative() {
        let (m, id) = body_of("P := a . 0 + b . 0 + c . 0;", "P");
        let Term::Choice(l, _) = m.arena().get(id) else {
            panic!()
        };
        assert!(matches!(m.arena().get(*l), Term::Choice(..)));
    }

    #[test]
    fn empty_sync_set() {
        let (m, id) = body_of("P := 0 |[]| 0;", "P");
        let Term::Parallel(_, _, set) = m.arena().get(id) else {
            panic!()
        };
        assert!(set.is_empty());
    }

    #[test]
    fn comments_and_primes() {
        let m = parse_spec("// nothing here\nP := a' . 0; // trailing\n").unwrap();
        let id = m.def("P").unwrap();
        let Term::Prefix(a, _) = m.arena().get(id) else {
            panic!()
        };
        assert_eq!(a, &Action::visible("a'"));
    }

    #[test]
    fn duplicate_definition_rejected() {
        let err = parse_spec("P := 0; P := a . 0;").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateConst { .. }));
    }

    #[test]
    fn undefined_constant_rejected() {
        let err = parse_spec("P := a . Q;").unwrap_err();
        assert!(matches!(err, ParseError::UndefinedConst { ref name, .. } if name == "Q"));
    }

    #[test]
    fn forward_references_allowed() {
        assert!(parse_spec("P := a . Q; Q := 0;").is_ok());
    }

    #[test]
    fn tau_rejected_in_high_declaration_and_sets() {
        assert!(matches!(
            parse_spec("high tau;").unwrap_err(),
            ParseError::TauNotAllowed {
                place: "high declaration",
                ..
            }
        ));
        assert!(matches!(
            parse_spec("P := 0 \\ {tau};").unwrap_err(),
            ParseError::TauNotAllowed {
                place: "restriction set",
                ..
            }
        ));
        assert!(matches!(
            parse_spec("P := 0 |[tau]| 0;").unwrap_err(),
            ParseError::TauNotAllowed {
                place: "synchronization set",
                ..
            }
        ));
    }

    #[test]
    fn bare_tau_is_not_a_process() {
        assert!(parse_spec("P := tau;").is_err());
    }

    #[test]
    fn error_positions_are_line_and_column() {
        let err = parse_spec("P := a .\n  ;").unwrap_err();
        let ParseError::Unexpected { line, col, .. } = err else {
            panic!()
        };
        assert_eq!((line, col), (2, 3));
    }

    #[test]
    fn parse_root_accepts_inline_terms() {
        let m = parse_spec("high h; Auth := h . Auth;").unwrap();
        assert!(m.parse_root("Auth").is_ok());
        assert!(m.parse_root("Auth \\ {h}").is_ok());
        assert!(m.parse_root("(Auth |[h]| h . 0) / {h}").is_ok());
        assert!(m.parse_root("Nope").is_err());
    }
}
