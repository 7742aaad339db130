use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Zero,
    Tau,
    High,
    Assign,
    Semi,
    Dot,
    Plus,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Backslash,
    Slash,
    ParOpen,
    ParClose,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Zero => "`0`".into(),
            Tok::Tau => "`tau`".into(),
            Tok::High => "`high`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Slash => "`/`".into(),
            Tok::ParOpen => "`|[`".into(),
            Tok::ParClose => "`]|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub(super) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! tok {
        ($t:expr, $l:expr, $c:expr) => {
            out.push(Token {
                tok: $t,
                line: $l,
                col: $c,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '/' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'/') {
                    // Comment to end of line.
                    for c in chars.by_ref() {
                        if c == '\n' {
                            line += 1;
                            col = 1;
                            break;
                        }
                    }
                } else {
                    tok!(Tok::Slash, tl, tc);
                }
            }
            '|' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'[') {
                    chars.next();
                    col += 1;
                    tok!(Tok::ParOpen, tl, tc);
                } else {
                    return Err(ParseError::Lex {
                        line: tl,
                        col: tc,
                        ch: '|',
                    });
                }
            }
            ']' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'|') {
                    chars.next();
                    col += 1;
                    tok!(Tok::ParClose, tl, tc);
                } else {
                    return Err(ParseError::Lex {
                        line: tl,
                        col: tc,
                        ch: ']',
                    });
                }
            }
            ':' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    tok!(Tok::Assign, tl, tc);
                } else {
                    return Err(ParseError::Lex {
                        line: tl,
                        col: tc,
                        ch: ':',
                    });
                }
            }
            ';' => {
                chars.next();
                col += 1;
                tok!(Tok::Semi, tl, tc);
            }
            '.' => {
                chars.next();
                col += 1;
                tok!(Tok::Dot, tl, tc);
            }
            '+' => {
                chars.next();
                col += 1;
                tok!(Tok::Plus, tl, tc);
            }
            ',' => {
                chars.next();
                col += 1;
                tok!(Tok::Comma, tl, tc);
            }
            '(' => {
                chars.next();
                col += 1;
                tok!(Tok::LParen, tl, tc);
            }
            ')' => {
                chars.next();
                col += 1;
                tok!(Tok::RParen, tl, tc);
            }
            '{' => {
                chars.next();
                col += 1;
                tok!(Tok::LBrace, tl, tc);
            }
            '}' => {
                chars.next();
                col += 1;
                tok!(Tok::RBrace, tl, tc);
            }
            '\\' => {
                chars.next();
                col += 1;
                tok!(Tok::Backslash, tl, tc);
            }
            '0' => {
                chars.next();
                col += 1;
                tok!(Tok::Zero, tl, tc);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let t = match name.as_str() {
                    "tau" => Tok::Tau,
                    "high" => Tok::High,
                    _ => Tok::Ident(name),
                };
                tok!(t, tl, tc);
            }
            other => {
                return Err(ParseError::Lex {
                    line: tl,
                    col: tc,
                    ch: other,
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
