//! Recursive-descent parser for the concept grammar:
//!
//! ```text
//! concept := "Top" | "Bottom" | IDENT | "not" concept
//!          | "(" concept ("and"|"or") concept ")"
//!          | "(" ("some"|"all") role "." concept ")"
//!          | "(" (">="|"<=") NAT role "." concept ")"
//! role    := IDENT | "inv(" role ")" | role "o" role | "(" role ")"
//!          | role "&" role | role "|" role        -- "o" > "&" > "|"
//! ```

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use super::{Concept, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    InvalidCharacter(char),
    #[error("negative cardinality")]
    NegativeCardinality,
    #[error("cardinality must be a non-negative integer")]
    NonIntegerCardinality,
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("trailing input {0}")]
    TrailingInput(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Dot,
    Geq,
    Leq,
    Amp,
    Pipe,
    Nat(BigUint),
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Geq => "'>='".into(),
            Tok::Leq => "'<='".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Nat(n) => format!("number {n}"),
            Tok::Ident(s) => format!("{s:?}"),
        }
    }
}

fn err(position: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { position, kind }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'.' => out.push((start, Tok::Dot)),
            b'&' => out.push((start, Tok::Amp)),
            b'|' => out.push((start, Tok::Pipe)),
            b'>' | b'<' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((start, if c == b'>' { Tok::Geq } else { Tok::Leq }));
                i += 2;
                continue;
            }
            b'-' if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) => {
                return Err(err(start, ParseErrorKind::NegativeCardinality));
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if bytes.get(i) == Some(&b'.') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    return Err(err(start, ParseErrorKind::NonIntegerCardinality));
                }
                let n = BigUint::from_str(&text[start..i]).expect("ascii digits");
                out.push((start, Tok::Nat(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, ParseErrorKind::InvalidCharacter(ch)));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self, expected: &'static str) -> Result<Tok, ParseError> {
        match self.toks.get(self.pos) {
            Some((_, t)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(err(self.end, ParseErrorKind::UnexpectedEnd(expected))),
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => err(
                self.offset(),
                ParseErrorKind::Unexpected {
                    expected,
                    found: t.describe(),
                },
            ),
            None => err(self.end, ParseErrorKind::UnexpectedEnd(expected)),
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == word)
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                match s.as_str() {
                    "Top" => {
                        self.pos += 1;
                        Ok(Concept::Top)
                    }
                    "Bottom" => {
                        self.pos += 1;
                        Ok(Concept::Bottom)
                    }
                    "not" => {
                        self.pos += 1;
                        Ok(Concept::Not(Arc::new(self.concept()?)))
                    }
                    "and" | "or" | "some" | "all" | "o" => Err(self.unexpected("concept")),
                    _ => {
                        self.pos += 1;
                        Ok(Concept::Atom(s.as_str().into()))
                    }
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.parenthesized()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(c)
            }
            _ => Err(self.unexpected("concept")),
        }
    }

    fn parenthesized(&mut self) -> Result<Concept, ParseError> {
        if self.is_ident("some") || self.is_ident("all") {
            let existential = self.is_ident("some");
            self.pos += 1;
            let r = self.role()?;
            self.expect(Tok::Dot, "'.'")?;
            let c = Arc::new(self.concept()?);
            return Ok(if existential {
                Concept::Exists(r, c)
            } else {
                Concept::Forall(r, c)
            });
        }
        if matches!(self.peek(), Some(Tok::Geq | Tok::Leq)) {
            let at_least = self.peek() == Some(&Tok::Geq);
            self.pos += 1;
            let n = match self.next("cardinality")? {
                Tok::Nat(n) => n,
                t => {
                    self.pos -= 1;
                    return Err(err(
                        self.offset(),
                        ParseErrorKind::Unexpected {
                            expected: "cardinality",
                            found: t.describe(),
                        },
                    ));
                }
            };
            let r = self.role()?;
            self.expect(Tok::Dot, "'.'")?;
            let c = Arc::new(self.concept()?);
            return Ok(if at_least {
                Concept::AtLeast(n, r, c)
            } else {
                Concept::AtMost(n, r, c)
            });
        }
        let left = Arc::new(self.concept()?);
        let conjunction = if self.is_ident("and") {
            true
        } else if self.is_ident("or") {
            false
        } else {
            return Err(self.unexpected("'and' or 'or'"));
        };
        self.pos += 1;
        let right = Arc::new(self.concept()?);
        Ok(if conjunction {
            Concept::And(left, right)
        } else {
            Concept::Or(left, right)
        })
    }

    fn role(&mut self) -> Result<RoleExpr, ParseError> {
        let mut parts = vec![self.role_intersection()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            parts.push(self.role_intersection()?);
        }
        Ok(RoleExpr::union(parts))
    }

    fn role_intersection(&mut self) -> Result<RoleExpr, ParseError> {
        let mut parts = vec![self.role_chain()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            parts.push(self.role_chain()?);
        }
        Ok(RoleExpr::intersection(parts))
    }

    fn role_chain(&mut self) -> Result<RoleExpr, ParseError> {
        let mut parts = vec![self.role_primary()?];
        while self.is_ident("o") {
            self.pos += 1;
            parts.push(self.role_primary()?);
        }
        Ok(RoleExpr::chain(parts))
    }

    fn role_primary(&mut self) -> Result<RoleExpr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "inv" && self.peek_at(1) == Some(&Tok::LParen) => {
                self.pos += 2;
                let r = self.role()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(RoleExpr::Inverse(Box::new(r)))
            }
            Some(Tok::Ident(s)) if s != "o" => {
                let name = s.as_str().into();
                self.pos += 1;
                Ok(RoleExpr::Atomic(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let r = self.role()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(r)
            }
            _ => Err(self.unexpected("role")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(err(
                self.offset(),
                ParseErrorKind::TrailingInput(t.describe()),
            )),
        }
    }
}

/// Parses a concept description.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let c = p.concept()?;
    p.finish()?;
    Ok(c)
}

/// Parses a bare role expression.
pub fn parse_role(text: &str) -> Result<RoleExpr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let r = p.role()?;
    p.finish()?;
    Ok(r)
}
