//! Line-oriented text format:
//!
//! ```text
//! # comment
//! vars: y1 y2 y3
//! y1 + 2 y2 - 3/4*y3 <= 3
//! -y1 > -1
//! ```
//!
//! A `vars:` header, when present, fixes the variable order and must declare
//! every variable used; otherwise variables are ordered by first appearance.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use super::{Constraint, LinearSystem, LinsysError, Relation};
use crate::ratfield::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown relation `{token}`")]
    UnknownRelation {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: `{token}` is not a rational number")]
    BadNumber {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: LinsysError },
    #[error("invalid JSON system: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Rel(Relation),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Rel(r) => format!("relation `{r}`"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(line_no: usize, line: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '.' | '/')) {
                // a number like `2y1` without space: stop before the identifier
                if chars[i].is_ascii_alphabetic() && chars[start..i].iter().all(char::is_ascii_digit) {
                    break;
                }
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = parse_rational(&text).ok_or_else(|| ParseError::BadNumber {
                line: line_no,
                column,
                token: text.clone(),
            })?;
            out.push((column, Tok::Num(value)));
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((column, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        if matches!(c, '<' | '>' | '=' | '!') {
            let start = i;
            while i < chars.len() && matches!(chars[i], '<' | '>' | '=' | '!') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let rel = Relation::from_token(&text).ok_or(ParseError::UnknownRelation {
                line: line_no,
                column,
                token: text,
            })?;
            out.push((column, Tok::Rel(rel)));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            _ => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((column, tok));
        i += 1;
    }
    Ok(out)
}

/// Terms, relation and right-hand side of one parsed row.
type ParsedRow = (Vec<(String, Rational)>, Relation, Rational);

struct LineParser<'a> {
    line: usize,
    end_column: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(c, _)| *c)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            message,
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                Some(false)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn term(&mut self, negative: bool) -> Result<(String, Rational), ParseError> {
        let coeff = match self.peek() {
            Some(Tok::Num(_)) => {
                let Some(Tok::Num(n)) = self.bump() else { unreachable!() };
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                }
                n
            }
            _ => Rational::from_integer(1.into()),
        };
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else { unreachable!() };
                Ok((name, if negative { -coeff } else { coeff }))
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn constraint(&mut self) -> Result<ParsedRow, ParseError> {
        let mut terms = Vec::new();
        let negative = self.sign().unwrap_or(false);
        terms.push(self.term(negative)?);
        let relation = loop {
            match self.peek() {
                Some(Tok::Rel(r)) => {
                    let r = *r;
                    self.pos += 1;
                    break r;
                }
                Some(Tok::Plus | Tok::Minus) => {
                    let negative = self.sign().unwrap_or(false);
                    terms.push(self.term(negative)?);
                }
                _ => return Err(self.unexpected("`+`, `-` or a relation")),
            }
        };
        let negative = self.sign().unwrap_or(false);
        let rhs = match self.bump() {
            Some(Tok::Num(n)) => {
                if negative {
                    -n
                } else {
                    n
                }
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a rational right-hand side"));
            }
        };
        if self.peek().is_some() {
            return Err(self.unexpected("end of line"));
        }
        Ok((terms, relation, rhs))
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

pub fn parse_system(text: &str) -> Result<LinearSystem, ParseError> {
    let mut header: Option<Vec<String>> = None;
    let mut seen: Vec<String> = Vec::new();
    let mut constraints = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let offset = line.len() - rest.len();
            if header.is_some() || !constraints.is_empty() {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: line.len() - trimmed.len() + 1,
                    message: "`vars:` header must come once, before any constraint".into(),
                });
            }
            let mut names = Vec::new();
            for (column, tok) in lex(line_no, rest)? {
                match tok {
                    Tok::Ident(name) => names.push(name),
                    other => {
                        return Err(ParseError::Syntax {
                            line: line_no,
                            column: offset + column,
                            message: format!("expected a variable name, found {}", other.describe()),
                        })
                    }
                }
            }
            header = Some(names);
            continue;
        }
        let toks = lex(line_no, line)?;
        let mut p = LineParser {
            line: line_no,
            end_column: line.chars().count() + 1,
            toks: &toks,
            pos: 0,
        };
        let (terms, relation, rhs) = p.constraint()?;
        let mut coeffs: BTreeMap<String, Rational> = BTreeMap::new();
        for (name, c) in terms {
            if let Some(h) = &header {
                if !h.contains(&name) {
                    return Err(ParseError::Invalid {
                        line: line_no,
                        source: LinsysError::UnknownVariable(name),
                    });
                }
            } else if !seen.contains(&name) {
                seen.push(name.clone());
            }
            *coeffs.entry(name).or_insert_with(Rational::zero) += c;
        }
        let c = Constraint::new(coeffs, relation, rhs)
            .map_err(|source| ParseError::Invalid { line: line_no, source })?;
        constraints.push(c);
    }
    let variables = header.unwrap_or(seen);
    LinearSystem::new(variables, constraints).map_err(|source| ParseError::Invalid { line: 0, source })
}
