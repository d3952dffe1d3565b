//! Polynomial expression parser.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! input   := expr [ '=' expr ]
//! expr    := [sign] term { sign term }
//! term    := factor { ['*' | '/'] factor }      // '*' may be omitted
//! factor  := sign factor | atom [ ('^' | '**') integer ]
//! atom    := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are polynomial variables (either case) or generator symbols
//! of the coefficient field. An unknown identifier is split greedily into
//! known ones, so `XYZ` reads as `X*Y*Z` and `s7X` as `s7*X`. Division is
//! only allowed by nonzero constants.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fields::{Field, FieldElement};
use crate::poly::{MultiPoly, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Eq => f.write_str("="),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|p| p.1).collect();
                out.push((pos, Tok::Num(s.parse().expect("digits"))));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                out.push((pos, Tok::Ident(chars[start..k].iter().map(|p| p.1).collect())));
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' | '\u{2212}' => Tok::Minus,
                    '*' | '\u{b7}' => {
                        if chars.get(k + 1).is_some_and(|p| p.1 == '*') {
                            k += 1;
                            Tok::Caret
                        } else {
                            Tok::Star
                        }
                    }
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' | '[' => Tok::LParen,
                    ')' | ']' => Tok::RParen,
                    '=' => Tok::Eq,
                    _ => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
                };
                out.push((pos, tok));
                k += 1;
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    field: &'a Field,
    vars: Vars,
    symbols: Vec<(String, MultiPoly)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.field, &self.vars)
    }

    /// Top-level summands with their start positions, signs applied.
    fn summands(&mut self) -> Result<Vec<(usize, MultiPoly)>, ParseError> {
        let mut out = Vec::new();
        let mut negate = false;
        if let Some(Tok::Plus | Tok::Minus) = self.peek() {
            negate = self.bump() == Some(Tok::Minus);
        }
        loop {
            let pos = self.pos();
            let t = self.term()?;
            out.push((pos, if negate { -&t } else { t }));
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(out),
            }
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.zero();
        for (_, t) in self.summands()? {
            acc = &acc + &t;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ParseError::new(pos, "division only by nonzero constants"));
                    }
                    let inv = d.coeff(&vec![0; self.vars.len()]).inv().map_err(|e| ParseError::new(pos, e.to_string()))?;
                    acc = acc.scale(&inv);
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                return Ok(-&self.factor()?);
            }
            Some(Tok::Plus) => {
                self.bump();
                return self.factor();
            }
            _ => {}
        }
        // a split identifier such as `XY` binds the exponent to its last symbol
        let (head, base) = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError::new(pos, "exponent too large"))?;
                    return Ok(&head * &base.pow(e));
                }
                _ => return Err(ParseError::new(pos, "expected a nonnegative integer exponent")),
            }
        }
        Ok(&head * &base)
    }

    fn one(&self) -> MultiPoly {
        MultiPoly::constant(&self.vars, self.field.one())
    }

    fn atom(&mut self) -> Result<(MultiPoly, MultiPoly), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok((self.one(), MultiPoly::constant(&self.vars, self.field.from_bigint(&n)))),
            Some(Tok::Ident(name)) => self.identifier(&name, pos),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok((self.one(), e)),
                    _ => Err(ParseError::new(self.toks.get(self.at - 1).map_or(self.end, |t| t.0), "expected `)`")),
                }
            }
            Some(t) => Err(ParseError::new(pos, format!("unexpected `{t}`"))),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }

    fn lookup(&self, name: &str) -> Option<MultiPoly> {
        self.symbols.iter().find(|(s, _)| s == name).map(|(_, p)| p.clone())
    }

    fn identifier(&self, name: &str, pos: usize) -> Result<(MultiPoly, MultiPoly), ParseError> {
        if let Some(p) = self.lookup(name) {
            return Ok((self.one(), p));
        }
        // greedy split into known symbols
        let mut acc = self.one();
        let mut last = self.one();
        let mut rest = name;
        while !rest.is_empty() {
            let best = self
                .symbols
                .iter()
                .filter(|(s, _)| rest.starts_with(s.as_str()))
                .max_by_key(|(s, _)| s.len());
            match best {
                Some((s, p)) => {
                    acc = &acc * &last;
                    last = p.clone();
                    rest = &rest[s.len()..];
                }
                None => {
                    let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
                    if digits > 0 && rest.len() < name.len() {
                        return Err(ParseError::new(pos, format!("write `^` for exponents in `{name}`")));
                    }
                    return Err(ParseError::new(pos, format!("undeclared symbol `{name}`")));
                }
            }
        }
        Ok((acc, last))
    }
}

fn parser<'a>(text: &str, field: &'a Field, vars: &[&str]) -> Result<Parser<'a>, ParseError> {
    let vars = Vars::new(vars);
    let mut symbols: Vec<(String, MultiPoly)> = Vec::new();
    for (k, name) in vars.names().iter().enumerate() {
        symbols.push((name.clone(), MultiPoly::var(field, &vars, k)));
    }
    for (name, g) in field.symbols() {
        if symbols.iter().any(|(s, _)| *s == name) {
            continue;
        }
        symbols.push((name, MultiPoly::constant(&vars, g)));
    }
    for (k, name) in vars.names().iter().enumerate() {
        for alias in [name.to_lowercase(), name.to_uppercase()] {
            if !symbols.iter().any(|(s, _)| *s == alias) {
                symbols.push((alias, MultiPoly::var(field, &vars, k)));
            }
        }
    }
    Ok(Parser { toks: lex(text)?, at: 0, end: text.len(), field, vars, symbols })
}

/// Summands of `lhs - rhs` with source positions.
fn parse_summands(text: &str, field: &Field, vars: &[&str]) -> Result<Vec<(usize, MultiPoly)>, ParseError> {
    let mut p = parser(text, field, vars)?;
    if p.toks.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut out = p.summands()?;
    if p.peek() == Some(&Tok::Eq) {
        p.bump();
        out.extend(p.summands()?.into_iter().map(|(pos, t)| (pos, -&t)));
    }
    if let Some(t) = p.peek() {
        return Err(ParseError::new(p.pos(), format!("unexpected `{t}`")));
    }
    Ok(out)
}

/// Parses a polynomial in `vars` over `field`; `lhs = rhs` yields `lhs - rhs`.
pub fn parse_polynomial(text: &str, field: &Field, vars: &[&str]) -> Result<MultiPoly, ParseError> {
    let summands = parse_summands(text, field, vars)?;
    let mut acc = MultiPoly::zero(field, &Vars::new(vars));
    for (_, t) in summands {
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Parses a field element such as `3/4`, `(1+i)/2` or `-s7`.
pub fn parse_element(text: &str, field: &Field) -> Result<FieldElement, ParseError> {
    let p = parse_polynomial(text, field, &[])?;
    Ok(p.coeff(&[]))
}

/// Parses a homogeneous quartic in `X, Y, Z` (either case).
pub fn parse_quartic(text: &str, field: &Field) -> Result<crate::TernaryQuartic, ParseError> {
    let summands = parse_summands(text, field, &["X", "Y", "Z"])?;
    let mut acc = MultiPoly::zero(field, &Vars::new(&["X", "Y", "Z"]));
    let mut offender = None;
    for (pos, t) in summands {
        let bad = t.terms().find(|(m, _)| m.iter().sum::<u32>() != 4).map(|(m, _)| m.iter().sum::<u32>());
        if let (Some(d), None) = (bad, &offender) {
            offender = Some((pos, d));
        }
        acc = &acc + &t;
    }
    if acc.is_zero() {
        return Err(ParseError::new(0, "zero polynomial"));
    }
    if let Some((pos, d)) = offender {
        if !acc.is_homogeneous() || acc.total_degree() != Some(4) {
            let what = if acc.is_homogeneous() { "not of degree 4" } else { "inhomogeneous" };
            return Err(ParseError::new(pos, format!("{what}: term of degree {d}")));
        }
    }
    Ok(crate::TernaryQuartic::new(acc).expect("checked homogeneous quartic"))
}
