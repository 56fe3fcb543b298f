//! Text parsers: the plain expression grammar (see [`crate::render`]) and
//! the algebra-definition file format.
//!
//! Algebra files are line-oriented:
//! ```text
//! # comment
//! name my-algebra
//! dim 3
//! generators H P1 P2 P3 K1 K2 K3
//! bracket K1 H = -i*P1
//! bracket H P1 = i*tau^-2*K1
//! bracket M12 K2 = i*K1
//! ```
//! `dim` must precede any generator use. The `generators` line is optional;
//! without it the generator set is inferred from the brackets. Bracket
//! right-hand sides are sums of `coeff*GEN` terms (or `0`); coefficients
//! follow the plain expression grammar restricted to rationals, `i` and
//! `tau^n`. `M21` denotes `-M12`.

use crate::algebra::{AlgebraError, Generator, LieAlgebra, LinComb};
use crate::expr::{Atom, Expr, ExprTree, Param};
use crate::scalar::GaussianRational;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("exponent on {0:?} must be a non-negative integer (only tau admits negative powers)")]
    NegativePower(String),
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("not a generator: {0:?}")]
    NotAGenerator(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            ' ' | '\t' => pos += 1,
            '+' => {
                out.push(Token::Plus);
                pos += 1;
            }
            '-' => {
                out.push(Token::Minus);
                pos += 1;
            }
            '*' => {
                out.push(Token::Star);
                pos += 1;
            }
            '^' => {
                out.push(Token::Caret);
                pos += 1;
            }
            '/' => {
                out.push(Token::Slash);
                pos += 1;
            }
            '(' => {
                out.push(Token::LParen);
                pos += 1;
            }
            ')' => {
                out.push(Token::RParen);
                pos += 1;
            }
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let text: String = chars[start..pos].iter().collect();
                let n = text.parse().map_err(|_| ParseError::BadNumber(text))?;
                out.push(Token::Int(n));
            }
            // C+ / C- / S+ / S- are single tokens: a bare C or S is not an
            // identifier, so the greedy read is unambiguous
            'C' | 'S' if matches!(chars.get(pos + 1), Some('+') | Some('-')) => {
                out.push(Token::Ident(format!("{}{}", c, chars[pos + 1])));
                pos += 2;
            }
            _ if c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                out.push(Token::Ident(chars[start..pos].iter().collect()));
            }
            _ => return Err(ParseError::UnexpectedChar(c, pos)),
        }
    }
    Ok(out)
}

/// Maps an identifier to an atom. `beta<k>_<kl>` and `beta<k>_<k>_<l>` name
/// antisymmetric array components, `beta<k>` scalar parameters.
fn ident_atom(name: &str) -> Result<Option<Atom>, ParseError> {
    match name {
        "t" => return Ok(Some(Atom::T)),
        "i" => return Ok(None), // imaginary unit, handled by the caller
        "tau" => return Ok(None),
        "C+" => return Ok(Some(Atom::CPlus)),
        "C-" => return Ok(Some(Atom::CMinus)),
        "S+" => return Ok(Some(Atom::SPlus)),
        "S-" => return Ok(Some(Atom::SMinus)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('x') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            let idx: u32 = rest
                .parse()
                .map_err(|_| ParseError::BadNumber(name.into()))?;
            if idx >= 1 && idx <= u8::MAX as u32 {
                return Ok(Some(Atom::X(idx as u8)));
            }
        }
    }
    if let Some(rest) = name.strip_prefix("beta") {
        if let Some(p) = parse_beta_suffix(rest) {
            return Ok(Some(Atom::Param(p)));
        }
    }
    Ok(Some(Atom::Param(Param::Named(name.to_string()))))
}

fn parse_beta_suffix(rest: &str) -> Option<Param> {
    let parts: Vec<&str> = rest.split('_').collect();
    let twist: u8 = parts.first()?.parse().ok()?;
    if !(1..=15).contains(&twist) {
        return None;
    }
    match parts.len() {
        1 => Some(Param::BetaScalar { twist }),
        2 => {
            let idx = parts[1];
            if idx.len() == 2 && idx.chars().all(|c| c.is_ascii_digit()) {
                let k = idx[0..1].parse().ok()?;
                let l = idx[1..2].parse().ok()?;
                Some(Param::Beta { twist, k, l })
            } else {
                None
            }
        }
        3 => {
            let k = parts[1].parse().ok()?;
            let l = parts[2].parse().ok()?;
            Some(Param::Beta { twist, k, l })
        }
        _ => None,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<(), ParseError> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            Some(found) => Err(ParseError::UnexpectedToken(format!("{found:?}"))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn parse_sum(&mut self) -> Result<ExprTree, ParseError> {
        let mut items = vec![self.parse_term()?];
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    items.push(self.parse_term()?);
                }
                Token::Minus => {
                    self.next();
                    items.push(ExprTree::Neg(Box::new(self.parse_term()?)));
                }
                _ => break,
            }
        }
        Ok(ExprTree::Sum(items))
    }

    fn parse_term(&mut self) -> Result<ExprTree, ParseError> {
        let mut items = vec![self.parse_factor()?];
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            items.push(self.parse_factor()?);
        }
        Ok(ExprTree::Product(items))
    }

    fn parse_signed_int(&mut self) -> Result<i64, ParseError> {
        match self.next() {
            Some(Token::Int(n)) => Ok(n),
            Some(Token::Minus) => match self.next() {
                Some(Token::Int(n)) => Ok(-n),
                other => Err(ParseError::UnexpectedToken(format!("{other:?}"))),
            },
            other => Err(ParseError::UnexpectedToken(format!("{other:?}"))),
        }
    }

    fn parse_factor(&mut self) -> Result<ExprTree, ParseError> {
        match self.next() {
            Some(Token::Minus) => Ok(ExprTree::Neg(Box::new(self.parse_factor()?))),
            Some(Token::LParen) => {
                let inner = self.parse_sum()?;
                self.expect(Token::RParen)?;
                self.maybe_pow(inner, "(...)")
            }
            Some(Token::Int(n)) => {
                // rational literal n or n/m
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Token::Int(m)) if m != 0 => {
                            Ok(ExprTree::Scalar(GaussianRational::from_ratio(n, m)))
                        }
                        other => Err(ParseError::UnexpectedToken(format!("{other:?}"))),
                    }
                } else {
                    self.maybe_pow(ExprTree::Scalar(GaussianRational::from_int(n)), "int")
                }
            }
            Some(Token::Ident(name)) => {
                if name == "i" {
                    return self.maybe_pow(ExprTree::Scalar(GaussianRational::i()), "i");
                }
                if name == "tau" {
                    if matches!(self.peek(), Some(Token::Caret)) {
                        self.next();
                        let n = self.parse_signed_int()?;
                        return Ok(ExprTree::TauPow(
                            i32::try_from(n).map_err(|_| ParseError::BadNumber(n.to_string()))?,
                        ));
                    }
                    return Ok(ExprTree::TauPow(1));
                }
                let atom = ident_atom(&name)?.expect("non-unit identifiers map to atoms");
                self.maybe_pow(ExprTree::Atom(atom), &name)
            }
            Some(other) => Err(ParseError::UnexpectedToken(format!("{other:?}"))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn maybe_pow(&mut self, base: ExprTree, what: &str) -> Result<ExprTree, ParseError> {
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            let n = self.parse_signed_int()?;
            if n < 0 {
                return Err(ParseError::NegativePower(what.to_string()));
            }
            return Ok(ExprTree::Pow(Box::new(base), n as u32));
        }
        Ok(base)
    }
}

/// Parses a bare parameter name (`beta10_12`, `beta5`, `myparam`).
pub fn parse_param_name(name: &str) -> Option<Param> {
    if name.is_empty() || !name.chars().next().unwrap().is_ascii_alphabetic() {
        return None;
    }
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    match ident_atom(name) {
        Ok(Some(Atom::Param(p))) => Some(p),
        _ => None,
    }
}

/// Parses comma-separated `name=value` deformation-parameter assignments.
pub fn parse_param_assignments(input: &str) -> Result<Vec<(Param, Expr)>, ParseError> {
    let mut out = Vec::new();
    for piece in input.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, value) = piece
            .split_once('=')
            .ok_or_else(|| ParseError::UnexpectedToken(piece.to_string()))?;
        let param = parse_param_name(name.trim())
            .ok_or_else(|| ParseError::UnexpectedToken(name.to_string()))?;
        out.push((param, parse_expr(value.trim())?));
    }
    Ok(out)
}

/// Parses the plain expression grammar into a raw tree.
pub fn parse_expr_tree(input: &str) -> Result<ExprTree, ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let tree = parser.parse_sum()?;
    if parser.pos != parser.tokens.len() {
        return Err(ParseError::UnexpectedToken(format!(
            "{:?}",
            parser.tokens[parser.pos]
        )));
    }
    Ok(tree)
}

/// Parses and normalizes in one step.
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    Ok(crate::expr::normalize(&parse_expr_tree(input)?))
}

/// Parses a generator token (`H`, `P1`, `M12`, `M1_2`), returning the
/// canonical generator and the orientation sign.
pub fn parse_generator(token: &str) -> Result<(Generator, i64), ParseError> {
    let err = || ParseError::NotAGenerator(token.to_string());
    if token == "H" {
        return Ok((Generator::H, 1));
    }
    let mut chars = token.chars();
    let kind = chars.next().ok_or_else(err)?;
    let rest: String = chars.collect();
    if kind == 'M' {
        let (i, j) = if let Some((a, b)) = rest.split_once('_') {
            (
                a.parse::<u8>().map_err(|_| err())?,
                b.parse::<u8>().map_err(|_| err())?,
            )
        } else if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
            (rest[0..1].parse().unwrap(), rest[1..2].parse().unwrap())
        } else {
            return Err(err());
        };
        return Generator::rotation(i, j).ok_or_else(err);
    }
    let idx: u8 = rest.parse().map_err(|_| err())?;
    if idx == 0 {
        return Err(err());
    }
    let g = match kind {
        'P' => Generator::P(idx),
        'K' => Generator::K(idx),
        'F' => Generator::F(idx),
        'R' => Generator::R(idx),
        _ => return Err(err()),
    };
    Ok((g, 1))
}

/// Splits a sum at top level (outside parentheses), keeping signs.
fn split_terms(input: &str) -> Vec<(i64, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut sign = 1i64;
    let mut at_term_start = true;
    for c in input.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
                at_term_start = false;
            }
            ')' => {
                depth -= 1;
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                if at_term_start && current.trim().is_empty() {
                    if c == '-' {
                        sign = -sign;
                    }
                } else {
                    out.push((sign, current.trim().to_string()));
                    current = String::new();
                    sign = if c == '-' { -1 } else { 1 };
                    at_term_start = true;
                }
            }
            _ => {
                if !c.is_whitespace() {
                    at_term_start = false;
                }
                current.push(c);
            }
        }
    }
    if !current.trim().is_empty() {
        out.push((sign, current.trim().to_string()));
    }
    out
}

/// Parses `bracket` right-hand sides: `0` or a sum of `[coeff*]GEN` terms.
pub fn parse_lincomb(input: &str) -> Result<LinComb, ParseError> {
    let trimmed = input.trim();
    if trimmed == "0" {
        return Ok(LinComb::zero());
    }
    let mut out = LinComb::zero();
    for (sign, term) in split_terms(trimmed) {
        // the generator is the last '*'-separated factor
        let (coeff_text, gen_text) = match term.rfind('*') {
            Some(idx) => (&term[..idx], term[idx + 1..].trim()),
            None => ("", term.trim()),
        };
        let (gen, orient) = parse_generator(gen_text)?;
        let coeff = if coeff_text.trim().is_empty() {
            Expr::one()
        } else {
            parse_expr(coeff_text)?
        };
        let signed = coeff.scale(&GaussianRational::from_int(sign * orient));
        out = out.add(&LinComb::term(gen, signed));
    }
    Ok(out)
}

/// Parses the algebra-definition file format documented in the module docs.
pub fn parse_algebra_file(text: &str) -> Result<LieAlgebra, AlgebraError> {
    let mut dim: Option<u8> = None;
    let mut name = "custom".to_string();
    let mut declared: Option<BTreeSet<Generator>> = None;
    let mut brackets: Vec<(Generator, Generator, LinComb, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| AlgebraError::Parse {
            line: lineno + 1,
            msg,
        };
        let mut words = line.split_whitespace();
        match words.next() {
            Some("name") => {
                name = words.collect::<Vec<_>>().join(" ");
            }
            Some("dim") => {
                let d: u8 = words
                    .next()
                    .ok_or_else(|| err("dim needs a value".into()))?
                    .parse()
                    .map_err(|_| err("dim must be an integer in 1..=255".into()))?;
                if d == 0 {
                    return Err(AlgebraError::InvalidDimension(0));
                }
                dim = Some(d);
            }
            Some("generators") => {
                let mut set = BTreeSet::new();
                for tok in words {
                    let (g, sign) = parse_generator(tok).map_err(|e| err(e.to_string()))?;
                    if sign != 1 {
                        return Err(err(format!("generator list cannot contain {tok}")));
                    }
                    set.insert(g);
                }
                declared = Some(set);
            }
            Some("bracket") => {
                let a_tok = words
                    .next()
                    .ok_or_else(|| err("bracket needs two generators".into()))?;
                let b_tok = words
                    .next()
                    .ok_or_else(|| err("bracket needs two generators".into()))?;
                let rest: Vec<&str> = words.collect();
                let rhs = rest.join(" ");
                let rhs = rhs
                    .strip_prefix('=')
                    .map(str::trim)
                    .ok_or_else(|| err("expected '=' after the generator pair".into()))?;
                let (a, sa) = parse_generator(a_tok).map_err(|e| err(e.to_string()))?;
                let (b, sb) = parse_generator(b_tok).map_err(|e| err(e.to_string()))?;
                let value = parse_lincomb(rhs)
                    .map_err(|e| err(e.to_string()))?
                    .scale(&Expr::int(sa * sb));
                brackets.push((a, b, value, lineno + 1));
            }
            Some(other) => {
                return Err(err(format!("unknown directive {other:?}")));
            }
            None => unreachable!(),
        }
    }

    let dim = dim.ok_or(AlgebraError::Parse {
        line: 0,
        msg: "missing 'dim' line".into(),
    })?;
    // infer the generator set when not declared
    let mut gens = declared.unwrap_or_default();
    for (a, b, value, _) in &brackets {
        gens.insert(*a);
        gens.insert(*b);
        for (g, _) in value.iter() {
            gens.insert(*g);
        }
    }
    for g in &gens {
        if g.max_index() > dim {
            return Err(AlgebraError::GeneratorOutOfRange(g.to_string(), dim));
        }
    }
    let mut alg = LieAlgebra::custom(&name, dim, gens.into_iter().collect());
    for (a, b, value, line) in brackets {
        if a == b && !value.is_zero() {
            return Err(AlgebraError::Parse {
                line,
                msg: format!("[{a}, {a}] must vanish"),
            });
        }
        alg.override_bracket(a, b, value);
    }
    Ok(alg)
}
