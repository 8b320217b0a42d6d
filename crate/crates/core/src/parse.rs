//! Text input for curves, families and points.
//!
//! The polynomial grammar is deliberately small:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := rational | variable | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit (`2*X`, never `2X`), exponents are
//! nonnegative integer literals, and `/` is only valid inside a rational
//! literal `a/b`. Variable names are single letters and case-insensitive.
//! Errors carry the byte offset of the offending token.

use crate::error::Error;
use crate::rational::Rational;
use crate::ternary::TernaryForm;
use crate::univariate::UnivariatePoly;
use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::BTreeMap;

const MAX_EXPONENT: u32 = 512;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(input: &str) -> Result<Vec<Token>, Error> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n: BigInt = digits.parse().expect("digits");
                out.push(Token { tok: Tok::Int(n), pos });
                continue;
            }
            c if c.is_ascii_alphabetic() => Tok::Var(c.to_ascii_lowercase()),
            other => {
                return Err(Error::parse(pos, format!("unexpected character '{other}'")));
            }
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

/// Sparse polynomial in up to three named variables, used only while parsing.
#[derive(Debug, Clone, PartialEq)]
struct MultiPoly {
    terms: BTreeMap<[u16; 3], Rational>,
}

impl MultiPoly {
    fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        MultiPoly { terms }
    }

    fn variable(idx: usize) -> Self {
        let mut e = [0u16; 3];
        e[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rational::one());
        MultiPoly { terms }
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MultiPoly { terms }
    }

    fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<[u16; 3], Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = terms.entry(e).or_insert_with(Rational::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        MultiPoly { terms }
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    cursor: usize,
    input_len: usize,
    // Maps a lowercase variable letter to a slot in the exponent vector.
    vars: &'a [(char, usize)],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.input_len)
    }

    fn expr(&mut self) -> Result<MultiPoly, Error> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, Error> {
        let mut acc = self.factor()?;
        while let Some(t) = self.peek() {
            match &t.tok {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                // A value token right after a factor means the '*' was left out.
                Tok::Int(_) | Tok::Var(_) | Tok::LParen => {
                    return Err(Error::parse(
                        t.pos,
                        "missing '*' (multiplication must be explicit)".to_string(),
                    ));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, Error> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.next();
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.next();
            let pos = self.here();
            match self.next().map(|t| t.tok) {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(pos, "exponent too large".to_string()))?;
                    if e > MAX_EXPONENT {
                        return Err(Error::parse(pos, "exponent too large".to_string()));
                    }
                    return Ok(base.pow(e));
                }
                _ => {
                    return Err(Error::parse(
                        pos,
                        "expected a nonnegative integer exponent after '^'".to_string(),
                    ))
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, Error> {
        let pos = self.here();
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(n)) => {
                // Rational literal a/b.
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Slash)) {
                    self.next();
                    let dpos = self.here();
                    match self.next().map(|t| t.tok) {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(Error::parse(dpos, "zero denominator".to_string()));
                            }
                            Ok(MultiPoly::constant(Rational::new(n, d)))
                        }
                        _ => Err(Error::parse(
                            dpos,
                            "expected an integer denominator after '/'".to_string(),
                        )),
                    }
                } else {
                    Ok(MultiPoly::constant(Rational::from_integer(n)))
                }
            }
            Some(Tok::Var(c)) => match self.vars.iter().find(|(v, _)| *v == c) {
                Some((_, idx)) => Ok(MultiPoly::variable(*idx)),
                None => {
                    let allowed: String = self
                        .vars
                        .iter()
                        .map(|(v, _)| *v)
                        .collect::<Vec<_>>()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ");
                    Err(Error::parse(
                        pos,
                        format!("unknown variable '{c}' (allowed: {allowed})"),
                    ))
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let pos = self.here();
                match self.next().map(|t| t.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::parse(pos, "expected ')'".to_string())),
                }
            }
            Some(Tok::Slash) => Err(Error::parse(
                pos,
                "'/' is only allowed inside a rational literal a/b".to_string(),
            )),
            Some(_) => Err(Error::parse(pos, "expected a number, variable or '('".to_string())),
            None => Err(Error::parse(pos, "unexpected end of input".to_string())),
        }
    }
}

fn parse_multi(input: &str, vars: &[(char, usize)]) -> Result<MultiPoly, Error> {
    let tokens = lex(input)?;
    if tokens.is_empty() {
        return Err(Error::parse(0, "empty input".to_string()));
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        input_len: input.len(),
        vars,
    };
    let poly = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(Error::parse(t.pos, "unexpected trailing input".to_string()));
    }
    Ok(poly)
}

/// Parse a homogeneous ternary form in `X, Y, Z` (case-insensitive).
pub fn parse_ternary(input: &str) -> Result<TernaryForm, Error> {
    let poly = parse_multi(input, &[('x', 0), ('y', 1), ('z', 2)])?;
    if poly.terms.is_empty() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    TernaryForm::from_terms(
        poly.terms
            .into_iter()
            .map(|(e, c)| ((e[0], e[1], e[2]), c)),
    )
}

/// Parse a possibly inhomogeneous affine curve in `x, y`; the result is the
/// `X`-coefficient list of the minimal homogenization, i.e. entry `k` is the
/// `y`-polynomial multiplying `x^k`.
pub fn parse_affine_xy(input: &str) -> Result<Vec<UnivariatePoly>, Error> {
    let poly = parse_multi(input, &[('x', 0), ('y', 1)])?;
    multi_to_x_slices(&poly)
}

/// Parse a univariate polynomial in the named variable.
pub fn parse_univariate(input: &str, var: char) -> Result<UnivariatePoly, Error> {
    let poly = parse_multi(input, &[(var.to_ascii_lowercase(), 0)])?;
    let deg = poly.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (e, c) in &poly.terms {
        coeffs[e[0] as usize] = c.clone();
    }
    Ok(UnivariatePoly::new(coeffs))
}

fn multi_to_x_slices(poly: &MultiPoly) -> Result<Vec<UnivariatePoly>, Error> {
    if poly.terms.is_empty() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let dx = poly.terms.keys().map(|e| e[0] as usize).max().unwrap();
    let mut slices: Vec<Vec<Rational>> = vec![Vec::new(); dx + 1];
    for (e, c) in &poly.terms {
        let (k, j) = (e[0] as usize, e[1] as usize);
        if slices[k].len() <= j {
            slices[k].resize(j + 1, Rational::zero());
        }
        slices[k][j] = c.clone();
    }
    Ok(slices.into_iter().map(UnivariatePoly::new).collect())
}

/// A hyperelliptic family `z^2 = sum_k c_k(t) x^k` over the parameter line.
/// The parameter may be written `t` or `y`; `x` is the fiber coordinate.
/// Returns the coefficient list indexed by the power of `x`.
pub fn parse_family(input: &str) -> Result<Vec<UnivariatePoly>, Error> {
    let eq = input
        .find('=')
        .ok_or_else(|| Error::parse(input.len(), "expected 'z^2 = ...'".to_string()))?;
    let (lhs, rhs_with_eq) = input.split_at(eq);
    let rhs = &rhs_with_eq[1..];

    let lhs_tokens = lex(lhs)?;
    let lhs_ok = matches!(
        lhs_tokens
            .iter()
            .map(|t| &t.tok)
            .collect::<Vec<_>>()
            .as_slice(),
        [Tok::Var('z'), Tok::Caret, Tok::Int(two)] if *two == BigInt::from(2)
    );
    if !lhs_ok {
        let pos = lhs_tokens.first().map(|t| t.pos).unwrap_or(0);
        return Err(Error::parse(pos, "left side must be exactly 'z^2'".to_string()));
    }

    // Parse the right side; report positions relative to the full input.
    let poly = parse_multi(rhs, &[('x', 0), ('t', 1), ('y', 1)]).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::parse(pos + eq + 1, msg),
        other => other,
    })?;
    multi_to_x_slices(&poly)
}

/// Parse a projective point given as `a,b,c` or `[a:b:c]`.
pub fn parse_point(input: &str) -> Result<[Rational; 3], Error> {
    let trimmed = input.trim().trim_start_matches('[').trim_end_matches(']');
    let sep = if trimmed.contains(':') { ':' } else { ',' };
    let parts: Vec<&str> = trimmed.split(sep).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected three coordinates, got {}",
            parts.len()
        )));
    }
    let mut out: [Rational; 3] = Default::default();
    for (i, part) in parts.iter().enumerate() {
        out[i] = crate::rational::parse_rational(part.trim())
            .map_err(|e| Error::InvalidInput(format!("coordinate {}: {e}", i + 1)))?;
    }
    if out.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("0,0,0 is not a projective point".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i};

    #[test]
    fn ternary_round_trip() {
        let g = parse_ternary("X^3 + Y^3 + Z^3").unwrap();
        assert_eq!(g.to_text(), "X^3 + Y^3 + Z^3");
        let h = parse_ternary("2*X*Y^2 - 1/2*Z^3 + X^2*Y").unwrap();
        assert_eq!(h.to_text(), "X^2*Y + 2*X*Y^2 - 1/2*Z^3");
        assert_eq!(parse_ternary(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn lowercase_and_whitespace_are_fine() {
        let a = parse_ternary("x^2*z + y^3").unwrap();
        let b = parse_ternary("  X ^ 2 * Z + Y^3 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parens_and_unary_minus() {
        let a = parse_ternary("(X + Y)*(X - Y) + Y^2").unwrap();
        assert_eq!(a.to_text(), "X^2");
        let b = parse_ternary("-X*Y + Y^2 - -X^2").unwrap();
        assert_eq!(b.to_text(), "X^2 - X*Y + Y^2");
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse_ternary("2X^3 + Y^3 + Z^3").unwrap_err();
        match err {
            Error::Parse { pos, msg } => {
                assert_eq!(pos, 1);
                assert!(msg.contains("explicit"));
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn inhomogeneous_input_reports_both_degrees() {
        let err = parse_ternary("X^3 + Y^2").unwrap_err();
        match err {
            Error::NonHomogeneous { deg_a, deg_b } => {
                let mut degs = [deg_a, deg_b];
                degs.sort();
                assert_eq!(degs, [2, 3]);
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn parse_error_positions() {
        assert!(matches!(
            parse_ternary("X^3 + ").unwrap_err(),
            Error::Parse { pos: 6, .. }
        ));
        assert!(matches!(
            parse_ternary("X^3 + $").unwrap_err(),
            Error::Parse { pos: 6, .. }
        ));
        assert!(matches!(
            parse_ternary("(X + Y").unwrap_err(),
            Error::Parse { pos: 6, .. }
        ));
        assert!(matches!(
            parse_ternary("X^3 Z").unwrap_err(),
            Error::Parse { pos: 4, .. }
        ));
        assert!(matches!(
            parse_ternary("X^Y").unwrap_err(),
            Error::Parse { pos: 2, .. }
        ));
    }

    #[test]
    fn rational_literals() {
        let g = parse_ternary("3/4*X^2 - 2/8*Y*Z").unwrap();
        assert_eq!(g.coeff((2, 0, 0)), rat(3, 4));
        assert_eq!(g.coeff((0, 1, 1)), rat(-1, 4));
        assert!(matches!(
            parse_ternary("1/0*X").unwrap_err(),
            Error::Parse { pos: 2, .. }
        ));
    }

    #[test]
    fn family_grammar() {
        let c = parse_family("z^2 = x^3 + t^2*x + t^3").unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], parse_univariate("t^3", 't').unwrap());
        assert_eq!(c[1], parse_univariate("t^2", 't').unwrap());
        assert!(c[2].is_zero());
        assert_eq!(c[3], UnivariatePoly::one());
        // y is accepted as an alias for the parameter.
        let d = parse_family("Z^2 = x^3 + y^4").unwrap();
        assert_eq!(d[0], parse_univariate("t^4", 't').unwrap());
    }

    #[test]
    fn family_rejects_bad_left_side() {
        assert!(parse_family("z^3 = x^3 + t").is_err());
        assert!(parse_family("x^3 + t").is_err());
        assert!(parse_family("z^2 = z^3 + t").is_err());
    }

    #[test]
    fn point_forms() {
        assert_eq!(parse_point("1,0,0").unwrap(), [rat_i(1), rat_i(0), rat_i(0)]);
        assert_eq!(
            parse_point("[1:2:3]").unwrap(),
            [rat_i(1), rat_i(2), rat_i(3)]
        );
        assert_eq!(parse_point("1/2, -3, 0").unwrap()[0], rat(1, 2));
        assert!(parse_point("0,0,0").is_err());
        assert!(parse_point("1,2").is_err());
    }
}
