//! Exact rational scalars.
//!
//! `Rational` is `num::BigRational`: arbitrary-precision, always stored in
//! lowest terms with a positive denominator. This module adds the small
//! constructors and the `a/b` text format used across the crate.

use crate::error::Error;
use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d = 0`, which is a programming error here.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Format as `a` for integers and `a/b` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `a` or `a/b` with optional leading sign.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| Error::parse(0, format!("bad integer `{num_str}`")))?;
    let denom: BigInt = den_str
        .parse()
        .map_err(|_| Error::parse(0, format!("bad integer `{den_str}`")))?;
    if denom.is_zero() {
        return Err(Error::parse(0, "zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Round a rational to f64. Uses a scaled integer quotient so that values far
/// outside f64 range degrade to +-inf instead of panicking.
pub fn to_f64(q: &Rational) -> f64 {
    num::ToPrimitive::to_f64(q).unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact k-th root of a rational if one exists with the sign of `q`.
/// Even k requires `q >= 0`.
pub fn nth_root(q: &Rational, k: u32) -> Option<Rational> {
    assert!(k >= 1);
    if k == 1 {
        return Some(q.clone());
    }
    if q.is_negative() && k % 2 == 0 {
        return None;
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    let candidate = BigRational::new(n, d);
    if num::pow::pow(candidate.clone(), k as usize) == *q {
        Some(candidate)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses_back() {
        for (n, d) in [(1i64, 2i64), (-3, 4), (7, 1), (0, 5), (-10, 3)] {
            let q = rat(n, d);
            let s = format_rational(&q);
            assert_eq!(parse_rational(&s).unwrap(), q);
        }
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(1, -2)), "-1/2");
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(parse_rational("3/0").is_err());
    }

    #[test]
    fn nth_root_exact_cases() {
        assert_eq!(nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(nth_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(nth_root(&rat(-4, 9), 2), None);
        assert_eq!(nth_root(&rat(2, 1), 2), None);
    }
}
