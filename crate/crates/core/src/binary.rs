//! Dense homogeneous binary forms in `(Y, Z)`.
//!
//! A form of degree `n` stores `n + 1` coefficients; index `i` holds the
//! coefficient of `Y^(n-i) * Z^i`. The zero form of a given degree keeps its
//! nominal degree so that coefficient slots of a curve stay typed.
//!
//! Most arithmetic is delegated to [`UnivariatePoly`] through the exact
//! correspondence `f = Z^a * minhomog(f(y, 1))`, where `a` is the
//! multiplicity of the root `[1 : 0]`.
//!
//! "Monic-normalized" means the first nonzero coefficient in the index order
//! above (lexicographic, `Y` before `Z`) equals one.

use crate::error::Error;
use crate::rational::{format_rational, Rational};
use crate::univariate::UnivariatePoly;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rational>,
}

/// One factor of a squarefree decomposition of a binary form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreePart {
    /// Squarefree, monic-normalized, coprime to the other parts.
    pub factor: BinaryForm,
    pub multiplicity: u32,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "binary form needs degree+1 coefficients");
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        let coeffs: Vec<Rational> = coeffs.iter().map(|&c| crate::rational::rat_i(c)).collect();
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    /// `c * Y^(n-i) * Z^i` as a degree-`n` form.
    pub fn monomial(degree: usize, i: usize, c: Rational) -> Self {
        let mut f = BinaryForm::zero(degree);
        f.coeffs[i] = c;
        f
    }

    /// Embed a univariate polynomial `u(y)` as the degree-`degree` form
    /// `Z^(degree - deg u) * minhomog(u)`. Errors if `deg u > degree`.
    pub fn from_univariate(u: &UnivariatePoly, degree: usize) -> Result<Self, Error> {
        let du = u.degree().unwrap_or(0);
        if !u.is_zero() && du > degree {
            return Err(Error::Internal(format!(
                "cannot homogenize degree-{du} polynomial into a degree-{degree} form"
            )));
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (k, c) in u.coeffs().iter().enumerate() {
            // y^k contributes to Y^k Z^(degree-k), i.e. index degree - k.
            coeffs[degree - k] = c.clone();
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `Y^(degree-i) * Z^i`.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `f(y, 1)` as a univariate polynomial in `y`.
    pub fn dehomogenize(&self) -> UnivariatePoly {
        let mut coeffs = vec![Rational::zero(); self.degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[self.degree - i] = c.clone();
        }
        UnivariatePoly::new(coeffs)
    }

    /// Multiplicity of the root `[1 : 0]`, i.e. the largest `a` with
    /// `Z^a | f`. Zero form gives `None`.
    pub fn z_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, y: &Rational, z: &Rational) -> Rational {
        let mut ypows = vec![Rational::one()];
        let mut zpows = vec![Rational::one()];
        for i in 1..=self.degree {
            ypows.push(&ypows[i - 1] * y);
            zpows.push(&zpows[i - 1] * z);
        }
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &ypows[self.degree - i] * &zpows[i];
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { degree, coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = BinaryForm::new(0, vec![Rational::one()]);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Exact division; errors when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, Error> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial("binary form division"));
        }
        if self.is_zero() {
            if self.degree < divisor.degree {
                return Err(Error::Internal("degree underflow in binary division".into()));
            }
            return Ok(BinaryForm::zero(self.degree - divisor.degree));
        }
        let av = self.z_valuation().unwrap();
        let bv = divisor.z_valuation().unwrap();
        if av < bv || self.degree < divisor.degree {
            return Err(Error::Internal("binary form division is not exact".into()));
        }
        let ua = self.dehomogenize();
        let ub = divisor.dehomogenize();
        let q = ua.exact_div(&ub)?;
        let qdeg = self.degree - divisor.degree;
        if q.degree().unwrap_or(0) > qdeg - (av - bv) {
            return Err(Error::Internal("binary form division is not exact".into()));
        }
        BinaryForm::from_univariate(&q, qdeg)
    }

    /// `Some(c)` with `self = c * other` when the forms are proportional.
    /// Two zero forms give `Some(1)`.
    pub fn proportional_to(&self, other: &Self) -> Option<Rational> {
        if self.degree != other.degree {
            return None;
        }
        match other.z_valuation() {
            None => {
                if self.is_zero() {
                    Some(Rational::one())
                } else {
                    None
                }
            }
            Some(i) => {
                let c = &self.coeffs[i] / &other.coeffs[i];
                for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                    if *a != b * &c {
                        return None;
                    }
                }
                Some(c)
            }
        }
    }

    /// First nonzero coefficient in index order (`Y` before `Z`).
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Normalize so the leading coefficient is 1.
    pub fn monic_normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = Rational::one() / l;
                self.scale(&inv)
            }
        }
    }

    /// Integer coprime coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let u = UnivariatePoly::new(self.coeffs.iter().rev().cloned().collect());
        let mut c = u.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.scale(&(Rational::one() / c))
    }

    /// Monic-normalized gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic_normalized();
        }
        if other.is_zero() {
            return self.monic_normalized();
        }
        let av = self.z_valuation().unwrap();
        let bv = other.z_valuation().unwrap();
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let zpow = av.min(bv);
        let gdeg = g.degree().unwrap_or(0) + zpow;
        BinaryForm::from_univariate(&g, gdeg).expect("gcd degree fits")
    }

    /// Squarefree decomposition `self = lambda * prod factor_i^mult_i`.
    /// A power of `Z` shows up as its own factor.
    pub fn squarefree_factor(&self) -> (Rational, Vec<SquarefreePart>) {
        assert!(!self.is_zero(), "squarefree decomposition of zero form");
        let zv = self.z_valuation().unwrap();
        let u = self.dehomogenize();
        let (lambda, ufactors) = u.squarefree_factor();
        let mut parts = Vec::new();
        for f in ufactors {
            let deg = f.factor.degree().unwrap();
            parts.push(SquarefreePart {
                factor: BinaryForm::from_univariate(&f.factor, deg).unwrap(),
                multiplicity: f.multiplicity,
            });
        }
        if zv > 0 {
            let z = BinaryForm::new(1, vec![Rational::zero(), Rational::one()]);
            parts.push(SquarefreePart {
                factor: z,
                multiplicity: zv as u32,
            });
        }
        parts.sort_by_key(|p| p.multiplicity);
        (lambda, parts)
    }

    /// Number of distinct roots in the projective line over the complex
    /// numbers. Exact.
    pub fn distinct_root_count(&self) -> usize {
        assert!(!self.is_zero());
        let zroot = usize::from(self.z_valuation().unwrap() > 0);
        self.dehomogenize().distinct_root_count() + zroot
    }

    /// Multiplicities of the complex projective roots, sorted descending.
    pub fn root_multiplicities(&self) -> Vec<u32> {
        let (_, parts) = self.squarefree_factor();
        let mut mults = Vec::new();
        for p in parts {
            for _ in 0..p.factor.degree() {
                mults.push(p.multiplicity);
            }
        }
        mults.sort_unstable_by(|a, b| b.cmp(a));
        mults
    }

    /// `Some((lambda, h))` with `self = lambda * h^e`, `h` primitive with
    /// positive leading coefficient. A rational scalar always suffices when
    /// such an `h` exists over the rationals; `None` otherwise.
    pub fn perfect_power(&self, e: u32) -> Option<(Rational, BinaryForm)> {
        assert!(e >= 1);
        if self.is_zero() {
            return None;
        }
        let (_, parts) = self.squarefree_factor();
        let mut h = BinaryForm::new(0, vec![Rational::one()]);
        for p in &parts {
            if p.multiplicity % e != 0 {
                return None;
            }
            h = h.mul(&p.factor.pow(p.multiplicity / e));
        }
        let h = h.primitive();
        let he = h.pow(e);
        let lead_idx = self.z_valuation().unwrap();
        let lambda = &self.coeffs[lead_idx] / he.coeff(lead_idx);
        debug_assert_eq!(self, &he.scale(&lambda));
        Some((lambda, h))
    }

    /// Coefficients rounded to f64, index order preserved.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::rational::to_f64).collect()
    }

    /// Render in the shared text grammar with variables `Y`, `Z`.
    pub fn to_text(&self) -> String {
        ternary_style_text(&self.coeffs, self.degree, "Y", "Z")
    }
}

fn ternary_style_text(coeffs: &[Rational], degree: usize, vy: &str, vz: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let ypow = degree - i;
        let zpow = i;
        let mut vars = Vec::new();
        if ypow > 0 {
            vars.push(if ypow == 1 {
                vy.to_string()
            } else {
                format!("{vy}^{ypow}")
            });
        }
        if zpow > 0 {
            vars.push(if zpow == 1 {
                vz.to_string()
            } else {
                format!("{vz}^{zpow}")
            });
        }
        let var_part = vars.join("*");
        let mono = if var_part.is_empty() {
            format_rational(c)
        } else if c.is_one() {
            var_part
        } else if (-c).is_one() {
            format!("-{var_part}")
        } else {
            format!("{}*{var_part}", format_rational(c))
        };
        parts.push(mono);
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, part) in parts.iter().enumerate() {
        if idx == 0 {
            out.push_str(part);
        } else if let Some(rest) = part.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(part);
        }
    }
    out
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i};

    fn y() -> BinaryForm {
        BinaryForm::from_i64(&[1, 0])
    }

    fn z() -> BinaryForm {
        BinaryForm::from_i64(&[0, 1])
    }

    #[test]
    fn index_convention() {
        // Y^2 + 3*Y*Z + 5*Z^2
        let f = BinaryForm::from_i64(&[1, 3, 5]);
        assert_eq!(f.coeff(0), rat_i(1));
        assert_eq!(f.coeff(1), rat_i(3));
        assert_eq!(f.coeff(2), rat_i(5));
        assert_eq!(f.eval(&rat_i(2), &rat_i(1)), rat_i(4 + 6 + 5));
        assert_eq!(f.dehomogenize(), UnivariatePoly::from_i64(&[5, 3, 1]));
    }

    #[test]
    fn gcd_keeps_z_powers() {
        // gcd(Y^2*Z, Y*Z^2) = Y*Z
        let f = y().pow(2).mul(&z());
        let g = y().mul(&z().pow(2));
        assert_eq!(f.gcd(&g), y().mul(&z()));
    }

    #[test]
    fn squarefree_of_mixed_power() {
        // Y^2 * Z^3 -> (Y, 2), (Z, 3)
        let f = y().pow(2).mul(&z().pow(3));
        let (lambda, parts) = f.squarefree_factor();
        assert_eq!(lambda, rat_i(1));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].factor, y());
        assert_eq!(parts[0].multiplicity, 2);
        assert_eq!(parts[1].factor, z());
        assert_eq!(parts[1].multiplicity, 3);
    }

    #[test]
    fn perfect_power_extraction() {
        let h = BinaryForm::from_i64(&[2, -1, 3]);
        let f = h.pow(3).scale(&rat(-5, 8));
        let (lambda, hh) = f.perfect_power(3).unwrap();
        // h is primitive already, so it comes back on the nose.
        assert_eq!(hh, h);
        assert_eq!(lambda, rat(-5, 8));
        // A squarefree quadratic is not a square.
        assert!(BinaryForm::from_i64(&[1, 0, 1]).perfect_power(2).is_none());
        // Z-valuation must be divisible by the exponent.
        let g = y().pow(2).mul(&z());
        assert!(g.perfect_power(2).is_none());
        let (l2, h2) = y().pow(2).mul(&z().pow(2)).perfect_power(2).unwrap();
        assert_eq!(l2, rat_i(1));
        assert_eq!(h2, y().mul(&z()));
    }

    #[test]
    fn proportionality_detects_scalar_multiples() {
        let f = BinaryForm::from_i64(&[2, 0, -4, 6]);
        let g = f.scale(&rat(-3, 7));
        assert_eq!(g.proportional_to(&f), Some(rat(-3, 7)));
        let h = BinaryForm::from_i64(&[2, 1, -4, 6]);
        assert_eq!(h.proportional_to(&f), None);
        assert_eq!(
            BinaryForm::zero(3).proportional_to(&BinaryForm::zero(3)),
            Some(rat_i(1))
        );
    }

    #[test]
    fn exact_division() {
        let f = BinaryForm::from_i64(&[1, 2, 1]); // (Y+Z)^2
        let g = BinaryForm::from_i64(&[1, 1]); // Y+Z
        assert_eq!(f.exact_div(&g).unwrap(), g);
        assert!(f.exact_div(&y()).is_err());
        // Zero divided by anything keeps the degree bookkeeping.
        let q = BinaryForm::zero(5).exact_div(&g).unwrap();
        assert_eq!(q.degree(), 4);
        assert!(q.is_zero());
    }

    #[test]
    fn root_counting() {
        let f = y().pow(2).mul(&z().pow(3)); // roots [0:1] and [1:0]
        assert_eq!(f.distinct_root_count(), 2);
        assert_eq!(f.root_multiplicities(), vec![3, 2]);
        let g = BinaryForm::from_i64(&[1, 0, 0, 1]); // Y^3 + Z^3, three roots
        assert_eq!(g.distinct_root_count(), 3);
    }

    #[test]
    fn text_round_trip_style() {
        let f = BinaryForm::new(3, vec![rat_i(1), rat_i(0), rat(-1, 2), rat_i(3)]);
        assert_eq!(f.to_text(), "Y^3 - 1/2*Y*Z^2 + 3*Z^3");
    }
}
