//! Sparse homogeneous ternary forms in `(X, Y, Z)` and small exact
//! linear-algebra helpers.
//!
//! A form is a map from exponent triples `(a, b, c)` with `a + b + c = degree`
//! to nonzero rational coefficients. The map is a `BTreeMap` so iteration
//! order (and therefore text output and serialized reports) is deterministic.
//!
//! The form doubles as a polynomial in `X` whose coefficients are binary
//! forms in `(Y, Z)`; `x_coefficients` exposes that view, which is what the
//! pencil-of-lines machinery works with.
//!
//! `resultant_in_x` eliminates `X` between two forms. It evaluates the
//! univariate resultant at integer values of `y` (chart `z = 1`) and
//! interpolates: for homogeneous input the resultant in `X` is itself a form
//! of known degree, so finitely many exact samples determine it. This keeps
//! all determinant work over the integers.

use crate::binary::BinaryForm;
use crate::error::Error;
use crate::rational::{format_rational, rat_i, Rational};
use crate::univariate::UnivariatePoly;
use num::{One, Zero};
use std::collections::BTreeMap;

pub type Exponents = (u16, u16, u16);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    degree: usize,
    terms: BTreeMap<Exponents, Rational>,
}

/// 3x3 rational matrix, row major.
pub type Mat3 = [[Rational; 3]; 3];

pub fn mat3_identity() -> Mat3 {
    let mut m: Mat3 = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Rational::zero();
            for (k, brow) in b.iter().enumerate() {
                acc += &a[i][k] * &brow[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat3_apply(m: &Mat3, v: &[Rational; 3]) -> [Rational; 3] {
    let mut out: [Rational; 3] = Default::default();
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn mat3_det(m: &Mat3) -> Rational {
    let mut det = Rational::zero();
    det += &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
    det -= &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
    det += &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    det
}

/// Inverse via the adjugate; errors on a singular matrix.
pub fn mat3_inv(m: &Mat3) -> Result<Mat3, Error> {
    let det = mat3_det(m);
    if det.is_zero() {
        return Err(Error::InvalidInput("singular coordinate matrix".into()));
    }
    let cof = |r: usize, c: usize| -> Rational {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]
            - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut inv: Mat3 = Default::default();
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // Adjugate is the transposed cofactor matrix.
            *cell = cof(j, i) / &det;
        }
    }
    Ok(inv)
}

impl TernaryForm {
    pub fn zero(degree: usize) -> Self {
        TernaryForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(exponents, coefficient)` pairs; checks homogeneity and
    /// reports the first two clashing total degrees.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Result<Self, Error> {
        let mut map: BTreeMap<Exponents, Rational> = BTreeMap::new();
        let mut degree: Option<u32> = None;
        for ((a, b, c), coeff) in terms {
            let deg = a as u32 + b as u32 + c as u32;
            match degree {
                None => degree = Some(deg),
                Some(d) if d != deg => {
                    return Err(Error::NonHomogeneous { deg_a: d, deg_b: deg })
                }
                _ => {}
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = map.entry((a, b, c)).or_insert_with(Rational::zero);
            *entry += coeff;
            if entry.is_zero() {
                map.remove(&(a, b, c));
            }
        }
        let degree = degree.ok_or_else(|| Error::InvalidInput("empty polynomial".into()))? as usize;
        Ok(TernaryForm { degree, terms: map })
    }

    pub fn monomial(degree: usize, exps: Exponents, coeff: Rational) -> Self {
        assert_eq!(exps.0 as usize + exps.1 as usize + exps.2 as usize, degree);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        TernaryForm { degree, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponents) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree in `X` alone; `None` for the zero form.
    pub fn x_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(a, _, _)| a as usize).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::NonHomogeneous {
                deg_a: self.degree as u32,
                deg_b: other.degree as u32,
            });
        }
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(TernaryForm {
            degree: self.degree,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return TernaryForm::zero(self.degree);
        }
        TernaryForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for ((a1, b1, c1), q1) in &self.terms {
            for ((a2, b2, c2), q2) in &other.terms {
                let key = (a1 + a2, b1 + b2, c1 + c2);
                let entry = terms.entry(key).or_insert_with(Rational::zero);
                *entry += q1 * q2;
                if entry.is_zero() {
                    terms.remove(&key);
                }
            }
        }
        TernaryForm { degree, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TernaryForm::monomial(0, (0, 0, 0), Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        let mut pows: [Vec<Rational>; 3] = [vec![Rational::one()], vec![Rational::one()], vec![Rational::one()]];
        for (i, var) in p.iter().enumerate() {
            for k in 1..=self.degree {
                let next = &pows[i][k - 1] * var;
                pows[i].push(next);
            }
        }
        let mut acc = Rational::zero();
        for ((a, b, c), q) in &self.terms {
            acc += q * &pows[0][*a as usize] * &pows[1][*b as usize] * &pows[2][*c as usize];
        }
        acc
    }

    /// Partial derivative; `var` is 0 for X, 1 for Y, 2 for Z.
    pub fn partial(&self, var: usize) -> Self {
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (&(a, b, c), q) in &self.terms {
            let e = [a, b, c][var];
            if e == 0 {
                continue;
            }
            let mut key = [a, b, c];
            key[var] -= 1;
            terms.insert((key[0], key[1], key[2]), q * rat_i(e as i64));
        }
        TernaryForm {
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    /// Substitute `X, Y, Z` by the rows of `m` applied to the new variables:
    /// result(v) = self(m * v).
    pub fn compose_linear(&self, m: &Mat3) -> Self {
        let linear = |row: &[Rational; 3]| -> TernaryForm {
            TernaryForm::from_terms([
                ((1u16, 0u16, 0u16), row[0].clone()),
                ((0, 1, 0), row[1].clone()),
                ((0, 0, 1), row[2].clone()),
            ])
            .expect("linear form")
        };
        let l: Vec<TernaryForm> = m.iter().map(linear).collect();
        // Power tables for the three substituted linear forms.
        let mut pows: Vec<Vec<TernaryForm>> = Vec::with_capacity(3);
        for lf in &l {
            let mut table = vec![TernaryForm::monomial(0, (0, 0, 0), Rational::one())];
            for k in 1..=self.degree {
                table.push(table[k - 1].mul(lf));
            }
            pows.push(table);
        }
        let mut acc = TernaryForm::zero(self.degree);
        for (&(a, b, c), q) in &self.terms {
            let term = pows[0][a as usize]
                .mul(&pows[1][b as usize])
                .mul(&pows[2][c as usize])
                .scale(q);
            acc = acc.add(&term).expect("homogeneous by construction");
        }
        acc
    }

    /// Coefficients as a polynomial in `X`: entry `k` is the binary form
    /// multiplying `X^k`, of degree `degree - k`. Length is `x_degree + 1`
    /// (zero form gives a single zero coefficient).
    pub fn x_coefficients(&self) -> Vec<BinaryForm> {
        let d = self.x_degree().unwrap_or(0);
        let mut out: Vec<BinaryForm> = (0..=d)
            .map(|k| BinaryForm::zero(self.degree - k))
            .collect();
        for (&(a, b, c), q) in &self.terms {
            let k = a as usize;
            let form_deg = self.degree - k;
            // Y^b Z^c with b + c = form_deg; index is the Z exponent.
            let mut coeffs = out[k].coeffs().to_vec();
            coeffs[c as usize] += q;
            let _ = b;
            out[k] = BinaryForm::new(form_deg, coeffs);
        }
        out
    }

    /// Rebuild from `X`-coefficients (entry `k` multiplies `X^k` and must
    /// have degree `degree - k` where `degree = len - 1 + coeffs[len-1].degree()`).
    pub fn from_x_coefficients(coeffs: &[BinaryForm]) -> Result<Self, Error> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("no coefficients".into()));
        }
        let top = coeffs.len() - 1;
        let degree = top + coeffs[top].degree();
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (k, form) in coeffs.iter().enumerate() {
            if form.degree() != degree - k {
                return Err(Error::Internal(format!(
                    "X^{k} coefficient has degree {} but needs {}",
                    form.degree(),
                    degree - k
                )));
            }
            for (i, q) in form.coeffs().iter().enumerate() {
                if !q.is_zero() {
                    let b = (form.degree() - i) as u16;
                    terms.insert((k as u16, b, i as u16), q.clone());
                }
            }
        }
        Ok(TernaryForm { degree, terms })
    }

    /// Greatest common binary-form divisor of all `X`-coefficients. This is
    /// the product of the line-through-`[1:0:0]` components.
    pub fn binary_content(&self) -> BinaryForm {
        let coeffs = self.x_coefficients();
        let mut g = BinaryForm::zero(0);
        let mut first = true;
        for f in &coeffs {
            if f.is_zero() {
                continue;
            }
            g = if first { f.monic_normalized() } else { g.gcd(f) };
            first = false;
            if g.degree() == 0 {
                break;
            }
        }
        g
    }

    /// Divide every `X`-coefficient by a binary form. Errors if not exact.
    pub fn divide_binary(&self, divisor: &BinaryForm) -> Result<Self, Error> {
        let coeffs = self.x_coefficients();
        let mut out = Vec::with_capacity(coeffs.len());
        for f in &coeffs {
            out.push(f.exact_div(divisor)?);
        }
        TernaryForm::from_x_coefficients(&out)
    }

    /// Affine chart `z = 1`: entry `k` of the result is the `y`-polynomial
    /// multiplying `x^k`.
    pub fn dehomogenize_z(&self) -> Vec<UnivariatePoly> {
        let d = self.x_degree().unwrap_or(0);
        let mut out = vec![UnivariatePoly::zero(); d + 1];
        for (k, form) in self.x_coefficients().iter().enumerate() {
            out[k] = form.dehomogenize();
        }
        out
    }

    /// Minimal homogenization of an affine polynomial `sum_k g_k(y) x^k`:
    /// the total degree is `max_k (k + deg g_k)` so `Z` does not divide the
    /// result.
    pub fn homogenize_min(affine: &[UnivariatePoly]) -> Result<Self, Error> {
        let mut total = 0usize;
        let mut any = false;
        for (k, g) in affine.iter().enumerate() {
            if let Some(dg) = g.degree() {
                total = total.max(k + dg);
                any = true;
            }
        }
        if !any {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (k, g) in affine.iter().enumerate() {
            for (j, q) in g.coeffs().iter().enumerate() {
                if !q.is_zero() {
                    terms.insert((k as u16, j as u16, (total - k - j) as u16), q.clone());
                }
            }
        }
        Ok(TernaryForm {
            degree: total,
            terms,
        })
    }

    /// Restriction to the pencil line `Y = y0 * Z` (chart `z = 1`):
    /// univariate in `x`.
    pub fn restrict_to_line(&self, y0: &Rational) -> UnivariatePoly {
        let coeffs = self
            .x_coefficients()
            .iter()
            .map(|f| f.eval(y0, &Rational::one()))
            .collect();
        UnivariatePoly::new(coeffs)
    }

    /// Restriction to the line at infinity `Z = 0`: `G(x, 1, 0)`.
    pub fn restrict_to_infinity(&self) -> UnivariatePoly {
        let coeffs = self
            .x_coefficients()
            .iter()
            .map(|f| f.coeff(0))
            .collect();
        UnivariatePoly::new(coeffs)
    }

    /// Resultant of `self` and `other` with respect to `X`, as a binary form.
    ///
    /// Computed by exact interpolation: for homogeneous inputs the resultant
    /// is a form of degree `dg*Df + df*Dg - df*dg` (`df`, `dg` the `X`-degrees
    /// and `Df`, `Dg` the total degrees), so sampling the univariate
    /// resultant at enough integer `y` (with neither `X`-leading coefficient
    /// vanishing) pins it down.
    pub fn resultant_in_x(&self, other: &Self) -> Result<BinaryForm, Error> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial("resultant_in_x"));
        }
        let df = self.x_degree().unwrap();
        let dg = other.x_degree().unwrap();
        let (capd, capdg) = (self.degree, other.degree);
        let weight = dg * capd + df * capdg - df * dg;
        if df == 0 && dg == 0 {
            return Ok(BinaryForm::new(0, vec![Rational::one()]));
        }
        if df == 0 {
            return Ok(self.x_coefficients()[0].pow(dg as u32));
        }
        if dg == 0 {
            return Ok(other.x_coefficients()[0].pow(df as u32));
        }
        let lf = self.x_coefficients()[df].clone();
        let lg = other.x_coefficients()[dg].clone();
        let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(weight + 1);
        let mut candidate = 0i64;
        while points.len() < weight + 1 {
            let y = rat_i(candidate);
            // Next candidate: 0, 1, -1, 2, -2, ...
            candidate = if candidate > 0 { -candidate } else { -candidate + 1 };
            let one = Rational::one();
            if lf.eval(&y, &one).is_zero() || lg.eval(&y, &one).is_zero() {
                continue;
            }
            let fu = self.restrict_to_line(&y);
            let gu = other.restrict_to_line(&y);
            let r = fu.resultant(&gu)?;
            points.push((y, r));
        }
        let r = UnivariatePoly::interpolate(&points);
        if r.degree().unwrap_or(0) > weight {
            return Err(Error::Internal("resultant interpolation degree overflow".into()));
        }
        BinaryForm::from_univariate(&r, weight)
    }

    /// Discriminant with respect to `X`:
    /// `(-1)^(d(d-1)/2) * resultant_in_x(G, dG/dX) / lc_X(G)`.
    ///
    /// Vanishes at `(y0, z0)` exactly when the restriction to that pencil
    /// line has a repeated root or drops degree in `X`.
    pub fn discriminant_in_x(&self) -> Result<BinaryForm, Error> {
        let d = self.x_degree().ok_or(Error::ZeroPolynomial("discriminant_in_x"))?;
        if d == 0 {
            return Err(Error::InvalidInput(
                "discriminant_in_x needs positive X-degree".into(),
            ));
        }
        let gx = self.partial(0);
        let res = self.resultant_in_x(&gx)?;
        let lead = self.x_coefficients()[d].clone();
        let disc = res.exact_div(&lead)?;
        if (d * (d - 1) / 2) % 2 == 1 {
            Ok(disc.scale(&-Rational::one()))
        } else {
            Ok(disc)
        }
    }

    /// Render in the shared text grammar.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (&(a, b, c), q) in self.terms.iter().rev() {
            let mut vars: Vec<String> = Vec::new();
            for (e, name) in [(a, "X"), (b, "Y"), (c, "Z")] {
                if e == 1 {
                    vars.push(name.to_string());
                } else if e > 1 {
                    vars.push(format!("{name}^{e}"));
                }
            }
            let var_part = vars.join("*");
            let mono = if var_part.is_empty() {
                format_rational(q)
            } else if q.is_one() {
                var_part
            } else if (-q).is_one() {
                format!("-{var_part}")
            } else {
                format!("{}*{var_part}", format_rational(q))
            };
            parts.push(mono);
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

    /// Terms with coefficients rounded to f64, for numeric evaluation.
    pub fn terms_f64(&self) -> Vec<(Exponents, f64)> {
        self.terms
            .iter()
            .map(|(e, q)| (*e, crate::rational::to_f64(q)))
            .collect()
    }
}

impl std::fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Evaluate a compiled term list at complex coordinates.
pub fn eval_terms_c64(
    terms: &[(Exponents, f64)],
    x: num::complex::Complex64,
    y: num::complex::Complex64,
    z: num::complex::Complex64,
) -> num::complex::Complex64 {
    let mut acc = num::complex::Complex64::new(0.0, 0.0);
    for ((a, b, c), q) in terms {
        acc += x.powi(*a as i32) * y.powi(*b as i32) * z.powi(*c as i32) * *q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn form(terms: &[((u16, u16, u16), i64)]) -> TernaryForm {
        TernaryForm::from_terms(terms.iter().map(|&(e, c)| (e, rat_i(c)))).unwrap()
    }

    #[test]
    fn homogeneity_is_enforced() {
        let err = TernaryForm::from_terms([
            ((3u16, 0u16, 0u16), rat_i(1)),
            ((1, 1, 0), rat_i(1)),
        ])
        .unwrap_err();
        match err {
            Error::NonHomogeneous { deg_a, deg_b } => {
                assert_eq!((deg_a, deg_b), (3, 2));
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn euler_identity() {
        // d * G = X*Gx + Y*Gy + Z*Gz for homogeneous G.
        let g = form(&[((3, 0, 0), 1), ((1, 1, 1), -4), ((0, 3, 0), 2), ((0, 0, 3), 7)]);
        let x = TernaryForm::monomial(1, (1, 0, 0), rat_i(1));
        let y = TernaryForm::monomial(1, (0, 1, 0), rat_i(1));
        let z = TernaryForm::monomial(1, (0, 0, 1), rat_i(1));
        let lhs = g.scale(&rat_i(3));
        let rhs = x
            .mul(&g.partial(0))
            .add(&y.mul(&g.partial(1)))
            .unwrap()
            .add(&z.mul(&g.partial(2)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_linear_swaps_variables() {
        let g = form(&[((2, 0, 0), 1), ((0, 1, 1), 1)]); // X^2 + YZ
        // Swap X and Y.
        let mut m = mat3_identity();
        m.swap(0, 1);
        let h = g.compose_linear(&m);
        assert_eq!(h, form(&[((0, 2, 0), 1), ((1, 0, 1), 1)]));
    }

    #[test]
    fn x_coefficient_round_trip() {
        let g = form(&[((3, 0, 0), 2), ((1, 2, 0), -1), ((1, 1, 1), 5), ((0, 0, 3), 9)]);
        let coeffs = g.x_coefficients();
        assert_eq!(coeffs.len(), 4);
        let back = TernaryForm::from_x_coefficients(&coeffs).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn binary_content_detects_lines_through_base_point() {
        // Y * (X^2 + YZ) has the line Y = 0 through [1:0:0] as a component.
        let inner = form(&[((2, 0, 0), 1), ((0, 1, 1), 1)]);
        let g = inner.mul(&TernaryForm::monomial(1, (0, 1, 0), rat_i(1)));
        let content = g.binary_content();
        assert_eq!(content, BinaryForm::from_i64(&[1, 0]));
        assert_eq!(g.divide_binary(&content).unwrap(), inner);
    }

    #[test]
    fn homogenize_min_round_trip() {
        let g = form(&[((3, 0, 0), 1), ((0, 2, 1), 4), ((0, 0, 3), -2)]);
        let affine = g.dehomogenize_z();
        let back = TernaryForm::homogenize_min(&affine).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn resultant_in_x_of_two_lines() {
        // res(X - Y, X - Z) = det [[1, -Y], [1, -Z]] = Y - Z.
        let f = form(&[((1, 0, 0), 1), ((0, 1, 0), -1)]);
        let g = form(&[((1, 0, 0), 1), ((0, 0, 1), -1)]);
        let r = f.resultant_in_x(&g).unwrap();
        assert_eq!(r, BinaryForm::from_i64(&[1, -1]));
    }

    #[test]
    fn discriminant_in_x_fermat_cubic() {
        // disc_X(X^3 + Y^3 + Z^3) = -27 * (Y^3 + Z^3)^2.
        let g = form(&[((3, 0, 0), 1), ((0, 3, 0), 1), ((0, 0, 3), 1)]);
        let disc = g.discriminant_in_x().unwrap();
        let expected = BinaryForm::from_i64(&[1, 0, 0, 1]).pow(2).scale(&rat_i(-27));
        assert_eq!(disc, expected);
    }

    #[test]
    fn discriminant_in_x_with_nontrivial_leading_form() {
        // G = Z*X^3 + Y^4: repeated roots along y = 0, degree drop at z = 0,
        // so disc_X = -27 * Y^8 * Z^2.
        let g = form(&[((3, 0, 1), 1), ((0, 4, 0), 1)]);
        let disc = g.discriminant_in_x().unwrap();
        let expected = BinaryForm::monomial(10, 2, rat_i(-27));
        assert_eq!(disc, expected);
    }

    #[test]
    fn text_output_is_deterministic() {
        let g = form(&[((2, 0, 0), 1), ((0, 1, 1), -1), ((0, 2, 0), 3)]);
        assert_eq!(g.to_text(), "X^2 + 3*Y^2 - Y*Z");
        let h = TernaryForm::from_terms([((1u16, 0u16, 1u16), rat(1, 2))]).unwrap();
        assert_eq!(h.to_text(), "1/2*X*Z");
    }
}
