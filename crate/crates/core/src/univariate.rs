//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`)
//! with no trailing zeros, so `degree` is `coeffs.len() - 1` and the zero
//! polynomial is the empty vector.
//!
//! Conventions fixed here and relied on elsewhere:
//!
//! * `gcd` returns the monic gcd (or zero when both inputs are zero).
//! * `resultant(f, g)` is the determinant of the Sylvester matrix with the
//!   rows built from `f` first: `resultant(x - 2, x - 3) = -1`.
//! * `discriminant(f) = (-1)^(d(d-1)/2) * resultant(f, f') / lc(f)`, so
//!   `discriminant(x^2 + 1) = -4`.

use crate::error::Error;
use crate::rational::{format_rational, rat_i, Rational};
use num::bigint::BigInt;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<Rational>,
}

/// One factor of a squarefree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeFactor {
    /// Monic, squarefree, coprime to the other factors.
    pub factor: UnivariatePoly,
    pub multiplicity: u32,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UnivariatePoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UnivariatePoly::new(vec![c])
    }

    /// Monomial `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        UnivariatePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UnivariatePoly::new(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Multiplicity of the root 0, i.e. the index of the first nonzero
    /// coefficient. Zero polynomial gives `None`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::rational::to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UnivariatePoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_i(i as i64))
            .collect();
        UnivariatePoly::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        UnivariatePoly::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UnivariatePoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return UnivariatePoly::zero();
        }
        UnivariatePoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
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
        UnivariatePoly::new(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = UnivariatePoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    /// Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (UnivariatePoly::zero(), self.clone());
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let delta = dc * &q;
                rem[idx] -= delta;
            }
            quot[i - dd] = q;
        }
        (UnivariatePoly::new(quot), UnivariatePoly::new(rem))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, Error> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal(format!(
                "exact division failed: remainder {r} dividing {self} by {divisor}"
            )))
        }
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => UnivariatePoly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero polynomial gives 1.
    pub fn content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        if num_gcd.is_zero() {
            return Rational::one();
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Integer-coefficient polynomial with content 1 and positive leading
    /// coefficient; `self = sign(lc) * content * primitive_part`.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.scale(&(Rational::one() / c))
    }

    /// Monic gcd via the primitive Euclidean remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.make_monic();
        }
        if other.is_zero() {
            return self.make_monic();
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            if b.is_constant() {
                return UnivariatePoly::one();
            }
            let (_, r) = a.div_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.make_monic()
    }

    /// Squarefree decomposition by Yun's algorithm:
    /// `self = lambda * prod factor_i ^ multiplicity_i`.
    ///
    /// Factors are monic, squarefree and pairwise coprime; `lambda` collects
    /// the leading scalar. The zero polynomial is rejected by the caller.
    pub fn squarefree_factor(&self) -> (Rational, Vec<SquarefreeFactor>) {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        if self.is_constant() {
            return (self.coeffs[0].clone(), Vec::new());
        }
        let monic = self.make_monic();
        let lambda = self.leading().unwrap().clone();
        let deriv = monic.derivative();
        let g = monic.gcd(&deriv);
        let mut factors = Vec::new();
        let mut c = monic.exact_div(&g).expect("gcd divides");
        let mut d = deriv.exact_div(&g).expect("gcd divides").sub(&c.derivative());
        let mut multiplicity = 1u32;
        while !c.is_constant() {
            let f = c.gcd(&d);
            if f.degree().unwrap_or(0) > 0 {
                factors.push(SquarefreeFactor {
                    factor: f.clone(),
                    multiplicity,
                });
            }
            c = c.exact_div(&f).expect("factor divides");
            d = d.exact_div(&f).expect("factor divides").sub(&c.derivative());
            multiplicity += 1;
        }
        (lambda, factors)
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        let (_, factors) = self.squarefree_factor();
        let mut result = UnivariatePoly::one();
        for f in factors {
            result = result.mul(&f.factor);
        }
        result
    }

    /// Number of distinct complex roots: degree of the squarefree part.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().degree().unwrap_or(0)
    }

    /// Write `self = c * h^e` with `h` primitive with positive leading
    /// coefficient. Returns `None` when no such `h` exists. For `e = 1` this
    /// is just the split into content and primitive part.
    pub fn perfect_power(&self, e: u32) -> Option<(Rational, UnivariatePoly)> {
        assert!(e >= 1);
        if self.is_zero() {
            return None;
        }
        if self.is_constant() {
            return Some((self.coeffs[0].clone(), UnivariatePoly::one()));
        }
        let (_, factors) = self.squarefree_factor();
        let mut root = UnivariatePoly::one();
        for f in &factors {
            if f.multiplicity % e != 0 {
                return None;
            }
            root = root.mul(&f.factor.pow(f.multiplicity / e));
        }
        let h = root.primitive_part();
        let q = self.exact_div(&h.pow(e)).ok()?;
        if !q.is_constant() {
            return None;
        }
        Some((q.coeff(0), h))
    }

    /// Resultant as the Sylvester determinant with the rows from `self`
    /// placed first. Constants are allowed; two constants give 1.
    pub fn resultant(&self, other: &Self) -> Result<Rational, Error> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial("resultant"));
        }
        let m = self.degree().unwrap();
        let n = other.degree().unwrap();
        if m == 0 && n == 0 {
            return Ok(Rational::one());
        }
        // Clear denominators so the determinant runs over integers:
        // res(c*f, g) = c^deg(g) * res(f, g).
        let cf = self.content();
        let cg = other.content();
        let f: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c / &cf).to_integer())
            .collect();
        let g: Vec<BigInt> = other
            .coeffs
            .iter()
            .map(|c| (c / &cg).to_integer())
            .collect();
        let size = m + n;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in f.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in g.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        let det = bareiss_det(rows);
        let scale = num::pow::pow(cf, n) * num::pow::pow(cg, m);
        Ok(Rational::from_integer(det) * scale)
    }

    /// `(-1)^(d(d-1)/2) * resultant(f, f') / lc(f)`. Degree must be >= 1.
    pub fn discriminant(&self) -> Result<Rational, Error> {
        let d = self
            .degree()
            .filter(|&d| d >= 1)
            .ok_or(Error::ZeroPolynomial("discriminant needs degree >= 1"))?;
        if d == 1 {
            return Ok(Rational::one());
        }
        let res = self.resultant(&self.derivative())?;
        let sign = if (d * (d - 1) / 2) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        Ok(sign * res / self.leading().unwrap())
    }

    /// All rational roots with multiplicities, by exhaustive divisor search
    /// on the primitive integer model. Errors when the leading or trailing
    /// coefficient is too large to factor by trial division; callers that
    /// can tolerate an incomplete answer should fall back to numeric roots
    /// plus exact verification.
    pub fn rational_roots(&self) -> Result<Vec<(Rational, u32)>, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("rational_roots"));
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let mut roots = Vec::new();
        let mut p = self.primitive_part();
        if let Some(v) = p.valuation().filter(|&v| v > 0) {
            roots.push((Rational::zero(), v as u32));
            p = UnivariatePoly::new(p.coeffs[v..].to_vec());
        }
        if p.is_constant() {
            return Ok(roots);
        }
        let trailing = p.coeffs.first().unwrap().to_integer();
        let leading = p.leading().unwrap().to_integer();
        let num_divs = divisors(&trailing).ok_or_else(|| {
            Error::Internal("trailing coefficient too large for exact root search".into())
        })?;
        let den_divs = divisors(&leading).ok_or_else(|| {
            Error::Internal("leading coefficient too large for exact root search".into())
        })?;
        for a in &num_divs {
            for b in &den_divs {
                for sign in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(*a) * sign, BigInt::from(*b));
                    if !p.eval(&cand).is_zero() {
                        continue;
                    }
                    if roots.iter().any(|(r, _)| *r == cand) {
                        continue;
                    }
                    let lin = UnivariatePoly::new(vec![-cand.clone(), Rational::one()]);
                    let mut mult = 0u32;
                    loop {
                        let (q, r) = p.div_rem(&lin);
                        if r.is_zero() {
                            mult += 1;
                            p = q;
                        } else {
                            break;
                        }
                    }
                    roots.push((cand, mult));
                }
            }
        }
        roots.sort_by(|(a, _), (b, _)| a.partial_cmp(b).unwrap());
        Ok(roots)
    }

    /// Newton interpolation through distinct nodes. Exact.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let n = points.len();
        if n == 0 {
            return UnivariatePoly::zero();
        }
        // Divided differences in place.
        let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let dx = &points[i].0 - &points[i - level].0;
                assert!(!dx.is_zero(), "interpolation nodes must be distinct");
                dd[i] = (&dd[i] - &dd[i - 1]) / dx;
            }
        }
        let mut result = UnivariatePoly::zero();
        let mut basis = UnivariatePoly::one();
        for (i, c) in dd.iter().enumerate() {
            result = result.add(&basis.scale(c));
            if i + 1 < n {
                let node = &points[i].0;
                basis = basis.mul(&UnivariatePoly::new(vec![-node.clone(), Rational::one()]));
            }
        }
        result
    }

    /// Render with `x` as the variable in the shared text grammar.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => format_rational(c),
                _ => {
                    let var_part = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if c.is_one() {
                        var_part
                    } else if (-c).is_one() {
                        format!("-{var_part}")
                    } else {
                        format!("{}*{var_part}", format_rational(c))
                    }
                }
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
}

impl std::fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

/// Fraction-free Bareiss determinant over the integers.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = val;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// All positive divisors when the value can be factored quickly by trial
/// division; `None` for values beyond the search budget.
fn divisors(n: &BigInt) -> Option<Vec<i64>> {
    let nb = n.abs();
    if nb.is_zero() {
        // Zero trailing coefficient is stripped before calling.
        return Some(vec![1]);
    }
    let v = i64::try_from(nb).ok()?;
    if v > 1_000_000_000_000_000 {
        return None;
    }
    let mut rest = v;
    let mut primes: Vec<(i64, u32)> = Vec::new();
    let mut p = 2i64;
    while p * p <= rest {
        if p > 2_000_000 {
            return None;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = vec![1i64];
    for (p, e) in primes {
        let base = divs.clone();
        let mut pk = 1i64;
        for _ in 0..e {
            pk = pk.checked_mul(p)?;
            for d in &base {
                divs.push(d.checked_mul(pk)?);
            }
        }
    }
    divs.sort_unstable();
    Some(divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn poly(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(c)
    }

    #[test]
    fn division_round_trips() {
        let a = poly(&[1, 0, -3, 4, 2]);
        let b = poly(&[2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let common = poly(&[1, 1]);
        let a = common.mul(&poly(&[3, 0, 1]));
        let b = common.mul(&poly(&[-2, 5])).scale(&rat(7, 3));
        let g = a.gcd(&b);
        assert_eq!(g, common.make_monic());
    }

    #[test]
    fn resultant_matches_pinned_convention() {
        // f rows first: res(x - 2, x - 3) = det [[1, -2], [1, -3]] = -1.
        let f = poly(&[-2, 1]);
        let g = poly(&[-3, 1]);
        assert_eq!(f.resultant(&g).unwrap(), rat_i(-1));
        assert_eq!(g.resultant(&f).unwrap(), rat_i(1));
    }

    #[test]
    fn resultant_vanishes_iff_common_root() {
        let f = poly(&[-1, 0, 1]); // (x-1)(x+1)
        let g = poly(&[-1, 1]); // x - 1
        assert_eq!(f.resultant(&g).unwrap(), rat_i(0));
        let h = poly(&[-5, 1]);
        assert!(!f.resultant(&h).unwrap().is_zero());
    }

    #[test]
    fn resultant_respects_scaling() {
        let f = poly(&[1, 4, 1, 3]);
        let g = poly(&[2, -7, 5]);
        let base = f.resultant(&g).unwrap();
        let scaled = f.scale(&rat(3, 2)).resultant(&g).unwrap();
        // res(c*f, g) = c^deg(g) * res(f, g)
        assert_eq!(scaled, rat(9, 4) * base);
    }

    #[test]
    fn discriminant_pinned_values() {
        assert_eq!(poly(&[1, 0, 1]).discriminant().unwrap(), rat_i(-4));
        assert_eq!(poly(&[1, -2, 1]).discriminant().unwrap(), rat_i(0));
        // x^3 + px + q has discriminant -4p^3 - 27q^2.
        let cubic = poly(&[5, -2, 0, 1]);
        assert_eq!(cubic.discriminant().unwrap(), rat_i(-4 * (-8) - 27 * 25));
    }

    #[test]
    fn squarefree_factor_reconstructs_input() {
        // 6 * (x+1)^2 * (x^2+1)^3 * (x-2)
        let input = poly(&[1, 1])
            .pow(2)
            .mul(&poly(&[1, 0, 1]).pow(3))
            .mul(&poly(&[-2, 1]))
            .scale(&rat_i(6));
        let (lambda, factors) = input.squarefree_factor();
        assert_eq!(lambda, rat_i(6));
        let mut rebuilt = UnivariatePoly::constant(lambda);
        for f in &factors {
            assert_eq!(f.factor.leading(), Some(&rat_i(1)));
            assert!(f.factor.gcd(&f.factor.derivative()).is_constant());
            rebuilt = rebuilt.mul(&f.factor.pow(f.multiplicity));
        }
        assert_eq!(rebuilt, input);
        let mults: Vec<u32> = factors.iter().map(|f| f.multiplicity).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn rational_roots_with_multiplicities() {
        // (2x - 1)(x + 3)^2 (x^2 + 1)
        let p = poly(&[-1, 2]).mul(&poly(&[3, 1]).pow(2)).mul(&poly(&[1, 0, 1]));
        let roots = p.rational_roots().unwrap();
        assert_eq!(roots, vec![(rat_i(-3), 2), (rat(1, 2), 1)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = poly(&[3, -1, 0, 2]);
        let points: Vec<(Rational, Rational)> = (-2..=2)
            .map(|i| (rat_i(i), p.eval(&rat_i(i))))
            .collect();
        assert_eq!(UnivariatePoly::interpolate(&points), p);
    }

    #[test]
    fn text_rendering() {
        let p = UnivariatePoly::new(vec![rat(1, 2), rat_i(0), rat_i(-3), rat_i(1)]);
        assert_eq!(p.to_text("x"), "x^3 - 3*x^2 + 1/2");
    }
}
