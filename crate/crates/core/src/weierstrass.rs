//! Normalization of a pointed curve and the exact constant-moduli decision.
//!
//! [`reduce`] takes a curve `G` and a point `p` and produces the canonical
//! model: after moving `p` to `[1:0:0]` and removing components that are
//! lines through `p`, the fibers over the pencil of lines through `p` are
//! rescaled and shifted (an affine change on each fiber, which is exactly
//! the equivalence the moduli question quotients by) until
//!
//! ```text
//! G = Z^m * X^d + sum_{h=2}^{d} F_{m+h}(Y, Z) * X^(d-h)
//! ```
//!
//! with `F_{m+h}` of degree `m + h` and no `X^(d-1)` term.
//!
//! [`decide`] answers whether almost all fibers are related by affine maps
//! of the line. The criterion is exact: with `k` the gcd of the active
//! levels `h`, the answer is yes iff all pairs of active coefficients
//! satisfy `F_{m+h}^j = c * Z^(m(j-h)) * F_{m+j}^h`. On success the curve
//! is rebuilt as a product
//!
//! ```text
//! X^s * prod_j (X^k * Z^a - alpha_j * H(Y,Z) * Z^b)
//! ```
//!
//! over the roots `alpha_j` of an explicit companion polynomial, and the
//! reconstruction is verified by exact expansion.

use crate::binary::BinaryForm;
use crate::error::Error;
use crate::numkernel::{complex_roots, RootSet};
use crate::rational::{rat_i, Rational};
use crate::ternary::{mat3_identity, Mat3, TernaryForm};
use crate::univariate::UnivariatePoly;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Record of the coordinate work done by [`reduce`], in application order:
/// projective change, line removal, fiberwise monic scaling, fiber shift,
/// constant rescale.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// Maps canonical coordinates to the input coordinates; the canonical
    /// base point `[1:0:0]` goes to the input point.
    pub to_input: Mat3,
    /// Multiplicity of the point on the input curve.
    pub multiplicity_at_point: usize,
    /// Product of the components through the point that were removed
    /// (degree 0 when nothing was removed), in the moved coordinates.
    pub stripped: BinaryForm,
    /// Leading `X`-coefficient before the fiberwise rescale `x -> x / lead`.
    pub fiber_scale: BinaryForm,
    /// Shift `s(y)` applied as `x -> x - s(y)` to kill the `X^(d-1)` term.
    pub x_shift: UnivariatePoly,
    /// Final constant rescale of `x`, canonicalizing coefficient content.
    pub x_scale: Rational,
}

/// A pointed curve in canonical shape.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassData {
    /// Degree in `X`, the number of pencil intersections away from the point.
    pub d: usize,
    /// `degree - d` of the canonical model.
    pub m: usize,
    /// The canonical form itself.
    pub form: TernaryForm,
    /// `F_{m+h}` indexed by `h = 0..=d`; entry 0 is `Z^m`, entry 1 is zero.
    pub coefficients: Vec<BinaryForm>,
    pub reduction: Reduction,
}

/// Product shape extracted by [`decide`] on a constant-moduli curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    /// Gcd of the active coefficient levels; 0 for the fully collapsed
    /// curve `X^d`.
    pub k: usize,
    /// Number of product factors, `(d - x_power) / k`.
    pub n: usize,
    /// Power of the `X = 0` line split off in front.
    pub x_power: usize,
    /// The shared binary form, primitive with positive leading coefficient.
    pub h: BinaryForm,
    /// `lambda_t` for `t = 1..=n`; the curve is
    /// `X^x_power * sum_t lambda_t (X^k Z^a)^(n-t) (H Z^b)^t` with
    /// `lambda_0 = 1`.
    pub lambdas: Vec<Rational>,
    /// `W^n + lambda_1 W^(n-1) + ... + lambda_n`; the factor multipliers
    /// `alpha_j` are its roots.
    pub companion: UnivariatePoly,
    /// Companion roots, numerically.
    pub alphas: RootSet,
    /// Per-factor `Z` paddings `(a, b)`: the factor is
    /// `X^k Z^a - alpha_j H Z^b`, homogeneous of degree `max(k, deg H)`.
    pub z_padding: (usize, usize),
    /// `expand() = Z^z_clearance * (canonical form)`.
    pub z_clearance: usize,
}

impl NormalForm {
    fn degenerate(d: usize) -> Self {
        NormalForm {
            k: 0,
            n: 0,
            x_power: d,
            h: BinaryForm::new(0, vec![Rational::one()]),
            lambdas: Vec::new(),
            companion: UnivariatePoly::one(),
            alphas: RootSet { roots: Vec::new() },
            z_padding: (0, 0),
            z_clearance: 0,
        }
    }

    pub fn factor_degree(&self) -> usize {
        self.k.max(self.h.degree())
    }

    /// The branch form `H * Z^b`, degree `max(k, deg H)`: the full binary
    /// form each factor equates with `X^k Z^a`.
    pub fn branch(&self) -> BinaryForm {
        let b = self.z_padding.1;
        BinaryForm::monomial(b, b, Rational::one()).mul(&self.h)
    }

    /// Exact expansion of the product; equals `Z^z_clearance` times the
    /// canonical form.
    pub fn expand(&self) -> TernaryForm {
        if self.n == 0 {
            return TernaryForm::monomial(
                self.x_power,
                (self.x_power as u16, 0, 0),
                Rational::one(),
            );
        }
        let a = self.z_padding.0;
        let a_form = TernaryForm::monomial(
            self.k + a,
            (self.k as u16, 0, a as u16),
            Rational::one(),
        );
        let b_form = binary_as_ternary(&self.branch());
        let mut sum = a_form.pow(self.n as u32);
        for t in 1..=self.n {
            if self.lambdas[t - 1].is_zero() {
                continue;
            }
            let term = a_form
                .pow((self.n - t) as u32)
                .mul(&b_form.pow(t as u32))
                .scale(&self.lambdas[t - 1]);
            sum = sum.add(&term).expect("homogeneous product expansion");
        }
        if self.x_power > 0 {
            let xs = TernaryForm::monomial(
                self.x_power,
                (self.x_power as u16, 0, 0),
                Rational::one(),
            );
            sum = sum.mul(&xs);
        }
        sum
    }

    /// One-line description of the product shape.
    pub fn to_text(&self) -> String {
        if self.n == 0 {
            return format!("X^{}", self.x_power);
        }
        let (a, b) = self.z_padding;
        let xk = if self.k == 1 { "X".to_string() } else { format!("X^{}", self.k) };
        let xpart = if a == 0 {
            xk
        } else if a == 1 {
            format!("{xk}*Z")
        } else {
            format!("{xk}*Z^{a}")
        };
        let htext = self.h.to_text();
        let hpart = if b == 0 {
            format!("({htext})")
        } else if b == 1 {
            format!("({htext})*Z")
        } else {
            format!("({htext})*Z^{b}")
        };
        let factor = format!("({xpart} - alpha*{hpart})");
        let prod = format!(
            "prod[{factor} : alpha over roots of {}]",
            self.companion.to_text("W")
        );
        match self.x_power {
            0 => prod,
            1 => format!("X * {prod}"),
            s => format!("X^{s} * {prod}"),
        }
    }
}

/// Verdict of the exact decision, with evidence either way.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuliVerdict {
    Constant(ConstantModuli),
    NonConstant(NonConstantWitness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantModuli {
    pub k: usize,
    pub normal_form: NormalForm,
    /// Set when the curve contains `X = 0` with multiplicity at least 2,
    /// i.e. the input was not reduced.
    pub non_reduced: bool,
}

/// A pair of coefficient levels whose proportionality test failed.
#[derive(Debug, Clone, PartialEq)]
pub struct NonConstantWitness {
    /// The two levels `(h, j)`: `F_{m+h}^j` is not proportional to
    /// `Z^(m(j-h)) * F_{m+j}^h`.
    pub pair: (usize, usize),
    pub lhs: BinaryForm,
    pub rhs: BinaryForm,
}

impl ModuliVerdict {
    pub fn is_constant(&self) -> bool {
        matches!(self, ModuliVerdict::Constant(_))
    }
}

fn binary_as_ternary(b: &BinaryForm) -> TernaryForm {
    TernaryForm::from_x_coefficients(std::slice::from_ref(b)).expect("binary lift")
}

/// Normalize a pointed curve. See the module docs for the exact shape.
pub fn reduce(g: &TernaryForm, point: &[Rational; 3]) -> Result<WeierstrassData, Error> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial("reduce"));
    }
    if g.degree() == 0 {
        return Err(Error::InvalidInput("constant polynomial is not a curve".into()));
    }
    if point.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("0,0,0 is not a projective point".into()));
    }

    // Projective change: largest coordinate first, then shear onto [1:0:0].
    let idx = point
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.abs().cmp(&b.abs()))
        .map(|(i, _)| i)
        .unwrap();
    let mut perm = mat3_identity();
    perm.swap(0, idx);
    let q = [
        point[idx].clone(),
        if idx == 1 { point[0].clone() } else { point[1].clone() },
        if idx == 2 { point[0].clone() } else { point[2].clone() },
    ];
    let mut shear = mat3_identity();
    shear[1][0] = &q[1] / &q[0];
    shear[2][0] = &q[2] / &q[0];
    let to_input = crate::ternary::mat3_mul(&perm, &shear);
    let moved = g.compose_linear(&to_input);
    let multiplicity_at_point = moved.degree() - moved.x_degree().unwrap_or(0);

    // Components through the point contribute to every fiber trivially;
    // remove and record them.
    let content = moved.binary_content();
    let stripped_curve = if content.degree() > 0 {
        moved.divide_binary(&content)?
    } else {
        moved.clone()
    };
    let d = stripped_curve.x_degree().unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidInput(
            "every component of the curve is a line through the point".into(),
        ));
    }

    // Fiberwise affine normalization in the chart z = 1.
    let affine = stripped_curve.dehomogenize_z();
    let lead = affine[d].clone();
    let fiber_scale = stripped_curve.x_coefficients()[d].clone();
    let mut monic: Vec<UnivariatePoly> = Vec::with_capacity(d + 1);
    for (k, gk) in affine.iter().enumerate() {
        if k == d {
            monic.push(UnivariatePoly::one());
        } else {
            monic.push(gk.mul(&lead.pow((d - 1 - k) as u32)));
        }
    }

    let x_shift = monic[d - 1].scale(&(rat_i(1) / rat_i(d as i64)));
    let shifted = substitute_x_shift(&monic, &x_shift);
    debug_assert!(shifted[d - 1].is_zero());

    let x_scale = canonical_x_scale(&shifted, d);
    let mut scaled: Vec<UnivariatePoly> = Vec::with_capacity(d + 1);
    for (k, gk) in shifted.iter().enumerate() {
        let factor = pow_rational(&x_scale, -((d - k) as i64));
        scaled.push(gk.scale(&factor));
    }

    let form = TernaryForm::homogenize_min(&scaled)?;
    let m = form.degree() - d;
    let xcs = form.x_coefficients();
    let coefficients: Vec<BinaryForm> = (0..=d).map(|h| xcs[d - h].clone()).collect();
    if coefficients[0] != BinaryForm::monomial(m, m, Rational::one()) {
        return Err(Error::Internal("canonical leading coefficient is not Z^m".into()));
    }
    if d >= 1 && !coefficients[1].is_zero() {
        return Err(Error::Internal("canonical X^(d-1) coefficient did not vanish".into()));
    }

    Ok(WeierstrassData {
        d,
        m,
        form,
        coefficients,
        reduction: Reduction {
            to_input,
            multiplicity_at_point,
            stripped: content,
            fiber_scale,
            x_shift,
            x_scale,
        },
    })
}

/// Coefficients of `P(x - s)` where `P` is given by `x`-coefficients that
/// are polynomials in `y`.
fn substitute_x_shift(coeffs: &[UnivariatePoly], s: &UnivariatePoly) -> Vec<UnivariatePoly> {
    // Horner in x: result = (...((b_d) * (x - s) + b_{d-1}) * (x - s) ...).
    let mut result: Vec<UnivariatePoly> = Vec::new();
    for bk in coeffs.iter().rev() {
        // result * (x - s)
        let mut next = vec![UnivariatePoly::zero(); result.len() + 1];
        for (i, c) in result.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(s));
        }
        next[0] = next[0].add(bk);
        // Trim top zeros to keep lengths honest.
        while next.len() > 1 && next.last().unwrap().is_zero() {
            next.pop();
        }
        result = next;
    }
    result
}

fn pow_rational(c: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= c;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Canonical constant `c` for the rescale `x -> c x`: per prime `p`, the
/// exponent is `min_k floor(v_p(content(g_k)) / (d - k))` over the nonzero
/// coefficients below the leading one. This makes the canonical model
/// invariant under constant rescalings of `x` in the input. Factoring uses
/// trial division; prime factors beyond the bound are left alone (they
/// would only refine the cosmetic scale, never the verdict).
fn canonical_x_scale(coeffs: &[UnivariatePoly], d: usize) -> Rational {
    let mut valuations: BTreeMap<BigInt, i64> = BTreeMap::new();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut entries: Vec<(usize, Rational)> = Vec::new();
    for (k, gk) in coeffs.iter().enumerate() {
        if k >= d || gk.is_zero() {
            continue;
        }
        let content = gk.content();
        for p in prime_factors_capped(content.numer())
            .into_keys()
            .chain(prime_factors_capped(content.denom()).into_keys())
        {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        entries.push((k, content));
    }
    if entries.is_empty() {
        return Rational::one();
    }
    for p in &primes {
        let mut min_e: Option<i64> = None;
        for (k, content) in &entries {
            let v = valuation_in(content.numer(), p) - valuation_in(content.denom(), p);
            let e = v.div_euclid((d - k) as i64);
            min_e = Some(min_e.map_or(e, |cur| cur.min(e)));
        }
        if let Some(e) = min_e {
            if e != 0 {
                valuations.insert(p.clone(), e);
            }
        }
    }
    let mut c = Rational::one();
    for (p, e) in valuations {
        c *= pow_rational(&Rational::from_integer(p), e);
    }
    c
}

fn prime_factors_capped(n: &BigInt) -> BTreeMap<BigInt, u64> {
    let mut out = BTreeMap::new();
    let mut n = n.abs();
    if n <= BigInt::one() {
        return out;
    }
    let mut p = BigInt::from(2);
    let cap = BigInt::from(100_000);
    while &p * &p <= n && p <= cap {
        let mut e = 0u64;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.insert(p.clone(), e);
        }
        p += 1;
    }
    if n > BigInt::one() && n <= cap {
        *out.entry(n).or_insert(0) += 1;
    }
    // A leftover above the bound is ignored on purpose.
    out
}

fn valuation_in(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    if n.is_zero() {
        return 0;
    }
    let mut v = 0i64;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Exact decision: are almost all pencil fibers related by affine maps of
/// the line? Requires `d >= 3` (fewer than three moving points are always
/// affinely equivalent).
pub fn decide(data: &WeierstrassData, tol: f64) -> Result<ModuliVerdict, Error> {
    let d = data.d;
    if d < 3 {
        return Err(Error::UnsupportedDegree { d: d as u32 });
    }
    let m = data.m;
    let xcs = data.form.x_coefficients();
    let s = (0..=d)
        .find(|&k| !xcs[k].is_zero())
        .expect("nonzero canonical form");
    let dp = d - s;
    // Coefficient at level h of the X-stripped curve.
    let bh = |h: usize| -> &BinaryForm { &xcs[s + dp - h] };

    let active: Vec<usize> = (2..=dp).filter(|&h| !bh(h).is_zero()).collect();
    if active.is_empty() {
        // Everything collapsed onto X^d; every fiber is d times the origin.
        if m != 0 {
            return Err(Error::Internal("collapsed curve with leftover Z content".into()));
        }
        return Ok(ModuliVerdict::Constant(ConstantModuli {
            k: 0,
            normal_form: NormalForm::degenerate(d),
            non_reduced: d >= 2,
        }));
    }

    let h0 = active[0];
    for &j in &active[1..] {
        let lhs = bh(h0).pow(j as u32);
        let zshift = m * (j - h0);
        let rhs = BinaryForm::monomial(zshift, zshift, Rational::one()).mul(&bh(j).pow(h0 as u32));
        if lhs.proportional_to(&rhs).is_none() {
            return Ok(ModuliVerdict::NonConstant(NonConstantWitness {
                pair: (h0, j),
                lhs: bh(h0).clone(),
                rhs: bh(j).clone(),
            }));
        }
    }

    let k = active.iter().fold(0usize, |acc, h| acc.gcd(h));
    debug_assert!(dp % k == 0, "constant term level divides evenly");
    let n = dp / k;

    // Extract H from the smallest active level, then all lambdas exactly.
    let tmin = h0 / k;
    let f0 = bh(h0).dehomogenize();
    let (_, h_aff) = f0.perfect_power(tmin as u32).ok_or_else(|| {
        Error::NonRepresentable(format!(
            "coefficient at level {h0} is not a {tmin}th power"
        ))
    })?;
    let hbin = BinaryForm::from_univariate(&h_aff, h_aff.degree().unwrap_or(0))?;
    let delta = hbin.degree();

    let mut lambdas = vec![Rational::zero(); n];
    for &h in &active {
        let t = h / k;
        let ft = bh(h).dehomogenize();
        let q = ft.exact_div(&h_aff.pow(t as u32)).map_err(|_| {
            Error::NonRepresentable(format!("coefficient at level {h} is not a multiple of H^{t}"))
        })?;
        if !q.is_constant() {
            return Err(Error::NonRepresentable(format!(
                "coefficient at level {h} is H^{t} times a non-constant"
            )));
        }
        lambdas[t - 1] = q.coeff(0);
    }

    let mut comp = vec![Rational::zero(); n + 1];
    comp[n] = Rational::one();
    for t in 1..=n {
        comp[n - t] = lambdas[t - 1].clone();
    }
    let companion = UnivariatePoly::new(comp);
    let alphas = complex_roots(&companion, tol)?;

    let a = delta.saturating_sub(k);
    let b = k.saturating_sub(delta);
    let factor_degree = k.max(delta);
    let total = n * factor_degree;
    if total < dp + m {
        return Err(Error::Internal("normal form degree deficit".into()));
    }
    let normal_form = NormalForm {
        k,
        n,
        x_power: s,
        h: hbin,
        lambdas,
        companion,
        alphas,
        z_padding: (a, b),
        z_clearance: total - (dp + m),
    };

    // The expansion must reproduce the canonical form exactly.
    let clearance = normal_form.z_clearance;
    let zc = TernaryForm::monomial(clearance, (0, 0, clearance as u16), Rational::one());
    if normal_form.expand() != data.form.mul(&zc) {
        return Err(Error::Internal("normal form expansion mismatch".into()));
    }

    Ok(ModuliVerdict::Constant(ConstantModuli {
        k,
        normal_form,
        non_reduced: s >= 2,
    }))
}

/// Check whether `G(M v) = c * G(v)` for some scalar; returns the scalar.
pub fn verify_linear_automorphism(g: &TernaryForm, mat: &Mat3) -> Option<Rational> {
    let composed = g.compose_linear(mat);
    let (e, c) = composed.terms().next()?;
    let reference = g.coeff(*e);
    if reference.is_zero() {
        return None;
    }
    let scalar = c / &reference;
    if composed == g.scale(&scalar) {
        Some(scalar)
    } else {
        None
    }
}

/// Largest torus order: `(X, Y, Z) -> (w X, Y, Z)` maps `G` to a multiple of
/// itself exactly when `w^r = 1` for `r` the gcd of the differences of
/// `X`-exponents. Returns 0 when all terms share one `X`-exponent (every
/// `w` works).
pub fn x_scaling_symmetry_order(g: &TernaryForm) -> usize {
    let exps: Vec<usize> = g.terms().map(|(&(a, _, _), _)| a as usize).collect();
    if exps.is_empty() {
        return 0;
    }
    let base = exps[0];
    exps.iter()
        .fold(0usize, |acc, &a| acc.gcd(&a.abs_diff(base)))
}

/// Does the diagonal map with a primitive `k`-th root of unity on `X`
/// preserve the curve (up to scalar)?
pub fn has_x_scaling_symmetry(g: &TernaryForm, k: usize) -> bool {
    if k == 0 {
        return false;
    }
    let order = x_scaling_symmetry_order(g);
    order == 0 || order % k == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ternary;
    use crate::rational::rat;

    fn origin() -> [Rational; 3] {
        [rat_i(1), rat_i(0), rat_i(0)]
    }

    fn reduce_text(g: &str, p: [i64; 3]) -> WeierstrassData {
        let form = parse_ternary(g).unwrap();
        let point = [rat_i(p[0]), rat_i(p[1]), rat_i(p[2])];
        reduce(&form, &point).unwrap()
    }

    #[test]
    fn reduce_shifts_away_subleading_term() {
        // (X+Y)^3 + Z^3 seen from [1:0:0]: the shift x -> x - y removes the
        // cross terms entirely.
        let data = reduce_text("(X + Y)^3 + Z^3", [1, 0, 0]);
        assert_eq!(data.form, parse_ternary("X^3 + Z^3").unwrap());
        assert_eq!((data.d, data.m), (3, 0));
        assert_eq!(data.reduction.x_shift, UnivariatePoly::from_i64(&[0, 1]));
        assert_eq!(data.reduction.multiplicity_at_point, 0);
    }

    #[test]
    fn reduce_rescales_fibers_monic() {
        // Y*X^3 + Z^4 has multiplicity 1 at [1:0:0]; the monic rescale turns
        // it into the cuspidal cubic model.
        let data = reduce_text("Y*X^3 + Z^4", [1, 0, 0]);
        assert_eq!(data.form, parse_ternary("X^3 + Y^2*Z").unwrap());
        assert_eq!((data.d, data.m), (3, 0));
        assert_eq!(data.reduction.multiplicity_at_point, 1);
        assert_eq!(data.reduction.fiber_scale, BinaryForm::from_i64(&[1, 0]));
    }

    #[test]
    fn reduce_moves_the_point() {
        // Fermat cubic from [1:-1:0]: the point lies on the curve and the
        // X^3 terms cancel, leaving X-degree 2. The canonical model's m
        // reflects the fiberwise rescale, not the input multiplicity.
        let data = reduce_text("X^3 + Y^3 + Z^3", [1, -1, 0]);
        assert_eq!(data.reduction.multiplicity_at_point, 1);
        assert_eq!((data.d, data.m), (2, 2));
    }

    #[test]
    fn reduce_strips_lines_through_point() {
        let data = reduce_text("Y*X^2 + Y^2*Z", [1, 0, 0]);
        assert_eq!(data.reduction.stripped, BinaryForm::from_i64(&[1, 0]));
        assert_eq!(data.form, parse_ternary("X^2 + Y*Z").unwrap());
    }

    #[test]
    fn reduce_rejects_line_unions() {
        let g = parse_ternary("Y^2*Z + Y*Z^2").unwrap();
        assert!(matches!(
            reduce(&g, &origin()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn reduce_canonicalizes_x_rescale() {
        // x -> 2x on X^3 + Y^2*Z gives X^3 + 8 Y^2 Z before canonicalization;
        // both inputs end at the same model.
        let a = reduce_text("X^3 + Y^2*Z", [1, 0, 0]);
        let b = reduce_text("X^3 + 8*Y^2*Z", [1, 0, 0]);
        assert_eq!(a.form, b.form);
        assert_eq!(b.reduction.x_scale, rat_i(2));
    }

    fn decide_text(g: &str) -> ModuliVerdict {
        let data = reduce_text(g, [1, 0, 0]);
        decide(&data, 1e-10).unwrap()
    }

    #[test]
    fn decide_rejects_incompatible_levels() {
        match decide_text("X^3 + X*Z^2 + Y^3") {
            ModuliVerdict::NonConstant(w) => {
                assert_eq!(w.pair, (2, 3));
            }
            other => panic!("expected non-constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_concurrent_lines_k1() {
        match decide_text("X^3 + X*Y^2 + Y^3") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 1);
                let nf = &c.normal_form;
                assert_eq!(nf.n, 3);
                assert_eq!(nf.h, BinaryForm::from_i64(&[1, 0]));
                assert_eq!(nf.companion, UnivariatePoly::from_i64(&[1, 1, 0, 1]));
                assert_eq!(nf.x_power, 0);
                assert_eq!(nf.z_padding, (0, 0));
                assert_eq!(nf.z_clearance, 0);
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_fermat_cubic_k3() {
        match decide_text("X^3 + Y^3 + Z^3") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 3);
                let nf = &c.normal_form;
                assert_eq!(nf.n, 1);
                assert_eq!(nf.h, BinaryForm::from_i64(&[1, 0, 0, 1]));
                assert_eq!(nf.companion, UnivariatePoly::from_i64(&[1, 1]));
                let alphas = nf.alphas.with_multiplicity();
                assert_eq!(alphas.len(), 1);
                assert!((alphas[0] - num::complex::Complex64::new(-1.0, 0.0)).norm() < 1e-12);
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_cuspidal_with_z_padding() {
        match decide_text("X^3 + Y^2*Z") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 3);
                let nf = &c.normal_form;
                assert_eq!(nf.h, BinaryForm::from_i64(&[1, 0, 0]));
                assert_eq!(nf.z_padding, (0, 1));
                assert_eq!(nf.branch(), BinaryForm::from_i64(&[0, 1, 0, 0]));
                assert_eq!(nf.branch().degree(), 3);
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_two_conics_quartic() {
        match decide_text("X^4 - Y^2*Z^2") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 4);
                let nf = &c.normal_form;
                assert_eq!(nf.n, 1);
                assert_eq!(nf.h, BinaryForm::from_i64(&[1, 0, 0]));
                assert_eq!(nf.lambdas, vec![rat_i(-1)]);
                assert_eq!(nf.z_padding, (0, 2));
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_splits_off_x_line() {
        match decide_text("X^3 - X*Y*Z") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 2);
                assert!(!c.non_reduced);
                let nf = &c.normal_form;
                assert_eq!(nf.x_power, 1);
                assert_eq!(nf.n, 1);
                assert_eq!(nf.h, BinaryForm::from_i64(&[1, 0]));
                assert_eq!(nf.h.degree(), 1);
                assert_eq!(nf.lambdas, vec![rat_i(-1)]);
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_flags_non_reduced() {
        match decide_text("X^4 + X^2*Y^2") {
            ModuliVerdict::Constant(c) => {
                assert!(c.non_reduced);
                assert_eq!(c.normal_form.x_power, 2);
                assert_eq!(c.k, 2);
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_fully_collapsed_curve() {
        match decide_text("X^4") {
            ModuliVerdict::Constant(c) => {
                assert_eq!(c.k, 0);
                assert_eq!(c.normal_form.x_power, 4);
                assert_eq!(c.normal_form.expand(), parse_ternary("X^4").unwrap());
            }
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn decide_requires_three_moving_points() {
        let data = reduce_text("X^2 + Y*Z", [1, 0, 0]);
        assert!(matches!(
            decide(&data, 1e-10),
            Err(Error::UnsupportedDegree { d: 2 })
        ));
    }

    #[test]
    fn expansion_round_trips_with_clearance() {
        // m = 1 model: Z X^3 + Y^4 reduces to X^3 + Y^2 Z... use an input
        // that keeps m positive: X^4 + Y^5/...: pick Z X^4 + Y^5 directly.
        let data = reduce_text("Z*X^4 + Y^5", [1, 0, 0]);
        assert!(data.m <= 1);
        let verdict = decide(&data, 1e-10).unwrap();
        if let ModuliVerdict::Constant(c) = verdict {
            let zc = c.normal_form.z_clearance;
            let lhs = c.normal_form.expand();
            let rhs = data.form.mul(&TernaryForm::monomial(zc, (0, 0, zc as u16), rat_i(1)));
            assert_eq!(lhs, rhs);
        } else {
            panic!("expected constant");
        }
    }

    #[test]
    fn automorphism_checks() {
        let g = parse_ternary("X^3 + Y^3 + Z^3").unwrap();
        let mut swap = mat3_identity();
        swap.swap(1, 2);
        assert_eq!(verify_linear_automorphism(&g, &swap), Some(rat_i(1)));
        let mut shear = mat3_identity();
        shear[1][2] = rat_i(1);
        assert_eq!(verify_linear_automorphism(&g, &shear), None);
        let scale_x = {
            let mut m = mat3_identity();
            m[0][0] = rat(1, 2);
            m
        };
        // (X/2)^3 + Y^3 + Z^3 is not proportional to the cubic.
        assert_eq!(verify_linear_automorphism(&g, &scale_x), None);

        assert_eq!(x_scaling_symmetry_order(&g), 3);
        assert!(has_x_scaling_symmetry(&g, 3));
        assert!(!has_x_scaling_symmetry(&g, 4));
        let h = parse_ternary("X^4 + X^2*Y^2 + Y^4").unwrap();
        assert_eq!(x_scaling_symmetry_order(&h), 2);
    }
}
