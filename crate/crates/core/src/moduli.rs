//! Numeric sampling oracle for the constant-moduli question.
//!
//! This module never looks at the canonical model or the product normal
//! form. It slices the *input* curve along random rational lines through
//! the marked point, reads off each fiber as a multiset of points on an
//! affine line, and compares the multisets up to affine maps `x -> a*x + b`
//! through scale-free invariants. It exists to cross-check the exact
//! decision procedure with a completely different computation.
//!
//! The invariants: center a multiset of `d` points at its mean (killing
//! `b`), normalize by the spread, and take the elementary symmetric
//! functions `sigma_j` of the centered points. Under `x -> a*x` they
//! transform as `sigma_j -> a^j sigma_j`, so with `j0` the first index
//! where `sigma_j0 != 0`, the quantities `I_j = sigma_j^j0 / sigma_j0^j`
//! are full affine invariants of the configuration.

use std::collections::BTreeSet;

use num::complex::Complex64;
use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::numkernel::{self};
use crate::rational::Rational;
use crate::ternary::TernaryForm;
use crate::univariate::UnivariatePoly;

/// Affine-invariant data of a point multiset on the (complex) affine line.
#[derive(Debug, Clone)]
pub struct AffineInvariants {
    /// Mean of the points.
    pub center: Complex64,
    /// Largest distance from the mean.
    pub spread: f64,
    /// First index `j >= 2` with `sigma_j` nonzero at the working
    /// tolerance; `None` when every point coincides with the mean.
    pub j0: Option<usize>,
    /// Elementary symmetric functions of the centered points, normalized
    /// by the spread: entry `j` holds `sigma_j / spread^j`, `j = 0..=d`.
    pub sigma: Vec<Complex64>,
    /// The invariants `(j, I_j)` for `j0 < j <= d`.
    pub inv: Vec<(usize, Complex64)>,
}

/// Ascending coefficients of the monic polynomial with the given roots.
fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}

/// Compute the affine invariants of a point multiset. `zero_tol` decides
/// when a normalized `sigma_j` counts as zero; anything coming from
/// double-precision roots of exact polynomials is far below sensible
/// thresholds like `1e-5`.
pub fn invariants(points: &[Complex64], zero_tol: f64) -> AffineInvariants {
    let d = points.len();
    if d == 0 {
        return AffineInvariants {
            center: Complex64::new(0.0, 0.0),
            spread: 0.0,
            j0: None,
            sigma: Vec::new(),
            inv: Vec::new(),
        };
    }
    let center = points.iter().sum::<Complex64>() / d as f64;
    let centered: Vec<Complex64> = points.iter().map(|p| p - center).collect();
    let spread = centered.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    // Spread at the noise floor of the roots themselves: one point, seen
    // d times.
    if spread <= 1e-12 * (1.0 + center.norm()) {
        return AffineInvariants {
            center,
            spread,
            j0: None,
            sigma: Vec::new(),
            inv: Vec::new(),
        };
    }
    let unit: Vec<Complex64> = centered.iter().map(|c| c / spread).collect();
    let coeffs = poly_from_roots(&unit);
    // sigma_j is (-1)^j times the coefficient of x^(d-j).
    let sigma: Vec<Complex64> = (0..=d)
        .map(|j| coeffs[d - j] * if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let j0 = (2..=d).find(|&j| sigma[j].norm() > zero_tol);
    let inv = match j0 {
        None => Vec::new(),
        Some(j0) => ((j0 + 1)..=d)
            .map(|j| (j, sigma[j].powu(j0 as u32) / sigma[j0].powu(j as u32)))
            .collect(),
    };
    AffineInvariants {
        center,
        spread,
        j0,
        sigma,
        inv,
    }
}

/// Relative distance between two invariant vectors; `None` when the
/// configurations are structurally different (size or `j0` mismatch, or
/// exactly one side fully degenerate).
pub fn invariant_distance(a: &AffineInvariants, b: &AffineInvariants) -> Option<f64> {
    match (a.j0, b.j0) {
        (None, None) => Some(0.0),
        (Some(ja), Some(jb)) if ja == jb && a.inv.len() == b.inv.len() => {
            let mut dist = 0.0f64;
            for ((_, ia), (_, ib)) in a.inv.iter().zip(&b.inv) {
                dist = dist.max((ia - ib).norm() / (1.0 + ia.norm().max(ib.norm())));
            }
            Some(dist)
        }
        _ => None,
    }
}

/// An affine map `x -> a*x + b` matching one multiset onto another, with
/// the bottleneck distance achieved after mapping.
#[derive(Debug, Clone, Copy)]
pub struct AffineMatch {
    pub a: Complex64,
    pub b: Complex64,
    pub distance: f64,
}

/// Search for an affine map sending `pa` onto `pb`. The scaling must obey
/// `a^j0 = sigma'_j0 / sigma_j0`, so only `j0` candidates exist; each is
/// verified by bottleneck matching of the mapped points.
pub fn same_moduli(pa: &[Complex64], pb: &[Complex64], tol: f64) -> Option<AffineMatch> {
    if pa.len() != pb.len() {
        return None;
    }
    let zero_tol = tol.sqrt().max(1e-9);
    let ia = invariants(pa, zero_tol);
    let ib = invariants(pb, zero_tol);
    let accept = zero_tol * ib.spread.max(1e-12);
    match (ia.j0, ib.j0) {
        (None, None) => Some(AffineMatch {
            a: Complex64::new(1.0, 0.0),
            b: ib.center - ia.center,
            distance: 0.0,
        }),
        (Some(ja), Some(jb)) if ja == jb => {
            // Normalized sigmas absorb the spreads: a = (s_b / s_a) * u
            // with u^ja the ratio of normalized sigmas.
            let ratio = ib.sigma[ja] / ia.sigma[ja];
            let r = ratio.norm().powf(1.0 / ja as f64);
            let theta = ratio.arg() / ja as f64;
            let mut best: Option<AffineMatch> = None;
            for k in 0..ja {
                let angle = theta + 2.0 * std::f64::consts::PI * k as f64 / ja as f64;
                let a = Complex64::from_polar(r, angle) * (ib.spread / ia.spread);
                let b = ib.center - a * ia.center;
                let mapped: Vec<Complex64> = pa.iter().map(|x| a * x + b).collect();
                if let Some(dist) = numkernel::bottleneck_match(&mapped, pb) {
                    if dist <= accept && best.map_or(true, |m| dist < m.distance) {
                        best = Some(AffineMatch { a, b, distance: dist });
                    }
                }
            }
            best
        }
        _ => None,
    }
}

/// The exact polynomial cutting a line section out of the curve: the
/// points of the line through `p` and `q` are `[q + s*p]` for `s` in the
/// affine line, plus `p` itself at infinity, and the section is
/// `s -> g(q + s*p)`.
pub fn line_section(g: &TernaryForm, q: &[Rational; 3], p: &[Rational; 3]) -> UnivariatePoly {
    let d = g.degree();
    let lin: Vec<UnivariatePoly> = (0..3)
        .map(|i| UnivariatePoly::new(vec![q[i].clone(), p[i].clone()]))
        .collect();
    let pows: Vec<Vec<UnivariatePoly>> = lin
        .iter()
        .map(|l| {
            let mut v = vec![UnivariatePoly::one()];
            for k in 1..=d {
                v.push(v[k - 1].mul(l));
            }
            v
        })
        .collect();
    let mut acc = UnivariatePoly::zero();
    for (&(a, b, c), coeff) in g.terms() {
        let term = pows[0][a as usize]
            .mul(&pows[1][b as usize])
            .mul(&pows[2][c as usize]);
        acc = acc.add(&term.scale(coeff));
    }
    acc
}

/// Knobs for [`constant_moduli_oracle`]. The defaults check 16 generic
/// lines with parameters drawn from a fixed seed.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Number of generic lines to compare (including the reference line).
    pub samples: usize,
    pub seed: u64,
    /// Numeric tolerance; acceptance threshold is its square root.
    pub tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            samples: 16,
            seed: 0x5eed,
            tol: crate::DEFAULT_TOL,
        }
    }
}

/// What the sampling oracle saw.
#[derive(Debug, Clone)]
pub struct OracleVerdict {
    /// All compared fibers were affinely equivalent at the threshold.
    pub constant: bool,
    /// Number of moving intersection points on a generic line.
    pub fiber_degree: usize,
    /// Degree of `gcd(fiber, fiber')` on a generic line; nonzero means the
    /// curve is non-reduced along the pencil.
    pub repeated_degree: usize,
    /// Generic lines actually compared.
    pub lines_checked: usize,
    /// Sampled parameters rejected as special (degree drop or extra
    /// repeated roots).
    pub skipped_special: usize,
    /// Largest invariant distance seen across the compared lines.
    pub max_distance: f64,
    /// Acceptance threshold the distances were held against.
    pub threshold: f64,
    /// `j0` of the reference fiber; `None` when each fiber is a single
    /// point, which is constant for trivial reasons.
    pub reference_j0: Option<usize>,
    /// On a non-constant verdict, the two line parameters that disagree.
    pub witness: Option<(Rational, Rational)>,
    /// On a constant verdict with at least two lines, the affine map
    /// matching the first two fibers.
    pub witness_map: Option<AffineMatch>,
}

/// Decide constant moduli by sampling, entirely from the input pair.
///
/// Lines through `p` are parametrized as `p` joined with `e_i + t*e_j`,
/// where `e_i`, `e_j` are the two coordinate directions other than the
/// largest coordinate of `p`. A sampled line is *generic* when its section
/// has the maximal degree seen and the minimal repeated part seen; those
/// two numbers stabilize immediately because non-generic parameters form a
/// proper closed subset.
pub fn constant_moduli_oracle(
    g: &TernaryForm,
    point: &[Rational; 3],
    opts: &OracleOptions,
) -> Result<OracleVerdict, Error> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial("constant_moduli_oracle"));
    }
    if point.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("0,0,0 is not a projective point".into()));
    }
    if opts.samples < 2 {
        return Err(Error::InvalidInput("oracle needs at least two samples".into()));
    }
    let idx = point
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.abs().cmp(&b.abs()))
        .map(|(i, _)| i)
        .unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != idx).collect();
    let basis = |i: usize| -> [Rational; 3] {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero()];
        v[i] = Rational::one();
        v
    };
    let e1 = basis(others[0]);
    let e2 = basis(others[1]);

    // Sample distinct rational parameters and cut the sections exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    let mut sections: Vec<(Rational, UnivariatePoly)> = Vec::new();
    let mut skipped_special = 0usize;
    let budget = opts.samples * 30;
    for _ in 0..budget {
        if sections.len() >= opts.samples * 2 {
            break;
        }
        let num = rng.gen_range(-50i64..=50);
        let den = rng.gen_range(1i64..=50);
        let t = Rational::new(num.into(), den.into());
        if !seen.insert(t.clone()) {
            continue;
        }
        let mut q = e1.clone();
        for i in 0..3 {
            q[i] = &q[i] + &t * &e2[i];
        }
        let section = line_section(g, &q, point);
        if section.is_zero() {
            // The whole line lies on the curve.
            skipped_special += 1;
            continue;
        }
        sections.push((t, section));
    }
    if sections.len() < 2 {
        return Err(Error::DegenerateLine(
            "could not sample two lines not contained in the curve".into(),
        ));
    }

    let fiber_degree = sections
        .iter()
        .map(|(_, s)| s.degree().unwrap_or(0))
        .max()
        .unwrap();
    if fiber_degree == 0 {
        return Err(Error::DegenerateLine(
            "every sampled section is constant".into(),
        ));
    }
    let repeated_degree = sections
        .iter()
        .filter(|(_, s)| s.degree().unwrap_or(0) == fiber_degree)
        .map(|(_, s)| s.gcd(&s.derivative()).degree().unwrap_or(0))
        .min()
        .unwrap();

    let zero_tol = opts.tol.sqrt().max(1e-9);
    let threshold = zero_tol;
    let mut reference: Option<(Rational, Vec<Complex64>, AffineInvariants)> = None;
    let mut lines_checked = 0usize;
    let mut max_distance = 0.0f64;
    let mut witness: Option<(Rational, Rational)> = None;
    let mut witness_map: Option<AffineMatch> = None;

    for (t, section) in &sections {
        if lines_checked >= opts.samples {
            break;
        }
        if section.degree().unwrap_or(0) != fiber_degree
            || section.gcd(&section.derivative()).degree().unwrap_or(0) != repeated_degree
        {
            skipped_special += 1;
            continue;
        }
        let roots = numkernel::complex_roots(section, opts.tol)?;
        let points = roots.with_multiplicity();
        let inv = invariants(&points, zero_tol);
        match &reference {
            None => {
                reference = Some((t.clone(), points, inv));
            }
            Some((t0, pts0, inv0)) => {
                match invariant_distance(inv0, &inv) {
                    None => {
                        max_distance = f64::INFINITY;
                        if witness.is_none() {
                            witness = Some((t0.clone(), t.clone()));
                        }
                    }
                    Some(dist) => {
                        max_distance = max_distance.max(dist);
                        if dist > threshold && witness.is_none() {
                            witness = Some((t0.clone(), t.clone()));
                        }
                    }
                }
                if witness_map.is_none() && witness.is_none() {
                    witness_map = same_moduli(pts0, &points, opts.tol);
                }
            }
        }
        lines_checked += 1;
    }

    let reference = reference.ok_or_else(|| {
        Error::DegenerateLine("no generic line survived the special-line filter".into())
    })?;
    if lines_checked < 2 {
        return Err(Error::DegenerateLine(
            "fewer than two generic lines available for comparison".into(),
        ));
    }

    Ok(OracleVerdict {
        constant: witness.is_none(),
        fiber_degree,
        repeated_degree,
        lines_checked,
        skipped_special,
        max_distance,
        threshold,
        reference_j0: reference.2.j0,
        witness,
        witness_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_point, parse_ternary};
    use crate::rational::{rat, rat_i, to_f64};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn oracle(curve: &str, point: &str) -> OracleVerdict {
        let g = parse_ternary(curve).unwrap();
        let p = parse_point(point).unwrap();
        constant_moduli_oracle(&g, &p, &OracleOptions::default()).unwrap()
    }

    /// Exact reference computation of the invariants of a small rational
    /// multiset, used to pin the numeric path.
    fn exact_invariants(xs: &[Rational]) -> (Rational, Rational, Rational) {
        let d = rat_i(xs.len() as i64);
        let mu = xs.iter().sum::<Rational>() / &d;
        let cs: Vec<Rational> = xs.iter().map(|x| x - &mu).collect();
        assert_eq!(cs.len(), 3, "reference path is for triples");
        let s2 = &cs[0] * &cs[1] + &cs[0] * &cs[2] + &cs[1] * &cs[2];
        let s3 = &cs[0] * &cs[1] * &cs[2];
        // I_3 = s3^2 / s2^3 for j0 = 2.
        let i3 = &s3 * &s3 / (&s2 * &s2 * &s2);
        (mu, s2, i3)
    }

    #[test]
    fn pinned_invariants_of_small_triples() {
        // {0, 1, 2}: centered {-1, 0, 1}, sigma_2 = -1, sigma_3 = 0.
        let (mu, s2, i3) = exact_invariants(&[rat_i(0), rat_i(1), rat_i(2)]);
        assert_eq!(mu, rat_i(1));
        assert_eq!(s2, rat_i(-1));
        assert_eq!(i3, rat_i(0));

        // {0, 1, 3}: centered {-4/3, -1/3, 5/3}, sigma_2 = -7/3,
        // sigma_3 = 20/27, I_3 = -400/9261.
        let (mu, s2, i3) = exact_invariants(&[rat_i(0), rat_i(1), rat_i(3)]);
        assert_eq!(mu, rat(4, 3));
        assert_eq!(s2, rat(-7, 3));
        assert_eq!(i3, rat(-400, 9261));

        // The numeric path agrees after undoing the spread normalization.
        let inv = invariants(&reals(&[0.0, 1.0, 3.0]), 1e-9);
        assert_eq!(inv.j0, Some(2));
        let spread = inv.spread;
        assert!((inv.center - c(to_f64(&rat(4, 3)), 0.0)).norm() < 1e-14);
        let sigma2 = inv.sigma[2] * spread.powi(2);
        assert!((sigma2 - c(to_f64(&rat(-7, 3)), 0.0)).norm() < 1e-12);
        assert_eq!(inv.inv.len(), 1);
        let i3_num = inv.inv[0].1;
        assert!((i3_num - c(to_f64(&rat(-400, 9261)), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn invariants_do_not_move_under_affine_maps() {
        let pts = vec![c(1.0, 0.0), c(2.0, 1.0), c(-3.0, 0.5), c(0.0, 5.0)];
        let a = c(1.5, -0.7);
        let b = c(2.0, 0.3);
        let mapped: Vec<Complex64> = pts.iter().map(|x| a * x + b).collect();
        let ia = invariants(&pts, 1e-9);
        let ib = invariants(&mapped, 1e-9);
        assert_eq!(ia.j0, ib.j0);
        let dist = invariant_distance(&ia, &ib).unwrap();
        assert!(dist < 1e-12, "distance {}", dist);
    }

    #[test]
    fn same_moduli_recovers_the_map() {
        let pts = vec![c(0.0, 0.0), c(1.0, 0.0), c(3.0, 2.0), c(-1.0, 1.0)];
        let a = c(0.5, 2.0);
        let b = c(-1.0, 0.25);
        let mapped: Vec<Complex64> = pts.iter().map(|x| a * x + b).collect();
        let m = same_moduli(&pts, &mapped, 1e-10).unwrap();
        assert!((m.a - a).norm() < 1e-9, "a = {}", m.a);
        assert!((m.b - b).norm() < 1e-9, "b = {}", m.b);
        assert!(m.distance < 1e-9);
    }

    #[test]
    fn same_moduli_rejects_different_shapes() {
        let pa = reals(&[0.0, 1.0, 2.0, 4.0]);
        let pb = reals(&[0.0, 1.0, 2.0, 5.0]);
        assert!(same_moduli(&pa, &pb, 1e-10).is_none());
    }

    #[test]
    fn line_sections_drop_degree_at_singular_base_points() {
        let g = parse_ternary("z*x^3 + y^4").unwrap();
        let p = parse_point("1,0,0").unwrap();
        // q = e2 + t e3 with t = 1: section s^3 * 1 + 1.
        let q = [rat_i(0), rat_i(1), rat_i(1)];
        let s = line_section(&g, &q, &p);
        assert_eq!(s.degree(), Some(3));
    }

    #[test]
    fn oracle_accepts_fermat_cubic() {
        let v = oracle("x^3 + y^3 + z^3", "1,0,0");
        assert!(v.constant, "max distance {}", v.max_distance);
        assert_eq!(v.fiber_degree, 3);
        assert_eq!(v.repeated_degree, 0);
        assert!(v.lines_checked >= 2);
        assert!(v.max_distance <= v.threshold);
        assert!(v.witness_map.is_some());
    }

    #[test]
    fn oracle_rejects_generic_perturbation() {
        let v = oracle("x^3 + x*z^2 + y^3", "1,0,0");
        assert!(!v.constant);
        assert!(v.witness.is_some());
        assert!(v.max_distance > 1e-2);
    }

    #[test]
    fn oracle_ignores_components_through_the_point() {
        // (y - z) * (x^3 + y^3 + z^3): the line factor passes through the
        // base point, so it only shifts every section by a constant factor.
        let v = oracle("(y - z)*(x^3 + y^3 + z^3)", "1,0,0");
        assert!(v.constant);
        assert_eq!(v.fiber_degree, 3);
    }

    #[test]
    fn oracle_handles_repeated_pencil_roots() {
        // x^4 + x^2 y^2 = x^2 (x^2 + y^2): every fiber carries a double
        // root at the origin; the configurations {0, 0, i t, -i t} are all
        // equivalent by scaling.
        let v = oracle("x^4 + x^2*y^2", "1,0,0");
        assert!(v.constant);
        assert_eq!(v.fiber_degree, 4);
        assert_eq!(v.repeated_degree, 1);
    }

    #[test]
    fn oracle_is_deterministic() {
        let a = oracle("x^4 + y^4 + z^4", "1,0,0");
        let b = oracle("x^4 + y^4 + z^4", "1,0,0");
        assert_eq!(a.constant, b.constant);
        assert_eq!(a.max_distance.to_bits(), b.max_distance.to_bits());
        assert_eq!(a.lines_checked, b.lines_checked);
    }
}
