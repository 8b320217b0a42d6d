//! Numeric root finding and multiset matching.
//!
//! The entry point for exact polynomials is [`complex_roots`]: it first runs
//! an exact squarefree factorization, then finds the roots of each squarefree
//! factor numerically. Multiple roots are therefore known exactly as
//! multiplicities and the numeric solver only ever sees simple roots, where
//! Newton polishing converges quadratically.
//!
//! The solver itself is the Aberth simultaneous iteration with a fixed,
//! deterministic starting configuration (no randomness), so repeated runs
//! produce bit-identical output.
//!
//! [`bottleneck_match`] compares two point multisets by minimizing the
//! largest matched distance over perfect matchings; this is what the sampling
//! oracle uses to compare root multisets of two fibers.

use crate::error::Error;
use crate::rational::{to_f64, Rational};
use crate::univariate::UnivariatePoly;
use num::complex::Complex64;
use num::{Signed, Zero};

/// Largest degree the numeric solver accepts.
pub const MAX_NUMERIC_DEGREE: usize = 64;

const ABERTH_MAX_ITERS: usize = 400;
const POLISH_STEPS: usize = 6;

/// A numerically found root with a first-order backward error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    /// Roughly `|p(z)| / |p'(z)|` after polishing.
    pub err: f64,
}

impl ComplexApprox {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Roots of a polynomial with exact multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Distinct roots paired with their multiplicities, sorted by
    /// `(re, im)` of the root.
    pub roots: Vec<(ComplexApprox, usize)>,
}

impl RootSet {
    /// All roots repeated according to multiplicity.
    pub fn with_multiplicity(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for (r, m) in &self.roots {
            for _ in 0..*m {
                out.push(r.value());
            }
        }
        out
    }

    pub fn distinct_count(&self) -> usize {
        self.roots.len()
    }

    /// Multiplicities in descending order, e.g. `[2, 1, 1]`.
    pub fn multiplicity_pattern(&self) -> Vec<usize> {
        let mut pattern: Vec<usize> = self.roots.iter().map(|(_, m)| *m).collect();
        pattern.sort_unstable_by(|a, b| b.cmp(a));
        pattern
    }

    pub fn max_err(&self) -> f64 {
        self.roots.iter().map(|(r, _)| r.err).fold(0.0, f64::max)
    }
}

fn ceval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn cderiv(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

/// Aberth simultaneous iteration. Expects `coeffs[0] != 0` and a nonzero
/// leading coefficient, degree >= 1.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let n = coeffs.len() - 1;
    let deriv = cderiv(coeffs);
    // Deterministic start: points on a circle of radius given by the Cauchy
    // bound, at angles avoiding real-axis symmetry traps.
    let lead = coeffs[n].norm();
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.43;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..ABERTH_MAX_ITERS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let p = ceval(coeffs, z[i]);
            let dp = ceval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() == 0.0 {
                // Flat spot; nudge deterministically.
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i] - zj;
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-300 { newton } else { newton / denom };
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        let scale = z.iter().map(|w| w.norm()).fold(1.0, f64::max);
        if max_step < 1e-14 * scale {
            break;
        }
    }
    // Non-convergence is not reported here: polishing follows, and bad roots
    // surface through their error estimates.
    Ok(z)
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> (Complex64, f64) {
    let deriv = cderiv(coeffs);
    for _ in 0..POLISH_STEPS {
        let p = ceval(coeffs, z);
        let dp = ceval(&deriv, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
    }
    let p = ceval(coeffs, z);
    let dp = ceval(&deriv, z);
    let err = if dp.norm() > 1e-300 {
        p.norm() / dp.norm()
    } else {
        p.norm().sqrt()
    };
    (z, err)
}

/// Roots of a polynomial with complex f64 coefficients (ascending).
/// No multiplicity detection; multiple roots come back as clusters.
pub fn complex_roots_c64(coeffs: &[Complex64]) -> Result<Vec<ComplexApprox>, Error> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::ZeroPolynomial("complex_roots_c64"));
    }
    if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::RootFinding("non-finite coefficient".into()));
    }
    let mut out: Vec<ComplexApprox> = Vec::new();
    while c.first().is_some_and(|v| v.norm() == 0.0) {
        c.remove(0);
        out.push(ComplexApprox { re: 0.0, im: 0.0, err: 0.0 });
    }
    let n = c.len() - 1;
    if n > MAX_NUMERIC_DEGREE {
        return Err(Error::UnsupportedDegree { d: n as u32 });
    }
    let scale = c.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if scale > 0.0 {
        for v in c.iter_mut() {
            *v /= scale;
        }
    }
    if n >= 1 {
        for z in solve_by_degree(&c)? {
            let (z, err) = polish(&c, z);
            out.push(ComplexApprox { re: z.re, im: z.im, err });
        }
    }
    sort_approx(&mut out);
    Ok(out)
}

/// Roots of a polynomial given by raw f64 coefficients (ascending).
/// No multiplicity detection is attempted; a multiple root comes back as a
/// cluster of nearby points with larger error estimates.
pub fn complex_roots_f64(coeffs: &[f64]) -> Result<Vec<ComplexApprox>, Error> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::ZeroPolynomial("complex_roots_f64"));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::RootFinding("non-finite coefficient".into()));
    }
    let mut zeros_at_origin = 0usize;
    while c.first().is_some_and(|v| *v == 0.0) {
        c.remove(0);
        zeros_at_origin += 1;
    }
    let n = c.len() - 1;
    if n > MAX_NUMERIC_DEGREE {
        return Err(Error::UnsupportedDegree { d: n as u32 });
    }
    let mut out: Vec<ComplexApprox> = Vec::new();
    for _ in 0..zeros_at_origin {
        out.push(ComplexApprox { re: 0.0, im: 0.0, err: 0.0 });
    }
    if n >= 1 {
        let cc: Vec<Complex64> = c.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        for z in solve_by_degree(&cc)? {
            let (z, err) = polish(&cc, z);
            out.push(ComplexApprox { re: z.re, im: z.im, err });
        }
    }
    sort_approx(&mut out);
    Ok(out)
}

fn solve_by_degree(cc: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    match cc.len() - 1 {
        0 => Ok(Vec::new()),
        1 => Ok(vec![-cc[0] / cc[1]]),
        2 => {
            let (a, b, c) = (cc[2], cc[1], cc[0]);
            let disc = (b * b - 4.0 * a * c).sqrt();
            // Pick the sign that avoids cancellation.
            let q = if (b + disc).norm() >= (b - disc).norm() {
                -0.5 * (b + disc)
            } else {
                -0.5 * (b - disc)
            };
            if q.norm() == 0.0 {
                return Ok(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
            }
            Ok(vec![q / a, c / q])
        }
        _ => aberth(cc),
    }
}

fn sort_approx(roots: &mut [ComplexApprox]) {
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Convert an exact polynomial to f64 coefficients, rescaling so the largest
/// magnitude is 1 (roots are unchanged by scaling).
fn coeffs_to_f64_scaled(p: &UnivariatePoly) -> Result<Vec<f64>, Error> {
    let mut c: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
    if c.iter().any(|v| !v.is_finite()) {
        // Retry after exact normalization by the largest coefficient.
        let biggest = p
            .coeffs()
            .iter()
            .max_by(|a, b| {
                a.abs()
                    .partial_cmp(&b.abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .cloned()
            .unwrap_or_else(|| Rational::from_integer(1.into()));
        c = p.coeffs().iter().map(|q| to_f64(&(q / &biggest))).collect();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::RootFinding("coefficients exceed f64 range".into()));
        }
    }
    let max = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max > 0.0 {
        for v in &mut c {
            *v /= max;
        }
    }
    Ok(c)
}

/// All complex roots of an exact polynomial, with exact multiplicities.
///
/// Degree 0 gives an empty root set; the zero polynomial is an error.
/// If any root's backward error exceeds `accuracy_goal`, the partial result
/// is wrapped in [`Error::IllConditioned`].
pub fn complex_roots(p: &UnivariatePoly, accuracy_goal: f64) -> Result<RootSet, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("complex_roots"));
    }
    let deg = p.degree().unwrap();
    if deg > MAX_NUMERIC_DEGREE {
        return Err(Error::UnsupportedDegree { d: deg as u32 });
    }
    let (_, factors) = p.squarefree_factor();
    let mut roots: Vec<(ComplexApprox, usize)> = Vec::new();
    for sf in &factors {
        let c = coeffs_to_f64_scaled(&sf.factor)?;
        for approx in complex_roots_f64(&c)? {
            roots.push((approx, sf.multiplicity as usize));
        }
    }
    roots.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let set = RootSet { roots };
    let scale = 1.0
        + set
            .roots
            .iter()
            .map(|(r, _)| r.value().norm())
            .fold(0.0, f64::max);
    if set.max_err() > accuracy_goal * scale {
        return Err(Error::IllConditioned {
            max_err: set.max_err(),
            roots: set.roots.iter().map(|(r, _)| (r.re, r.im)).collect(),
        });
    }
    Ok(set)
}

/// Group nearby points (transitively, within `radius`) and return cluster
/// centroids with sizes, sorted by centroid.
pub fn cluster_roots(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: std::collections::BTreeMap<usize, (Complex64, usize)> =
        std::collections::BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let entry = clusters.entry(r).or_insert((Complex64::new(0.0, 0.0), 0));
        entry.0 += points[i];
        entry.1 += 1;
    }
    let mut out: Vec<(Complex64, usize)> = clusters
        .into_values()
        .map(|(sum, count)| (sum / count as f64, count))
        .collect();
    out.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Smallest achievable maximum distance over perfect matchings between the
/// two multisets, or `None` when the sizes differ. Empty inputs match at 0.
pub fn bottleneck_match(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some(0.0);
    }
    let mut dist = vec![vec![0.0f64; n]; n];
    let mut thresholds: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = (a[i] - b[j]).norm();
            thresholds.push(dist[i][j]);
        }
    }
    thresholds.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    thresholds.dedup();

    // Kuhn's augmenting-path matching restricted to edges <= threshold.
    let feasible = |threshold: f64| -> bool {
        let mut matched_b: Vec<Option<usize>> = vec![None; n];
        fn try_assign(
            i: usize,
            threshold: f64,
            dist: &[Vec<f64>],
            visited: &mut [bool],
            matched_b: &mut [Option<usize>],
        ) -> bool {
            let n = visited.len();
            for j in 0..n {
                if !visited[j] && dist[i][j] <= threshold {
                    visited[j] = true;
                    if matched_b[j].is_none()
                        || try_assign(matched_b[j].unwrap(), threshold, dist, visited, matched_b)
                    {
                        matched_b[j] = Some(i);
                        return true;
                    }
                }
            }
            false
        }
        for i in 0..n {
            let mut visited = vec![false; n];
            if !try_assign(i, threshold, &dist, &mut visited, &mut matched_b) {
                return false;
            }
        }
        true
    };

    // Binary search the sorted candidate thresholds.
    let (mut lo, mut hi) = (0usize, thresholds.len() - 1);
    if !feasible(thresholds[hi]) {
        return None; // cannot happen: complete graph always matches
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(thresholds[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(thresholds[lo])
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions. Returns `None` for non-finite input or when no
/// convergent is close (relative error above 1e-9).
pub fn reconstruct_rational(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let mut approx: Option<Rational> = None;
    let (mut p_prev, mut q_prev) = (num::BigInt::from(1), num::BigInt::from(0));
    let (mut p, mut q) = (num::BigInt::from(x.floor() as i64), num::BigInt::from(1));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        let cand = Rational::new(p.clone(), q.clone());
        let cand_f = to_f64(&cand);
        if (cand_f - x).abs() <= 1e-9 * (1.0 + x.abs()) {
            approx = Some(cand);
            break;
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let next = 1.0 / frac;
        if !next.is_finite() || next.abs() > 1e15 {
            break;
        }
        let a = next.floor();
        frac = next - a;
        let a_big = num::BigInt::from(a as i64);
        let p_new = &a_big * &p + &p_prev;
        let q_new = &a_big * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = p_new;
        q = q_new;
        if q > num::BigInt::from(max_den) {
            break;
        }
    }
    // Final candidate after loop exit.
    if approx.is_none() && !q.is_zero() && q <= num::BigInt::from(max_den) {
        let cand = Rational::new(p, q);
        if (to_f64(&cand) - x).abs() <= 1e-9 * (1.0 + x.abs()) {
            approx = Some(cand);
        }
    }
    approx
}

/// Rational roots with multiplicities: exact search first, numeric
/// reconstruction (verified exactly) when the exact search declines.
pub fn rational_roots_hybrid(p: &UnivariatePoly) -> Result<Vec<(Rational, usize)>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("rational_roots_hybrid"));
    }
    match p.rational_roots() {
        Ok(roots) => Ok(roots.into_iter().map(|(r, m)| (r, m as usize)).collect()),
        Err(Error::Internal(_)) => {
            let set = complex_roots(p, 1e-6)?;
            let mut out: Vec<(Rational, usize)> = Vec::new();
            for (r, m) in &set.roots {
                if r.im.abs() > 1e-7 * (1.0 + r.re.abs()) {
                    continue;
                }
                if let Some(cand) = reconstruct_rational(r.re, 1_000_000_000) {
                    if p.eval(&cand).is_zero() && !out.iter().any(|(q, _)| *q == cand) {
                        out.push((cand, *m));
                    }
                }
            }
            out.sort_by(|a, b| a.0.cmp(&b.0));
            Ok(out)
        }
        Err(e) => Err(e),
    }
}
