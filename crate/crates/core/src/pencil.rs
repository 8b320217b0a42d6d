//! Slicing a pointed curve along the pencil of lines through its base point.
//!
//! After [`crate::weierstrass::reduce`] the base point sits at `[1:0:0]`
//! and the pencil is parametrized by `t`: the line `Y = t*Z`, together with
//! the line `Z = 0` at `t = infinity`. Each line meets the curve in `d`
//! residual points (away from the base point), read off as the roots of a
//! monic degree-`d` fiber polynomial in `x`.
//!
//! A line is *special* when it carries fewer than `d` distinct residual
//! points. Finite special parameters are exactly the roots of the
//! `X`-discriminant of the canonical form; the line at infinity is checked
//! directly since the leading coefficient `Z^m` may vanish there. Rational
//! parameters are handled exactly. Irrational ones are handled numerically,
//! with one exact assist: the parameters where the whole fiber collapses
//! onto `x = 0` are the roots of the gcd of the fiber coefficients, and a
//! collapse detected that way is reported with exact count and multiplicity
//! (the numeric root cluster of `x^d + tiny` is far too wide to resolve).

use num::complex::Complex64;
use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::numkernel::{self, ComplexApprox, RootSet};
use crate::rational::{to_f64, Rational};
use crate::ternary::{eval_terms_c64, TernaryForm};
use crate::univariate::UnivariatePoly;
use crate::weierstrass::{self, WeierstrassData};

/// A member of the pencil, given exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum PencilLine {
    /// The line `Y = t*Z`.
    Finite(Rational),
    /// The line `Z = 0`.
    Infinity,
}

/// A pencil parameter that may only be known numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum LineParam {
    Rational(Rational),
    Numeric(ComplexApprox),
    Infinity,
}

impl LineParam {
    /// Parameter value as a complex number; `None` for the infinite line.
    pub fn value(&self) -> Option<Complex64> {
        match self {
            LineParam::Rational(t) => Some(Complex64::new(to_f64(t), 0.0)),
            LineParam::Numeric(z) => Some(z.value()),
            LineParam::Infinity => None,
        }
    }
}

/// A pointed curve together with its canonical model, ready for slicing.
#[derive(Debug, Clone)]
pub struct PencilSetup {
    /// The curve as given.
    pub input: TernaryForm,
    /// The base point as given.
    pub point: [Rational; 3],
    /// Canonical model produced by [`weierstrass::reduce`].
    pub data: WeierstrassData,
}

/// Reduce the pair and reject fibers with fewer than three moving points.
pub fn setup(g: &TernaryForm, point: &[Rational; 3]) -> Result<PencilSetup, Error> {
    let data = weierstrass::reduce(g, point)?;
    if data.d < 3 {
        return Err(Error::UnsupportedDegree { d: data.d as u32 });
    }
    Ok(PencilSetup {
        input: g.clone(),
        point: point.clone(),
        data,
    })
}

impl PencilSetup {
    /// The residual intersection polynomial on one pencil line: monic of
    /// degree `d` on finite lines, possibly of lower degree (or constant,
    /// when every intersection sits at the base point) on `Z = 0`.
    pub fn fiber(&self, line: &PencilLine) -> Result<UnivariatePoly, Error> {
        let f = match line {
            PencilLine::Finite(t) => self.data.form.restrict_to_line(t),
            PencilLine::Infinity => self.data.form.restrict_to_infinity(),
        };
        if f.is_zero() {
            return Err(Error::LineContainedInCurve);
        }
        Ok(f)
    }

    /// The `x`-coordinates of the residual points on one pencil line.
    pub fn intersect(&self, line: &PencilLine, tol: f64) -> Result<RootSet, Error> {
        numkernel::complex_roots(&self.fiber(line)?, tol)
    }
}

/// A pencil line meeting the curve in fewer than `d` distinct residual
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialLine {
    pub line: LineParam,
    /// Number of distinct residual points on the line.
    pub count: usize,
    /// The whole fiber degenerated onto `x = 0`.
    pub collapse: bool,
    /// The count came from numeric clustering, not exact arithmetic.
    pub numeric: bool,
}

fn is_pure_power(f: &UnivariatePoly) -> bool {
    f.degree().unwrap_or(0) >= 1 && f.valuation() == f.degree()
}

/// Evaluate a real-coefficient polynomial at a complex point.
fn eval_poly_c64(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Relative magnitude of `p(z)` against the crudest upper bound for it.
fn relative_value(coeffs: &[f64], z: Complex64) -> f64 {
    let m = z.norm().max(1.0);
    let mut bound = 0.0f64;
    for (i, c) in coeffs.iter().enumerate() {
        bound += c.abs() * m.powi(i as i32);
    }
    if bound == 0.0 {
        return 0.0;
    }
    eval_poly_c64(coeffs, z).norm() / bound
}

/// Gcd of the moving fiber coefficients. Its roots are exactly the finite
/// parameters where the fiber collapses to `x^d`; a nonzero constant means
/// no line collapses.
fn collapse_poly(data: &WeierstrassData) -> UnivariatePoly {
    let xcs = data.form.x_coefficients();
    let mut g: Option<UnivariatePoly> = None;
    for b in xcs.iter().take(data.d) {
        if b.is_zero() {
            continue;
        }
        let f = b.dehomogenize();
        g = Some(match g {
            None => f,
            Some(acc) => acc.gcd(&f),
        });
    }
    g.unwrap_or_else(UnivariatePoly::zero)
}

/// Working state shared by the special-line walkers.
struct Slicer<'a> {
    data: &'a WeierstrassData,
    fiber_coeffs: Vec<Vec<f64>>,
    collapse_coeffs: Vec<f64>,
    tol: f64,
}

impl<'a> Slicer<'a> {
    fn new(data: &'a WeierstrassData, tol: f64) -> Self {
        let fiber_coeffs = data
            .form
            .x_coefficients()
            .iter()
            .map(|b| b.dehomogenize().coeffs_f64())
            .collect();
        Slicer {
            data,
            fiber_coeffs,
            collapse_coeffs: collapse_poly(data).coeffs_f64(),
            tol,
        }
    }

    fn fiber_c64(&self, t: Complex64) -> Vec<Complex64> {
        self.fiber_coeffs
            .iter()
            .map(|c| eval_poly_c64(c, t))
            .collect()
    }

    fn is_collapse_param(&self, t: Complex64) -> bool {
        relative_value(&self.collapse_coeffs, t) <= self.tol.sqrt().max(1e-12)
    }

    /// Cluster radius for residual roots: a repeated root is only
    /// computable to a fractional power of working precision, so this is
    /// deliberately coarse.
    fn cluster_radius(&self, points: &[Complex64]) -> f64 {
        let scale = points.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        scale * self.tol.cbrt().max(1e-9)
    }

    fn clusters(&self, t: Complex64) -> Result<Vec<(Complex64, usize)>, Error> {
        let roots = numkernel::complex_roots_c64(&self.fiber_c64(t))?;
        let values: Vec<Complex64> = roots.iter().map(|r| r.value()).collect();
        let radius = self.cluster_radius(&values);
        Ok(numkernel::cluster_roots(&values, radius))
    }

    fn special_line_at(&self, param: LineParam) -> Result<SpecialLine, Error> {
        match &param {
            LineParam::Rational(t) => {
                let fiber = self.data.form.restrict_to_line(t);
                Ok(SpecialLine {
                    count: fiber.distinct_root_count(),
                    collapse: is_pure_power(&fiber),
                    numeric: false,
                    line: param,
                })
            }
            LineParam::Numeric(z) => {
                if self.is_collapse_param(z.value()) {
                    return Ok(SpecialLine {
                        count: 1,
                        collapse: true,
                        numeric: true,
                        line: param,
                    });
                }
                let clusters = self.clusters(z.value())?;
                Ok(SpecialLine {
                    count: clusters.len(),
                    collapse: false,
                    numeric: true,
                    line: param,
                })
            }
            LineParam::Infinity => {
                let fiber = self.data.form.restrict_to_infinity();
                Ok(SpecialLine {
                    count: fiber.distinct_root_count(),
                    collapse: is_pure_power(&fiber),
                    numeric: false,
                    line: param,
                })
            }
        }
    }

    fn tangency_points(&self, line: &LineParam) -> Result<Vec<(ComplexApprox, usize)>, Error> {
        match line {
            LineParam::Rational(t) => {
                let fiber = self.data.form.restrict_to_line(t);
                let roots = numkernel::complex_roots(&fiber, self.tol)?;
                Ok(roots.roots.into_iter().filter(|(_, m)| *m >= 2).collect())
            }
            LineParam::Numeric(z) => {
                if self.is_collapse_param(z.value()) {
                    // The fiber is exactly x^d there.
                    let x = ComplexApprox {
                        re: 0.0,
                        im: 0.0,
                        err: 0.0,
                    };
                    return Ok(vec![(x, self.data.d)]);
                }
                let clusters = self.clusters(z.value())?;
                let radius = self.cluster_radius(
                    &clusters.iter().map(|(c, _)| *c).collect::<Vec<_>>(),
                );
                Ok(clusters
                    .into_iter()
                    .filter(|(_, m)| *m >= 2)
                    .map(|(c, m)| {
                        (
                            ComplexApprox {
                                re: c.re,
                                im: c.im,
                                err: radius,
                            },
                            m,
                        )
                    })
                    .collect())
            }
            LineParam::Infinity => {
                let fiber = self.data.form.restrict_to_infinity();
                if fiber.degree().unwrap_or(0) == 0 {
                    return Ok(Vec::new());
                }
                let roots = numkernel::complex_roots(&fiber, self.tol)?;
                Ok(roots.roots.into_iter().filter(|(_, m)| *m >= 2).collect())
            }
        }
    }
}

/// All special lines of the pencil: rational parameters first in increasing
/// order, then numeric ones ordered by value, the infinite line last.
/// Errors with [`Error::NonReducedPower`] when the curve has a repeated
/// component, since then every line is special.
pub fn special_lines(setup: &PencilSetup, tol: f64) -> Result<Vec<SpecialLine>, Error> {
    let data = &setup.data;
    let d = data.d;
    let disc = data.form.discriminant_in_x()?;
    if disc.is_zero() {
        return Err(Error::NonReducedPower);
    }
    let slicer = Slicer::new(data, tol);

    let mut out: Vec<SpecialLine> = Vec::new();

    // Finite lines: parameters are the roots of the dehomogenized
    // X-discriminant. Rational roots are split off exactly.
    let disc_y = disc.dehomogenize();
    let mut rest = disc_y.clone();
    let mut rational_params = numkernel::rational_roots_hybrid(&disc_y)?;
    rational_params.sort_by(|a, b| a.0.cmp(&b.0));
    for (t, mult) in &rational_params {
        let lin = UnivariatePoly::new(vec![-t.clone(), Rational::one()]);
        rest = rest.exact_div(&lin.pow(*mult as u32))?;
        out.push(slicer.special_line_at(LineParam::Rational(t.clone()))?);
    }
    if rest.degree().unwrap_or(0) >= 1 {
        let leftover = numkernel::complex_roots(&rest, tol)?;
        for (root, _) in &leftover.roots {
            out.push(slicer.special_line_at(LineParam::Numeric(*root))?);
        }
    }

    // The infinite line, checked directly: the generic fiber has d distinct
    // residual points, so any shortfall makes it special.
    let inf = slicer.special_line_at(LineParam::Infinity)?;
    if inf.count < d {
        out.push(inf);
    }

    debug_assert!(out.iter().filter(|s| !s.numeric).all(|s| s.count < d));
    Ok(out)
}

/// Tangency points on one special line: the residual `x`-coordinates hit
/// with multiplicity at least two, plus a numeric residual check.
#[derive(Debug, Clone)]
pub struct TangentReport {
    pub line: LineParam,
    /// Repeated residual roots with their fiber multiplicities.
    pub points: Vec<(ComplexApprox, usize)>,
    /// Largest scaled residual of the curve and its `X`-derivative over the
    /// reported points. Both vanish exactly at a true tangency.
    pub max_deviation: f64,
}

fn scaled_residual(terms: &[((u16, u16, u16), f64)], p: [Complex64; 3]) -> f64 {
    let m = p.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let mut scale = 0.0f64;
    for ((a, b, c), q) in terms {
        scale += q.abs() * m.powi((*a + *b + *c) as i32);
    }
    if scale == 0.0 {
        return 0.0;
    }
    eval_terms_c64(terms, p[0], p[1], p[2]).norm() / scale
}

fn report_for(
    slicer: &Slicer,
    g_terms: &[((u16, u16, u16), f64)],
    gx_terms: &[((u16, u16, u16), f64)],
    line: LineParam,
) -> Result<TangentReport, Error> {
    let points = slicer.tangency_points(&line)?;
    let mut max_deviation = 0.0f64;
    for (x, _) in &points {
        let p = match line.value() {
            Some(t) => [x.value(), t, Complex64::new(1.0, 0.0)],
            None => [x.value(), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        };
        max_deviation = max_deviation
            .max(scaled_residual(g_terms, p))
            .max(scaled_residual(gx_terms, p));
    }
    Ok(TangentReport {
        line,
        points,
        max_deviation,
    })
}

/// Tangency reports for every special line, in [`special_lines`] order.
pub fn tangents(setup: &PencilSetup, tol: f64) -> Result<Vec<TangentReport>, Error> {
    let data = &setup.data;
    let slicer = Slicer::new(data, tol);
    let g_terms = data.form.terms_f64();
    let gx_terms = data.form.partial(0).terms_f64();
    special_lines(setup, tol)?
        .into_iter()
        .map(|special| report_for(&slicer, &g_terms, &gx_terms, special.line))
        .collect()
}

/// Tangency report for one chosen line; empty points on a generic line.
pub fn tangents_on_line(
    setup: &PencilSetup,
    line: &LineParam,
    tol: f64,
) -> Result<TangentReport, Error> {
    let data = &setup.data;
    let slicer = Slicer::new(data, tol);
    let g_terms = data.form.terms_f64();
    let gx_terms = data.form.partial(0).terms_f64();
    report_for(&slicer, &g_terms, &gx_terms, line.clone())
}

/// Tangent-line concurrency on one sampled non-special line.
#[derive(Debug, Clone)]
pub struct ConcurrencySample {
    /// Parameter of the sampled line `Y = t*Z`.
    pub t: Rational,
    /// Best common point of the tangent lines at the residual points,
    /// scaled to unit length.
    pub point: [Complex64; 3],
    /// Largest pairing of a unit tangent line against that point, so
    /// scale-free; concurrent tangents give zero up to root error.
    pub deviation: f64,
}

fn cross3(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(v: &[Complex64; 3]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

fn unit3(v: &[Complex64; 3]) -> [Complex64; 3] {
    let n = norm3(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Dual basis: the point every line of the family passes through is the
/// cross product of the two most transverse member lines.
fn meeting_point(rows: &[[Complex64; 3]]) -> [Complex64; 3] {
    let mut best = ([Complex64::zero(), Complex64::zero(), Complex64::zero()], 0.0f64);
    for (i, a) in rows.iter().enumerate() {
        for b in rows.iter().skip(i + 1) {
            let c = cross3(a, b);
            let n = norm3(&c);
            if n > best.1 {
                best = (c, n);
            }
        }
    }
    if best.1 > 1e-12 {
        return unit3(&best.0);
    }
    // All tangent lines coincide; any point on the common line works.
    let axes = [
        [Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::zero()],
        [Complex64::zero(), Complex64::new(1.0, 0.0), Complex64::zero()],
        [Complex64::zero(), Complex64::zero(), Complex64::new(1.0, 0.0)],
    ];
    let c = axes
        .iter()
        .map(|e| cross3(&rows[0], e))
        .max_by(|a, b| norm3(a).total_cmp(&norm3(b)))
        .unwrap();
    unit3(&c)
}

fn gradient_terms(data: &WeierstrassData) -> Vec<Vec<((u16, u16, u16), f64)>> {
    (0..3).map(|v| data.form.partial(v).terms_f64()).collect()
}

/// One concurrency measurement; `None` when the residual points collide
/// numerically or a gradient vanishes, so tangents cannot be resolved.
fn measure_concurrency(
    grad: &[Vec<((u16, u16, u16), f64)>],
    slicer: &Slicer,
    d: usize,
    t: &Rational,
) -> Result<Option<ConcurrencySample>, Error> {
    let tc = Complex64::new(to_f64(t), 0.0);
    let roots = numkernel::complex_roots_c64(&slicer.fiber_c64(tc))?;
    let xs: Vec<Complex64> = roots.iter().map(|r| r.value()).collect();
    if xs.len() != d {
        return Ok(None);
    }
    let scale = xs.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    for (i, a) in xs.iter().enumerate() {
        for b in xs.iter().skip(i + 1) {
            if (a - b).norm() < 1e-3 * scale {
                return Ok(None);
            }
        }
    }
    let mut rows: Vec<[Complex64; 3]> = Vec::with_capacity(d);
    for &x in &xs {
        let row = [
            eval_terms_c64(&grad[0], x, tc, Complex64::new(1.0, 0.0)),
            eval_terms_c64(&grad[1], x, tc, Complex64::new(1.0, 0.0)),
            eval_terms_c64(&grad[2], x, tc, Complex64::new(1.0, 0.0)),
        ];
        if norm3(&row) < 1e-12 {
            return Ok(None);
        }
        rows.push(unit3(&row));
    }
    let point = meeting_point(&rows);
    let deviation = rows
        .iter()
        .map(|r| (r[0] * point[0] + r[1] * point[1] + r[2] * point[2]).norm())
        .fold(0.0f64, f64::max);
    Ok(Some(ConcurrencySample {
        t: t.clone(),
        point,
        deviation,
    }))
}

/// Sample seeded random non-special rational lines and measure how close
/// the tangent lines at the `d` residual points come to passing through a
/// single point. Lines with nearly colliding residual points are redrawn,
/// since tangents cannot be resolved there.
pub fn tangent_concurrency(
    setup: &PencilSetup,
    tol: f64,
    seed: u64,
    samples: usize,
) -> Result<Vec<ConcurrencySample>, Error> {
    let data = &setup.data;
    let disc_y = data.form.discriminant_in_x()?.dehomogenize();
    if disc_y.is_zero() {
        return Err(Error::NonReducedPower);
    }
    let grad = gradient_terms(data);
    let slicer = Slicer::new(data, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<ConcurrencySample> = Vec::with_capacity(samples);
    let mut attempts = 0usize;
    while out.len() < samples && attempts < samples.max(1) * 40 {
        attempts += 1;
        let num = rng.gen_range(-50i64..=50);
        let den = rng.gen_range(1i64..=50);
        let t = Rational::new(num.into(), den.into());
        if disc_y.eval(&t).is_zero() {
            continue;
        }
        if let Some(sample) = measure_concurrency(&grad, &slicer, data.d, &t)? {
            out.push(sample);
        }
    }
    if out.len() < samples {
        return Err(Error::Internal(
            "could not sample enough non-special lines".into(),
        ));
    }
    Ok(out)
}

/// Tangent concurrency on the single line `Y = t*Z`. Errors with
/// [`Error::DegenerateLine`] on special lines, where repeated residual
/// points leave no well-defined tangent collection.
pub fn concurrency_on_line(
    setup: &PencilSetup,
    t: &Rational,
    tol: f64,
) -> Result<ConcurrencySample, Error> {
    let data = &setup.data;
    let disc_y = data.form.discriminant_in_x()?.dehomogenize();
    if disc_y.is_zero() {
        return Err(Error::NonReducedPower);
    }
    if disc_y.eval(t).is_zero() {
        return Err(Error::DegenerateLine(format!("the line t = {t} is special")));
    }
    let grad = gradient_terms(data);
    let slicer = Slicer::new(data, tol);
    measure_concurrency(&grad, &slicer, data.d, t)?.ok_or_else(|| {
        Error::DegenerateLine(format!("residual points nearly collide on t = {t}"))
    })
}

/// Configuration of the tangency points across all special lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TLocusShape {
    /// Every tangency happens at one projective point.
    Point,
    /// Every tangency point lies on the line `X = 0`.
    LineX0,
    /// Neither of the above.
    Scattered,
    /// No tangency points were found at all.
    Empty,
}

/// Where the tangent concurrency points sit: special-line tangencies
/// together with sampled generic concurrency points.
#[derive(Debug, Clone)]
pub struct TLocus {
    pub shape: TLocusShape,
    /// Tangency points as `(x, line)` pairs, in [`special_lines`] order.
    pub points: Vec<(ComplexApprox, LineParam)>,
    /// Concurrency measurements on sampled non-special lines.
    pub samples: Vec<ConcurrencySample>,
    /// Largest deviation seen anywhere: tangency residuals on special
    /// lines and concurrency defects on sampled ones.
    pub max_deviation: f64,
}

/// All candidate locus points as unit vectors: tangency points embedded in
/// their lines, then the sampled concurrency points.
fn locus_vectors(
    points: &[(ComplexApprox, LineParam)],
    samples: &[ConcurrencySample],
) -> Vec<[Complex64; 3]> {
    let mut out = Vec::with_capacity(points.len() + samples.len());
    for (x, line) in points {
        let v = match line.value() {
            Some(t) => [x.value(), t, Complex64::new(1.0, 0.0)],
            None => [x.value(), Complex64::new(1.0, 0.0), Complex64::zero()],
        };
        out.push(unit3(&v));
    }
    for s in samples {
        out.push(s.point);
    }
    out
}

/// Fit the tangency locus: special-line tangency points plus concurrency
/// points of `samples` sampled non-special lines (numerator and
/// denominator bounded by 50, seeded).
pub fn t_locus(setup: &PencilSetup, tol: f64, seed: u64, samples: usize) -> Result<TLocus, Error> {
    let reports = tangents(setup, tol)?;
    let mut points: Vec<(ComplexApprox, LineParam)> = Vec::new();
    let mut max_deviation = 0.0f64;
    for r in &reports {
        max_deviation = max_deviation.max(r.max_deviation);
        for (x, _) in &r.points {
            points.push((*x, r.line.clone()));
        }
    }
    let sampled = tangent_concurrency(setup, tol, seed, samples)?;
    for s in &sampled {
        max_deviation = max_deviation.max(s.deviation);
    }

    let eps = tol.sqrt().max(1e-9);
    let vecs = locus_vectors(&points, &sampled);
    let shape = if vecs.is_empty() {
        TLocusShape::Empty
    } else if vecs.iter().all(|v| norm3(&cross3(v, &vecs[0])) <= eps) {
        TLocusShape::Point
    } else if vecs.iter().all(|v| v[0].norm() <= eps) {
        TLocusShape::LineX0
    } else {
        TLocusShape::Scattered
    };

    Ok(TLocus {
        shape,
        points,
        samples: sampled,
        max_deviation,
    })
}
