//! Geometric classification of constant-moduli curves of degree 3 and 4.
//!
//! The product shape pins the curve down to a short list of projective
//! types: unions of concurrent lines, a cuspidal cubic, the smooth cubic
//! with extra symmetry, a conic with a chord, and for quartics the cyclic
//! cover of the line, tacnodal quartics, pairs of tangent conics, the
//! quartic with a one-tangent triple point, and a cubic with a line.
//! [`classify`] reads the case off the normal form and then cross-checks
//! it against the singular points of the canonical model, downgrading to
//! [`CaseId::Unclassified`] when the evidence disagrees.
//!
//! [`singular_points`] locates the singular locus by eliminating `X` from
//! pairs of partial derivatives and types each point through its tangent
//! cone, with a directional expansion splitting ordinary cusps from
//! tacnodes. Points with irrational coordinates are reported numerically.

use crate::binary::BinaryForm;
use crate::error::Error;
use crate::moduli::line_section;
use crate::numkernel::{cluster_roots, complex_roots, complex_roots_c64, rational_roots_hybrid};
use crate::rational::{to_f64, Rational};
use crate::ternary::{Exponents, TernaryForm};
use crate::univariate::UnivariatePoly;
use crate::weierstrass::{ModuliVerdict, WeierstrassData};
use num::complex::Complex64;
use num::{One, Signed, Zero};

/// Projective type of a constant-moduli curve of degree 3 or 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// Union of `d` distinct lines through one point.
    ConcurrentLines,
    /// Irreducible cubic with a cusp.
    CuspidalCubic,
    /// Smooth cubic cut out by `X^3 = F_3` with `F_3` squarefree.
    SmoothJZero,
    /// Smooth conic together with a chord.
    ConicAndLine,
    /// Smooth quartic `X^4 = F_4` with `F_4` squarefree.
    CyclicQuartic,
    /// Irreducible quartic with a single tacnode.
    TacnodalQuartic,
    /// Two smooth conics tangent at two points.
    TwoConics,
    /// Quartic with a triple point having a single tangent direction.
    TriplePointQuartic,
    /// Cubic of the `X^3 = F_3` kind together with a line through its
    /// intersection points with `X = 0`.
    CubicAndLine,
    /// The normal form predicted a case but the singular points disagree.
    Unclassified,
}

impl CaseId {
    pub fn name(&self) -> &'static str {
        match self {
            CaseId::ConcurrentLines => "concurrent-lines",
            CaseId::CuspidalCubic => "cuspidal-cubic",
            CaseId::SmoothJZero => "smooth-j-zero",
            CaseId::ConicAndLine => "conic-and-line",
            CaseId::CyclicQuartic => "cyclic-quartic",
            CaseId::TacnodalQuartic => "tacnodal-quartic",
            CaseId::TwoConics => "two-conics",
            CaseId::TriplePointQuartic => "triple-point-quartic",
            CaseId::CubicAndLine => "cubic-and-line",
            CaseId::Unclassified => "unclassified",
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Local type of a singular point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularityType {
    /// Two smooth branches with distinct tangents.
    Node,
    /// One branch, contact of order 3 with its tangent.
    Cusp,
    /// Two smooth branches sharing a tangent, contact of order 4.
    Tacnode,
    /// Triple point with three distinct tangents.
    OrdinaryTriple,
    /// Anything else; carries the multiplicity and the tangent cone root
    /// pattern as evidence.
    Other { multiplicity: usize, tangent_pattern: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SingularLocation {
    Exact([Rational; 3]),
    Numeric([Complex64; 3]),
}

impl SingularLocation {
    pub fn to_c64(&self) -> [Complex64; 3] {
        match self {
            SingularLocation::Exact(p) => {
                [c64(to_f64(&p[0])), c64(to_f64(&p[1])), c64(to_f64(&p[2]))]
            }
            SingularLocation::Numeric(p) => *p,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SingularLocation::Exact(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub location: SingularLocation,
    pub multiplicity: usize,
    pub kind: SingularityType,
}

/// Output of [`classify`]: the case plus the singular-point evidence used
/// to confirm it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub case: CaseId,
    pub singular_points: Vec<SingularPoint>,
    /// True when the singular points match the expectations of `case`.
    pub consistent: bool,
    /// Explanation when the cross-check failed.
    pub note: Option<String>,
}

/// Name the projective type of a constant-moduli curve of degree 3 or 4.
///
/// `data` and `verdict` come from `weierstrass::reduce` and
/// `weierstrass::decide` on the same pair. Requires the base point off the
/// curve and a reduced curve; repeated factors surface as
/// [`Error::NonReducedPower`]. The verdict must be constant.
pub fn classify(
    data: &WeierstrassData,
    verdict: &ModuliVerdict,
    tol: f64,
) -> Result<ClassificationResult, Error> {
    let cm = match verdict {
        ModuliVerdict::Constant(cm) => cm,
        ModuliVerdict::NonConstant(_) => {
            return Err(Error::InvalidInput(
                "classification applies to constant-moduli pairs".into(),
            ))
        }
    };
    if data.d != 3 && data.d != 4 {
        return Err(Error::UnsupportedClassification { d: data.d as u32 });
    }
    if data.m != 0 {
        return Err(Error::InvalidInput(
            "classification expects a base point off the curve".into(),
        ));
    }
    let nf = &cm.normal_form;
    if nf.k == 0 || cm.non_reduced {
        return Err(Error::NonReducedPower);
    }
    // A repeated companion root repeats a whole product factor.
    let comp_gcd = nf.companion.gcd(&nf.companion.derivative());
    if comp_gcd.degree() != Some(0) {
        return Err(Error::NonReducedPower);
    }

    let pattern = nf.branch().root_multiplicities();
    let distinct = pattern.len();
    let case = match (data.d, nf.x_power, nf.k) {
        (3, 0, 3) => match distinct {
            1 => CaseId::ConcurrentLines,
            2 => CaseId::CuspidalCubic,
            _ => CaseId::SmoothJZero,
        },
        (3, 0, 1) => CaseId::ConcurrentLines,
        (3, 1, 2) => {
            if distinct == 1 {
                CaseId::ConcurrentLines
            } else {
                CaseId::ConicAndLine
            }
        }
        (4, 0, 4) => match pattern.as_slice() {
            [1, 1, 1, 1] => CaseId::CyclicQuartic,
            [2, 1, 1] => CaseId::TacnodalQuartic,
            [2, 2] => CaseId::TwoConics,
            [3, 1] => CaseId::TriplePointQuartic,
            [4] => CaseId::ConcurrentLines,
            other => {
                return Err(Error::Internal(format!(
                    "impossible branch pattern {other:?} for a quartic"
                )))
            }
        },
        (4, 0, 2) => {
            if distinct == 1 {
                CaseId::ConcurrentLines
            } else {
                CaseId::TwoConics
            }
        }
        (4, 0, 1) => CaseId::ConcurrentLines,
        (4, 1, 3) => {
            if distinct == 1 {
                CaseId::ConcurrentLines
            } else {
                CaseId::CubicAndLine
            }
        }
        (4, 1, 1) => CaseId::ConcurrentLines,
        (d, s, k) => {
            return Err(Error::Internal(format!(
                "unexpected normal form shape d={d} x_power={s} k={k}"
            )))
        }
    };

    let points = singular_points(&data.form, tol)?;
    match check_case(case, data.d, &points) {
        None => Ok(ClassificationResult {
            case,
            singular_points: points,
            consistent: true,
            note: None,
        }),
        Some(why) => Ok(ClassificationResult {
            case: CaseId::Unclassified,
            singular_points: points,
            consistent: false,
            note: Some(format!("normal form predicts {case} but {why}")),
        }),
    }
}

/// Expected singular data per case; `None` means the evidence agrees.
fn check_case(case: CaseId, d: usize, points: &[SingularPoint]) -> Option<String> {
    let fail = |why: String| Some(why);
    let all_ones = |p: &SingularPoint| match &p.kind {
        SingularityType::Node => p.multiplicity == 2,
        SingularityType::OrdinaryTriple => p.multiplicity == 3,
        SingularityType::Other { tangent_pattern, .. } => {
            tangent_pattern.iter().all(|&m| m == 1)
        }
        _ => false,
    };
    match case {
        CaseId::SmoothJZero | CaseId::CyclicQuartic => {
            if points.is_empty() {
                None
            } else {
                fail(format!("found {} singular points on a smooth case", points.len()))
            }
        }
        CaseId::ConcurrentLines => {
            if points.len() == 1 && points[0].multiplicity == d && all_ones(&points[0]) {
                None
            } else {
                fail(format!(
                    "expected one ordinary point of multiplicity {d}, found {points:?}"
                ))
            }
        }
        CaseId::CuspidalCubic => {
            if points.len() == 1 && points[0].kind == SingularityType::Cusp {
                None
            } else {
                fail(format!("expected a single cusp, found {points:?}"))
            }
        }
        CaseId::ConicAndLine => {
            if points.len() == 2 && points.iter().all(|p| p.kind == SingularityType::Node) {
                None
            } else {
                fail(format!("expected two nodes, found {points:?}"))
            }
        }
        CaseId::TacnodalQuartic => {
            if points.len() == 1 && points[0].kind == SingularityType::Tacnode {
                None
            } else {
                fail(format!("expected a single tacnode, found {points:?}"))
            }
        }
        CaseId::TwoConics => {
            if points.len() == 2 && points.iter().all(|p| p.kind == SingularityType::Tacnode)
            {
                None
            } else {
                fail(format!("expected two tacnodes, found {points:?}"))
            }
        }
        CaseId::TriplePointQuartic => {
            let ok = points.len() == 1
                && points[0].multiplicity == 3
                && matches!(
                    &points[0].kind,
                    SingularityType::Other { tangent_pattern, .. } if tangent_pattern.as_slice() == [3]
                );
            if ok {
                None
            } else {
                fail(format!(
                    "expected one triple point with a single tangent, found {points:?}"
                ))
            }
        }
        CaseId::CubicAndLine => {
            let on_line = |p: &SingularPoint| match &p.location {
                SingularLocation::Exact(q) => q[0].is_zero(),
                SingularLocation::Numeric(q) => {
                    let scale = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
                    q[0].norm() <= 1e-6 * scale.max(1.0)
                }
            };
            if points.len() >= 2 && points.iter().all(on_line) {
                None
            } else {
                fail(format!(
                    "expected at least two singular points on the split line, found {points:?}"
                ))
            }
        }
        CaseId::Unclassified => None,
    }
}

/// Compute the singular points of a reduced plane curve.
///
/// Works on curves without line components through `[1:0:0]`; repeated
/// components are reported as [`Error::NonReducedPower`]. Rational points
/// come out exact, the rest numeric. `tol` controls only the numeric
/// thresholds.
pub fn singular_points(g: &TernaryForm, tol: f64) -> Result<Vec<SingularPoint>, Error> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial("singular_points"));
    }
    if g.degree() == 0 {
        return Err(Error::InvalidInput("constant polynomial is not a curve".into()));
    }
    if g.degree() == 1 {
        return Ok(Vec::new());
    }
    let xdeg = g.x_degree().unwrap();
    if xdeg == 0 {
        return lines_through_first_point(g);
    }
    let content = g.binary_content();
    if content.degree() >= 1 {
        return Err(Error::InvalidInput(
            "curve has line components through [1:0:0]; strip them first".into(),
        ));
    }
    if g.discriminant_in_x()?.is_zero() {
        return Err(Error::NonReducedPower);
    }

    let partials = [g.partial(0), g.partial(1), g.partial(2)];
    // The second coordinate of a singular point kills every pairwise
    // X-resultant of the partials; the gcd of the nonzero ones is a sharp
    // enough candidate list because each candidate line is solved exactly
    // afterwards.
    let mut cand: Option<BinaryForm> = None;
    for i in 0..3 {
        for j in i + 1..3 {
            if partials[i].is_zero() || partials[j].is_zero() {
                continue;
            }
            // A pair of X-free partials eliminates nothing; their vanishing
            // is enforced line by line below.
            if partials[i].x_degree() == Some(0) && partials[j].x_degree() == Some(0) {
                continue;
            }
            let r = partials[i].resultant_in_x(&partials[j])?;
            if r.is_zero() {
                continue;
            }
            cand = Some(match cand {
                None => r,
                Some(c) => c.gcd(&r),
            });
        }
    }
    let cand = cand.ok_or_else(|| {
        Error::Internal("no usable partial resultant for a squarefree curve".into())
    })?;

    let thr = tol.max(1e-14).sqrt().clamp(1e-8, 1e-4);
    let mut exact: Vec<SingularPoint> = Vec::new();
    let mut numeric: Vec<SingularPoint> = Vec::new();

    if cand.degree() == 0 {
        return Ok(Vec::new());
    }

    // Line at infinity of the (Y, Z) chart.
    if cand.z_valuation().unwrap_or(0) > 0 {
        solve_exact_line(g, &partials, &Rational::one(), &Rational::zero(), &mut exact, &mut numeric, tol)?;
    }
    let dehom = cand.dehomogenize();
    if !dehom.is_constant() {
        let rational = rational_roots_hybrid(&dehom)?;
        let mut leftover = dehom.clone();
        for (root, mult) in &rational {
            let lin = UnivariatePoly::new(vec![-root.clone(), Rational::one()]);
            for _ in 0..*mult {
                leftover = leftover.exact_div(&lin)?;
            }
            solve_exact_line(g, &partials, root, &Rational::one(), &mut exact, &mut numeric, tol)?;
        }
        if leftover.degree() > Some(0) {
            let roots = complex_roots(&leftover, tol)?;
            for (y0, _) in &roots.roots {
                solve_numeric_line(g, &partials, Complex64::new(y0.re, y0.im), &mut numeric, thr);
            }
        }
    }

    // Order and dedupe: exact points first, numeric points dropped when
    // they land on an exact one.
    exact.sort_by(|a, b| exact_key(a).cmp(&exact_key(b)));
    numeric.sort_by(|a, b| numeric_key(a).partial_cmp(&numeric_key(b)).unwrap());
    let mut out = exact;
    for np in numeric {
        let pc = np.location.to_c64();
        let close = out.iter().any(|p| {
            let qc = p.location.to_c64();
            pc.iter()
                .zip(qc.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
                <= 1e-6 * (1.0 + pc.iter().map(|c| c.norm()).fold(0.0, f64::max))
        });
        if !close {
            out.push(np);
        }
    }
    Ok(out)
}

fn exact_key(p: &SingularPoint) -> [Rational; 3] {
    match &p.location {
        SingularLocation::Exact(q) => q.clone(),
        SingularLocation::Numeric(_) => unreachable!("exact list holds exact points"),
    }
}

fn numeric_key(p: &SingularPoint) -> [f64; 6] {
    let q = p.location.to_c64();
    [q[0].re, q[0].im, q[1].re, q[1].im, q[2].re, q[2].im]
}

/// Singular locus of a curve that is a product of lines through `[1:0:0]`.
fn lines_through_first_point(g: &TernaryForm) -> Result<Vec<SingularPoint>, Error> {
    let b = g.x_coefficients()[0].clone();
    let pattern = b.root_multiplicities();
    if pattern.iter().any(|&m| m >= 2) {
        return Err(Error::NonReducedPower);
    }
    let mult = g.degree();
    let kind = kind_from_pattern(mult, pattern);
    Ok(vec![SingularPoint {
        location: SingularLocation::Exact([Rational::one(), Rational::zero(), Rational::zero()]),
        multiplicity: mult,
        kind,
    }])
}

fn kind_from_pattern(mult: usize, pattern: Vec<u32>) -> SingularityType {
    match (mult, pattern.as_slice()) {
        (2, [1, 1]) => SingularityType::Node,
        (3, [1, 1, 1]) => SingularityType::OrdinaryTriple,
        _ => SingularityType::Other { multiplicity: mult, tangent_pattern: pattern },
    }
}

/// Restriction of `f` to the pencil line through `[1:0:0]` and `[0:y:z]`,
/// as a polynomial in `x`.
fn restrict_x(f: &TernaryForm, y: &Rational, z: &Rational) -> UnivariatePoly {
    if f.is_zero() {
        return UnivariatePoly::zero();
    }
    UnivariatePoly::new(f.x_coefficients().iter().map(|b| b.eval(y, z)).collect())
}

fn solve_exact_line(
    g: &TernaryForm,
    partials: &[TernaryForm; 3],
    y0: &Rational,
    z0: &Rational,
    exact: &mut Vec<SingularPoint>,
    numeric: &mut Vec<SingularPoint>,
    tol: f64,
) -> Result<(), Error> {
    let restricted: Vec<UnivariatePoly> = partials
        .iter()
        .map(|p| restrict_x(p, y0, z0))
        .filter(|u| !u.is_zero())
        .collect();
    if restricted.is_empty() {
        return Err(Error::Internal(
            "a full pencil line sits inside the singular locus".into(),
        ));
    }
    let mut common = restricted[0].clone();
    for u in &restricted[1..] {
        common = common.gcd(u);
    }
    if common.degree() == Some(0) {
        return Ok(());
    }
    let roots = rational_roots_hybrid(&common)?;
    let mut leftover = common.clone();
    for (x0, mult) in &roots {
        let lin = UnivariatePoly::new(vec![-x0.clone(), Rational::one()]);
        for _ in 0..*mult {
            leftover = leftover.exact_div(&lin)?;
        }
        let p = [x0.clone(), y0.clone(), z0.clone()];
        let (m, kind) = local_type_exact(g, &p);
        exact.push(SingularPoint { location: SingularLocation::Exact(p), multiplicity: m, kind });
    }
    if leftover.degree() > Some(0) {
        let irr = complex_roots(&leftover, tol)?;
        for (x0, _) in &irr.roots {
            let p = [
                Complex64::new(x0.re, x0.im),
                c64(to_f64(y0)),
                c64(to_f64(z0)),
            ];
            let (m, kind) = local_type_numeric(g, &p, tol);
            numeric.push(SingularPoint {
                location: SingularLocation::Numeric(p),
                multiplicity: m,
                kind,
            });
        }
    }
    Ok(())
}

fn solve_numeric_line(
    g: &TernaryForm,
    partials: &[TernaryForm; 3],
    y0: Complex64,
    numeric: &mut Vec<SingularPoint>,
    thr: f64,
) {
    let one = Complex64::new(1.0, 0.0);
    let restricted: Vec<Vec<Complex64>> = partials
        .iter()
        .map(|p| restrict_x_c64(p, y0, one))
        .collect();
    let scale = |cs: &[Complex64]| cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = restricted
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| scale(a).total_cmp(&scale(b)))
        .map(|(i, _)| i)
        .unwrap();
    if scale(&restricted[lead]) == 0.0 {
        return;
    }
    let Ok(roots) = complex_roots_c64(&restricted[lead]) else {
        return;
    };
    for r in roots {
        let x0 = Complex64::new(r.re, r.im);
        let good = restricted.iter().enumerate().all(|(i, cs)| {
            if i == lead || scale(cs) == 0.0 {
                return true;
            }
            let m = x0.norm().max(1.0);
            let s: f64 = cs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * m.powi(k as i32))
                .sum();
            eval_c64(cs, x0).norm() <= thr.max(1e-8) * s
        });
        if !good {
            continue;
        }
        let p = [x0, y0, one];
        let (m, kind) = local_type_numeric(g, &p, thr * thr);
        numeric.push(SingularPoint {
            location: SingularLocation::Numeric(p),
            multiplicity: m,
            kind,
        });
    }
}

fn restrict_x_c64(f: &TernaryForm, y: Complex64, z: Complex64) -> Vec<Complex64> {
    if f.is_zero() {
        return Vec::new();
    }
    f.x_coefficients()
        .iter()
        .map(|b| {
            let cs = b.coeffs_f64();
            let deg = cs.len() - 1;
            cs.iter()
                .enumerate()
                .map(|(i, &c)| y.powi((deg - i) as i32) * z.powi(i as i32) * c)
                .sum()
        })
        .collect()
}

fn eval_c64(cs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in cs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pascal(n: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![Rational::one()];
        for i in 1..k {
            row.push(&prev[i - 1] + &prev[i]);
        }
        row.push(Rational::one());
        rows.push(row);
    }
    rows
}

/// Chart index (largest coordinate, later wins ties) and the two affine
/// slots in increasing order.
fn chart_of_exact(p: &[Rational; 3]) -> (usize, usize, usize) {
    let c = (0..3)
        .max_by(|&a, &b| p[a].abs().cmp(&p[b].abs()))
        .unwrap();
    let rest: Vec<usize> = (0..3).filter(|&i| i != c).collect();
    (c, rest[0], rest[1])
}

/// Degree-graded coefficients of `g` recentred at `q` in the chart where
/// coordinate `c` stays fixed; entry `[i][j]` multiplies `u^i v^j`.
fn taylor_grid_exact(
    g: &TernaryForm,
    q: &[Rational; 3],
    c: usize,
    u_idx: usize,
    v_idx: usize,
) -> Vec<Vec<Rational>> {
    let n = g.degree();
    let pas = pascal(n);
    let mut pows: [Vec<Rational>; 3] = [
        vec![Rational::one()],
        vec![Rational::one()],
        vec![Rational::one()],
    ];
    for i in 0..3 {
        for k in 1..=n {
            let next = &pows[i][k - 1] * &q[i];
            pows[i].push(next);
        }
    }
    let mut grid = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (&(a, b, cc), coeff) in g.terms() {
        let e = [a as usize, b as usize, cc as usize];
        let (eu, ev, ec) = (e[u_idx], e[v_idx], e[c]);
        let base = coeff * &pows[c][ec];
        for i in 0..=eu {
            let fu = &pas[eu][i] * &pows[u_idx][eu - i];
            for j in 0..=ev {
                let fv = &pas[ev][j] * &pows[v_idx][ev - j];
                grid[i][j] = &grid[i][j] + &(&base * &(&fu * &fv));
            }
        }
    }
    grid
}

/// Multiplicity and local type at an exact point of the curve.
fn local_type_exact(g: &TernaryForm, p: &[Rational; 3]) -> (usize, SingularityType) {
    let (c, u_idx, v_idx) = chart_of_exact(p);
    let q = [&p[0] / &p[c], &p[1] / &p[c], &p[2] / &p[c]];
    let grid = taylor_grid_exact(g, &q, c, u_idx, v_idx);
    let n = g.degree();
    let mut mult = 0;
    'scan: for k in 1..=n {
        for i in 0..=k {
            if !grid[i][k - i].is_zero() {
                mult = k;
                break 'scan;
            }
        }
    }
    if mult == 0 {
        return (0, SingularityType::Other { multiplicity: 0, tangent_pattern: vec![] });
    }
    let tc = BinaryForm::new(mult, (0..=mult).map(|j| grid[mult - j][j].clone()).collect());
    let pattern = tc.root_multiplicities();
    let kind = match (mult, pattern.as_slice()) {
        (2, [1, 1]) => SingularityType::Node,
        (2, [2]) => cusp_or_tacnode_exact(g, &q, u_idx, v_idx, &tc),
        (3, [1, 1, 1]) => SingularityType::OrdinaryTriple,
        _ => SingularityType::Other { multiplicity: mult, tangent_pattern: pattern },
    };
    (mult, kind)
}

/// Split a double point with one tangent: expand along the tangent
/// direction, test the cubic term, then the quartic term after completing
/// the square against the mixed term.
fn cusp_or_tacnode_exact(
    g: &TernaryForm,
    q: &[Rational; 3],
    u_idx: usize,
    v_idx: usize,
    tc: &BinaryForm,
) -> SingularityType {
    let (lambda, l) = tc.perfect_power(2).expect("tangent cone is a double line");
    let alpha = l.eval(&Rational::one(), &Rational::zero());
    let beta = l.eval(&Rational::zero(), &Rational::one());
    let mut dir = [Rational::zero(), Rational::zero(), Rational::zero()];
    dir[u_idx] = beta.clone();
    dir[v_idx] = -alpha.clone();
    let gamma = line_section(g, q, &dir);
    if !gamma.coeff(3).is_zero() {
        return SingularityType::Cusp;
    }
    let s = &(&alpha * &alpha) + &(&beta * &beta);
    let gw = g
        .partial(u_idx)
        .scale(&(&alpha / &s))
        .add(&g.partial(v_idx).scale(&(&beta / &s)))
        .expect("partials share a degree");
    let a21 = line_section(&gw, q, &dir).coeff(2);
    let t4 = &gamma.coeff(4) - &(&(&a21 * &a21) / &(&lambda * &crate::rational::rat_i(4)));
    if !t4.is_zero() {
        SingularityType::Tacnode
    } else {
        SingularityType::Other { multiplicity: 2, tangent_pattern: vec![2] }
    }
}

/// Numeric mirror of [`local_type_exact`] for irrational points.
fn local_type_numeric(g: &TernaryForm, p: &[Complex64; 3], tol: f64) -> (usize, SingularityType) {
    let terms = g.terms_f64();
    let n = g.degree();
    let c = (0..3)
        .max_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm()))
        .unwrap();
    let rest: Vec<usize> = (0..3).filter(|&i| i != c).collect();
    let (u_idx, v_idx) = (rest[0], rest[1]);
    let q = [p[0] / p[c], p[1] / p[c], p[2] / p[c]];

    let pas = pascal(n);
    let pasf: Vec<Vec<f64>> = pas
        .iter()
        .map(|row| row.iter().map(to_f64).collect())
        .collect();
    let mut pows: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]; 3];
    for i in 0..3 {
        for k in 1..=n {
            let next = pows[i][k - 1] * q[i];
            pows[i].push(next);
        }
    }
    let mut grid = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    let mut scale = 0.0_f64;
    for &((a, b, cc), coeff) in &terms {
        let e = [a as usize, b as usize, cc as usize];
        let (eu, ev, ec) = (e[u_idx], e[v_idx], e[c]);
        scale += coeff.abs()
            * q[u_idx].norm().max(1.0).powi(eu as i32)
            * q[v_idx].norm().max(1.0).powi(ev as i32)
            * q[c].norm().max(1.0).powi(ec as i32);
        let base = pows[c][ec] * coeff;
        for i in 0..=eu {
            let fu = pasf[eu][i] * pows[u_idx][eu - i];
            for j in 0..=ev {
                let fv = pasf[ev][j] * pows[v_idx][ev - j];
                grid[i][j] += base * fu * fv;
            }
        }
    }
    let thr = scale.max(1.0) * tol.max(1e-14).sqrt().clamp(1e-9, 1e-4);

    let mut mult = 0;
    'scan: for k in 1..=n {
        for i in 0..=k {
            if grid[i][k - i].norm() > thr {
                mult = k;
                break 'scan;
            }
        }
    }
    if mult == 0 {
        return (0, SingularityType::Other { multiplicity: 0, tangent_pattern: vec![] });
    }

    let tcs: Vec<Complex64> = (0..=mult)
        .map(|j| {
            let v = grid[mult - j][j];
            if v.norm() > thr {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let j_min = tcs.iter().position(|v| v.norm() > 0.0).unwrap_or(mult);
    // Dehomogenized tangent cone, ascending powers of the first direction.
    let poly_u: Vec<Complex64> = (j_min..=mult).rev().map(|j| tcs[j]).collect();
    let mut pattern: Vec<u32> = Vec::new();
    let mut double_root: Option<Complex64> = None;
    if poly_u.len() > 1 {
        if let Ok(roots) = complex_roots_c64(&poly_u) {
            let pts: Vec<Complex64> = roots.iter().map(|r| Complex64::new(r.re, r.im)).collect();
            let radius = 1e-3 * pts.iter().map(|c| c.norm()).fold(1.0, f64::max);
            let clusters = cluster_roots(&pts, radius);
            for (center, count) in &clusters {
                pattern.push(*count as u32);
                if *count == 2 {
                    double_root = Some(*center);
                }
            }
        }
    }
    if j_min > 0 {
        pattern.push(j_min as u32);
    }
    pattern.sort_unstable_by(|a, b| b.cmp(a));

    let kind = match (mult, pattern.as_slice()) {
        (2, [1, 1]) => SingularityType::Node,
        (2, [2]) => {
            let (alpha, beta) = match double_root {
                Some(u0) => (Complex64::new(1.0, 0.0), -u0),
                None => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            };
            cusp_or_tacnode_numeric(&terms, &q, (u_idx, v_idx), (alpha, beta), &tcs, thr)
        }
        (3, [1, 1, 1]) => SingularityType::OrdinaryTriple,
        _ => SingularityType::Other { multiplicity: mult, tangent_pattern: pattern },
    };
    (mult, kind)
}

fn cusp_or_tacnode_numeric(
    terms: &[(Exponents, f64)],
    q: &[Complex64; 3],
    (u_idx, v_idx): (usize, usize),
    (alpha, beta): (Complex64, Complex64),
    tcs: &[Complex64],
    thr: f64,
) -> SingularityType {
    // Tangent cone is lambda * (alpha u + beta v)^2; read lambda off the
    // largest coefficient slot.
    let l2 = [alpha * alpha, 2.0 * alpha * beta, beta * beta];
    let slot = (0..3).max_by(|&a, &b| l2[a].norm().total_cmp(&l2[b].norm())).unwrap();
    let lambda = tcs[slot] / l2[slot];

    let mut dir = [Complex64::new(0.0, 0.0); 3];
    dir[u_idx] = beta;
    dir[v_idx] = -alpha;
    let gamma = restrict_terms_c64(terms, q, &dir);
    let coeff = |cs: &[Complex64], k: usize| cs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0));
    if coeff(&gamma, 3).norm() > thr {
        return SingularityType::Cusp;
    }
    let s = alpha.norm_sqr() + beta.norm_sqr();
    let eu = alpha.conj() / s;
    let ev = beta.conj() / s;
    let gu = restrict_terms_c64(&partial_terms(terms, u_idx), q, &dir);
    let gv = restrict_terms_c64(&partial_terms(terms, v_idx), q, &dir);
    let a21 = eu * coeff(&gu, 2) + ev * coeff(&gv, 2);
    let t4 = coeff(&gamma, 4) - a21 * a21 / (4.0 * lambda);
    if t4.norm() > thr {
        SingularityType::Tacnode
    } else {
        SingularityType::Other { multiplicity: 2, tangent_pattern: vec![2] }
    }
}

fn partial_terms(terms: &[(Exponents, f64)], var: usize) -> Vec<(Exponents, f64)> {
    let mut out = Vec::new();
    for &((a, b, c), coeff) in terms {
        let e = [a, b, c];
        if e[var] == 0 {
            continue;
        }
        let mut f = e;
        f[var] -= 1;
        out.push(((f[0], f[1], f[2]), coeff * e[var] as f64));
    }
    out
}

/// Coefficients of `s -> g(q + s * dir)`, ascending in `s`.
fn restrict_terms_c64(
    terms: &[(Exponents, f64)],
    q: &[Complex64; 3],
    dir: &[Complex64; 3],
) -> Vec<Complex64> {
    let mut acc: Vec<Complex64> = Vec::new();
    for &((a, b, c), coeff) in terms {
        let mut poly = vec![Complex64::new(coeff, 0.0)];
        for (i, &e) in [a, b, c].iter().enumerate() {
            for _ in 0..e {
                let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (k, &p) in poly.iter().enumerate() {
                    next[k] += p * q[i];
                    next[k + 1] += p * dir[i];
                }
                poly = next;
            }
        }
        if poly.len() > acc.len() {
            acc.resize(poly.len(), Complex64::new(0.0, 0.0));
        }
        for (k, &p) in poly.iter().enumerate() {
            acc[k] += p;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_point, parse_ternary};
    use crate::weierstrass::{decide, reduce};
    use crate::DEFAULT_TOL;

    fn curve(s: &str) -> TernaryForm {
        parse_ternary(s).unwrap()
    }

    fn sing(s: &str) -> Vec<SingularPoint> {
        singular_points(&curve(s), DEFAULT_TOL).unwrap()
    }

    fn classified(g: &str, p: &str) -> ClassificationResult {
        let data = reduce(&curve(g), &parse_point(p).unwrap()).unwrap();
        let verdict = decide(&data, DEFAULT_TOL).unwrap();
        classify(&data, &verdict, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn smooth_curves_have_no_singular_points() {
        assert!(sing("x^3 + y^3 + z^3").is_empty());
        assert!(sing("x^4 + y^4 + z^4").is_empty());
    }

    #[test]
    fn classical_singularities_are_typed() {
        let nodal = sing("x^3 + x^2*z - y^2*z");
        assert_eq!(nodal.len(), 1);
        assert_eq!(nodal[0].kind, SingularityType::Node);
        assert_eq!(
            nodal[0].location,
            SingularLocation::Exact([Rational::zero(), Rational::zero(), Rational::one()])
        );

        let cuspidal = sing("y^2*z - x^3");
        assert_eq!(cuspidal.len(), 1);
        assert_eq!(cuspidal[0].kind, SingularityType::Cusp);
        assert_eq!(cuspidal[0].multiplicity, 2);

        let tacnodal = sing("x^4 - y^2*z^2");
        assert_eq!(tacnodal.len(), 2);
        for p in &tacnodal {
            assert_eq!(p.kind, SingularityType::Tacnode);
            assert!(p.location.is_exact());
        }

        let triple = sing("x^3 - x*y^2");
        assert_eq!(triple.len(), 1);
        assert_eq!(triple[0].kind, SingularityType::OrdinaryTriple);

        let one_tangent = sing("x^4 - y^3*z");
        assert_eq!(one_tangent.len(), 1);
        assert_eq!(
            one_tangent[0].kind,
            SingularityType::Other { multiplicity: 3, tangent_pattern: vec![3] }
        );
    }

    #[test]
    fn irrational_singular_points_come_out_numeric() {
        let pts = sing("x^3 - x*y^2 + 2*x*z^2");
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert_eq!(p.kind, SingularityType::Node);
            let q = p.location.to_c64();
            assert!(q[0].norm() < 1e-8);
            assert!((q[1].norm_sqr() - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let sq = curve("(x^2 - y*z)^2");
        assert!(matches!(
            singular_points(&sq, DEFAULT_TOL),
            Err(Error::NonReducedPower)
        ));
        let content = curve("y*(x^2 - z^2)");
        assert!(matches!(
            singular_points(&content, DEFAULT_TOL),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cubic_cases_cover_the_table() {
        let concurrent = classified("x^3 - x*y^2", "1,2,5");
        assert_eq!(concurrent.case, CaseId::ConcurrentLines);
        assert!(concurrent.consistent);
        assert_eq!(concurrent.singular_points.len(), 1);

        let cuspidal = classified("x^3 - y^2*z", "1,0,0");
        assert_eq!(cuspidal.case, CaseId::CuspidalCubic);
        assert!(cuspidal.consistent);

        let smooth = classified("x^3 + y^3 + z^3", "1,0,0");
        assert_eq!(smooth.case, CaseId::SmoothJZero);
        assert!(smooth.consistent);
        assert!(smooth.singular_points.is_empty());

        let conic = classified("x^3 - x*y*z", "1,0,0");
        assert_eq!(conic.case, CaseId::ConicAndLine);
        assert!(conic.consistent);
        assert_eq!(conic.singular_points.len(), 2);
    }

    #[test]
    fn quartic_cases_cover_the_table() {
        let cyclic = classified("x^4 + y^4 + z^4", "1,0,0");
        assert_eq!(cyclic.case, CaseId::CyclicQuartic);
        assert!(cyclic.consistent);

        let tacnodal = classified("x^4 - y^4 - 3*y^3*z - 2*y^2*z^2", "1,0,0");
        assert_eq!(tacnodal.case, CaseId::TacnodalQuartic);
        assert!(tacnodal.consistent);

        let two_conics = classified("x^4 - y^2*z^2", "1,0,0");
        assert_eq!(two_conics.case, CaseId::TwoConics);
        assert!(two_conics.consistent);

        let triple = classified("x^4 - y^3*z", "1,0,0");
        assert_eq!(triple.case, CaseId::TriplePointQuartic);
        assert!(triple.consistent);

        let cubic_line = classified("x^4 - x*y^2*z", "1,0,0");
        assert_eq!(cubic_line.case, CaseId::CubicAndLine);
        assert!(cubic_line.consistent);
        assert!(cubic_line.singular_points.len() >= 2);

        let concurrent = classified("x^4 - y^4", "1,0,0");
        assert_eq!(concurrent.case, CaseId::ConcurrentLines);
        assert!(concurrent.consistent);
        assert_eq!(concurrent.singular_points[0].multiplicity, 4);
    }

    #[test]
    fn tangent_conics_at_irrational_points_still_check_out() {
        // (X^2 - Q)(X^2 - 2 Q) with Q = Y^2 - 2 Z^2; the two tangency
        // points sit at Y = +-sqrt(2) Z.
        let r = classified(
            "x^4 - 3*x^2*y^2 + 6*x^2*z^2 + 2*y^4 - 8*y^2*z^2 + 8*z^4",
            "1,0,0",
        );
        assert_eq!(r.case, CaseId::TwoConics);
        assert!(r.consistent, "note: {:?}", r.note);
        assert_eq!(r.singular_points.len(), 2);
        for p in &r.singular_points {
            assert_eq!(p.kind, SingularityType::Tacnode);
            assert!(!p.location.is_exact());
        }
    }

    #[test]
    fn quartic_splitting_only_over_extensions_is_concurrent() {
        // X^4 + 4 Y^4 factors into two rational conics, but each splits
        // further into lines, all through [0:0:1].
        let r = classified("x^4 + 4*y^4", "1,0,0");
        assert_eq!(r.case, CaseId::ConcurrentLines);
        assert!(r.consistent);
        let p = &r.singular_points[0];
        assert_eq!(p.multiplicity, 4);
        assert_eq!(
            p.location,
            SingularLocation::Exact([Rational::zero(), Rational::zero(), Rational::one()])
        );
    }

    #[test]
    fn classify_rejects_bad_inputs() {
        let data = reduce(&curve("x^3 + x*z^2 + y^3"), &parse_point("1,0,0").unwrap()).unwrap();
        let verdict = decide(&data, DEFAULT_TOL).unwrap();
        assert!(matches!(
            classify(&data, &verdict, DEFAULT_TOL),
            Err(Error::InvalidInput(_))
        ));

        let data = reduce(&curve("x^5 + y^5 + z^5"), &parse_point("1,0,0").unwrap()).unwrap();
        let verdict = decide(&data, DEFAULT_TOL).unwrap();
        assert!(matches!(
            classify(&data, &verdict, DEFAULT_TOL),
            Err(Error::UnsupportedClassification { d: 5 })
        ));

        let data = reduce(&curve("z*x^3 + y^4"), &parse_point("1,0,0").unwrap()).unwrap();
        let verdict = decide(&data, DEFAULT_TOL).unwrap();
        assert!(matches!(
            classify(&data, &verdict, DEFAULT_TOL),
            Err(Error::InvalidInput(_))
        ));

        let data = reduce(
            &curve("x^4 - 2*x^2*y*z + y^2*z^2"),
            &parse_point("1,0,0").unwrap(),
        )
        .unwrap();
        let verdict = decide(&data, DEFAULT_TOL).unwrap();
        assert!(matches!(
            classify(&data, &verdict, DEFAULT_TOL),
            Err(Error::NonReducedPower)
        ));
    }

    #[test]
    fn classification_is_deterministic() {
        let a = classified("x^4 - 3*x^2*y^2 + 6*x^2*z^2 + 2*y^4 - 8*y^2*z^2 + 8*z^4", "1,0,0");
        let b = classified("x^4 - 3*x^2*y^2 + 6*x^2*z^2 + 2*y^4 - 8*y^2*z^2 + 8*z^4", "1,0,0");
        assert_eq!(a, b);
    }
}
