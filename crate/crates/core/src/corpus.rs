//! Deterministic corpus of pointed curves with known verdicts.
//!
//! Positive entries are assembled directly in product shape, so constancy
//! holds by construction; negative entries perturb one coefficient level
//! of such a curve and keep the result only when the exact decision
//! rejects it. Every entry is then pushed through a random unimodular
//! change of coordinates, moving the marked point away from `[1:0:0]`,
//! and re-verified, so the corpus exercises the whole reduction path and
//! not just the decision step.

use std::collections::BTreeSet;

use crate::binary::BinaryForm;
use crate::error::Error;
use crate::rational::{rat, rat_i, Rational};
use crate::ternary::TernaryForm;
use crate::weierstrass::{decide, reduce, ModuliVerdict};
use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed behind [`default_corpus`].
pub const CORPUS_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: usize,
    pub curve: TernaryForm,
    pub point: [Rational; 3],
    pub expected_constant: bool,
    /// Pencil degree: intersections of a generic line away from the point.
    pub d: usize,
    /// Multiplicity of the curve at the point.
    pub m: usize,
    /// Level gcd used during construction; 0 for negatives.
    pub k: usize,
    /// Power of the split-off pencil line used during construction.
    pub x_power: usize,
    /// The curve as constructed at the standard point `[1:0:0]`, before
    /// the change of coordinates. For negatives this is the perturbed form.
    pub built: TernaryForm,
    /// Primitive branch factor used in the construction; positives only.
    pub branch: Option<BinaryForm>,
}

/// 250 constant and 250 non-constant entries under the fixed seed.
pub fn default_corpus() -> Vec<CorpusEntry> {
    corpus(CORPUS_SEED, 250, 250)
}

/// Generate `positives + negatives` verified entries, deterministically in
/// `seed`.
pub fn corpus(seed: u64, positives: usize, negatives: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CorpusEntry> = Vec::with_capacity(positives + negatives);
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let tol = crate::DEFAULT_TOL;

    let mut want_pos = positives;
    let mut want_neg = negatives;
    while want_pos > 0 || want_neg > 0 {
        let make_pos = want_pos > 0 && (want_neg == 0 || rng.gen_bool(0.5));
        let candidate = if make_pos {
            gen_positive(&mut rng, tol)
        } else {
            gen_negative(&mut rng, tol)
        };
        let Some(mut entry) = candidate else { continue };
        let key = format!("{} @ {:?}", entry.curve.to_text(), entry.point);
        if !seen.insert(key) {
            continue;
        }
        entry.id = out.len();
        out.push(entry);
        if make_pos {
            want_pos -= 1;
        } else {
            want_neg -= 1;
        }
    }
    out
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))
}

fn small_rat_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = small_rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random binary form of the given degree with nonzero `Y^degree`
/// coefficient, so it carries no `Z` factor.
fn random_binary(rng: &mut ChaCha8Rng, degree: usize) -> BinaryForm {
    let mut coeffs = vec![Rational::zero(); degree + 1];
    coeffs[0] = small_rat_nonzero(rng);
    for c in coeffs.iter_mut().skip(1) {
        *c = small_rat(rng);
    }
    BinaryForm::new(degree, coeffs)
}

struct Shape {
    d: usize,
    m: usize,
    s: usize,
    k: usize,
    n: usize,
    delta: usize,
}

/// Pick a product shape. For a point on the curve the branch degree is
/// forced above the level gcd: the normal form needs an integral `a = m/n`
/// with `delta = k + a`, otherwise the whole form picks up a `Z^m` factor
/// and the curve would contain the infinite pencil line.
fn random_shape(rng: &mut ChaCha8Rng) -> Option<Shape> {
    let s = usize::from(rng.gen_bool(0.2));
    let d = rng.gen_range(3..=8usize);
    let dp = d - s;
    let m = if rng.gen_bool(0.25) { rng.gen_range(1..=2) } else { 0 };
    let shapes: Vec<Shape> = (1..=dp)
        .filter(|k| dp % k == 0)
        .filter_map(|k| {
            let n = dp / k;
            if m == 0 {
                // k = 1 needs room for two coprime active levels, see
                // gen_lambdas.
                (k <= 6 && (k >= 2 || dp >= 3)).then_some(Shape { d, m, s, k, n, delta: k })
            } else {
                if m % n != 0 || k < 2 {
                    return None;
                }
                let delta = k + m / n;
                (delta <= 6).then_some(Shape { d, m, s, k, n, delta })
            }
        })
        .collect();
    if shapes.is_empty() {
        return None;
    }
    let idx = rng.gen_range(0..shapes.len());
    let mut shape = shapes.into_iter().nth(idx).unwrap();
    if shape.m == 0 && shape.k > 1 && rng.gen_bool(0.3) {
        shape.delta = rng.gen_range(1..shape.k);
    }
    Some(shape)
}

/// Coefficient ladder of `X^s * sum_t lambda_t X^(k(n-t)) Z^(m+t(k-delta)) H^t`,
/// indexed by `X` power. `lambda_0 = 1`.
fn product_coefficients(
    shape: &Shape,
    h: &BinaryForm,
    lambdas: &[Rational],
) -> Result<TernaryForm, Error> {
    let Shape { d, m, s, k, n, delta } = *shape;
    let total = d + m;
    let mut xcoeffs: Vec<BinaryForm> = (0..=d).map(|p| BinaryForm::zero(total - p)).collect();
    let mut hpow = BinaryForm::new(0, vec![Rational::one()]);
    for t in 0..=n {
        let p = s + k * (n - t);
        let e = m as i64 + t as i64 * (k as i64 - delta as i64);
        debug_assert!(e >= 0, "shape admits the ladder");
        let lam = if t == 0 { Rational::one() } else { lambdas[t - 1].clone() };
        let z = BinaryForm::monomial(e as usize, e as usize, Rational::one());
        let term = z.mul(&hpow).scale(&lam);
        let slot = &xcoeffs[p];
        xcoeffs[p] = BinaryForm::new(
            slot.degree(),
            slot.coeffs()
                .iter()
                .zip(term.coeffs().iter())
                .map(|(a, b)| a + b)
                .collect(),
        );
        hpow = hpow.mul(h);
    }
    TernaryForm::from_x_coefficients(&xcoeffs)
}

fn squarefree_companion(lambdas: &[Rational]) -> bool {
    let mut coeffs = vec![Rational::zero(); lambdas.len() + 1];
    coeffs[lambdas.len()] = Rational::one();
    for (t, lam) in lambdas.iter().enumerate() {
        coeffs[lambdas.len() - 1 - t] = lam.clone();
    }
    let p = crate::univariate::UnivariatePoly::new(coeffs);
    p.gcd(&p.derivative()).degree() == Some(0)
}

/// Random companion coefficients: squarefree companion, `lambda_n` nonzero
/// so `Z` stays out of the product, and the active level set with gcd
/// exactly `k`. For `k = 1` the level-one coefficient must vanish, since
/// the canonical form has no such term; coprimality is then carried by
/// levels two and three.
fn gen_lambdas(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Option<Vec<Rational>> {
    if k == 1 && n < 3 {
        return None;
    }
    for _ in 0..20 {
        let mut lambdas: Vec<Rational> = (0..n).map(|_| small_rat(rng)).collect();
        if k == 1 {
            lambdas[0] = Rational::zero();
            lambdas[1] = small_rat_nonzero(rng);
            lambdas[2] = small_rat_nonzero(rng);
        } else {
            lambdas[0] = small_rat_nonzero(rng);
        }
        lambdas[n - 1] = small_rat_nonzero(rng);
        if squarefree_companion(&lambdas) {
            return Some(lambdas);
        }
    }
    None
}

fn gen_canonical(rng: &mut ChaCha8Rng) -> Option<(Shape, BinaryForm, TernaryForm)> {
    let shape = random_shape(rng)?;
    let h = random_binary(rng, shape.delta);
    let lambdas = gen_lambdas(rng, shape.n, shape.k)?;
    let g = product_coefficients(&shape, &h, &lambdas).ok()?;
    Some((shape, h, g))
}

fn e1() -> [Rational; 3] {
    [Rational::one(), Rational::zero(), Rational::zero()]
}

fn gen_positive(rng: &mut ChaCha8Rng, tol: f64) -> Option<CorpusEntry> {
    let (_, h, g0) = gen_canonical(rng)?;
    let data = reduce(&g0, &e1()).ok()?;
    let ModuliVerdict::Constant(_) = decide(&data, tol).ok()? else {
        return None;
    };
    let (g, point) = random_change(rng, &g0);
    let data = reduce(&g, &point).ok()?;
    let ModuliVerdict::Constant(cm) = decide(&data, tol).ok()? else {
        return None;
    };
    Some(CorpusEntry {
        id: 0,
        curve: g,
        point,
        expected_constant: true,
        d: data.d,
        m: data.m,
        k: cm.k,
        x_power: cm.normal_form.x_power,
        built: g0,
        branch: Some(h.primitive()),
    })
}

fn gen_negative(rng: &mut ChaCha8Rng, tol: f64) -> Option<CorpusEntry> {
    let (shape, _, g0) = gen_canonical(rng)?;
    let total = shape.d + shape.m;
    // Adding one monomial at a level at least 2 below the top generically
    // breaks the proportionality ladder; keep only verified rejections.
    let p = rng.gen_range(0..=shape.d - 2);
    let deg = total - p;
    let i = rng.gen_range(0..=deg);
    let mono = TernaryForm::monomial(
        total,
        (p as u16, (deg - i) as u16, i as u16),
        small_rat_nonzero(rng),
    );
    let g1 = g0.add(&mono).ok()?;
    let data = reduce(&g1, &e1()).ok()?;
    let ModuliVerdict::NonConstant(_) = decide(&data, tol).ok()? else {
        return None;
    };
    let (g, point) = random_change(rng, &g1);
    let data = reduce(&g, &point).ok()?;
    let ModuliVerdict::NonConstant(_) = decide(&data, tol).ok()? else {
        return None;
    };
    Some(CorpusEntry {
        id: 0,
        curve: g,
        point,
        expected_constant: false,
        d: data.d,
        m: data.m,
        k: 0,
        x_power: 0,
        built: g1,
        branch: None,
    })
}

/// Random unimodular integer change of coordinates. Returns the
/// substituted curve and the preimage of `[1:0:0]`.
fn random_change(rng: &mut ChaCha8Rng, g: &TernaryForm) -> (TernaryForm, [Rational; 3]) {
    let mut m = [[0i64; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    let ops = rng.gen_range(2..=5);
    for _ in 0..ops {
        if rng.gen_bool(0.3) {
            let a = rng.gen_range(0..3);
            let b = rng.gen_range(0..3);
            m.swap(a, b);
        } else {
            let i = rng.gen_range(0..3);
            let mut j = rng.gen_range(0..3);
            if j == i {
                j = (j + 1) % 3;
            }
            let c = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
            for col in 0..3 {
                m[i][col] += c * m[j][col];
            }
        }
    }
    (substitute(g, &m), preimage_of_e1(&m))
}

/// `g(M v)` as a form in `v`.
fn substitute(g: &TernaryForm, m: &[[i64; 3]; 3]) -> TernaryForm {
    let d = g.degree();
    let lines: Vec<TernaryForm> = (0..3)
        .map(|i| {
            let mut acc = TernaryForm::zero(1);
            for (j, exps) in [(1u16, 0u16, 0u16), (0, 1, 0), (0, 0, 1)].iter().enumerate() {
                if m[i][j] != 0 {
                    acc = acc
                        .add(&TernaryForm::monomial(1, *exps, rat_i(m[i][j])))
                        .expect("linear terms");
                }
            }
            acc
        })
        .collect();
    let pows: Vec<Vec<TernaryForm>> = lines
        .iter()
        .map(|l| {
            let mut v = vec![TernaryForm::monomial(0, (0, 0, 0), Rational::one())];
            for e in 1..=d {
                v.push(v[e - 1].mul(l));
            }
            v
        })
        .collect();
    let mut acc = TernaryForm::zero(d);
    for (&(a, b, c), coeff) in g.terms() {
        let term = pows[0][a as usize]
            .mul(&pows[1][b as usize])
            .mul(&pows[2][c as usize])
            .scale(coeff);
        acc = acc.add(&term).expect("homogeneous substitution");
    }
    acc
}

/// First column of the adjugate: solves `M p = [1:0:0]` projectively for
/// unimodular `M`.
fn preimage_of_e1(m: &[[i64; 3]; 3]) -> [Rational; 3] {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| -> i64 {
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    [
        rat_i(cof(1, 2, 1, 2)),
        rat_i(-cof(1, 2, 0, 2)),
        rat_i(cof(1, 2, 0, 1)),
    ]
}
