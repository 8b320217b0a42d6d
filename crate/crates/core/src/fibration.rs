//! Hyperelliptic families `z^2 = f(x, t)` and their isotriviality.
//!
//! A family of hyperelliptic curves over the affine `t`-line is stored by
//! the coefficients of the defining polynomial. The translation both ways:
//! the coefficient functions of a family are exactly the pencil fiber
//! coefficients of a pointed plane curve, so isotriviality of the family
//! is the constant-moduli property of the corresponding pair, decided by
//! the exact machinery in [`crate::weierstrass`].
//!
//! For cubic fibers the verdict is double-checked against the classical
//! `j`-invariant: with `f = x^3 + p(t) x + q(t)`, the function
//! `j(t) = 6912 p^3 / (4 p^3 + 27 q^2)` is constant exactly when the
//! family is isotrivial, which happens exactly when `p^3` and `q^2` are
//! proportional (or one of them vanishes identically).

use num::{One, Zero};

use crate::error::Error;
use crate::rational::{rat_i, Rational};
use crate::ternary::TernaryForm;
use crate::univariate::UnivariatePoly;
use crate::weierstrass::{self, ModuliVerdict, WeierstrassData};

/// A hyperelliptic family `z^2 = sum_k c_k(t) x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassFamily {
    /// Entry `k` is the coefficient of `x^k` as a polynomial in `t`.
    pub coefficients: Vec<UnivariatePoly>,
}

impl WeierstrassFamily {
    /// Build from a coefficient list, trimming leading zeros.
    pub fn new(mut coefficients: Vec<UnivariatePoly>) -> Result<Self, Error> {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        if coefficients.len() < 2 {
            return Err(Error::InvalidInput(
                "a family needs positive degree in x".into(),
            ));
        }
        Ok(WeierstrassFamily { coefficients })
    }

    /// Degree of the fibers in `x`.
    pub fn fiber_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The fiber over a rational parameter value.
    pub fn fiber_at(&self, t: &Rational) -> UnivariatePoly {
        let coeffs = self.coefficients.iter().map(|c| c.eval(t)).collect();
        UnivariatePoly::new(coeffs)
    }

    /// True when the fibers are monic with no `x^(d-1)` term, the shape
    /// produced by [`family_from_pair`].
    pub fn is_canonical(&self) -> bool {
        let d = self.fiber_degree();
        self.coefficients[d] == UnivariatePoly::one() && self.coefficients[d - 1].is_zero()
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xs = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{}", k),
            };
            let cs = c.to_text("t");
            let part = if xs.is_empty() {
                cs
            } else if cs == "1" {
                xs
            } else if cs == "-1" {
                format!("-{}", xs)
            } else if c.is_constant() {
                format!("{}*{}", cs, xs)
            } else {
                format!("({})*{}", cs, xs)
            };
            parts.push(part);
        }
        let joined = parts.join(" + ").replace("+ -", "- ");
        format!("z^2 = {}", joined)
    }
}

/// The pencil fibers of a canonical pointed curve, read as a family: the
/// fiber over `t` is the residual intersection with the line `Y = t*Z`.
pub fn family_from_pair(data: &WeierstrassData) -> WeierstrassFamily {
    let coefficients = data
        .form
        .x_coefficients()
        .iter()
        .map(|b| b.dehomogenize())
        .collect();
    WeierstrassFamily { coefficients }
}

/// Homogenize a family into a pointed plane curve: the curve is the
/// minimal homogenization of `sum_k c_k(y) x^k` and the point is
/// `[1:0:0]`, whose pencil fibers recover the family.
pub fn pair_from_family(fam: &WeierstrassFamily) -> Result<(TernaryForm, [Rational; 3]), Error> {
    let g = TernaryForm::homogenize_min(&fam.coefficients)?;
    Ok((g, [Rational::one(), Rational::zero(), Rational::zero()]))
}

/// Outcome of the exact `j`-invariant test on a canonical cubic family.
#[derive(Debug, Clone, PartialEq)]
pub struct JConstancyReport {
    pub constant: bool,
    /// The common `j`-value when constant.
    pub j: Option<Rational>,
    /// Two parameter/value pairs witnessing non-constancy.
    pub witness: Option<((Rational, Rational), (Rational, Rational))>,
}

/// The `j`-invariant of one smooth fiber `z^2 = x^3 + p x + q`.
fn j_value(p: &Rational, q: &Rational) -> Option<Rational> {
    let disc = rat_i(4) * p * p * p + rat_i(27) * q * q;
    if disc.is_zero() {
        return None;
    }
    Some(rat_i(6912) * p * p * p / disc)
}

/// Exact constancy test for the `j`-invariant of a canonical cubic family
/// `z^2 = x^3 + p(t) x + q(t)`. Errors with [`Error::DegenerateFamily`]
/// when every fiber is singular (`4 p^3 + 27 q^2 = 0`), where `j` is
/// undefined.
pub fn j_constancy(fam: &WeierstrassFamily) -> Result<JConstancyReport, Error> {
    if fam.fiber_degree() != 3 || !fam.is_canonical() {
        return Err(Error::InvalidInput(
            "j-constancy needs a family z^2 = x^3 + p(t) x + q(t)".into(),
        ));
    }
    let p = &fam.coefficients[1];
    let q = &fam.coefficients[0];
    let four_p3 = p.mul(p).mul(p).scale(&rat_i(4));
    let disc = four_p3.add(&q.mul(q).scale(&rat_i(27)));
    if disc.is_zero() {
        return Err(Error::DegenerateFamily);
    }
    let constant = if p.is_zero() || q.is_zero() {
        true
    } else {
        // j = 6912 p^3 / disc is constant iff the Wronskian of numerator
        // and denominator vanishes; both inputs are polynomials, so this
        // is exact.
        let num = p.mul(p).mul(p);
        let wronskian = num.mul(&disc.derivative()).sub(&num.derivative().mul(&disc));
        wronskian.is_zero()
    };
    if constant {
        // Evaluate at the first parameter with a smooth fiber.
        let mut t = rat_i(0);
        let j = loop {
            if let Some(j) = j_value(&p.eval(&t), &q.eval(&t)) {
                break j;
            }
            t += rat_i(1);
        };
        return Ok(JConstancyReport {
            constant: true,
            j: Some(j),
            witness: None,
        });
    }
    // Hunt two smooth fibers with different j. A nonconstant rational
    // function takes any value only finitely often, so this terminates
    // quickly; the cap is pure defense.
    let mut found: Option<(Rational, Rational)> = None;
    let mut t = rat_i(0);
    for _ in 0..10_000 {
        if let Some(j) = j_value(&p.eval(&t), &q.eval(&t)) {
            match &found {
                None => found = Some((t.clone(), j)),
                Some((t0, j0)) if *j0 != j => {
                    return Ok(JConstancyReport {
                        constant: false,
                        j: None,
                        witness: Some(((t0.clone(), j0.clone()), (t, j))),
                    });
                }
                _ => {}
            }
        }
        t += rat_i(1);
    }
    Err(Error::Internal("no j-witness found for a nonconstant family".into()))
}

/// Isotriviality verdict for a hyperelliptic family.
#[derive(Debug, Clone)]
pub struct TrivialityVerdict {
    /// Almost all fibers are isomorphic as double covers.
    pub isotrivial: bool,
    /// Fiber degree of the canonical pair.
    pub d: usize,
    /// Multiplicity weight of the canonical pair.
    pub m: usize,
    /// The underlying constant-moduli verdict on the associated pair.
    pub verdict: ModuliVerdict,
    /// Cross-check via the `j`-invariant, for cubic fibers with smooth
    /// generic member.
    pub j_report: Option<JConstancyReport>,
}

/// Decide isotriviality by translating to the pointed-curve picture and
/// running the exact constant-moduli decision. Cubic families are also
/// checked against the `j`-invariant; a disagreement would be a bug and
/// surfaces as [`Error::Internal`].
pub fn is_locally_trivial(fam: &WeierstrassFamily, tol: f64) -> Result<TrivialityVerdict, Error> {
    let (g, point) = pair_from_family(fam)?;
    let data = weierstrass::reduce(&g, &point)?;
    let verdict = weierstrass::decide(&data, tol)?;
    let isotrivial = verdict.is_constant();
    let j_report = if data.d == 3 {
        match j_constancy(&family_from_pair(&data)) {
            Ok(rep) => {
                if rep.constant != isotrivial {
                    return Err(Error::Internal(
                        "j-invariant test disagrees with the moduli decision".into(),
                    ));
                }
                Some(rep)
            }
            Err(Error::DegenerateFamily) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(TrivialityVerdict {
        isotrivial,
        d: data.d,
        m: data.m,
        verdict,
        j_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_family, parse_point, parse_ternary};
    use crate::rational::rat;
    use crate::univariate::UnivariatePoly;

    fn family(input: &str) -> WeierstrassFamily {
        WeierstrassFamily::new(parse_family(input).unwrap()).unwrap()
    }

    #[test]
    fn family_and_pair_translate_both_ways() {
        let fam = family("z^2 = x^3 + t^4");
        let (g, p) = pair_from_family(&fam).unwrap();
        assert_eq!(g, parse_ternary("z*x^3 + y^4").unwrap());
        assert_eq!(p, parse_point("1,0,0").unwrap());
        let data = weierstrass::reduce(&g, &p).unwrap();
        assert_eq!((data.d, data.m), (3, 1));
        assert_eq!(family_from_pair(&data), fam);
    }

    #[test]
    fn fiber_evaluation() {
        let fam = family("z^2 = x^3 + t*x + 1");
        let f = fam.fiber_at(&rat_i(2));
        assert_eq!(f, UnivariatePoly::from_i64(&[1, 2, 0, 1]));
        assert_eq!(fam.fiber_degree(), 3);
        assert!(fam.is_canonical());
    }

    #[test]
    fn j_constancy_pinned_values() {
        let rep = j_constancy(&family("z^2 = x^3 + t^2*x + t^3")).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.j, Some(rat(6912, 31)));

        let rep = j_constancy(&family("z^2 = x^3 + t")).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.j, Some(rat_i(0)));

        let rep = j_constancy(&family("z^2 = x^3 + t*x")).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.j, Some(rat_i(1728)));

        let rep = j_constancy(&family("z^2 = x^3 + t*x + 1")).unwrap();
        assert!(!rep.constant);
        let ((_, j0), (_, j1)) = rep.witness.unwrap();
        assert_ne!(j0, j1);
    }

    #[test]
    fn j_constancy_rejects_everywhere_singular_families() {
        // (x - t)^2 (x + 2t) = x^3 - 3 t^2 x + 2 t^3.
        let fam = family("z^2 = x^3 - 3*t^2*x + 2*t^3");
        assert!(matches!(j_constancy(&fam), Err(Error::DegenerateFamily)));
    }

    #[test]
    fn isotrivial_families_are_recognized() {
        let v = is_locally_trivial(&family("z^2 = x^3 + t^2*x + t^3"), 1e-10).unwrap();
        assert!(v.isotrivial);
        assert_eq!(v.d, 3);
        assert_eq!(v.j_report.as_ref().unwrap().j, Some(rat(6912, 31)));

        let v = is_locally_trivial(&family("z^2 = x^3 + t"), 1e-10).unwrap();
        assert!(v.isotrivial);

        let v = is_locally_trivial(&family("z^2 = x^5 + t^5*x + t^6"), 1e-10).unwrap();
        assert!(!v.isotrivial);
        assert!(v.j_report.is_none());
    }

    #[test]
    fn non_isotrivial_family_with_j_witness() {
        let v = is_locally_trivial(&family("z^2 = x^3 + t*x + 1"), 1e-10).unwrap();
        assert!(!v.isotrivial);
        let rep = v.j_report.unwrap();
        assert!(!rep.constant);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn quartic_isotrivial_family() {
        // z^2 = x^4 + t^4: fibers scale onto each other by x -> t x.
        let v = is_locally_trivial(&family("z^2 = x^4 + t^4"), 1e-10).unwrap();
        assert!(v.isotrivial);
        assert_eq!(v.d, 4);
        assert!(v.j_report.is_none());
    }

    #[test]
    fn everywhere_singular_cubic_family_skips_the_j_check() {
        let v = is_locally_trivial(&family("z^2 = x^3 - 3*t^2*x + 2*t^3"), 1e-10).unwrap();
        assert!(v.isotrivial);
        assert!(v.j_report.is_none());
    }
}
