//! JSON report emitted by every subcommand. One envelope type with
//! optional sections; rationals are rendered as "a/b" strings so nothing
//! passes through floating point, and all maps are ordered, so a report is
//! byte-identical across runs with the same input and seed.

use std::collections::BTreeMap;

use serde::Serialize;

use curvemoduli::classify::{ClassificationResult, SingularLocation, SingularPoint, SingularityType};
use curvemoduli::fibration::{JConstancyReport, TrivialityVerdict};
use curvemoduli::moduli::OracleVerdict;
use curvemoduli::numkernel::ComplexApprox;
use curvemoduli::pencil::{ConcurrencySample, LineParam, SpecialLine, TLocus, TLocusShape, TangentReport};
use curvemoduli::rational::Rational;
use curvemoduli::ternary::Mat3;
use curvemoduli::weierstrass::{ModuliVerdict, NormalForm, WeierstrassData};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub command: String,
    pub input: InputEcho,
    /// Numeric tolerance in effect for this run.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOut>,
    /// Symbolic and oracle verdicts agree; only set when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<WeierstrassOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special_lines: Option<Vec<SpecialLineOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_locus: Option<TLocusOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangents: Option<TangentsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotriviality: Option<IsotrivialityOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_points: Option<Vec<SingularPointOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotOut>,
    /// Wall-clock stage timings; opt-in because they vary run to run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, input: InputEcho, tolerance: f64) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input,
            tolerance,
            seed: None,
            samples: None,
            verdict: None,
            normal_form: None,
            oracle: None,
            agreement: None,
            weierstrass: None,
            classification: None,
            special_lines: None,
            t_locus: None,
            tangents: None,
            isotriviality: None,
            singular_points: None,
            plot: None,
            timings_ms: None,
        }
    }
}

/// The raw command-line inputs, echoed back untouched.
#[derive(Serialize, Default)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<String>,
}

fn rat(q: &Rational) -> String {
    q.to_string()
}

#[derive(Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct ApproxOut {
    pub re: f64,
    pub im: f64,
    /// First-order backward error estimate of the approximation.
    pub err: f64,
}

impl ApproxOut {
    fn from(z: &ComplexApprox) -> Self {
        ApproxOut { re: z.re, im: z.im, err: z.err }
    }
}

#[derive(Serialize)]
pub struct VerdictOut {
    pub constant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_reduced: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessOut>,
}

/// Evidence for a non-constant verdict: the proportionality pair that broke.
#[derive(Serialize)]
pub struct WitnessOut {
    pub levels: [usize; 2],
    pub lhs: String,
    pub rhs: String,
}

pub fn verdict_out(v: &ModuliVerdict) -> VerdictOut {
    match v {
        ModuliVerdict::Constant(cm) => VerdictOut {
            constant: true,
            non_reduced: Some(cm.non_reduced),
            witness: None,
        },
        ModuliVerdict::NonConstant(w) => VerdictOut {
            constant: false,
            non_reduced: None,
            witness: Some(WitnessOut {
                levels: [w.pair.0, w.pair.1],
                lhs: w.lhs.to_text(),
                rhs: w.rhs.to_text(),
            }),
        },
    }
}

#[derive(Serialize)]
pub struct AlphaOut {
    pub re: f64,
    pub im: f64,
    pub err: f64,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct NormalFormOut {
    pub k: usize,
    pub n: usize,
    pub x_power: usize,
    pub h: String,
    pub lambdas: Vec<String>,
    pub companion: String,
    pub alphas: Vec<AlphaOut>,
    pub z_padding: [usize; 2],
    pub z_clearance: usize,
    /// Human-readable product shape.
    pub product: String,
}

pub fn normal_form_out(nf: &NormalForm) -> NormalFormOut {
    NormalFormOut {
        k: nf.k,
        n: nf.n,
        x_power: nf.x_power,
        h: nf.h.to_text(),
        lambdas: nf.lambdas.iter().map(rat).collect(),
        companion: nf.companion.to_text("W"),
        alphas: nf
            .alphas
            .roots
            .iter()
            .map(|(z, m)| AlphaOut { re: z.re, im: z.im, err: z.err, multiplicity: *m })
            .collect(),
        z_padding: [nf.z_padding.0, nf.z_padding.1],
        z_clearance: nf.z_clearance,
        product: nf.to_text(),
    }
}

#[derive(Serialize)]
pub struct OracleOut {
    pub constant: bool,
    pub fiber_degree: usize,
    pub repeated_degree: usize,
    pub lines_checked: usize,
    pub skipped_special: usize,
    pub max_distance: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_j0: Option<usize>,
    /// Two line parameters with inequivalent fibers, on a negative verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 2]>,
}

pub fn oracle_out(o: &OracleVerdict) -> OracleOut {
    OracleOut {
        constant: o.constant,
        fiber_degree: o.fiber_degree,
        repeated_degree: o.repeated_degree,
        lines_checked: o.lines_checked,
        skipped_special: o.skipped_special,
        max_distance: o.max_distance,
        threshold: o.threshold,
        reference_j0: o.reference_j0,
        witness: o.witness.as_ref().map(|(a, b)| [rat(a), rat(b)]),
    }
}

fn mat_out(m: &Mat3) -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| rat(&m[i][j])))
}

#[derive(Serialize)]
pub struct WeierstrassOut {
    pub d: usize,
    pub m: usize,
    /// The canonical form itself; feeding it back with point 1,0,0
    /// reproduces this whole section.
    pub form: String,
    /// Coefficient forms of X^(d-h) for h = 0..=d.
    pub coefficients: Vec<String>,
    pub point_multiplicity: usize,
    /// Product of the line components through the point that were removed.
    pub stripped: String,
    pub stripped_degree: usize,
    /// Maps canonical coordinates back to the input coordinates.
    pub to_input: [[String; 3]; 3],
    pub x_shift: String,
    pub x_scale: String,
    pub fiber_scale: String,
}

pub fn weierstrass_out(data: &WeierstrassData) -> WeierstrassOut {
    let red = &data.reduction;
    WeierstrassOut {
        d: data.d,
        m: data.m,
        form: data.form.to_text(),
        coefficients: data.coefficients.iter().map(|f| f.to_text()).collect(),
        point_multiplicity: red.multiplicity_at_point,
        stripped: red.stripped.to_text(),
        stripped_degree: red.stripped.degree(),
        to_input: mat_out(&red.to_input),
        x_shift: red.x_shift.to_text("Y"),
        x_scale: rat(&red.x_scale),
        fiber_scale: red.fiber_scale.to_text(),
    }
}

#[derive(Serialize)]
pub struct LocationOut {
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<[ComplexOut; 3]>,
}

#[derive(Serialize)]
pub struct SingularPointOut {
    pub location: LocationOut,
    pub multiplicity: usize,
    pub kind: String,
    /// Tangent cone root pattern, for points outside the named types.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangent_pattern: Option<Vec<u32>>,
}

pub fn singular_point_out(p: &SingularPoint) -> SingularPointOut {
    let location = match &p.location {
        SingularLocation::Exact(q) => LocationOut {
            exact: true,
            rational: Some(std::array::from_fn(|i| rat(&q[i]))),
            numeric: None,
        },
        SingularLocation::Numeric(q) => LocationOut {
            exact: false,
            rational: None,
            numeric: Some(std::array::from_fn(|i| ComplexOut { re: q[i].re, im: q[i].im })),
        },
    };
    let (kind, tangent_pattern) = match &p.kind {
        SingularityType::Node => ("node", None),
        SingularityType::Cusp => ("cusp", None),
        SingularityType::Tacnode => ("tacnode", None),
        SingularityType::OrdinaryTriple => ("ordinary-triple", None),
        SingularityType::Other { tangent_pattern, .. } => ("other", Some(tangent_pattern.clone())),
    };
    SingularPointOut {
        location,
        multiplicity: p.multiplicity,
        kind: kind.to_string(),
        tangent_pattern,
    }
}

#[derive(Serialize)]
pub struct ClassificationOut {
    pub case: String,
    /// The singular points matched the expectations of the case.
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub singular_points: Vec<SingularPointOut>,
}

pub fn classification_out(r: &ClassificationResult) -> ClassificationOut {
    ClassificationOut {
        case: r.case.name().to_string(),
        consistent: r.consistent,
        note: r.note.clone(),
        singular_points: r.singular_points.iter().map(singular_point_out).collect(),
    }
}

#[derive(Serialize)]
#[serde(tag = "kind")]
pub enum LineOut {
    #[serde(rename = "rational")]
    Rational { t: String },
    #[serde(rename = "numeric")]
    Numeric { t: ApproxOut },
    #[serde(rename = "infinity")]
    Infinity,
}

pub fn line_out(l: &LineParam) -> LineOut {
    match l {
        LineParam::Rational(t) => LineOut::Rational { t: rat(t) },
        LineParam::Numeric(z) => LineOut::Numeric { t: ApproxOut::from(z) },
        LineParam::Infinity => LineOut::Infinity,
    }
}

#[derive(Serialize)]
pub struct SpecialLineOut {
    pub line: LineOut,
    pub count: usize,
    pub collapse: bool,
    pub numeric: bool,
}

pub fn special_lines_out(lines: &[SpecialLine]) -> Vec<SpecialLineOut> {
    lines
        .iter()
        .map(|s| SpecialLineOut {
            line: line_out(&s.line),
            count: s.count,
            collapse: s.collapse,
            numeric: s.numeric,
        })
        .collect()
}

#[derive(Serialize)]
pub struct TangencyPointOut {
    pub x: ApproxOut,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct ConcurrencyOut {
    pub t: String,
    pub point: [ComplexOut; 3],
    pub deviation: f64,
}

pub fn concurrency_out(s: &ConcurrencySample) -> ConcurrencyOut {
    ConcurrencyOut {
        t: rat(&s.t),
        point: std::array::from_fn(|i| ComplexOut { re: s.point[i].re, im: s.point[i].im }),
        deviation: s.deviation,
    }
}

#[derive(Serialize)]
pub struct TLocusPointOut {
    pub x: ApproxOut,
    pub line: LineOut,
}

#[derive(Serialize)]
pub struct TLocusOut {
    pub shape: String,
    pub max_deviation: f64,
    pub points: Vec<TLocusPointOut>,
    pub samples: Vec<ConcurrencyOut>,
}

pub fn t_locus_out(t: &TLocus) -> TLocusOut {
    let shape = match t.shape {
        TLocusShape::Point => "point",
        TLocusShape::LineX0 => "line-x-0",
        TLocusShape::Scattered => "scattered",
        TLocusShape::Empty => "empty",
    };
    TLocusOut {
        shape: shape.to_string(),
        max_deviation: t.max_deviation,
        points: t
            .points
            .iter()
            .map(|(x, l)| TLocusPointOut { x: ApproxOut::from(x), line: line_out(l) })
            .collect(),
        samples: t.samples.iter().map(concurrency_out).collect(),
    }
}

#[derive(Serialize)]
pub struct TangentsOut {
    pub line: LineOut,
    /// Repeated residual points on the line, with fiber multiplicities.
    pub points: Vec<TangencyPointOut>,
    pub max_deviation: f64,
    /// Concurrency of the tangents at the residual points; absent on
    /// special lines and at infinity, where it is not measurable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrency: Option<ConcurrencyOut>,
}

pub fn tangents_out(r: &TangentReport, concurrency: Option<&ConcurrencySample>) -> TangentsOut {
    TangentsOut {
        line: line_out(&r.line),
        points: r
            .points
            .iter()
            .map(|(x, m)| TangencyPointOut { x: ApproxOut::from(x), multiplicity: *m })
            .collect(),
        max_deviation: r.max_deviation,
        concurrency: concurrency.map(concurrency_out),
    }
}

#[derive(Serialize)]
pub struct JWitnessOut {
    pub t: String,
    pub j: String,
}

#[derive(Serialize)]
pub struct JReportOut {
    pub constant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[JWitnessOut; 2]>,
}

fn j_report_out(j: &JConstancyReport) -> JReportOut {
    JReportOut {
        constant: j.constant,
        value: j.j.as_ref().map(rat),
        witness: j.witness.as_ref().map(|(a, b)| {
            [
                JWitnessOut { t: rat(&a.0), j: rat(&a.1) },
                JWitnessOut { t: rat(&b.0), j: rat(&b.1) },
            ]
        }),
    }
}

#[derive(Serialize)]
pub struct IsotrivialityOut {
    pub isotrivial: bool,
    pub d: usize,
    pub m: usize,
    /// The family rewritten in canonical text form.
    pub family: String,
    pub verdict: VerdictOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<JReportOut>,
}

pub fn isotriviality_out(v: &TrivialityVerdict, family_text: String) -> IsotrivialityOut {
    IsotrivialityOut {
        isotrivial: v.isotrivial,
        d: v.d,
        m: v.m,
        family: family_text,
        verdict: verdict_out(&v.verdict),
        j: v.j_report.as_ref().map(j_report_out),
    }
}

#[derive(Serialize)]
pub struct PlotOut {
    pub out: String,
    pub lines: usize,
    pub svg_bytes: usize,
    /// Real points placed on the canvas.
    pub real_points: usize,
    /// Complex locus points listed in the annotation block, not drawn.
    pub complex_points: usize,
    pub viewbox: [f64; 4],
}
