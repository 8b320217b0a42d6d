//! Deterministic SVG picture of a pointed curve: the real locus traced by
//! sweeping the pencil of lines through the point, a few sampled pencil
//! lines, the tangent lines at the residual points of one generic line,
//! the fitted tangency locus, and the special points. Everything is drawn
//! in the input coordinates; complex locus points are listed in the
//! description block instead of being drawn.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvemoduli::error::Error;
use curvemoduli::pencil::{self, LineParam, PencilLine, PencilSetup};
use curvemoduli::rational::{to_f64, Rational};
use curvemoduli::ternary::mat3_inv;

pub struct PlotResult {
    pub svg: String,
    pub real_points: usize,
    pub complex_points: usize,
    pub viewbox: [f64; 4],
}

/// Number of sweep intervals; the pencil parameter takes 257 values.
const SWEEP_STEPS: usize = 256;

fn fmt(v: f64) -> String {
    // Fixed precision keeps the output byte-stable; coordinates are
    // normalized well below this scale by the viewport fit.
    let s = format!("{:.6}", v);
    // Avoid the two encodings of zero.
    if s == "-0.000000" { "0.000000".to_string() } else { s }
}

fn apply3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// Map a canonical point to the input affine chart `z = 1`; `None` for
/// points at infinity there.
fn to_affine(m: &[[f64; 3]; 3], v: [f64; 3]) -> Option<(f64, f64)> {
    let w = apply3(m, v);
    let scale = w[0].abs().max(w[1].abs()).max(w[2].abs()).max(1e-300);
    if w[2].abs() <= 1e-9 * scale {
        return None;
    }
    Some((w[0] / w[2], w[1] / w[2]))
}

/// Row vector times matrix: maps line coefficients from canonical to
/// input coordinates when fed the inverse of the point map.
fn line_to_input(minv: &[[f64; 3]; 3], l: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|j| l[0] * minv[0][j] + l[1] * minv[1][j] + l[2] * minv[2][j])
}

/// Clip the affine line `a x + b y + c = 0` to a rectangle; returns the
/// visible segment when the line crosses it.
fn clip_line(l: [f64; 3], rect: [f64; 4]) -> Option<((f64, f64), (f64, f64))> {
    let [x0, y0, w, h] = rect;
    let (x1, y1) = (x0 + w, y0 + h);
    let [a, b, c] = l;
    if a.abs().max(b.abs()) < 1e-12 {
        return None;
    }
    let mut hits: Vec<(f64, f64)> = Vec::new();
    let mut push = |x: f64, y: f64| {
        let eps = 1e-9 * (w + h);
        if x >= x0 - eps && x <= x1 + eps && y >= y0 - eps && y <= y1 + eps {
            if !hits.iter().any(|(px, py)| (px - x).abs() + (py - y).abs() < eps) {
                hits.push((x, y));
            }
        }
    };
    if b.abs() > 1e-12 {
        push(x0, (-c - a * x0) / b);
        push(x1, (-c - a * x1) / b);
    }
    if a.abs() > 1e-12 {
        push((-c - b * y0) / a, y0);
        push((-c - b * y1) / a, y1);
    }
    if hits.len() < 2 {
        return None;
    }
    // Extreme pair along the dominant direction.
    let key = |p: &(f64, f64)| if b.abs() >= a.abs() { p.0 } else { p.1 };
    let lo = hits.iter().cloned().fold(hits[0], |m, p| if key(&p) < key(&m) { p } else { m });
    let hi = hits.iter().cloned().fold(hits[0], |m, p| if key(&p) > key(&m) { p } else { m });
    if (lo.0 - hi.0).abs() + (lo.1 - hi.1).abs() < 1e-9 * (w + h) {
        return None;
    }
    Some((lo, hi))
}

struct Collected {
    /// Polylines tracing the real locus, in input affine coordinates.
    branches: Vec<Vec<(f64, f64)>>,
    /// Marked points: (x, y, class name).
    markers: Vec<(f64, f64, &'static str)>,
    /// Complex locus points for the annotation block.
    complex_notes: Vec<String>,
    /// Tangent line coefficients in input coordinates.
    tangent_lines: Vec<[f64; 3]>,
    /// Sampled pencil line coefficients in input coordinates.
    pencil_lines: Vec<[f64; 3]>,
    real_points: usize,
}

fn real_part(re: f64, im: f64) -> Option<f64> {
    if im.abs() <= 1e-6 * (1.0 + re.abs()) {
        Some(re)
    } else {
        None
    }
}

fn sweep_radius(setup: &PencilSetup, tol: f64) -> Result<i64, Error> {
    let special = pencil::special_lines(setup, tol)?;
    let mut max_t = 1.0f64;
    for s in &special {
        match &s.line {
            LineParam::Rational(t) => max_t = max_t.max(to_f64(t).abs()),
            LineParam::Numeric(z) => {
                if let Some(re) = real_part(z.re, z.im) {
                    max_t = max_t.max(re.abs());
                }
            }
            LineParam::Infinity => {}
        }
    }
    Ok((2.0 * max_t).ceil().min(1e6) as i64)
}

/// Trace the real residual points through the sweep and thread them into
/// branches by nearest continuation.
fn trace_branches(
    setup: &PencilSetup,
    mf: &[[f64; 3]; 3],
    radius: i64,
    tol: f64,
) -> Result<(Vec<Vec<(f64, f64)>>, usize), Error> {
    let half = (SWEEP_STEPS / 2) as i64;
    let mut per_step: Vec<(f64, Vec<f64>)> = Vec::with_capacity(SWEEP_STEPS + 1);
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    for k in 0..=SWEEP_STEPS as i64 {
        let t = Rational::new((radius * (k - half)).into(), half.into());
        let roots = match setup.intersect(&PencilLine::Finite(t.clone()), tol) {
            Ok(r) => r,
            Err(_) => {
                per_step.push((to_f64(&t), Vec::new()));
                continue;
            }
        };
        let mut xs: Vec<f64> = roots
            .roots
            .iter()
            .filter_map(|(z, _)| real_part(z.re, z.im))
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for &x in &xs {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
        }
        per_step.push((to_f64(&t), xs));
    }
    let span = if xmin <= xmax { xmax - xmin } else { 0.0 };
    let thr = 0.08 * (span + 1.0);

    struct Branch {
        last_x: f64,
        pts: Vec<(f64, f64)>,
    }
    let mut done: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut alive: Vec<Branch> = Vec::new();
    let mut total = 0usize;
    for (t, xs) in &per_step {
        let mut next: Vec<Branch> = Vec::new();
        let mut used = vec![false; alive.len()];
        for &x in xs {
            total += 1;
            let best = alive
                .iter()
                .enumerate()
                .filter(|(i, b)| !used[*i] && (b.last_x - x).abs() <= thr)
                .min_by(|(_, a), (_, b)| {
                    (a.last_x - x).abs().partial_cmp(&(b.last_x - x).abs()).unwrap()
                })
                .map(|(i, _)| i);
            match best {
                Some(i) => {
                    used[i] = true;
                    let mut b = Branch { last_x: x, pts: std::mem::take(&mut alive[i].pts) };
                    b.pts.push((x, *t));
                    next.push(b);
                }
                None => next.push(Branch { last_x: x, pts: vec![(x, *t)] }),
            }
        }
        for (i, b) in alive.into_iter().enumerate() {
            if !used[i] && !b.pts.is_empty() {
                done.push(b.pts);
            }
        }
        alive = next;
    }
    done.extend(alive.into_iter().map(|b| b.pts).filter(|p| !p.is_empty()));

    // Map canonical (x, t) to the input chart, splitting at its infinity.
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    for branch in done {
        let mut cur: Vec<(f64, f64)> = Vec::new();
        for (x, t) in branch {
            match to_affine(mf, [x, t, 1.0]) {
                Some(p) => cur.push(p),
                None => {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                }
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    Ok((out, total))
}

fn collect(setup: &PencilSetup, tol: f64, seed: u64, lines: usize) -> Result<Collected, Error> {
    let red = &setup.data.reduction;
    let mf: [[f64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| to_f64(&red.to_input[i][j])));
    let minv_rat = mat3_inv(&red.to_input)?;
    let minv: [[f64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| to_f64(&minv_rat[i][j])));

    let radius = sweep_radius(setup, tol)?;
    let (branches, swept) = trace_branches(setup, &mf, radius, tol)?;
    let mut real_points = swept;
    let mut markers: Vec<(f64, f64, &'static str)> = Vec::new();
    let mut complex_notes: Vec<String> = Vec::new();

    // The base point itself, when visible in the chart.
    if let Some((x, y)) = to_affine(&mf, [1.0, 0.0, 0.0]) {
        markers.push((x, y, "base"));
        real_points += 1;
    }

    // Tangency locus: special-line tangency points and sampled meeting
    // points; complex ones go to the annotation block.
    let locus = pencil::t_locus(setup, tol, seed, 10)?;
    for (x, line) in &locus.points {
        let t = match line {
            LineParam::Rational(t) => Some(to_f64(t)),
            LineParam::Numeric(z) => real_part(z.re, z.im),
            LineParam::Infinity => None,
        };
        let xr = real_part(x.re, x.im);
        match (xr, t, line) {
            (Some(xv), Some(tv), _) => {
                if let Some(p) = to_affine(&mf, [xv, tv, 1.0]) {
                    markers.push((p.0, p.1, "special"));
                    real_points += 1;
                }
            }
            (Some(xv), None, LineParam::Infinity) => {
                if let Some(p) = to_affine(&mf, [xv, 1.0, 0.0]) {
                    markers.push((p.0, p.1, "special"));
                    real_points += 1;
                }
            }
            _ => {
                let t_text = match line {
                    LineParam::Rational(t) => format!("t = {t}"),
                    LineParam::Numeric(z) => format!("t = {} + {}i", fmt(z.re), fmt(z.im)),
                    LineParam::Infinity => "the infinite line".to_string(),
                };
                complex_notes.push(format!(
                    "tangency x = {} + {}i on {}",
                    fmt(x.re),
                    fmt(x.im),
                    t_text
                ));
            }
        }
    }
    for s in &locus.samples {
        let re = [s.point[0].re, s.point[1].re, s.point[2].re];
        let imag: f64 = s.point.iter().map(|c| c.im.abs()).sum();
        if imag <= 1e-6 {
            if let Some(p) = to_affine(&mf, re) {
                markers.push((p.0, p.1, "meet"));
                real_points += 1;
            }
        } else {
            complex_notes.push(format!(
                "meeting point [{} + {}i : {} + {}i : {} + {}i] on t = {}",
                fmt(s.point[0].re),
                fmt(s.point[0].im),
                fmt(s.point[1].re),
                fmt(s.point[1].im),
                fmt(s.point[2].re),
                fmt(s.point[2].im),
                s.t
            ));
        }
    }

    // Sampled pencil lines, as straight lines in the input chart.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pencil_lines: Vec<[f64; 3]> = Vec::new();
    for _ in 0..lines {
        let num = rng.gen_range(-(2 * radius)..=2 * radius);
        let den = rng.gen_range(1i64..=4);
        let t = num as f64 / den as f64;
        pencil_lines.push(line_to_input(&minv, [0.0, 1.0, -t]));
    }

    // Tangent lines at the residual points of one generic line.
    let mut tangent_lines: Vec<[f64; 3]> = Vec::new();
    let mut trng = ChaCha8Rng::seed_from_u64(seed ^ 0x74616e67);
    let grad: Vec<Vec<((u16, u16, u16), f64)>> =
        (0..3).map(|v| setup.data.form.partial(v).terms_f64()).collect();
    'hunt: for _ in 0..40 {
        let num = trng.gen_range(-50i64..=50);
        let den = trng.gen_range(1i64..=50);
        let t = Rational::new(num.into(), den.into());
        if pencil::concurrency_on_line(setup, &t, tol).is_err() {
            continue;
        }
        let tf = to_f64(&t);
        let roots = setup.intersect(&PencilLine::Finite(t), tol)?;
        for (z, _) in &roots.roots {
            if let Some(x) = real_part(z.re, z.im) {
                let l: [f64; 3] = std::array::from_fn(|i| {
                    grad[i]
                        .iter()
                        .map(|((a, b, c), q)| {
                            q * x.powi(*a as i32) * tf.powi(*b as i32) * 1f64.powi(*c as i32)
                        })
                        .sum()
                });
                tangent_lines.push(line_to_input(&minv, l));
                if let Some(p) = to_affine(&mf, [x, tf, 1.0]) {
                    markers.push((p.0, p.1, "residual"));
                    real_points += 1;
                }
            }
        }
        break 'hunt;
    }

    let complex_points = complex_notes.len();
    let _ = complex_points;
    Ok(Collected {
        branches,
        markers,
        complex_notes,
        tangent_lines,
        pencil_lines,
        real_points,
    })
}

pub fn render(setup: &PencilSetup, tol: f64, seed: u64, lines: usize) -> Result<PlotResult, Error> {
    let c = collect(setup, tol, seed, lines)?;

    // Fit the viewport to the real points with a 10% margin on each side.
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let mut eat = |x: f64, y: f64| {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    };
    for b in &c.branches {
        for &(x, y) in b {
            eat(x, y);
        }
    }
    for &(x, y, _) in &c.markers {
        eat(x, y);
    }
    if !xmin.is_finite() {
        xmin = -1.0;
        xmax = 1.0;
        ymin = -1.0;
        ymax = 1.0;
    }
    let w = (xmax - xmin).max(1e-3);
    let h = (ymax - ymin).max(1e-3);
    let rect = [xmin - 0.1 * w, ymin - 0.1 * h, 1.2 * w, 1.2 * h];
    // SVG y runs downward; emit flipped coordinates.
    let viewbox = [rect[0], -(rect[1] + rect[3]), rect[2], rect[3]];
    let sw = 0.004 * rect[2].max(rect[3]);
    let r_marker = 2.0 * sw;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        fmt(viewbox[0]),
        fmt(viewbox[1]),
        fmt(viewbox[2]),
        fmt(viewbox[3])
    );
    let _ = writeln!(svg, "<desc>");
    let _ = writeln!(svg, "pointed plane curve: pencil sweep in input coordinates");
    let _ = writeln!(svg, "complex locus points: {}", c.complex_notes.len());
    for note in &c.complex_notes {
        let _ = writeln!(svg, "  {}", note);
    }
    let _ = writeln!(svg, "</desc>");

    for l in &c.pencil_lines {
        if let Some(((ax, ay), (bx, by))) = clip_line(*l, rect) {
            let _ = writeln!(
                svg,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c8c8c8\" stroke-width=\"{}\"/>",
                fmt(ax),
                fmt(-ay),
                fmt(bx),
                fmt(-by),
                fmt(sw)
            );
        }
    }
    for l in &c.tangent_lines {
        if let Some(((ax, ay), (bx, by))) = clip_line(*l, rect) {
            let _ = writeln!(
                svg,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#4682b4\" stroke-width=\"{}\"/>",
                fmt(ax),
                fmt(-ay),
                fmt(bx),
                fmt(-by),
                fmt(sw)
            );
        }
    }
    for b in &c.branches {
        if b.len() == 1 {
            let _ = writeln!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#111111\"/>",
                fmt(b[0].0),
                fmt(-b[0].1),
                fmt(sw)
            );
            continue;
        }
        let pts: Vec<String> =
            b.iter().map(|(x, y)| format!("{},{}", fmt(*x), fmt(-*y))).collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#111111\" stroke-width=\"{}\"/>",
            pts.join(" "),
            fmt(1.5 * sw)
        );
    }
    for (x, y, class) in &c.markers {
        let fill = match *class {
            "base" => "#2e8b57",
            "special" => "#ff8c00",
            "meet" => "#d22d2d",
            _ => "#4682b4",
        };
        let _ = writeln!(
            svg,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
            fmt(*x),
            fmt(-*y),
            fmt(r_marker),
            fill
        );
    }
    let _ = writeln!(svg, "</svg>");

    Ok(PlotResult {
        real_points: c.real_points,
        complex_points: c.complex_notes.len(),
        viewbox,
        svg,
    })
}
