//! Command-line surface for the constant-moduli pipeline: decide pointed
//! curves, normalize them, classify the low-degree cases, inspect pencils,
//! test families for isotriviality, and draw diagrams.
//!
//! Verdicts always live in the JSON report on stdout, never in the exit
//! code. Exit 0 is success, exit 2 is bad input (parse errors come with a
//! position marker), exit 3 is an internal inconsistency, in particular a
//! sampling oracle that disagrees with the symbolic decision.

mod report;
mod svg;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use curvemoduli::classify;
use curvemoduli::error::Error;
use curvemoduli::fibration::{is_locally_trivial, WeierstrassFamily};
use curvemoduli::moduli::{constant_moduli_oracle, OracleOptions};
use curvemoduli::parse::{parse_family, parse_point, parse_ternary};
use curvemoduli::pencil::{self, LineParam};
use curvemoduli::rational::parse_rational;
use curvemoduli::weierstrass::{decide, reduce, ModuliVerdict};
use curvemoduli::DEFAULT_TOL;

use report::{InputEcho, Report};

#[derive(Parser)]
#[command(name = "curvemoduli", version, about = "Constant-moduli decisions for pointed plane curves")]
struct Cli {
    /// Numeric tolerance; beats the MODULI_TOL environment variable.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Add wall-clock stage timings to the report (varies run to run).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the pointed curve has constant moduli along its pencil.
    Decide {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Base point as "a,b,c" or "[a:b:c]".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Cross-check the verdict with the numeric sampling oracle.
        #[arg(long)]
        oracle: bool,
        /// Lines the oracle compares.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Bring the pointed curve to its normalized coefficient shape.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Name the geometric case of a constant-moduli curve of degree 3 or 4.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// List the pencil lines meeting the curve in fewer residual points.
    SpecialLines {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Fit the locus of tangency and tangent-concurrency points.
    TLocus {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Non-special lines to sample for concurrency points.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Tangency and tangent-concurrency data on one chosen pencil line.
    Tangents {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Line parameter t for the line y = t*z, or "inf" for z = 0.
        #[arg(long, allow_hyphen_values = true)]
        line: String,
    },
    /// Decide isotriviality of a hyperelliptic family "z^2 = f(x, t)".
    Isotrivial {
        #[arg(long, allow_hyphen_values = true)]
        family: String,
    },
    /// Locate and type the singular points of a plane curve.
    Singular {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Draw the curve, its pencil, tangents and locus into an SVG file.
    Plot {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Number of sampled pencil lines to draw.
        #[arg(long, default_value_t = 8)]
        lines: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

enum Failure {
    /// Bad input or an unsupported request; exit 2.
    User(String),
    /// Internal inconsistency; exit 3.
    Internal(String),
}

enum Outcome {
    Ok(Report),
    /// The report is still printed, but the run exits 3.
    Inconsistent(Report, String),
}

fn from_error(err: Error) -> Failure {
    match err {
        Error::Internal(msg) => Failure::Internal(msg),
        other => Failure::User(other.to_string()),
    }
}

/// Attach the offending input with a position marker to a parse error.
fn annotate(input: &str, err: Error) -> Failure {
    match err {
        Error::Parse { pos, msg } => Failure::User(format!(
            "parse error at position {pos}: {msg}\n  {input}\n  {caret}^",
            caret = " ".repeat(pos)
        )),
        other => from_error(other),
    }
}

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("MODULI_TOL") {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Failure::User(format!("MODULI_TOL is not a number: {s:?}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::User(format!("tolerance must be a positive number, got {tol}")));
    }
    Ok(tol)
}

/// Per-stage wall clock, kept out of the report unless asked for.
struct Timer {
    enabled: bool,
    last: Instant,
    marks: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer { enabled, last: Instant::now(), marks: BTreeMap::new() }
    }

    fn mark(&mut self, label: &str) {
        if self.enabled {
            let now = Instant::now();
            let ms = now.duration_since(self.last).as_secs_f64() * 1e3;
            self.marks.insert(label.to_string(), ms);
            self.last = now;
        }
    }

    fn finish(self, report: &mut Report) {
        if self.enabled {
            report.timings_ms = Some(self.marks);
        }
    }
}

fn parse_pair(curve: &str, point: &str) -> Result<(curvemoduli::TernaryForm, [curvemoduli::Rational; 3]), Failure> {
    let g = parse_ternary(curve).map_err(|e| annotate(curve, e))?;
    let p = parse_point(point).map_err(|e| annotate(point, e))?;
    Ok((g, p))
}

fn echo_pair(curve: &str, point: &str) -> InputEcho {
    InputEcho {
        curve: Some(curve.to_string()),
        point: Some(point.to_string()),
        ..Default::default()
    }
}

fn run(cli: &Cli, tol: f64) -> Result<Outcome, Failure> {
    let mut timer = Timer::new(cli.timings);
    match &cli.command {
        Cmd::Decide { curve, point, oracle, samples, seed } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("decide", echo_pair(curve, point), tol);
            let data = reduce(&g, &p).map_err(from_error)?;
            timer.mark("reduce");
            let verdict = decide(&data, tol).map_err(from_error)?;
            timer.mark("decide");
            report.verdict = Some(report::verdict_out(&verdict));
            if let ModuliVerdict::Constant(cm) = &verdict {
                report.normal_form = Some(report::normal_form_out(&cm.normal_form));
            }
            if *oracle {
                report.seed = Some(*seed);
                report.samples = Some(*samples);
                let opts = OracleOptions { samples: *samples, seed: *seed, tol };
                let o = constant_moduli_oracle(&g, &p, &opts).map_err(from_error)?;
                timer.mark("oracle");
                let agree = o.constant == verdict.is_constant();
                report.oracle = Some(report::oracle_out(&o));
                report.agreement = Some(agree);
                if !agree {
                    timer.finish(&mut report);
                    return Ok(Outcome::Inconsistent(
                        report,
                        "the sampling oracle disagrees with the symbolic verdict".into(),
                    ));
                }
            }
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Normalize { curve, point } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("normalize", echo_pair(curve, point), tol);
            let data = reduce(&g, &p).map_err(from_error)?;
            timer.mark("reduce");
            report.weierstrass = Some(report::weierstrass_out(&data));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Classify { curve, point } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("classify", echo_pair(curve, point), tol);
            let data = reduce(&g, &p).map_err(from_error)?;
            timer.mark("reduce");
            let verdict = decide(&data, tol).map_err(from_error)?;
            timer.mark("decide");
            report.verdict = Some(report::verdict_out(&verdict));
            if let ModuliVerdict::Constant(cm) = &verdict {
                report.normal_form = Some(report::normal_form_out(&cm.normal_form));
            }
            let result = classify::classify(&data, &verdict, tol).map_err(from_error)?;
            timer.mark("classify");
            report.classification = Some(report::classification_out(&result));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::SpecialLines { curve, point } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("special-lines", echo_pair(curve, point), tol);
            let setup = pencil::setup(&g, &p).map_err(from_error)?;
            let lines = pencil::special_lines(&setup, tol).map_err(from_error)?;
            timer.mark("special-lines");
            report.special_lines = Some(report::special_lines_out(&lines));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::TLocus { curve, point, samples, seed } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("t-locus", echo_pair(curve, point), tol);
            report.seed = Some(*seed);
            report.samples = Some(*samples);
            let setup = pencil::setup(&g, &p).map_err(from_error)?;
            let locus = pencil::t_locus(&setup, tol, *seed, *samples).map_err(from_error)?;
            timer.mark("t-locus");
            report.t_locus = Some(report::t_locus_out(&locus));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Tangents { curve, point, line } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("tangents", echo_pair(curve, point), tol);
            report.input.line = Some(line.clone());
            let setup = pencil::setup(&g, &p).map_err(from_error)?;
            let lp = if line.trim().eq_ignore_ascii_case("inf")
                || line.trim().eq_ignore_ascii_case("infinity")
            {
                LineParam::Infinity
            } else {
                LineParam::Rational(parse_rational(line.trim()).map_err(|e| annotate(line, e))?)
            };
            let rep = pencil::tangents_on_line(&setup, &lp, tol).map_err(from_error)?;
            let concurrency = match &lp {
                LineParam::Rational(t) => match pencil::concurrency_on_line(&setup, t, tol) {
                    Ok(s) => Some(s),
                    Err(Error::DegenerateLine(_)) => None,
                    Err(e) => return Err(from_error(e)),
                },
                _ => None,
            };
            timer.mark("tangents");
            report.tangents = Some(report::tangents_out(&rep, concurrency.as_ref()));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Isotrivial { family } => {
            let coeffs = parse_family(family).map_err(|e| annotate(family, e))?;
            let fam = WeierstrassFamily::new(coeffs).map_err(from_error)?;
            let mut report = Report::new(
                "isotrivial",
                InputEcho { family: Some(family.clone()), ..Default::default() },
                tol,
            );
            let verdict = is_locally_trivial(&fam, tol).map_err(from_error)?;
            timer.mark("isotrivial");
            report.isotriviality = Some(report::isotriviality_out(&verdict, fam.to_text()));
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Singular { curve } => {
            let g = parse_ternary(curve).map_err(|e| annotate(curve, e))?;
            let mut report = Report::new(
                "singular",
                InputEcho { curve: Some(curve.clone()), ..Default::default() },
                tol,
            );
            let points = classify::singular_points(&g, tol).map_err(from_error)?;
            timer.mark("singular");
            report.singular_points = Some(points.iter().map(report::singular_point_out).collect());
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
        Cmd::Plot { curve, point, out, lines, seed } => {
            let (g, p) = parse_pair(curve, point)?;
            let mut report = Report::new("plot", echo_pair(curve, point), tol);
            report.seed = Some(*seed);
            let setup = pencil::setup(&g, &p).map_err(from_error)?;
            let plot = svg::render(&setup, tol, *seed, *lines).map_err(from_error)?;
            timer.mark("render");
            std::fs::write(out, &plot.svg)
                .map_err(|e| Failure::User(format!("cannot write {}: {e}", out.display())))?;
            report.plot = Some(report::PlotOut {
                out: out.display().to_string(),
                lines: *lines,
                svg_bytes: plot.svg.len(),
                real_points: plot.real_points,
                complex_points: plot.complex_points,
                viewbox: plot.viewbox,
            });
            timer.finish(&mut report);
            Ok(Outcome::Ok(report))
        }
    }
}

fn emit(report: &Report) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    // A closed pipe downstream is not our error; stay quiet about it.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match tolerance(cli.tol) {
        Ok(t) => t,
        Err(f) => return fail(f),
    };
    match run(&cli, tol) {
        Ok(Outcome::Ok(report)) => {
            emit(&report);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Inconsistent(report, msg)) => {
            emit(&report);
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::User(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Internal(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
