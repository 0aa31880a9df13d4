//! Command-line front end: subcommand plumbing and artifact writers.
//!
//! Structured results go out as JSON, point lists as CSV, and plots as SVG.
//! All floating-point output uses the shortest round-trip formatting, so a
//! fixed configuration (including the seed) produces byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bild::{
    boundary_functions, center_upper, is_convex, left_derivatives, CenterRegion, CenterReport,
    ProbeSchedule,
};
use crate::error::{Error, Result};
use crate::geometry::{mirror_union, Point2};
use crate::oracle::{st_center, st_ellipse};
use crate::qmatrix::{real_point, QMatrix};
use crate::sampler::{upper_hull, BildEstimate, HullParams};
use crate::verify::{check_convexity_equivalence, check_star_shaped, CenterSource};

#[derive(Debug, Parser)]
#[command(
    name = "quatrange",
    about = "Quaternionic numerical range: bild, star-center, and property checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the upper bild of a matrix and export its hull.
    Bild(BildArgs),
    /// Compute the star-center of the bild with tangent-line geometry.
    Center(MatrixTask),
    /// Report the endpoint convexity criterion verdict.
    Convexity(MatrixTask),
    /// Construct a unit vector witnessing a real range value.
    Realpoint(RealpointArgs),
    /// Closed-form ellipse ground truth for the 2x2 family.
    Oracle(OracleArgs),
    /// Run the randomized property suite; nonzero exit on failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct SampleOpts {
    /// Unit-sphere samples for the range scan.
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// Support directions for the hull reconstruction.
    #[arg(long, default_value_t = 720)]
    pub theta_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Projected-ascent iterations per direction.
    #[arg(long, default_value_t = 50)]
    pub budget: usize,
    /// Membership tolerance.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatrixTask {
    /// Matrix JSON: {"n": 2, "entries": [[[a0,a1,a2,a3], ...], ...]}.
    pub input: PathBuf,
    #[command(flatten)]
    pub sample: SampleOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct BildArgs {
    #[command(flatten)]
    pub task: MatrixTask,
    /// Also write the binned sample cloud as CSV (columns x,y,count).
    #[arg(long)]
    pub dump_samples: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealpointArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub k1: f64,
    #[arg(long)]
    pub k2: f64,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub sample: SampleOpts,
    /// Trials per property.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Membership tolerance for the property checks.
    #[arg(long, default_value_t = 2e-2)]
    pub eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SampleOpts {
    fn params(&self) -> Result<HullParams> {
        if self.samples == 0 {
            return Err(Error::InvalidInput("--samples must be at least 1".into()));
        }
        if self.theta_steps < 8 {
            return Err(Error::InvalidInput(
                "--theta-steps must be at least 8".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("--tol must be positive".into()));
        }
        Ok(HullParams {
            theta_steps: self.theta_steps,
            samples: self.samples,
            seed: self.seed,
            budget: self.budget,
            tol: self.tol,
        })
    }
}

/// Runs a parsed command; `Ok(code)` carries the process exit status.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Bild(args) => run_bild(args),
        Command::Center(task) => run_center(task),
        Command::Convexity(task) => run_convexity(task),
        Command::Realpoint(args) => run_realpoint(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn load_matrix(path: &PathBuf) -> Result<QMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::InvalidInput(e.to_string()))
        }
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

fn points_csv(points: &[Point2]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        s.push_str(&fmt_f(p.x));
        s.push(',');
        s.push_str(&fmt_f(p.y));
        s.push('\n');
    }
    s
}

fn json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

#[derive(Serialize)]
struct BildSummary {
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    pi_m: f64,
    #[serde(rename = "pi_M")]
    pi_big_m: f64,
    y_m: f64,
    degenerate: bool,
    sample_count: usize,
    seed: u64,
    hull: Vec<[f64; 2]>,
}

impl BildSummary {
    fn new(est: &BildEstimate) -> Self {
        BildSummary {
            m: est.real_min,
            big_m: est.real_max,
            pi_m: est.proj_min,
            pi_big_m: est.proj_max,
            y_m: est.height,
            degenerate: est.degenerate,
            sample_count: est.sample_count,
            seed: est.seed,
            hull: est.hull.iter().map(|p| [p.x, p.y]).collect(),
        }
    }
}

fn run_bild(args: &BildArgs) -> Result<i32> {
    let a = load_matrix(&args.task.input)?;
    let params = args.task.sample.params()?;
    let est = upper_hull(&a, &params)?;
    if let Some(path) = &args.dump_samples {
        let csv = sample_cloud_csv(&a, &params);
        emit(&Some(path.clone()), &csv)?;
    }
    let content = match args.task.output.format {
        Format::Json => json_pretty(&BildSummary::new(&est))?,
        Format::Csv => points_csv(&est.hull),
        Format::Svg => {
            let bild = mirror_union(&est.hull);
            svg_plot(&[
                SvgLayer::region("bild", &bild, "#d7e3f4", "#3c6aa0"),
                SvgLayer::outline("upper-hull", &est.hull, "#3c6aa0"),
            ])
        }
    };
    emit(&args.task.output.out, &content)?;
    Ok(0)
}

fn sample_cloud_csv(a: &QMatrix, params: &HullParams) -> String {
    let mut bins: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for x in crate::sampler::sample_sphere(a.dim(), params.samples, params.seed) {
        let f = crate::qmatrix::form_value(a, &x);
        let p = crate::quat::upper_representative(f);
        let key = ((p.x * 1000.0).round() as i64, (p.y * 1000.0).round() as i64);
        *bins.entry(key).or_insert(0) += 1;
    }
    let mut s = String::from("x,y,count\n");
    for ((bx, by), count) in bins {
        s.push_str(&format!(
            "{},{},{count}\n",
            fmt_f(bx as f64 / 1000.0),
            fmt_f(by as f64 / 1000.0)
        ));
    }
    s
}

fn center_pipeline(a: &QMatrix, params: &HullParams) -> Result<(BildEstimate, CenterRegion)> {
    let est = upper_hull(a, params)?;
    let cr = if est.degenerate {
        center_upper(&est, &crate::bild::TangentPair::exact(
            0.0,
            0.0,
            est.real_min,
            est.real_max,
        ))
    } else {
        let bf = boundary_functions(&est)?;
        let tp = left_derivatives(&bf, &ProbeSchedule::default())?;
        center_upper(&est, &tp)
    };
    Ok((est, cr))
}

fn run_center(task: &MatrixTask) -> Result<i32> {
    let a = load_matrix(&task.input)?;
    let params = task.sample.params()?;
    let (est, cr) = center_pipeline(&a, &params)?;
    let content = match task.output.format {
        Format::Json => json_pretty(&CenterReport::new(&est, &cr))?,
        Format::Csv => points_csv(&cr.polygon),
        Format::Svg => center_svg(&est, &cr),
    };
    emit(&task.output.out, &content)?;
    Ok(0)
}

fn center_svg(est: &BildEstimate, cr: &CenterRegion) -> String {
    let bild = mirror_union(&est.hull);
    let tangents = cr.tangent.as_ref().map(|tp| {
        let (l, ll) = crate::bild::tangent_lines(tp);
        (
            l.sample(-est.height, est.height, 64),
            ll.sample(-est.height, est.height, 64),
        )
    });
    let mut layers = vec![
        SvgLayer::region("bild", &bild, "#d7e3f4", "#3c6aa0"),
        SvgLayer::region("center", &cr.polygon, "#f4d7d7", "#a03c3c"),
    ];
    if let Some((l_pts, ll_pts)) = &tangents {
        layers.push(SvgLayer::line("tangent-l", l_pts, "#2f8f2f"));
        layers.push(SvgLayer::line("tangent-L", ll_pts, "#2f8f2f"));
    }
    svg_plot(&layers)
}

#[derive(Serialize)]
struct ConvexityReport {
    convex: bool,
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    pi_m: f64,
    #[serde(rename = "pi_M")]
    pi_big_m: f64,
    tol: f64,
}

fn run_convexity(task: &MatrixTask) -> Result<i32> {
    let a = load_matrix(&task.input)?;
    let params = task.sample.params()?;
    let est = upper_hull(&a, &params)?;
    let report = ConvexityReport {
        convex: is_convex(&est, est.tol),
        m: est.real_min,
        big_m: est.real_max,
        pi_m: est.proj_min,
        pi_big_m: est.proj_max,
        tol: est.tol,
    };
    emit(&task.output.out, &json_pretty(&report)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct RealPointReport {
    r: f64,
    x: Vec<crate::quat::Quaternion>,
    imag_residual: f64,
}

fn run_realpoint(args: &RealpointArgs) -> Result<i32> {
    let a = load_matrix(&args.input)?;
    let rp = real_point(&a)?;
    let value = crate::qmatrix::form_value(&a, &rp.x);
    let report = RealPointReport {
        r: rp.value,
        x: rp.x.clone(),
        imag_residual: value.vector_norm(),
    };
    emit(&args.output.out, &json_pretty(&report)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct OracleReport {
    alpha: f64,
    k1: f64,
    k2: f64,
    conic: String,
    coefficients: [f64; 6],
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    y_m: f64,
    a: f64,
    b: f64,
    apex: Option<[f64; 2]>,
    /// Half-width of the kite at height `y` is `half_width - slope * |y|`.
    kite: KiteReport,
}

#[derive(Serialize)]
struct KiteReport {
    center_x: f64,
    half_width: f64,
    slope: f64,
}

fn conic_display(coeffs: &[f64; 6]) -> String {
    let term = |c: f64, sym: &str, lead: bool| -> String {
        if c == 0.0 {
            return String::new();
        }
        let mag = c.abs();
        let coef = if mag == 1.0 && !sym.is_empty() {
            String::new()
        } else {
            fmt_f(mag)
        };
        let sign = if c < 0.0 {
            " - "
        } else if lead {
            ""
        } else {
            " + "
        };
        format!("{sign}{coef}{sym}")
    };
    let parts = [
        term(coeffs[0], "x^2", true),
        term(coeffs[1], "xy", false),
        term(coeffs[2], "y^2", false),
        term(coeffs[3], "x", false),
        term(coeffs[4], "y", false),
        term(coeffs[5], "", false),
    ];
    let mut s: String = parts.concat();
    s.push_str(" = 0");
    s
}

fn run_oracle(args: &OracleArgs) -> Result<i32> {
    let model = st_ellipse(args.alpha, args.k1, args.k2)?;
    let cr = st_center(&model);
    let content = match args.output.format {
        Format::Json => {
            let report = OracleReport {
                alpha: args.alpha,
                k1: args.k1,
                k2: args.k2,
                conic: conic_display(&model.coeffs),
                coefficients: model.coeffs,
                m: model.real_min,
                big_m: model.real_max,
                y_m: model.y_low,
                a: model.a,
                b: model.b,
                apex: cr.apex.map(|p| [p.x, p.y]),
                kite: KiteReport {
                    center_x: (model.real_min + model.real_max) / 2.0,
                    half_width: (model.real_max - model.real_min) / 2.0,
                    slope: model.a,
                },
            };
            json_pretty(&report)?
        }
        Format::Csv => points_csv(&cr.polygon),
        Format::Svg => {
            let est = model.bild_estimate(720, 1e-9);
            center_svg(&est, &cr)
        }
    };
    emit(&args.output.out, &content)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifySummary {
    passed: bool,
    reports: Vec<crate::verify::PropertyReport>,
}

fn run_verify(args: &VerifyArgs) -> Result<i32> {
    let a = load_matrix(&args.input)?;
    let params = args.sample.params()?;
    let (est, cr) = center_pipeline(&a, &params)?;
    let reports = vec![
        check_star_shaped(
            &a,
            &est,
            CenterSource::Region(&cr),
            args.trials,
            args.eps,
            params.seed,
        ),
        check_star_shaped(
            &a,
            &est,
            CenterSource::RealSegment,
            args.trials,
            args.eps,
            params.seed + 1,
        ),
        check_convexity_equivalence(&a, &est, args.trials, args.eps, params.seed + 2),
    ];
    let passed = reports.iter().all(|r| r.passed());
    let summary = VerifySummary {
        passed,
        reports,
    };
    emit(&args.out, &json_pretty(&summary)?)?;
    Ok(if passed { 0 } else { 1 })
}

// --- SVG ---------------------------------------------------------------

enum LayerKind {
    Region { fill: &'static str },
    Outline,
    Line,
}

struct SvgLayer<'a> {
    id: &'static str,
    points: &'a [Point2],
    stroke: &'static str,
    kind: LayerKind,
}

impl<'a> SvgLayer<'a> {
    fn region(
        id: &'static str,
        points: &'a [Point2],
        fill: &'static str,
        stroke: &'static str,
    ) -> Self {
        SvgLayer {
            id,
            points,
            stroke,
            kind: LayerKind::Region { fill },
        }
    }

    fn outline(id: &'static str, points: &'a [Point2], stroke: &'static str) -> Self {
        SvgLayer {
            id,
            points,
            stroke,
            kind: LayerKind::Outline,
        }
    }

    fn line(id: &'static str, points: &'a [Point2], stroke: &'static str) -> Self {
        SvgLayer {
            id,
            points,
            stroke,
            kind: LayerKind::Line,
        }
    }
}

fn points_attr(points: &[Point2]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", fmt_f(p.x), fmt_f(p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Minimal standalone SVG with the y-axis flipped to mathematical
/// orientation. Polygon `points` attributes carry the raw data coordinates,
/// matching the CSV exports verbatim.
fn svg_plot(layers: &[SvgLayer<'_>]) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for layer in layers {
        for p in layer.points {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
    }
    if !min_x.is_finite() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-6);
    let margin = 0.06 * span;
    let (x0, y0) = (min_x - margin, min_y - margin);
    let (w, h) = (
        max_x - min_x + 2.0 * margin,
        max_y - min_y + 2.0 * margin,
    );
    let stroke_width = 0.004 * span;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"{}\" \
         viewBox=\"{} {} {} {}\">\n",
        fmt_f(640.0 * h / w),
        fmt_f(x0),
        fmt_f(-y0 - h),
        fmt_f(w),
        fmt_f(h)
    ));
    svg.push_str("  <g transform=\"scale(1,-1)\">\n");
    svg.push_str(&format!(
        "    <line x1=\"{}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"#999999\" stroke-width=\"{}\"/>\n",
        fmt_f(x0),
        fmt_f(x0 + w),
        fmt_f(stroke_width * 0.5)
    ));
    for layer in layers {
        let attr = points_attr(layer.points);
        match &layer.kind {
            LayerKind::Region { fill } => svg.push_str(&format!(
                "    <polygon id=\"{}\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.75\" \
                 stroke=\"{}\" stroke-width=\"{}\"/>\n",
                layer.id, attr, fill, layer.stroke, fmt_f(stroke_width)
            )),
            LayerKind::Outline => svg.push_str(&format!(
                "    <polygon id=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" \
                 stroke-width=\"{}\"/>\n",
                layer.id, attr, layer.stroke, fmt_f(stroke_width)
            )),
            LayerKind::Line => svg.push_str(&format!(
                "    <polyline id=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" \
                 stroke-width=\"{}\"/>\n",
                layer.id, attr, layer.stroke, fmt_f(stroke_width)
            )),
        }
    }
    svg.push_str("  </g>\n</svg>\n");
    svg
}
