//! Star-center geometry of the bild.
//!
//! The lower bild is bounded by a convex left function `x1` and a concave
//! right function `x2` on `[y_low, 0]` with `x1(0) = m` and `x2(0) = M`. The
//! left tangents to these functions at the real axis, `l(y) = a*y + m` and
//! `L(y) = b*y + M`, cut the upper bild down to the star-center: a point of
//! the upper bild belongs to the center exactly when it lies between the two
//! lines. Conjugation symmetry extends the upper center to the full one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clip_halfplane, dist_to_region, mirror_union, Point2};
use crate::quat::{upper_representative, Quaternion, UpperPoint};
use crate::sampler::BildEstimate;

/// Piecewise-linear boundary functions of the lower bild on `[y_low, 0]`.
#[derive(Debug, Clone)]
pub struct BoundaryFunctions {
    /// Knots `(y, x)` of the convex left boundary, ascending in `y`.
    left: Vec<(f64, f64)>,
    /// Knots `(y, x)` of the concave right boundary, ascending in `y`.
    right: Vec<(f64, f64)>,
    /// Lowest height of the bild (`y_low <= 0`).
    pub y_low: f64,
}

fn eval_knots(knots: &[(f64, f64)], y: f64) -> f64 {
    let y = y.clamp(knots[0].0, knots[knots.len() - 1].0);
    if knots.len() == 1 {
        return knots[0].1;
    }
    let idx = knots.partition_point(|&(ky, _)| ky < y).min(knots.len() - 1);
    let hi = idx.max(1);
    let (y0, x0) = knots[hi - 1];
    let (y1, x1) = knots[hi];
    if y1 == y0 {
        return x1;
    }
    let t = (y - y0) / (y1 - y0);
    x0 + t * (x1 - x0)
}

impl BoundaryFunctions {
    /// Left boundary `x1(y) = min{x : (x, y) in lower bild}`.
    pub fn x1(&self, y: f64) -> f64 {
        eval_knots(&self.left, y)
    }

    /// Right boundary `x2(y) = max{x : (x, y) in lower bild}`.
    pub fn x2(&self, y: f64) -> f64 {
        eval_knots(&self.right, y)
    }

    /// All knot heights of both chains.
    pub fn knot_heights(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.left.iter().chain(&self.right).map(|k| k.0).collect();
        ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
        ys.dedup();
        ys
    }
}

/// Extracts the boundary functions from a bild estimate by reflecting the
/// hull's upper chains below the axis.
pub fn boundary_functions(est: &BildEstimate) -> Result<BoundaryFunctions> {
    if est.degenerate {
        if !est.real_min.is_finite() || !est.real_max.is_finite() {
            return Err(Error::DegenerateBild);
        }
        return Ok(BoundaryFunctions {
            left: vec![(0.0, est.real_min)],
            right: vec![(0.0, est.real_max)],
            y_low: 0.0,
        });
    }
    let hull = &est.hull;
    if hull.len() < 3 {
        return Err(Error::DegenerateBild);
    }
    let scale = hull
        .iter()
        .fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let axis_eps = 1e-9 * scale;
    let n = hull.len();
    let bottom: Vec<usize> = (0..n).filter(|&i| hull[i].y <= axis_eps).collect();
    if bottom.is_empty() {
        return Err(Error::DegenerateBild);
    }
    let bl = *bottom
        .iter()
        .min_by(|&&i, &&j| hull[i].x.partial_cmp(&hull[j].x).unwrap())
        .unwrap();
    let br = *bottom
        .iter()
        .max_by(|&&i, &&j| hull[i].x.partial_cmp(&hull[j].x).unwrap())
        .unwrap();
    // Counterclockwise walk from the bottom-right vertex over the top down to
    // the bottom-left vertex.
    let mut walk = Vec::with_capacity(n);
    let mut i = br;
    loop {
        walk.push(hull[i]);
        if i == bl {
            break;
        }
        i = (i + 1) % n;
    }
    let top_y = walk.iter().fold(0.0f64, |m, p| m.max(p.y));
    let first_top = walk.iter().position(|p| p.y >= top_y - 1e-15).unwrap();
    let last_top = walk.len() - 1
        - walk
            .iter()
            .rev()
            .position(|p| p.y >= top_y - 1e-15)
            .unwrap();
    // Reflect: the right chain of the upper bild is the right boundary of the
    // lower one and vice versa.
    let mut right: Vec<(f64, f64)> = walk[..=first_top].iter().map(|p| (-p.y, p.x)).collect();
    right.reverse();
    let left: Vec<(f64, f64)> = walk[last_top..].iter().map(|p| (-p.y, p.x)).collect();
    let mono = |ks: &mut Vec<(f64, f64)>| {
        ks.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        ks.dedup_by(|p, q| (p.0 - q.0).abs() <= f64::EPSILON);
    };
    let (mut left, mut right) = (left, right);
    mono(&mut left);
    mono(&mut right);
    Ok(BoundaryFunctions {
        left,
        right,
        y_low: -top_y,
    })
}

/// Affine map `y -> slope * y + intercept` describing a tangent line
/// `x = l(y)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn eval(&self, y: f64) -> f64 {
        self.slope * y + self.intercept
    }

    /// Samples the line as planar points over `[y0, y1]`.
    pub fn sample(&self, y0: f64, y1: f64, steps: usize) -> Vec<Point2> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|k| {
                let y = y0 + (y1 - y0) * k as f64 / steps as f64;
                Point2::new(self.eval(y), y)
            })
            .collect()
    }
}

/// Left derivatives of the boundary functions at the axis and the induced
/// tangent lines.
#[derive(Debug, Clone, Serialize)]
pub struct TangentPair {
    /// `x1'(0^-)`.
    pub a: f64,
    /// `x2'(0^-)`.
    pub b: f64,
    /// `x1(0) = m`.
    pub real_min: f64,
    /// `x2(0) = M`.
    pub real_max: f64,
    /// Recorded secant slopes for `a`, from the widest probe to the smallest;
    /// nondecreasing by convexity of `x1`.
    pub a_secants: Vec<f64>,
    /// Recorded secant slopes for `b`; nonincreasing by concavity of `x2`.
    pub b_secants: Vec<f64>,
}

impl TangentPair {
    pub fn exact(a: f64, b: f64, real_min: f64, real_max: f64) -> Self {
        TangentPair {
            a,
            b,
            real_min,
            real_max,
            a_secants: vec![a],
            b_secants: vec![b],
        }
    }

    /// Left tangent `l(y) = a*y + m` to the lower-left boundary.
    pub fn lower_line(&self) -> Line {
        Line {
            slope: self.a,
            intercept: self.real_min,
        }
    }

    /// Left tangent `L(y) = b*y + M` to the lower-right boundary.
    pub fn upper_line(&self) -> Line {
        Line {
            slope: self.b,
            intercept: self.real_max,
        }
    }

    /// Width of the monotone secant bracket for `a`.
    pub fn a_bracket(&self) -> f64 {
        match (self.a_secants.first(), self.a_secants.last()) {
            (Some(f), Some(l)) => (l - f).abs(),
            _ => 0.0,
        }
    }
}

/// Probe offsets for the one-sided secants, as fractions of `|y_low|`.
#[derive(Debug, Clone)]
pub struct ProbeSchedule {
    pub fractions: Vec<f64>,
}

impl Default for ProbeSchedule {
    fn default() -> Self {
        ProbeSchedule {
            fractions: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
        }
    }
}

/// Estimates the left derivatives at the axis by monotone secants.
///
/// Convexity of `x1` makes the secants `(x1(0) - x1(-eps))/eps` nondecreasing
/// as `eps` shrinks, so the sequence brackets the true derivative from below;
/// the reported value extrapolates the two smallest probes and never drops
/// below the final secant. Symmetrically for `x2`.
pub fn left_derivatives(bf: &BoundaryFunctions, probe: &ProbeSchedule) -> Result<TangentPair> {
    let depth = -bf.y_low;
    let eps_list: Vec<f64> = probe
        .fractions
        .iter()
        .map(|f| f * depth)
        .filter(|&e| e > 0.0)
        .collect();
    if eps_list.len() < 2 {
        return Err(Error::ProbeSchedule);
    }
    let m = bf.x1(0.0);
    let big_m = bf.x2(0.0);
    let a_secants: Vec<f64> = eps_list.iter().map(|&e| (m - bf.x1(-e)) / e).collect();
    let b_secants: Vec<f64> = eps_list.iter().map(|&e| (big_m - bf.x2(-e)) / e).collect();
    let k = a_secants.len();
    let a = (2.0 * a_secants[k - 1] - a_secants[k - 2]).max(a_secants[k - 1]);
    let b = (2.0 * b_secants[k - 1] - b_secants[k - 2]).min(b_secants[k - 1]);
    Ok(TangentPair {
        a,
        b,
        real_min: m,
        real_max: big_m,
        a_secants,
        b_secants,
    })
}

/// The tangent lines induced by a pair of left derivatives.
pub fn tangent_lines(tp: &TangentPair) -> (Line, Line) {
    (tp.lower_line(), tp.upper_line())
}

/// Shape classification of the star-center per the branch analysis on
/// `m = M` and the tangent slopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    WholeBild,
    Point,
    VerticalSegment,
    KiteLike,
}

/// The star-center of the bild as a closed planar region.
#[derive(Debug, Clone)]
pub struct CenterRegion {
    pub kind: CenterKind,
    /// Upper half of the center (a convex polygon, possibly degenerate).
    pub upper: Vec<Point2>,
    /// Intersection of the tangent lines when they cross above the axis.
    pub apex: Option<UpperPoint>,
    /// Full center: the upper region welded with its reflection.
    pub polygon: Vec<Point2>,
    /// The tangent data the region was cut with (absent for hermitian input).
    pub tangent: Option<TangentPair>,
}

/// Equality threshold for the `m = M` branch dispatch.
fn eq_tol(est: &BildEstimate) -> f64 {
    1e-3 * (est.proj_max - est.proj_min + 1.0)
}

/// Slope-equality threshold for the branch dispatch.
const SLOPE_TOL: f64 = 1e-2;

/// Cuts the upper bild down to its star-center.
///
/// The region is `{p in upper bild : l(p.y) <= p.x <= L(p.y)}`; the branch
/// analysis resolves the degenerate shapes. The apex is reported whenever the
/// tangent lines cross strictly above the axis.
pub fn center_upper(est: &BildEstimate, tp: &TangentPair) -> CenterRegion {
    if est.degenerate {
        let upper = if (est.real_max - est.real_min).abs() == 0.0 {
            vec![Point2::new(est.real_min, 0.0)]
        } else {
            vec![
                Point2::new(est.real_min, 0.0),
                Point2::new(est.real_max, 0.0),
            ]
        };
        return CenterRegion {
            kind: CenterKind::WholeBild,
            polygon: upper.clone(),
            upper,
            apex: None,
            tangent: None,
        };
    }
    let tol = eq_tol(est);
    let (m, big_m) = (tp.real_min, tp.real_max);
    if (big_m - m).abs() <= tol {
        if est.proj_max - est.proj_min <= tol {
            // Vertical-segment bild: the whole segment is its own center.
            let upper = vec![Point2::new(m, 0.0), Point2::new(m, est.height)];
            let polygon = vec![Point2::new(m, -est.height), Point2::new(m, est.height)];
            return CenterRegion {
                kind: CenterKind::VerticalSegment,
                upper,
                apex: None,
                polygon,
                tangent: Some(tp.clone()),
            };
        }
        // Pinched real segment with a wide bild: only (m, 0) survives.
        let upper = vec![Point2::new(m, 0.0)];
        return CenterRegion {
            kind: CenterKind::Point,
            polygon: upper.clone(),
            upper,
            apex: None,
            tangent: Some(tp.clone()),
        };
    }
    // Kite-like cut: keep x >= l(y) and x <= L(y).
    let mut upper = clip_halfplane(&est.hull, 1.0, -tp.a, -m);
    upper = clip_halfplane(&upper, -1.0, tp.b, big_m);
    let apex = if tp.a - tp.b > SLOPE_TOL {
        let y = (big_m - m) / (tp.a - tp.b);
        Some(UpperPoint::new(tp.a * y + m, y))
    } else {
        None
    };
    let polygon = mirror_union(&upper);
    CenterRegion {
        kind: CenterKind::KiteLike,
        upper,
        apex,
        polygon,
        tangent: Some(tp.clone()),
    }
}

/// The full center polygon: union of the upper region with its conjugate.
pub fn center_full(cr: &CenterRegion) -> Vec<Point2> {
    cr.polygon.clone()
}

/// Membership in the center of the numerical range: the center of `W` is the
/// union of the similarity classes of the bild's center, so the test reduces
/// to the class representative against the upper region.
pub fn center_membership_w(q: Quaternion, cr: &CenterRegion, eps: f64) -> bool {
    let p = upper_representative(q);
    dist_to_region(&cr.upper, Point2::new(p.x, p.y)) <= eps
}

/// Convexity of the numerical range: holds exactly when the real endpoints of
/// the bild reach the projection bounds.
pub fn is_convex(est: &BildEstimate, eps: f64) -> bool {
    (est.proj_min - est.real_min).abs() <= eps && (est.proj_max - est.real_max).abs() <= eps
}

/// Whether the line `x = slope*y + intercept` meets the open interior of the
/// lower bild. The scan is resolution-limited to 2048 heights plus the chain
/// knots, which resolves every feature wider than `|y_low|/2048`.
pub fn line_interior_test(line: &Line, est: &BildEstimate) -> bool {
    let bf = match boundary_functions(est) {
        Ok(bf) => bf,
        Err(_) => return false,
    };
    if bf.y_low >= 0.0 {
        return false;
    }
    let scale = 1.0 + est.proj_max.abs().max(est.proj_min.abs());
    let strict = 1e-12 * scale;
    let mut ys = bf.knot_heights();
    let grid = 2048;
    for k in 1..grid {
        ys.push(bf.y_low * k as f64 / grid as f64);
    }
    let lo = bf.y_low + 1e-12 * bf.y_low.abs();
    ys.iter()
        .filter(|&&y| y > lo && y < -f64::EPSILON)
        .any(|&y| {
            let x = line.eval(y);
            x - bf.x1(y) > strict && bf.x2(y) - x > strict
        })
}

/// Summary emitted by the CLI `center` subcommand.
#[derive(Debug, Serialize)]
pub struct CenterReport {
    pub kind: CenterKind,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub pi_m: f64,
    #[serde(rename = "pi_M")]
    pub pi_big_m: f64,
    pub y_m: f64,
    pub a: f64,
    pub b: f64,
    pub apex: Option<[f64; 2]>,
    pub convex: bool,
}

impl CenterReport {
    pub fn new(est: &BildEstimate, cr: &CenterRegion) -> Self {
        let (a, b) = cr
            .tangent
            .as_ref()
            .map(|t| (t.a, t.b))
            .unwrap_or((0.0, 0.0));
        CenterReport {
            kind: cr.kind,
            m: est.real_min,
            big_m: est.real_max,
            pi_m: est.proj_min,
            pi_big_m: est.proj_max,
            y_m: est.height,
            a,
            b,
            apex: cr.apex.map(|p| [p.x, p.y]),
            convex: is_convex(est, est.tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{upper_hull, HullParams};
    use crate::qmatrix::QMatrix;

    const SQ3: f64 = 1.732050807568877293;

    fn q(a0: f64, a1: f64) -> Quaternion {
        Quaternion::from_complex(a0, a1)
    }

    fn example_matrix() -> QMatrix {
        QMatrix::from_rows(vec![
            vec![q(0.0, 0.125), q(0.25, 0.0)],
            vec![q(-0.25, 0.0), q(1.0, 0.125)],
        ])
        .unwrap()
    }

    /// Dense polygon of the upper bild of the worked example: the region
    /// between the reflected ellipse arcs, clipped to the upper half-plane.
    fn example_upper_polygon(steps: usize) -> Vec<Point2> {
        // Reflected ellipse: (x - 1/2)^2/(1/2)^2 + (y - 1/8)^2/(1/4)^2 = 1.
        let mut pts = Vec::new();
        for k in 0..steps {
            let t = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let x = 0.5 + 0.5 * t.cos();
            let y = 0.125 + 0.25 * t.sin();
            if y >= 0.0 {
                pts.push(Point2::new(x, y));
            }
        }
        let m = 0.5 - SQ3 / 4.0;
        let big_m = 0.5 + SQ3 / 4.0;
        pts.push(Point2::new(m, 0.0));
        pts.push(Point2::new(big_m, 0.0));
        crate::geometry::convex_hull(&pts)
    }

    fn example_estimate() -> BildEstimate {
        BildEstimate::from_upper_polygon(example_upper_polygon(2048), 1e-2)
    }

    fn hermitian_estimate() -> BildEstimate {
        BildEstimate::from_upper_polygon(
            vec![Point2::new(1.0, 0.0), Point2::new(2.0, 0.0)],
            1e-2,
        )
    }

    #[test]
    fn boundary_functions_of_example() {
        let bf = boundary_functions(&example_estimate()).unwrap();
        // The ellipse passes through (0, -1/8) and (1, -1/8) with vertical
        // tangents there.
        assert!(bf.x1(-0.125).abs() < 5e-3, "x1(-1/8) = {}", bf.x1(-0.125));
        assert!((bf.x2(-0.125) - 1.0).abs() < 5e-3);
        // Bottom of the ellipse: both boundaries meet at (1/2, -3/8).
        assert!((bf.y_low + 0.375).abs() < 5e-3);
        assert!((bf.x1(bf.y_low) - 0.5).abs() < 5e-3);
        assert!((bf.x2(bf.y_low) - 0.5).abs() < 5e-3);
        // Endpoints at the axis.
        assert!((bf.x1(0.0) - (0.5 - SQ3 / 4.0)).abs() < 1e-9);
        assert!((bf.x2(0.0) - (0.5 + SQ3 / 4.0)).abs() < 1e-9);
    }

    #[test]
    fn boundary_functions_hermitian() {
        let bf = boundary_functions(&hermitian_estimate()).unwrap();
        assert_eq!(bf.y_low, 0.0);
        assert_eq!(bf.x1(0.0), 1.0);
        assert_eq!(bf.x2(0.0), 2.0);
    }

    #[test]
    fn derivatives_of_example() {
        let bf = boundary_functions(&example_estimate()).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        let expect = 2.0 * SQ3 / 3.0;
        assert!((tp.a - expect).abs() < 5e-2, "a = {} vs {}", tp.a, expect);
        assert!((tp.b + expect).abs() < 5e-2, "b = {} vs {}", tp.b, expect);
        // Monotone certificates.
        for w in tp.a_secants.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        for w in tp.b_secants.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn derivatives_of_linear_boundary() {
        // Lower bild boundary that is exactly the line x = m + a*y.
        let (m, a) = (0.3, 0.8);
        let poly = vec![
            Point2::new(m, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 0.5),
            Point2::new(m - a * 0.5, 0.5),
        ];
        let est = BildEstimate::from_upper_polygon(crate::geometry::convex_hull(&poly), 1e-2);
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        assert!((tp.a - a).abs() < 1e-12, "a = {}", tp.a);
        for w in tp.a_secants.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn tangent_lines_of_example() {
        let est = example_estimate();
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        let (l, ll) = tangent_lines(&tp);
        assert!((l.slope - 1.1547).abs() < 5e-2);
        assert!((l.intercept - 0.0670).abs() < 5e-3);
        assert!((ll.slope + 1.1547).abs() < 5e-2);
        assert!((ll.intercept - 0.9330).abs() < 5e-3);
        let pts = l.sample(-est.height, est.height, 8);
        assert_eq!(pts.len(), 9);
        assert!((pts[0].y + est.height).abs() < 1e-12);
    }

    #[test]
    fn center_of_example_is_a_kite() {
        let est = example_estimate();
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        let cr = center_upper(&est, &tp);
        assert_eq!(cr.kind, CenterKind::KiteLike);
        let apex = cr.apex.expect("kite has an apex");
        assert!((apex.x - 0.5).abs() < 1e-2, "apex x {}", apex.x);
        assert!((apex.y - 0.375).abs() < 1e-2, "apex y {}", apex.y);
        // Paper slopes exclude (0, 0.125): l(0.125) ≈ 0.211 > 0.
        assert!(!center_membership_w(q(0.0, 0.125), &cr, 1e-2));
        // The apex class in another slice belongs to the center.
        let apex_k = Quaternion::new(0.5, 0.0, 0.0, 0.375);
        assert!(center_membership_w(apex_k, &cr, 1e-2));
        // (0.2, 0.3606): l(0.3606) ≈ 0.4834 > 0.2, excluded.
        let off = Quaternion::new(0.2, 0.3, -0.2, 0.0);
        assert!(!center_membership_w(off, &cr, 1e-2));
        // Real segment is inside.
        for k in 0..=10 {
            let r = est.real_min + (est.real_max - est.real_min) * k as f64 / 10.0;
            assert!(center_membership_w(Quaternion::from_real(r), &cr, 1e-6));
        }
    }

    #[test]
    fn center_full_matches_kite_corners() {
        let est = example_estimate();
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        let cr = center_upper(&est, &tp);
        let poly = center_full(&cr);
        let m = 0.5 - SQ3 / 4.0;
        let big_m = 0.5 + SQ3 / 4.0;
        for target in [
            Point2::new(m, 0.0),
            Point2::new(big_m, 0.0),
            Point2::new(0.5, 0.375),
            Point2::new(0.5, -0.375),
        ] {
            let close = poly.iter().any(|p| p.dist(&target) < 1e-2);
            assert!(close, "corner ({}, {}) missing", target.x, target.y);
        }
        // Conjugation symmetry is structural.
        for p in &poly {
            assert!(poly.iter().any(|r| r.dist(&p.mirror()) < 1e-12));
        }
    }

    #[test]
    fn center_of_hermitian_is_whole_bild() {
        let est = hermitian_estimate();
        let cr = center_upper(&est, &TangentPair::exact(0.0, 0.0, 1.0, 2.0));
        assert_eq!(cr.kind, CenterKind::WholeBild);
        assert_eq!(cr.polygon.len(), 2);
        assert!(center_membership_w(Quaternion::from_real(1.5), &cr, 1e-9));
        assert!(!center_membership_w(Quaternion::from_real(2.5), &cr, 1e-2));
    }

    #[test]
    fn center_of_vertical_segment() {
        let est = BildEstimate::from_upper_polygon(
            vec![Point2::new(0.0, 0.0), Point2::new(0.0, 1.0)],
            1e-2,
        );
        let tp = TangentPair::exact(0.0, 0.0, 0.0, 0.0);
        let cr = center_upper(&est, &tp);
        assert_eq!(cr.kind, CenterKind::VerticalSegment);
        assert!(center_membership_w(Quaternion::new(0.0, 0.4, 0.0, 0.0), &cr, 1e-9));
    }

    #[test]
    fn center_point_case() {
        // m = M but the bild is wide: center collapses to the point (m, 0).
        let poly = crate::geometry::convex_hull(&[
            Point2::new(0.0, 0.0),
            Point2::new(-1.0, 0.5),
            Point2::new(1.0, 0.5),
            Point2::new(0.0, 1.0),
        ]);
        let est = BildEstimate::from_upper_polygon(poly, 1e-2);
        let tp = TangentPair::exact(2.0, -2.0, 0.0, 0.0);
        let cr = center_upper(&est, &tp);
        assert_eq!(cr.kind, CenterKind::Point);
        assert_eq!(cr.polygon.len(), 1);
    }

    #[test]
    fn au_yeung_criterion() {
        assert!(!is_convex(&example_estimate(), 1e-2));
        assert!(is_convex(&hermitian_estimate(), 1e-9));
    }

    #[test]
    fn line_interior_examples() {
        let est = example_estimate();
        let m = 0.5 - SQ3 / 4.0;
        // Chord from (0, 0.125) to (m, 0) extended: slope (0 - m)/0.125.
        let chord = Line {
            slope: -m / 0.125,
            intercept: m,
        };
        assert!(line_interior_test(&chord, &est));
        // The tangent itself stays outside the open interior.
        let tangent = Line {
            slope: 2.0 * SQ3 / 3.0,
            intercept: m,
        };
        assert!(!line_interior_test(&tangent, &est));
        // Any line through the degenerate bild fails.
        assert!(!line_interior_test(&chord, &hermitian_estimate()));
    }

    #[test]
    fn slope_signs_follow_projection_gaps() {
        // pi_m < m forces a > 0 on the sampled pipeline.
        let a = example_matrix();
        let est = upper_hull(&a, &HullParams::quick()).unwrap();
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        assert!(est.proj_min < est.real_min - 1e-3);
        assert!(tp.a > 0.0);
        assert!(tp.b < 0.0);
    }
}
