//! Planar primitives shared by the bild, oracle, and verification modules:
//! convex hulls, half-plane clipping, point/region distances, and the
//! mirror-union weld that turns an upper half-plane region into its
//! conjugation-symmetric closure.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn mirror(&self) -> Self {
        Point2::new(self.x, -self.y)
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Andrew's monotone chain. Returns the hull counterclockwise with strictly
/// convex corners; collinear inputs collapse to a segment, coincident inputs
/// to a single point.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points
        .iter()
        .copied()
        .filter(|p| p.x.is_finite() && p.y.is_finite())
        .collect();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.dist(b) < 1e-15);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All points collinear: keep the two extremes.
        let mut seg = vec![pts[0], pts[pts.len() - 1]];
        seg.dedup_by(|a, b| a.dist(b) < 1e-15);
        return seg;
    }
    lower
}

/// Clips a convex polygon to the half-plane `a*x + b*y + c >= 0`.
pub fn clip_halfplane(poly: &[Point2], a: f64, b: f64, c: f64) -> Vec<Point2> {
    if poly.len() <= 1 {
        return poly
            .iter()
            .copied()
            .filter(|p| a * p.x + b * p.y + c >= 0.0)
            .collect();
    }
    let side = |p: &Point2| a * p.x + b * p.y + c;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let cur = poly[i];
        let nxt = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&nxt));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0) {
            let t = sc / (sc - sn);
            out.push(Point2::new(
                cur.x + t * (nxt.x - cur.x),
                cur.y + t * (nxt.y - cur.y),
            ));
        }
    }
    out.dedup_by(|p, q| p.dist(q) < 1e-13);
    if out.len() > 1 && out[0].dist(out.last().unwrap()) < 1e-13 {
        out.pop();
    }
    out
}

/// Signed area via the shoelace formula (positive for counterclockwise).
pub fn polygon_area(poly: &[Point2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        sum += p.x * q.y - q.x * p.y;
    }
    0.5 * sum
}

pub fn polygon_perimeter(poly: &[Point2]) -> f64 {
    match poly.len() {
        0 | 1 => 0.0,
        2 => 2.0 * poly[0].dist(&poly[1]),
        _ => (0..poly.len())
            .map(|i| poly[i].dist(&poly[(i + 1) % poly.len()]))
            .sum(),
    }
}

pub fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(&a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(&Point2::new(a.x + t * dx, a.y + t * dy))
}

/// Minimum distance from `p` to the polygon boundary (degenerate shapes count
/// as their segment or point).
pub fn dist_to_boundary(poly: &[Point2], p: Point2) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => p.dist(&poly[0]),
        2 => dist_point_segment(p, poly[0], poly[1]),
        _ => (0..poly.len())
            .map(|i| dist_point_segment(p, poly[i], poly[(i + 1) % poly.len()]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Even-odd ray cast; boundary points may land on either side, callers that
/// care pair this with `dist_to_boundary`.
pub fn point_in_polygon(poly: &[Point2], p: Point2) -> bool {
    if poly.len() < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (pi, pj) = (poly[i], poly[j]);
        if (pi.y > p.y) != (pj.y > p.y) {
            let x_cross = pi.x + (p.y - pi.y) / (pj.y - pi.y) * (pj.x - pi.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Zero inside or on the region, otherwise the distance to its boundary.
pub fn dist_outside(poly: &[Point2], p: Point2) -> f64 {
    if poly.len() >= 3 && point_in_polygon(poly, p) {
        0.0
    } else {
        dist_to_boundary(poly, p)
    }
}

/// Distance from `p` to a closed region given as a (possibly degenerate)
/// polygon: zero when the point lies inside.
pub fn dist_to_region(poly: &[Point2], p: Point2) -> f64 {
    dist_outside(poly, p)
}

/// Welds an upper half-plane region with its reflection across `y = 0`.
///
/// The input is a convex counterclockwise polygon contained in `y >= 0` whose
/// boundary meets the axis in a (possibly degenerate) edge. The output walks
/// the upper chain and then the mirrored chain, producing a simple polygon
/// symmetric under `y -> -y`.
pub fn mirror_union(upper: &[Point2]) -> Vec<Point2> {
    if upper.is_empty() {
        return Vec::new();
    }
    let max_y = upper.iter().fold(0.0f64, |m, p| m.max(p.y));
    let flat_eps = 1e-12 + 1e-9 * max_y;
    if max_y <= flat_eps {
        // Already a subset of the axis.
        let min_x = upper.iter().fold(f64::INFINITY, |m, p| m.min(p.x));
        let max_x = upper.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x));
        if (max_x - min_x).abs() < 1e-15 {
            return vec![Point2::new(min_x, 0.0)];
        }
        return vec![Point2::new(min_x, 0.0), Point2::new(max_x, 0.0)];
    }
    if upper.len() == 2 {
        // Vertical segment region.
        let top = if upper[0].y > upper[1].y { upper[0] } else { upper[1] };
        let bot = if upper[0].y > upper[1].y { upper[1] } else { upper[0] };
        if bot.y <= flat_eps {
            return vec![top.mirror(), top];
        }
        return vec![bot.mirror(), top.mirror(), bot, top];
    }
    // Locate the axis vertices with smallest and largest x.
    let axis_eps = flat_eps;
    let mut left_idx = None;
    let mut right_idx = None;
    for (idx, p) in upper.iter().enumerate() {
        if p.y.abs() <= axis_eps {
            if left_idx.map_or(true, |i: usize| p.x < upper[i].x) {
                left_idx = Some(idx);
            }
            if right_idx.map_or(true, |i: usize| p.x > upper[i].x) {
                right_idx = Some(idx);
            }
        }
    }
    let (left, right) = match (left_idx, right_idx) {
        (Some(l), Some(r)) => (l, r),
        _ => {
            // No axis contact: the union is the region plus its disjoint
            // mirror; callers avoid this, fall back to the region itself.
            return upper.to_vec();
        }
    };
    let n = upper.len();
    // Upper chain counterclockwise from right axis vertex to left axis vertex.
    let mut chain = Vec::new();
    let mut i = right;
    loop {
        chain.push(upper[i]);
        if i == left {
            break;
        }
        i = (i + 1) % n;
    }
    let mut result = chain.clone();
    for p in chain.iter().rev() {
        if p.y > axis_eps {
            result.push(p.mirror());
        }
    }
    result.dedup_by(|a, b| a.dist(b) < 1e-13);
    if result.len() > 1 && result[0].dist(result.last().unwrap()) < 1e-13 {
        result.pop();
    }
    result
}

/// Inserts evenly spaced points along each edge until roughly `target`
/// boundary samples exist.
pub fn densify_boundary(poly: &[Point2], target: usize) -> Vec<Point2> {
    if poly.len() < 2 || poly.len() >= target {
        return poly.to_vec();
    }
    let perim = polygon_perimeter(poly);
    if perim <= 0.0 {
        return poly.to_vec();
    }
    let closed = poly.len() > 2;
    let edges = if closed { poly.len() } else { poly.len() - 1 };
    let mut out = Vec::with_capacity(target + poly.len());
    for i in 0..edges {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let steps = ((a.dist(&b) / perim * target as f64).ceil() as usize).max(1);
        for s in 0..steps {
            let t = s as f64 / steps as f64;
            out.push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    if !closed {
        out.push(*poly.last().unwrap());
    }
    out
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    fn directed(from: &[Point2], to: &[Point2]) -> f64 {
        let mut worst = 0.0f64;
        for p in from {
            let mut best = f64::INFINITY;
            for q in to {
                let d2 = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
                if d2 < best {
                    best = d2;
                    if best <= worst * worst {
                        break;
                    }
                }
            }
            worst = worst.max(best.sqrt());
        }
        worst
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    directed(a, b).max(directed(b, a))
}
