//! Brute-force oracles and property harnesses that test the geometric claims
//! against the numerical pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bild::{is_convex, CenterRegion};
use crate::geometry::{densify_boundary, point_in_polygon, Point2};
use crate::qmatrix::{form_value, qvec_norm, QMatrix};
use crate::quat::{rotate_to_slice, upper_representative, Quaternion, UpperPoint};
use crate::sampler::BildEstimate;

/// Outcome of one randomized property run.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: usize,
    /// Trials whose violation magnitude exceeded the tolerance.
    pub failures: usize,
    /// Largest violation magnitude observed (distance outside the region).
    pub worst_violation: f64,
    pub seed: u64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Star-center of a planar region by definition: a lattice point is kept when
/// every segment from it to a boundary sample stays inside the region.
#[derive(Debug, Clone)]
pub struct BruteCenter {
    pub kept: Vec<Point2>,
    pub origin: Point2,
    pub cell_x: f64,
    pub cell_y: f64,
    pub grid: usize,
}

impl BruteCenter {
    /// Lattice points of the same grid that fall inside another region, for
    /// like-for-like Hausdorff comparisons.
    pub fn lattice_inside(&self, polygon: &[Point2]) -> Vec<Point2> {
        if polygon.len() < 3 {
            return densify_boundary(polygon, self.grid);
        }
        let mut out = Vec::new();
        for i in 0..=self.grid {
            for j in 0..=self.grid {
                let p = Point2::new(
                    self.origin.x + self.cell_x * i as f64,
                    self.origin.y + self.cell_y * j as f64,
                );
                if point_in_polygon(polygon, p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn cell(&self) -> f64 {
        self.cell_x.max(self.cell_y)
    }
}

const SEGMENT_STEPS: usize = 64;
const BOUNDARY_SAMPLES: usize = 128;

/// Computes the star-center of the (possibly non-convex) bild polygon by
/// brute force on a `grid x grid` lattice. Inside-ness along segments is read
/// from a precomputed lattice raster, so the answer is exact up to one cell.
pub fn brute_center(polygon: &[Point2], grid: usize) -> BruteCenter {
    let grid = grid.max(2);
    if polygon.len() < 3 {
        // Degenerate regions are convex: every sample is a star-center.
        return BruteCenter {
            kept: densify_boundary(polygon, grid),
            origin: polygon.first().copied().unwrap_or(Point2::new(0.0, 0.0)),
            cell_x: 0.0,
            cell_y: 0.0,
            grid,
        };
    }
    let min_x = polygon.iter().fold(f64::INFINITY, |m, p| m.min(p.x));
    let max_x = polygon.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x));
    let min_y = polygon.iter().fold(f64::INFINITY, |m, p| m.min(p.y));
    let max_y = polygon.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.y));
    // Inset the lattice a hair so no node sits exactly on the boundary,
    // where the even-odd test is arbitrary.
    let inset_x = (max_x - min_x) * 1e-7;
    let inset_y = (max_y - min_y) * 1e-7;
    let origin = Point2::new(min_x + inset_x, min_y + inset_y);
    let cell_x = (max_x - min_x - 2.0 * inset_x) / grid as f64;
    let cell_y = (max_y - min_y - 2.0 * inset_y) / grid as f64;

    // Signed-margin raster: the distance to the boundary, negative outside.
    // The margin is 1-Lipschitz, so a node margin beyond half a cell diagonal
    // decides every point of the cell; only the ambiguous band falls back to
    // the exact test. This keeps thin pinches (the bild waist at the real
    // endpoints) resolved exactly.
    let raster_dim = grid + 1;
    let mut margin = vec![0.0f64; raster_dim * raster_dim];
    let mut inside_nodes = Vec::new();
    for i in 0..raster_dim {
        for j in 0..raster_dim {
            let p = Point2::new(
                origin.x + cell_x * i as f64,
                origin.y + cell_y * j as f64,
            );
            let d = crate::geometry::dist_to_boundary(polygon, p);
            if point_in_polygon(polygon, p) {
                margin[i * raster_dim + j] = d;
                inside_nodes.push(p);
            } else {
                margin[i * raster_dim + j] = -d;
            }
        }
    }
    let guard = 0.5 * cell_x.hypot(cell_y) + 1e-12;
    let inside = |q: Point2| -> bool {
        let i = ((q.x - origin.x) / cell_x).round();
        let j = ((q.y - origin.y) / cell_y).round();
        if i >= 0.0 && j >= 0.0 && i < raster_dim as f64 && j < raster_dim as f64 {
            let m = margin[i as usize * raster_dim + j as usize];
            if m > guard {
                return true;
            }
            if m < -guard {
                return false;
            }
        }
        point_in_polygon(polygon, q)
    };

    let boundary = densify_boundary(polygon, BOUNDARY_SAMPLES);
    let cell = cell_x.max(cell_y);
    let mut kept = Vec::new();
    'nodes: for &p in &inside_nodes {
        for v in &boundary {
            let len = p.dist(v);
            if len <= cell {
                continue;
            }
            // The tail of the segment ends on the boundary itself; one cell
            // of slack there is within the method's stated resolution.
            let t_max = 1.0 - 0.8 * cell / len;
            for s in 1..SEGMENT_STEPS {
                let t = s as f64 / SEGMENT_STEPS as f64;
                if t > t_max {
                    break;
                }
                let q = Point2::new(p.x + t * (v.x - p.x), p.y + t * (v.y - p.y));
                if !inside(q) {
                    continue 'nodes;
                }
            }
        }
        kept.push(p);
    }
    BruteCenter {
        kept,
        origin,
        cell_x,
        cell_y,
        grid,
    }
}

fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Quaternion> {
    loop {
        let x: Vec<Quaternion> = (0..n)
            .map(|_| {
                Quaternion::new(
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                )
            })
            .collect();
        let norm = qvec_norm(&x);
        if norm > 1e-8 {
            return x.iter().map(|q| q.scale(1.0 / norm)).collect();
        }
    }
}

fn random_pure_axis(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let v = Quaternion::new(
            0.0,
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n = v.vector_norm();
        if n > 1e-8 {
            return v.scale(1.0 / n);
        }
    }
}

/// Uniform-ish sample from a convex region given as a (possibly degenerate)
/// polygon: rejection sampling in the bounding box with a centroid fallback.
fn region_sample(region: &[Point2], rng: &mut ChaCha8Rng) -> Point2 {
    match region.len() {
        0 => Point2::new(0.0, 0.0),
        1 => region[0],
        2 => {
            let t: f64 = rng.gen();
            Point2::new(
                region[0].x + t * (region[1].x - region[0].x),
                region[0].y + t * (region[1].y - region[0].y),
            )
        }
        _ => {
            let min_x = region.iter().fold(f64::INFINITY, |m, p| m.min(p.x));
            let max_x = region.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x));
            let min_y = region.iter().fold(f64::INFINITY, |m, p| m.min(p.y));
            let max_y = region.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.y));
            for _ in 0..64 {
                let p = Point2::new(
                    rng.gen_range(min_x..=max_x),
                    rng.gen_range(min_y..=max_y),
                );
                if point_in_polygon(region, p) {
                    return p;
                }
            }
            let n = region.len() as f64;
            Point2::new(
                region.iter().map(|p| p.x).sum::<f64>() / n,
                region.iter().map(|p| p.y).sum::<f64>() / n,
            )
        }
    }
}

/// Where the star segments start: either random points of the estimated
/// center (lifted through random classes) or a deterministic grid on the real
/// segment of the bild.
pub enum CenterSource<'a> {
    Region(&'a CenterRegion),
    RealSegment,
}

/// Star-shapedness check: segments from center points to random range values
/// must stay inside the range, tested through class membership in the bild
/// estimate.
pub fn check_star_shaped(
    a: &QMatrix,
    est: &BildEstimate,
    source: CenterSource<'_>,
    trials: usize,
    eps: f64,
    seed: u64,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    const REAL_GRID: usize = 101;
    for trial in 0..trials {
        let x = random_unit_vector(a.dim(), &mut rng);
        let w = form_value(a, &x);
        let c = match source {
            CenterSource::Region(cr) => {
                let p = region_sample(&cr.upper, &mut rng);
                let axis = random_pure_axis(&mut rng);
                rotate_to_slice(UpperPoint::new(p.x, p.y.max(0.0)), axis)
                    .unwrap_or(Quaternion::from_real(p.x))
            }
            CenterSource::RealSegment => {
                let t = (trial % REAL_GRID) as f64 / (REAL_GRID - 1) as f64;
                Quaternion::from_real(est.real_min + t * (est.real_max - est.real_min))
            }
        };
        let t: f64 = rng.gen();
        let z = c.scale(1.0 - t) + w.scale(t);
        let d = est.distance(upper_representative(z));
        if d > eps {
            failures += 1;
        }
        worst = worst.max(d);
    }
    let name = match source {
        CenterSource::Region(_) => "star_shaped_center",
        CenterSource::RealSegment => "star_shaped_reals",
    };
    PropertyReport {
        name: name.into(),
        trials,
        failures,
        worst_violation: worst,
        seed,
    }
}

/// Convexity equivalence: when the estimate satisfies the endpoint criterion,
/// midpoints of random range values must remain in the range; otherwise the
/// report carries a witness pair of bild points whose midpoint leaves the
/// bild.
pub fn check_convexity_equivalence(
    a: &QMatrix,
    est: &BildEstimate,
    trials: usize,
    eps: f64,
    seed: u64,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if is_convex(est, est.tol) {
        let mut failures = 0usize;
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let w1 = form_value(a, &random_unit_vector(a.dim(), &mut rng));
            let w2 = form_value(a, &random_unit_vector(a.dim(), &mut rng));
            let mid = (w1 + w2).scale(0.5);
            let d = est.distance(upper_representative(mid));
            if d > eps {
                failures += 1;
            }
            worst = worst.max(d);
        }
        PropertyReport {
            name: "convexity_midpoints".into(),
            trials,
            failures,
            worst_violation: worst,
            seed,
        }
    } else {
        // Non-convex estimate: the projection witness and its conjugate meet
        // in a real midpoint left of the real segment, hence outside the bild.
        let witness = est
            .hull
            .iter()
            .min_by(|p, q| p.x.partial_cmp(&q.x).unwrap())
            .copied()
            .unwrap_or(Point2::new(est.proj_min, 0.0));
        let mid = UpperPoint::new(witness.x, 0.0);
        let d = est.distance(mid);
        PropertyReport {
            name: "nonconvexity_witness".into(),
            trials: 1,
            failures: usize::from(d <= eps),
            worst_violation: d,
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bild::{boundary_functions, center_upper, left_derivatives, ProbeSchedule};
    use crate::geometry::{convex_hull, hausdorff, mirror_union};
    use crate::oracle::st_ellipse;
    use crate::sampler::{upper_hull, HullParams};

    fn example_matrix() -> QMatrix {
        QMatrix::from_rows(vec![
            vec![
                Quaternion::from_complex(0.0, 0.125),
                Quaternion::from_real(0.25),
            ],
            vec![
                Quaternion::from_real(-0.25),
                Quaternion::from_complex(1.0, 0.125),
            ],
        ])
        .unwrap()
    }

    #[test]
    fn brute_center_of_convex_polygon_is_everything() {
        let square = vec![
            Point2::new(0.0, -1.0),
            Point2::new(1.0, -1.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let bc = brute_center(&square, 24);
        let inside = bc.lattice_inside(&square);
        assert_eq!(bc.kept.len(), inside.len());
    }

    #[test]
    fn brute_center_of_vertical_segment_is_everything() {
        let segment = vec![Point2::new(0.3, -0.8), Point2::new(0.3, 0.8)];
        let bc = brute_center(&segment, 50);
        assert!(!bc.kept.is_empty());
        assert!(bc.kept.iter().all(|p| (p.x - 0.3).abs() < 1e-12));
    }

    #[test]
    fn brute_center_of_example_matches_the_kite() {
        let model = st_ellipse(0.25, 0.125, 0.125).unwrap();
        let est = model.bild_estimate(512, 1e-3);
        let bild_polygon = mirror_union(&est.hull);
        let bc = brute_center(&bild_polygon, 60);
        let cr = center_upper(&est, &model.tangent_pair());
        let expected = bc.lattice_inside(&cr.polygon);
        let d = hausdorff(&bc.kept, &expected);
        assert!(
            d <= 2.0 * bc.cell() + 1e-12,
            "hausdorff {d} vs cell {}",
            bc.cell()
        );
    }

    #[test]
    fn star_shaped_on_example() {
        let a = example_matrix();
        let est = upper_hull(&a, &HullParams::quick()).unwrap();
        let bf = boundary_functions(&est).unwrap();
        let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
        let cr = center_upper(&est, &tp);
        let rep = check_star_shaped(&a, &est, CenterSource::Region(&cr), 2000, 2e-2, 9);
        assert_eq!(rep.failures, 0, "worst {}", rep.worst_violation);
        let rep = check_star_shaped(&a, &est, CenterSource::RealSegment, 2000, 2e-2, 10);
        assert_eq!(rep.failures, 0, "worst {}", rep.worst_violation);
    }

    #[test]
    fn star_shaped_on_hermitian() {
        let a = QMatrix::diagonal(&[Quaternion::ONE, Quaternion::from_real(2.0)]);
        let est = upper_hull(&a, &HullParams::quick()).unwrap();
        let cr = center_upper(&est, &crate::bild::TangentPair::exact(0.0, 0.0, 1.0, 2.0));
        let rep = check_star_shaped(&a, &est, CenterSource::Region(&cr), 2000, 2e-2, 3);
        assert_eq!(rep.failures, 0, "worst {}", rep.worst_violation);
    }

    #[test]
    fn convexity_reports() {
        let herm = QMatrix::diagonal(&[Quaternion::ONE, Quaternion::from_real(2.0)]);
        let est = upper_hull(&herm, &HullParams::quick()).unwrap();
        let rep = check_convexity_equivalence(&herm, &est, 1500, 2e-2, 4);
        assert_eq!(rep.name, "convexity_midpoints");
        assert_eq!(rep.failures, 0, "worst {}", rep.worst_violation);

        let a = example_matrix();
        let est = upper_hull(&a, &HullParams::quick()).unwrap();
        let rep = check_convexity_equivalence(&a, &est, 1500, 2e-2, 4);
        assert_eq!(rep.name, "nonconvexity_witness");
        assert_eq!(rep.failures, 0);
        // The witness midpoint sits a positive distance outside the bild.
        assert!(rep.worst_violation > 0.03, "gap {}", rep.worst_violation);
    }

    #[test]
    fn zero_skew_random_matrices_are_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3 {
            let n = 2;
            let mut rows = vec![vec![Quaternion::ZERO; n]; n];
            #[allow(clippy::needless_range_loop)]
            for i in 0..n {
                for j in 0..n {
                    rows[i][j] = Quaternion::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    );
                }
            }
            let raw = QMatrix::from_rows(rows).unwrap();
            let herm = crate::qmatrix::hermitian_skew_split(&raw).hermitian;
            let est = upper_hull(&herm, &HullParams::quick()).unwrap();
            assert!(is_convex(&est, est.tol));
            let rep = check_convexity_equivalence(&herm, &est, 800, 2e-2, 5);
            assert_eq!(rep.failures, 0, "worst {}", rep.worst_violation);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = example_matrix();
        let est = upper_hull(&a, &HullParams::quick()).unwrap();
        let r1 = check_convexity_equivalence(&a, &est, 200, 2e-2, 7);
        let r2 = check_convexity_equivalence(&a, &est, 200, 2e-2, 7);
        assert_eq!(r1.worst_violation, r2.worst_violation);
        assert_eq!(r1.failures, r2.failures);
    }

    #[test]
    fn brute_center_respects_nonconvexity() {
        // A plus-shaped region: the center is the middle square only; corner
        // cells of the arms must be rejected.
        let plus = vec![
            Point2::new(-1.0, -3.0),
            Point2::new(1.0, -3.0),
            Point2::new(1.0, -1.0),
            Point2::new(3.0, -1.0),
            Point2::new(3.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 3.0),
            Point2::new(-1.0, 3.0),
            Point2::new(-1.0, 1.0),
            Point2::new(-3.0, 1.0),
            Point2::new(-3.0, -1.0),
            Point2::new(-1.0, -1.0),
        ];
        let bc = brute_center(&convexify_noop(&plus), 48);
        assert!(!bc.kept.is_empty());
        let cell = bc.cell();
        for p in &bc.kept {
            assert!(
                p.x.abs() <= 1.0 + 2.0 * cell && p.y.abs() <= 1.0 + 2.0 * cell,
                "kept point outside the middle: ({}, {})",
                p.x,
                p.y
            );
        }
    }

    fn convexify_noop(p: &[Point2]) -> Vec<Point2> {
        // The plus polygon is already simple and counterclockwise.
        let _ = convex_hull(&[]);
        p.to_vec()
    }
}
