//! Evaluation of the quadratic form on the unit sphere and reconstruction of
//! the upper bild as a convex polygon.
//!
//! The upper bild is convex, so it is recovered through its support function:
//! for each planar direction, projected gradient ascent refines a set of
//! starting vectors and the convex hull of all evaluated points is the
//! estimate. Directions with negative vertical component converge to the real
//! endpoints of the bild, and the hull is always augmented with the
//! constructed real point so its intersection with the axis is a genuine
//! segment.
//!
//! Monotonicity in the sampling budget is structural: raw samples form a
//! prefix-stable stream, refinement starts do not depend on the sample count,
//! and every accepted ascent iterate enters the candidate pool, so a larger
//! budget can only enlarge the pool.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, dist_to_region, Point2};
use crate::qmatrix::{diagonalize_skew, form_value, hermitian_skew_split, qvec_norm, real_point, QMatrix};
use crate::quat::{upper_representative, Quaternion, UpperPoint};

/// One evaluation of the quadratic form: the unit vector, its value, and the
/// class representative in the closed upper half-plane.
#[derive(Debug, Clone)]
pub struct RangeSample {
    pub x: Vec<Quaternion>,
    pub value: Quaternion,
    pub bild_point: UpperPoint,
}

impl RangeSample {
    fn from_vector(a: &QMatrix, x: Vec<Quaternion>) -> Self {
        let value = form_value(a, &x);
        RangeSample {
            x,
            value,
            bild_point: upper_representative(value),
        }
    }
}

/// Convex polygon estimate of the upper bild together with its extreme
/// scalars.
#[derive(Debug, Clone)]
pub struct BildEstimate {
    /// Counterclockwise vertices in the closed upper half-plane.
    pub hull: Vec<Point2>,
    /// Recorded witness for each hull vertex, parallel to `hull`.
    pub hull_samples: Vec<RangeSample>,
    /// Left endpoint of `hull ∩ {y = 0}` (the scalar `m`).
    pub real_min: f64,
    /// Right endpoint of `hull ∩ {y = 0}` (the scalar `M`).
    pub real_max: f64,
    /// Minimum of the real projection of the range (`π_m`).
    pub proj_min: f64,
    /// Maximum of the real projection of the range (`π_M`).
    pub proj_max: f64,
    /// Maximum imaginary height of the bild (`y_M`); the bild is symmetric,
    /// so its lowest point sits at `-height`.
    pub height: f64,
    /// True when the estimate collapsed to the real segment.
    pub degenerate: bool,
    pub sample_count: usize,
    pub seed: u64,
    /// Membership tolerance the estimate was built for.
    pub tol: f64,
}

impl BildEstimate {
    /// Builds an estimate directly from a convex upper half-plane polygon.
    ///
    /// Used by the closed-form oracle and by tests; the witness list is
    /// synthesized from the vertex values, so re-evaluation provenance only
    /// applies to sampler-built estimates.
    pub fn from_upper_polygon(hull: Vec<Point2>, tol: f64) -> BildEstimate {
        let height = hull.iter().fold(0.0f64, |m, p| m.max(p.y));
        let scale = hull
            .iter()
            .fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
        let axis_eps = 1e-12 * scale;
        let proj_min = hull.iter().fold(f64::INFINITY, |m, p| m.min(p.x));
        let proj_max = hull.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x));
        let degenerate = height <= 1e-8 * scale;
        let (real_min, real_max) = if degenerate {
            (proj_min, proj_max)
        } else {
            hull.iter()
                .filter(|p| p.y.abs() <= axis_eps)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p.x), hi.max(p.x))
                })
        };
        let hull_samples = hull
            .iter()
            .map(|p| RangeSample {
                x: Vec::new(),
                value: Quaternion::from_complex(p.x, p.y),
                bild_point: UpperPoint::new(p.x, p.y),
            })
            .collect();
        BildEstimate {
            hull,
            hull_samples,
            real_min,
            real_max,
            proj_min,
            proj_max,
            height,
            degenerate,
            sample_count: 0,
            seed: 0,
            tol,
        }
    }

    /// Support value of the hull in direction `theta`.
    pub fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.hull
            .iter()
            .map(|p| c * p.x + s * p.y)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distance from an upper half-plane point to the hull region.
    pub fn distance(&self, p: UpperPoint) -> f64 {
        dist_to_region(&self.hull, Point2::new(p.x, p.y))
    }
}

/// Reconstruction parameters; the defaults match the CLI defaults.
#[derive(Debug, Clone)]
pub struct HullParams {
    pub theta_steps: usize,
    pub samples: usize,
    pub seed: u64,
    /// Projected-ascent iterations per direction.
    pub budget: usize,
    /// Membership tolerance carried into the estimate.
    pub tol: f64,
}

impl Default for HullParams {
    fn default() -> Self {
        HullParams {
            theta_steps: 720,
            samples: 200_000,
            seed: 0,
            budget: 50,
            tol: 1e-2,
        }
    }
}

impl HullParams {
    /// Lighter settings for batch verification runs.
    pub fn quick() -> Self {
        HullParams {
            theta_steps: 180,
            samples: 20_000,
            seed: 0,
            budget: 60,
            tol: 1e-2,
        }
    }
}

/// Evaluates `x* A x` after checking the unit-norm precondition.
pub fn evaluate_form(a: &QMatrix, x: &[Quaternion]) -> Result<Quaternion> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch(x.len(), a.dim()));
    }
    let norm = qvec_norm(x);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit(norm));
    }
    Ok(form_value(a, x))
}

/// Deterministic uniform samples on the unit sphere of `H^n` (normalized
/// standard gaussians on the `4n` real coordinates). The stream is
/// prefix-stable: the first `k` vectors do not depend on `count`.
pub fn sample_sphere(n: usize, count: usize, seed: u64) -> Vec<Vec<Quaternion>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Vec<Quaternion> = (0..n)
            .map(|_| {
                Quaternion::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        let norm = qvec_norm(&x);
        if norm < 1e-8 {
            continue;
        }
        for q in &mut x {
            *q = q.scale(1.0 / norm);
        }
        out.push(x);
    }
    out
}

// --- projected gradient ascent on the sphere -------------------------------

fn axpy(x: &mut [Quaternion], alpha: f64, d: &[Quaternion]) {
    for (xi, di) in x.iter_mut().zip(d) {
        *xi = *xi + di.scale(alpha);
    }
}

fn dot4n(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.a0 * q.a0 + p.a1 * q.a1 + p.a2 * q.a2 + p.a3 * q.a3)
        .sum()
}

fn normalize(x: &mut [Quaternion]) {
    let norm = qvec_norm(x);
    if norm > 0.0 {
        for q in x.iter_mut() {
            *q = q.scale(1.0 / norm);
        }
    }
}

fn objective(value: Quaternion, c: f64, s: f64) -> f64 {
    c * value.a0 + s * value.vector_norm()
}

/// Euclidean gradient of `c*Re f + s*|vec f|` on the `4n` real coordinates.
///
/// With `u = A x` and `w = A* x`, the derivative of `f` along the unit
/// direction `e` placed in slot `l` is `conj(e)*u_l + conj(w_l)*e`.
fn objective_gradient(
    a: &QMatrix,
    adj: &QMatrix,
    x: &[Quaternion],
    c: f64,
    s: f64,
) -> Vec<Quaternion> {
    let n = x.len();
    let u = a.matvec(x);
    let w = adj.matvec(x);
    let f = form_value(a, x);
    let fv = f.vector_norm();
    let (n1, n2, n3) = if fv > 1e-13 {
        (f.a1 / fv, f.a2 / fv, f.a3 / fv)
    } else if s > 0.0 {
        // Subgradient choice at the kink: push straight up in class height.
        (1.0, 0.0, 0.0)
    } else {
        (0.0, 0.0, 0.0)
    };
    let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut grad = vec![Quaternion::ZERO; n];
    for l in 0..n {
        let mut g = [0.0f64; 4];
        for (ci, e) in units.iter().enumerate() {
            let df = e.conjugate() * u[l] + w[l].conjugate() * *e;
            g[ci] = c * df.a0 + s * (n1 * df.a1 + n2 * df.a2 + n3 * df.a3);
        }
        grad[l] = Quaternion::new(g[0], g[1], g[2], g[3]);
    }
    grad
}

/// Projected gradient ascent with an adaptive step. Only improving steps are
/// accepted (so the objective is nondecreasing in the budget) and every
/// accepted iterate is pushed into `pool`.
fn refine(
    a: &QMatrix,
    adj: &QMatrix,
    start: &[Quaternion],
    c: f64,
    s: f64,
    budget: usize,
    pool: &mut Vec<RangeSample>,
) -> RangeSample {
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut best = RangeSample::from_vector(a, x.clone());
    let mut g = objective(best.value, c, s);
    let mut step = 0.2;
    for _ in 0..budget {
        let mut grad = objective_gradient(a, adj, &x, c, s);
        let radial = dot4n(&grad, &x);
        axpy(&mut grad, -radial, &x);
        let gn = qvec_norm(&grad);
        if gn < 1e-15 || step < 1e-14 {
            break;
        }
        let mut trial = x.clone();
        axpy(&mut trial, step / gn, &grad);
        normalize(&mut trial);
        let cand = RangeSample::from_vector(a, trial.clone());
        let g_t = objective(cand.value, c, s);
        if g_t > g {
            x = trial;
            g = g_t;
            best = cand.clone();
            pool.push(cand);
            step = (step * 1.4).min(0.5);
        } else {
            step *= 0.5;
        }
    }
    best
}

/// Deterministic refinement starts that do not depend on the sample stream:
/// basis vectors, the columns of the unitary diagonalizing the skew part, and
/// the constructed real-point vector.
fn canonical_starts(a: &QMatrix) -> Vec<Vec<Quaternion>> {
    let n = a.dim();
    let mut starts = Vec::with_capacity(2 * n + 1);
    for l in 0..n {
        let mut e = vec![Quaternion::ZERO; n];
        e[l] = Quaternion::ONE;
        starts.push(e);
    }
    if let Ok(d) = diagonalize_skew(&hermitian_skew_split(a).skew) {
        for j in 0..n {
            starts.push(d.unitary.column(j));
        }
    }
    if let Ok(rp) = real_point(a) {
        starts.push(rp.x);
    }
    starts
}

/// Per-direction pseudo-random starts, seeded independently of the sample
/// count from `(seed, direction index)`.
fn cold_starts(n: usize, seed: u64, dir_index: u64, count: usize) -> Vec<Vec<Quaternion>> {
    let sub = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(dir_index.wrapping_mul(0x2545_F491_4F6C_DD1D))
        .wrapping_add(1);
    let mut rng = ChaCha8Rng::seed_from_u64(sub);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Vec<Quaternion> = (0..n)
            .map(|_| {
                Quaternion::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        let norm = qvec_norm(&x);
        if norm < 1e-8 {
            continue;
        }
        for q in &mut x {
            *q = q.scale(1.0 / norm);
        }
        out.push(x);
    }
    out
}

/// Iterations used for the fixed corner-polish directions, independent of the
/// user budget so that raising the budget never perturbs these trajectories.
const CORNER_BUDGET: usize = 200;

/// Extra support directions aiming below the axis; their maximizers are the
/// corners `(m, 0)` and `(M, 0)` of the upper bild.
fn corner_directions() -> Vec<f64> {
    let mut dirs = Vec::new();
    for lambda in [0.3, 1.0, 3.0] {
        dirs.push(f64::atan2(-lambda, -1.0)); // drives toward (m, 0)
        dirs.push(f64::atan2(-lambda, 1.0)); // drives toward (M, 0)
    }
    dirs
}

/// Support of the upper bild in direction `theta` (in `[-π, π]`): the best
/// value of `cos(theta)*Re + sin(theta)*Im` over sampled and refined class
/// representatives, with the witness attaining it. The value is a lower bound
/// on the true support and never decreases with `budget`.
pub fn support_upper_bild(a: &QMatrix, theta: f64, budget: usize) -> (f64, RangeSample) {
    let adj = a.adjoint();
    let (s, c) = theta.sin_cos();
    let evals: Vec<RangeSample> = sample_sphere(a.dim(), 20_000, 0)
        .into_iter()
        .map(|x| RangeSample::from_vector(a, x))
        .collect();
    let mut best = evals
        .iter()
        .max_by(|p, q| {
            objective(p.value, c, s)
                .partial_cmp(&objective(q.value, c, s))
                .unwrap()
        })
        .cloned()
        .unwrap();
    let mut pool = Vec::new();
    let mut starts = canonical_starts(a);
    starts.extend(cold_starts(a.dim(), 0, 0, 2));
    starts.push(best.x.clone());
    for st in &starts {
        let cand = refine(a, &adj, st, c, s, budget, &mut pool);
        if objective(cand.value, c, s) > objective(best.value, c, s) {
            best = cand;
        }
    }
    (objective(best.value, c, s), best)
}

/// Reconstructs the upper bild as a convex polygon and reads off the extreme
/// scalars.
pub fn upper_hull(a: &QMatrix, params: &HullParams) -> Result<BildEstimate> {
    if params.theta_steps < 8 {
        return Err(Error::InvalidInput(
            "theta_steps must be at least 8".into(),
        ));
    }
    if params.samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    let n = a.dim();
    let adj = a.adjoint();
    let anchor = real_point(a)?;
    let anchor_sample = RangeSample {
        x: anchor.x.clone(),
        value: Quaternion::from_real(anchor.value),
        bild_point: UpperPoint::new(anchor.value, 0.0),
    };

    let mut pool: Vec<RangeSample> = sample_sphere(n, params.samples, params.seed)
        .into_iter()
        .map(|x| RangeSample::from_vector(a, x))
        .filter(|s| s.value.is_finite())
        .collect();
    pool.push(anchor_sample.clone());

    let pi = std::f64::consts::PI;
    let mut dirs: Vec<f64> = (0..params.theta_steps)
        .map(|k| -pi + 2.0 * pi * k as f64 / params.theta_steps as f64)
        .collect();
    // The axis reads come from these directions; make sure they are present.
    dirs.extend([0.0, 0.5 * pi, pi, -0.5 * pi]);

    let starts = canonical_starts(a);
    for (k, &theta) in dirs.iter().enumerate() {
        let (s, c) = theta.sin_cos();
        for st in cold_starts(n, params.seed, k as u64, 2).iter().chain(&starts) {
            refine(a, &adj, st, c, s, params.budget, &mut pool);
        }
    }
    // Corner polish with a fixed internal budget.
    for (k, &theta) in corner_directions().iter().enumerate() {
        let (s, c) = theta.sin_cos();
        for st in cold_starts(n, params.seed, (1 << 32) + k as u64, 2)
            .iter()
            .chain(&starts)
        {
            refine(a, &adj, st, c, s, CORNER_BUDGET, &mut pool);
        }
    }

    let scale = pool
        .iter()
        .fold(1.0f64, |m, w| m.max(w.bild_point.x.abs()).max(w.bild_point.y));
    // Points this close to the axis count as real-endpoint candidates;
    // projecting them down biases the bild inward by at most slope * band.
    let band = 1e-4 * scale;
    let degen_eps = 1e-8 * scale;

    let max_height = pool.iter().fold(0.0f64, |m, w| m.max(w.bild_point.y));
    if max_height <= degen_eps {
        // Degenerate (hermitian) bild: the estimate is the real segment.
        let lo = pool
            .iter()
            .min_by(|p, q| p.bild_point.x.partial_cmp(&q.bild_point.x).unwrap())
            .unwrap()
            .clone();
        let hi = pool
            .iter()
            .max_by(|p, q| p.bild_point.x.partial_cmp(&q.bild_point.x).unwrap())
            .unwrap()
            .clone();
        let (lo_x, hi_x) = (lo.bild_point.x, hi.bild_point.x);
        return Ok(BildEstimate {
            hull: vec![Point2::new(lo_x, 0.0), Point2::new(hi_x, 0.0)],
            hull_samples: vec![lo, hi],
            real_min: lo_x,
            real_max: hi_x,
            proj_min: lo_x,
            proj_max: hi_x,
            height: 0.0,
            degenerate: true,
            sample_count: params.samples,
            seed: params.seed,
            tol: params.tol,
        });
    }

    let (real_min, real_max) = pool
        .iter()
        .filter(|w| w.bild_point.y <= band)
        .fold((anchor.value, anchor.value), |(lo, hi), w| {
            (lo.min(w.bild_point.x), hi.max(w.bild_point.x))
        });

    // Converged ascent iterates pile up in tight clusters; collapse them on a
    // 1e-9 lattice before hulling (the representative is the lexicographic
    // maximum, so the reduction is deterministic and costs at most a lattice
    // cell of support).
    const CELL: f64 = 1e-9;
    let mut cells: HashMap<(i64, i64), usize> = HashMap::with_capacity(pool.len());
    for (idx, w) in pool.iter().enumerate() {
        let key = (
            (w.bild_point.x / CELL).round() as i64,
            (w.bild_point.y / CELL).round() as i64,
        );
        let better = |old: usize| {
            let a = &pool[old].bild_point;
            let b = &w.bild_point;
            (b.x, b.y) > (a.x, a.y)
        };
        match cells.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                if better(*e.get()) {
                    e.insert(idx);
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(idx);
            }
        }
    }
    let mut points: Vec<Point2> = Vec::with_capacity(cells.len() + 2);
    let mut keyed: HashMap<(u64, u64), usize> = HashMap::with_capacity(cells.len() + 2);
    for &idx in cells.values() {
        let p = Point2::new(pool[idx].bild_point.x, pool[idx].bild_point.y);
        keyed.entry((p.x.to_bits(), p.y.to_bits())).or_insert(idx);
        points.push(p);
    }
    // Pin the bottom edge so hull ∩ {y = 0} is exactly the real segment.
    for x_end in [real_min, real_max] {
        let src = pool
            .iter()
            .enumerate()
            .filter(|(_, s)| s.bild_point.y <= band)
            .min_by(|(_, p), (_, q)| {
                (p.bild_point.x - x_end)
                    .abs()
                    .partial_cmp(&(q.bild_point.x - x_end).abs())
                    .unwrap()
            })
            .map(|(idx, _)| idx)
            .unwrap_or(pool.len() - 1);
        let corner = Point2::new(x_end, 0.0);
        keyed
            .entry((corner.x.to_bits(), corner.y.to_bits()))
            .or_insert(src);
        points.push(corner);
    }

    let hull = simplify_convex_chain(&convex_hull(&points), 1e-7 * scale);
    let hull_samples: Vec<RangeSample> = hull
        .iter()
        .map(|v| {
            if let Some(&idx) = keyed.get(&(v.x.to_bits(), v.y.to_bits())) {
                pool[idx].clone()
            } else {
                // Deduplicated vertex: fall back to the nearest pool point.
                pool.iter()
                    .min_by(|p, q| {
                        let dp = (p.bild_point.x - v.x).hypot(p.bild_point.y - v.y);
                        let dq = (q.bild_point.x - v.x).hypot(q.bild_point.y - v.y);
                        dp.partial_cmp(&dq).unwrap()
                    })
                    .unwrap()
                    .clone()
            }
        })
        .collect();

    let proj_min = hull.iter().fold(f64::INFINITY, |m, p| m.min(p.x));
    let proj_max = hull.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.x));
    let height = hull.iter().fold(0.0f64, |m, p| m.max(p.y));

    Ok(BildEstimate {
        hull,
        hull_samples,
        real_min,
        real_max,
        proj_min,
        proj_max,
        height,
        degenerate: false,
        sample_count: params.samples,
        seed: params.seed,
        tol: params.tol,
    })
}

/// Class membership test: true when the canonical representative of `q` lies
/// within `eps` of the estimated upper bild.
pub fn membership(q: Quaternion, est: &BildEstimate, eps: f64) -> bool {
    est.distance(upper_representative(q)) <= eps
}

/// Greedy decimation of a convex counterclockwise polygon: a vertex is
/// dropped only when it stays within `sag` of the chord of its kept
/// neighbors, so every support value shrinks by at most `sag`. Vertices on
/// the axis are pinned to preserve the bottom edge.
fn simplify_convex_chain(poly: &[Point2], sag: f64) -> Vec<Point2> {
    const MAX_RUN: usize = 4096;
    let n = poly.len();
    if n <= 8 {
        return poly.to_vec();
    }
    let pinned: Vec<bool> = poly.iter().map(|p| p.y == 0.0).collect();
    let start = pinned.iter().position(|&b| b).unwrap_or(0);
    let within = |anchor: usize, cand: usize| -> bool {
        let mut j = (anchor + 1) % n;
        while j != cand {
            if pinned[j]
                || crate::geometry::dist_point_segment(poly[j], poly[anchor], poly[cand]) > sag
            {
                return false;
            }
            j = (j + 1) % n;
        }
        true
    };
    let mut kept = vec![poly[start]];
    let mut anchor = start;
    loop {
        let mut jump = (anchor + 1) % n;
        let mut cand = (jump + 1) % n;
        let mut run = 0usize;
        while jump != start && run < MAX_RUN && within(anchor, cand) {
            jump = cand;
            if cand == start {
                break;
            }
            cand = (cand + 1) % n;
            run += 1;
        }
        if jump == start {
            break;
        }
        kept.push(poly[jump]);
        anchor = jump;
    }
    kept
}
