//! Closed-form ground truth for the two-parameter family
//! `[[k1*i, alpha], [-alpha, 1 + k2*i]]` with `alpha^2 > k1*k2`.
//!
//! For this family the lower bild is bounded by an ellipse through
//! `(0, -k1)` and `(1, -k2)` with vertical tangents there, plus the real
//! segment. Those four conditions leave a one-parameter pencil of conics; the
//! fifth constraint is another exact boundary point: the form evaluated at
//! the balanced vector `(1, i)/sqrt(2)` equals `1/2 + (alpha + (k1+k2)/2)*i`,
//! so the ellipse passes through `(1/2, -(alpha + (k1+k2)/2))`. The resulting
//! homogeneous linear system is solved with the `x^2` coefficient normalized
//! to one, and `m`, `M` are read off the restriction to the real axis.

use nalgebra::{DMatrix, DVector};

use crate::bild::{center_upper, CenterRegion, TangentPair};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, Point2};
use crate::qmatrix::QMatrix;
use crate::quat::Quaternion;
use crate::sampler::BildEstimate;

/// Conic `A x^2 + B xy + C y^2 + D x + E y + F = 0` describing the boundary
/// ellipse of the lower bild, along with its derived scalars.
#[derive(Debug, Clone)]
pub struct EllipseModel {
    /// `[A, B, C, D, E, F]` with `A = 1`.
    pub coeffs: [f64; 6],
    pub alpha: f64,
    pub k1: f64,
    pub k2: f64,
    /// Left intersection of the ellipse with the real axis (`m`).
    pub real_min: f64,
    /// Right intersection (`M`).
    pub real_max: f64,
    /// Lowest point of the ellipse (`y_m`).
    pub y_low: f64,
    /// Left derivative `x1'(0^-)`.
    pub a: f64,
    /// Left derivative `x2'(0^-)`.
    pub b: f64,
}

impl EllipseModel {
    /// Conic value at a point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }

    /// Conic gradient at a point.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, _] = self.coeffs;
        (2.0 * a * x + b * y + d, b * x + 2.0 * c * y + e)
    }

    /// Center, semi-axes, and rotation of the ellipse.
    pub fn principal_form(&self) -> (Point2, f64, f64, f64) {
        let [a, b, c, d, e, f] = self.coeffs;
        let det = 4.0 * a * c - b * b;
        let xc = (b * e - 2.0 * c * d) / det;
        let yc = (b * d - 2.0 * a * e) / det;
        let f_bar = f + a * xc * xc + b * xc * yc + c * yc * yc + d * xc + e * yc;
        // Eigendecomposition of the 2x2 quadratic part.
        let tr = a + c;
        let gap = ((a - c) * (a - c) + b * b).sqrt();
        let (l1, l2) = ((tr - gap) / 2.0, (tr + gap) / 2.0);
        let r1 = (-f_bar / l1).sqrt();
        let r2 = (-f_bar / l2).sqrt();
        let angle = if b.abs() < 1e-15 && a <= c {
            0.0
        } else {
            0.5 * (b).atan2(a - c) + std::f64::consts::FRAC_PI_2
        };
        (Point2::new(xc, yc), r1, r2, angle)
    }

    /// The matching matrix of the family.
    pub fn matrix(&self) -> QMatrix {
        st_matrix(self.alpha, self.k1, self.k2)
    }

    /// Convex polygon of the upper bild: the reflected ellipse region clipped
    /// to the closed upper half-plane.
    pub fn upper_polygon(&self, steps: usize) -> Vec<Point2> {
        let (center, r1, r2, angle) = self.principal_form();
        let (sin_a, cos_a) = angle.sin_cos();
        let mut pts = Vec::with_capacity(steps + 2);
        for k in 0..steps {
            let t = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let (u, v) = (r1 * t.cos(), r2 * t.sin());
            let x = center.x + u * cos_a - v * sin_a;
            let y = center.y + u * sin_a + v * cos_a;
            // Reflect the lower-bild ellipse into the upper half-plane.
            if -y >= 0.0 {
                pts.push(Point2::new(x, -y));
            }
        }
        pts.push(Point2::new(self.real_min, 0.0));
        pts.push(Point2::new(self.real_max, 0.0));
        convex_hull(&pts)
    }

    /// The oracle polygon wrapped as a bild estimate.
    pub fn bild_estimate(&self, steps: usize, tol: f64) -> BildEstimate {
        BildEstimate::from_upper_polygon(self.upper_polygon(steps), tol)
    }

    /// Exact tangent data at the real endpoints.
    pub fn tangent_pair(&self) -> TangentPair {
        TangentPair::exact(self.a, self.b, self.real_min, self.real_max)
    }
}

/// The family member `[[k1*i, alpha], [-alpha, 1 + k2*i]]`.
pub fn st_matrix(alpha: f64, k1: f64, k2: f64) -> QMatrix {
    QMatrix::from_rows(vec![
        vec![
            Quaternion::from_complex(0.0, k1),
            Quaternion::from_real(alpha),
        ],
        vec![
            Quaternion::from_real(-alpha),
            Quaternion::from_complex(1.0, k2),
        ],
    ])
    .expect("2x2 matrix")
}

fn conic_row(x: f64, y: f64) -> [f64; 6] {
    [x * x, x * y, y * y, x, y, 1.0]
}

fn tangency_row(x: f64, y: f64) -> [f64; 6] {
    // Vertical tangency: the y-derivative of the conic vanishes.
    [0.0, x, 2.0 * y, 0.0, 1.0, 0.0]
}

/// Builds the boundary ellipse of the lower bild for parameters
/// `(alpha, k1, k2)` in the valid domain.
pub fn st_ellipse(alpha: f64, k1: f64, k2: f64) -> Result<EllipseModel> {
    if !(alpha > 0.0 && k1 > 0.0 && k2 > 0.0 && alpha * alpha > k1 * k2) {
        return Err(Error::EllipseDomain);
    }
    let apex_depth = alpha + 0.5 * (k1 + k2);
    let rows = [
        conic_row(0.0, -k1),
        conic_row(1.0, -k2),
        tangency_row(0.0, -k1),
        tangency_row(1.0, -k2),
        conic_row(0.5, -apex_depth),
    ];
    // Normalize A = 1 and solve the 5x5 system for the remaining unknowns.
    let mat = DMatrix::from_fn(5, 5, |i, j| rows[i][j + 1]);
    let rhs = DVector::from_fn(5, |i, _| -rows[i][0]);
    let sol = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular conic system".into()))?;
    let coeffs = [1.0, sol[0], sol[1], sol[2], sol[3], sol[4]];
    let [_, b, c, d, _, f] = coeffs;
    if b * b - 4.0 * c >= 0.0 {
        return Err(Error::Numerical(
            "conic solution is not an ellipse".into(),
        ));
    }
    // Restriction to the real axis: x^2 + D x + F = 0.
    let disc = d * d - 4.0 * f;
    if disc <= 0.0 {
        return Err(Error::Numerical(
            "ellipse does not cross the real axis".into(),
        ));
    }
    let real_min = (-d - disc.sqrt()) / 2.0;
    let real_max = (-d + disc.sqrt()) / 2.0;
    if !(0.0 < real_min && real_min <= real_max && real_max < 1.0) {
        return Err(Error::Numerical(format!(
            "axis crossings out of range: {real_min}, {real_max}"
        )));
    }
    // Vertical extent: double root of the conic in x.
    let qa = b * b - 4.0 * c;
    let qb = 2.0 * b * d - 4.0 * coeffs[4];
    let qc = d * d - 4.0 * f;
    let ydisc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let y_root1 = (-qb - ydisc) / (2.0 * qa);
    let y_root2 = (-qb + ydisc) / (2.0 * qa);
    let y_low = y_root1.min(y_root2);

    let mut model = EllipseModel {
        coeffs,
        alpha,
        k1,
        k2,
        real_min,
        real_max,
        y_low,
        a: 0.0,
        b: 0.0,
    };
    let (da, db) = st_derivatives(&model, k1, k2)?;
    model.a = da;
    model.b = db;
    Ok(model)
}

/// Left derivatives of the boundary functions at the axis from the printed
/// closed forms; `m = M` leaves a vertical tangent and is rejected.
pub fn st_derivatives(model: &EllipseModel, k1: f64, k2: f64) -> Result<(f64, f64)> {
    let (m, big_m) = (model.real_min, model.real_max);
    if big_m - m <= f64::EPSILON {
        return Err(Error::Numerical(
            "coincident axis crossings leave a vertical tangent".into(),
        ));
    }
    let mm = m * big_m;
    let denom = k1 * k1 * (big_m - m);
    let a = 2.0 * mm * (k1 + (k2 - k1) * m) / denom;
    let b = -2.0 * mm * (k1 + (k2 - k1) * big_m) / denom;
    Ok((a, b))
}

/// Exact star-center of the bild for the family: the tangent lines, the apex,
/// and the kite clipped against the bild region, in the same representation
/// as the sampled pipeline.
pub fn st_center(model: &EllipseModel) -> CenterRegion {
    let est = model.bild_estimate(2048, 1e-9);
    center_upper(&est, &model.tangent_pair())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_to_region;
    use crate::sampler::evaluate_form;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const SQ3: f64 = 1.732050807568877293;

    fn paper_params() -> EllipseModel {
        st_ellipse(0.25, 0.125, 0.125).unwrap()
    }

    #[test]
    fn conic_of_paper_example() {
        let model = paper_params();
        let expect = [1.0, 0.0, 4.0, -1.0, 1.0, 1.0 / 16.0];
        for (got, want) in model.coeffs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn axis_crossings_of_paper_example() {
        let model = paper_params();
        assert!((model.real_min - (0.5 - SQ3 / 4.0)).abs() < 1e-12);
        assert!((model.real_max - (0.5 + SQ3 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn reduced_form_of_paper_example() {
        let (center, r1, r2, _) = paper_params().principal_form();
        assert!((center.x - 0.5).abs() < 1e-12);
        assert!((center.y + 0.125).abs() < 1e-12);
        let (lo, hi) = (r1.min(r2), r1.max(r2));
        assert!((hi - 0.5).abs() < 1e-12);
        assert!((lo - 0.25).abs() < 1e-12);
    }

    #[test]
    fn derivatives_of_paper_example() {
        let model = paper_params();
        assert!((model.a - 2.0 * SQ3 / 3.0).abs() < 1e-12);
        assert!((model.b + 2.0 * SQ3 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_parameters_mirror_the_slopes() {
        let model = st_ellipse(0.3, 0.07, 0.07).unwrap();
        assert!((model.a + model.b).abs() < 1e-12);
        assert!(model.coeffs[1].abs() < 1e-12, "xy term must vanish");
    }

    #[test]
    fn derivatives_match_implicit_differentiation() {
        for (alpha, k1, k2) in [(0.25, 0.0625, 0.125), (0.4, 0.1, 0.05), (0.9, 0.3, 0.2)] {
            let model = st_ellipse(alpha, k1, k2).unwrap();
            for (x, expect) in [(model.real_min, model.a), (model.real_max, model.b)] {
                let (gx, gy) = model.gradient(x, 0.0);
                let implicit = -gy / gx;
                assert!(
                    (implicit - expect).abs() < 1e-10,
                    "implicit {implicit} vs printed {expect}"
                );
            }
        }
    }

    #[test]
    fn center_of_paper_example() {
        let model = paper_params();
        let cr = st_center(&model);
        let apex = cr.apex.expect("kite apex");
        assert!((apex.x - 0.5).abs() < 1e-10);
        assert!((apex.y - 0.375).abs() < 1e-10);
        // Kite formula |x - 1/2| <= sqrt(3)/4 - (2 sqrt(3)/3)|y| against the
        // computed region on a grid, outside a small boundary band.
        let half_w = SQ3 / 4.0;
        let slope = 2.0 * SQ3 / 3.0;
        let band = 2e-3;
        for i in 0..40 {
            for j in 0..40 {
                let x = 0.02 + 0.96 * i as f64 / 39.0;
                let y = -0.45 + 0.9 * j as f64 / 39.0;
                let margin = half_w - slope * y.abs() - (x - 0.5).abs();
                if margin.abs() < band {
                    continue;
                }
                let inside = dist_to_region(&cr.polygon, Point2::new(x, y)) <= 1e-9;
                assert_eq!(inside, margin > 0.0, "at ({x}, {y})");
            }
        }
    }

    #[test]
    fn apex_lies_on_the_bild_boundary() {
        let model = paper_params();
        let cr = st_center(&model);
        let apex = cr.apex.unwrap();
        // Reflected conic vanishes at the apex.
        let residual = model.eval(apex.x, -apex.y);
        assert!(residual.abs() < 1e-12, "residual {residual}");
    }

    #[test]
    fn fifth_constraint_is_a_range_value() {
        for (alpha, k1, k2) in [(0.25, 0.125, 0.125), (0.5, 0.1, 0.3)] {
            let a = st_matrix(alpha, k1, k2);
            let inv = 1.0 / 2.0f64.sqrt();
            let x = vec![
                Quaternion::from_real(inv),
                Quaternion::from_complex(0.0, inv),
            ];
            let f = evaluate_form(&a, &x).unwrap();
            assert!((f.real_part() - 0.5).abs() < 1e-14);
            assert!((f.vector_norm() - (alpha + 0.5 * (k1 + k2))).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_invalid_domain() {
        assert!(matches!(
            st_ellipse(0.1, 0.5, 0.5),
            Err(Error::EllipseDomain)
        ));
        assert!(matches!(
            st_ellipse(-0.2, 0.1, 0.1),
            Err(Error::EllipseDomain)
        ));
    }

    #[test]
    fn random_parameters_reproduce_the_template() {
        // The conic must match the template
        //   x^2 + 2(k2-k1)(mM/k1^2) xy + (mM/k1^2) y^2
        //     - (M+m) x + (2mM/k1) y + mM = 0
        // once m and M are known.
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..50 {
            let alpha: f64 = rng.gen_range(0.2..1.2);
            let k1: f64 = alpha * rng.gen_range(0.05..0.95);
            let k2: f64 = alpha * rng.gen_range(0.05..0.95);
            let model = match st_ellipse(alpha, k1, k2) {
                Ok(m) => m,
                Err(_) => continue,
            };
            let (m, big_m) = (model.real_min, model.real_max);
            assert!(0.0 < m && m <= big_m && big_m < 1.0);
            let mm = m * big_m;
            let template = [
                1.0,
                2.0 * (k2 - k1) * mm / (k1 * k1),
                mm / (k1 * k1),
                -(big_m + m),
                2.0 * mm / k1,
                mm,
            ];
            for (got, want) in model.coeffs.iter().zip(template) {
                assert!(
                    (got - want).abs() < 1e-10 * (1.0 + want.abs()),
                    "{got} vs {want} at ({alpha}, {k1}, {k2})"
                );
            }
            // Tangency data.
            assert!(model.eval(0.0, -k1).abs() < 1e-10);
            assert!(model.eval(1.0, -k2).abs() < 1e-10);
            assert!(model.gradient(0.0, -k1).1.abs() < 1e-10);
            assert!(model.gradient(1.0, -k2).1.abs() < 1e-10);
            // Symmetric families center the apex.
            if (k1 - k2).abs() < 1e-15 {
                let cr = st_center(&model);
                let apex = cr.apex.unwrap();
                assert!((apex.x - (m + big_m) / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_polygon_is_a_sound_estimate() {
        let model = paper_params();
        let est = model.bild_estimate(2048, 1e-3);
        assert!((est.real_min - model.real_min).abs() < 1e-9);
        assert!((est.real_max - model.real_max).abs() < 1e-9);
        assert!(est.proj_min.abs() < 1e-5);
        assert!((est.proj_max - 1.0).abs() < 1e-5);
        assert!((est.height - 0.375).abs() < 1e-5);
    }
}
