//! Quaternionic matrices: hermitian/skew split, the complex-adjoint
//! representation, unitary diagonalization of skew-hermitian matrices, and the
//! constructive real point of the numerical range.
//!
//! The adjoint convention writes `q = z1 + z2*j` and maps it to the complex
//! block `[[z1, z2], [-conj(z2), conj(z1)]]`; a quaternionic vector
//! `x = x1 + x2*j` corresponds to the stacked complex vector
//! `(x1; -conj(x2))`. Right multiplication of `x` by a complex scalar matches
//! left scaling of the stacked vector, which is what makes eigenvector
//! reassembly work.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

type C64 = Complex<f64>;

/// Square matrix over the quaternions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            entries: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(bad) = rows.iter().map(Vec::len).max().filter(|&c| c != n) {
            return Err(Error::NotSquare { rows: n, cols: bad });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: n });
        }
        Ok(QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let mut m = QMatrix::zeros(diag.len());
        for (i, &q) in diag.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conjugate();
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            n: self.n,
            entries: self.entries.iter().map(|q| q.scale(s)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Quaternion::ZERO;
                for k in 0..n {
                    acc = acc + self[(i, k)] * rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Matrix times column vector in the right-module sense:
    /// `(A x)_l = sum_k A[l][k] x[k]`.
    pub fn matvec(&self, x: &[Quaternion]) -> Vec<Quaternion> {
        assert_eq!(self.n, x.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Quaternion::ZERO;
                for k in 0..self.n {
                    acc = acc + self[(i, k)] * x[k];
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, q| m.max(q.norm()))
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.sub(&self.adjoint()).max_abs() <= eps
    }

    pub fn is_skew_hermitian(&self, eps: f64) -> bool {
        self.add(&self.adjoint()).max_abs() <= eps
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[i * self.n + j]
    }
}

// JSON schema: {"n": 2, "entries": [[[a0,a1,a2,a3], ...], ...]} row-major.
#[derive(Serialize, Deserialize)]
struct QMatrixWire {
    n: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)]).collect())
            .collect();
        QMatrixWire {
            n: self.n,
            entries: rows,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = QMatrixWire::deserialize(d)?;
        if wire.entries.len() != wire.n || wire.entries.iter().any(|r| r.len() != wire.n) {
            return Err(serde::de::Error::custom(format!(
                "entries must form an {0}x{0} grid",
                wire.n
            )));
        }
        QMatrix::from_rows(wire.entries).map_err(serde::de::Error::custom)
    }
}

/// Hermitian and skew-hermitian parts of a matrix.
#[derive(Debug, Clone)]
pub struct HermitianSkewSplit {
    pub hermitian: QMatrix,
    pub skew: QMatrix,
}

/// `A = (A + A*)/2 + (A - A*)/2`.
pub fn hermitian_skew_split(a: &QMatrix) -> HermitianSkewSplit {
    let adj = a.adjoint();
    HermitianSkewSplit {
        hermitian: a.add(&adj).scale(0.5),
        skew: a.sub(&adj).scale(0.5),
    }
}

/// Complex adjoint: the `2n x 2n` complex matrix `[[A1, A2], [-conj(A2), conj(A1)]]`
/// for `A = A1 + A2*j`.
pub fn complex_adjoint(a: &QMatrix) -> DMatrix<C64> {
    let n = a.dim();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let q = a[(i, j)];
            let z1 = C64::new(q.a0, q.a1);
            let z2 = C64::new(q.a2, q.a3);
            m[(i, j)] = z1;
            m[(i, j + n)] = z2;
            m[(i + n, j)] = -z2.conj();
            m[(i + n, j + n)] = z1.conj();
        }
    }
    m
}

/// Inverse of `complex_adjoint`. Rejects matrices whose blocks violate the
/// adjoint symmetry beyond `eps`.
pub fn from_complex_adjoint(m: &DMatrix<C64>, eps: f64) -> Result<QMatrix> {
    let dim = m.nrows();
    if dim != m.ncols() || dim % 2 != 0 {
        return Err(Error::OddAdjointDimension(dim));
    }
    let n = dim / 2;
    let mut deviation = 0.0f64;
    let mut out = QMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let z1 = m[(i, j)];
            let z2 = m[(i, j + n)];
            deviation = deviation
                .max((m[(i + n, j)] + z2.conj()).norm())
                .max((m[(i + n, j + n)] - z1.conj()).norm());
            out[(i, j)] = Quaternion::new(z1.re, z1.im, z2.re, z2.im);
        }
    }
    if deviation > eps {
        return Err(Error::NotAdjointImage(deviation));
    }
    Ok(out)
}

/// Stacked complex form `(x1; -conj(x2))` of a quaternionic vector.
pub fn qvec_to_cvec(x: &[Quaternion]) -> DVector<C64> {
    let n = x.len();
    let mut v = DVector::zeros(2 * n);
    for (l, q) in x.iter().enumerate() {
        v[l] = C64::new(q.a0, q.a1);
        v[l + n] = C64::new(-q.a2, q.a3);
    }
    v
}

/// Inverse of `qvec_to_cvec`.
pub fn cvec_to_qvec(v: &DVector<C64>) -> Vec<Quaternion> {
    let n = v.len() / 2;
    (0..n)
        .map(|l| Quaternion::new(v[l].re, v[l].im, -v[l + n].re, v[l + n].im))
        .collect()
}

/// Quaternionic inner product `x* y`, conjugate-linear in the first slot.
pub fn qdot(x: &[Quaternion], y: &[Quaternion]) -> Quaternion {
    x.iter()
        .zip(y)
        .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conjugate() * *b)
}

pub fn qvec_norm(x: &[Quaternion]) -> f64 {
    x.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Right-multiplies every component by the quaternion `c`.
pub fn qvec_scale_right(x: &[Quaternion], c: Quaternion) -> Vec<Quaternion> {
    x.iter().map(|&q| q * c).collect()
}

/// Unitary diagonalization of a skew-hermitian matrix: `U* S U = diag(s)` with
/// each `s_l` a nonnegative multiple of `i`, sorted by descending modulus.
#[derive(Debug, Clone)]
pub struct SkewDiagonalization {
    pub unitary: QMatrix,
    pub diag: Vec<Quaternion>,
}

const SKEW_CHECK_EPS: f64 = 1e-10;

pub fn diagonalize_skew(s: &QMatrix) -> Result<SkewDiagonalization> {
    let n = s.dim();
    let scale = 1.0 + s.max_abs();
    let deviation = s.add(&s.adjoint()).max_abs();
    if deviation > SKEW_CHECK_EPS * scale {
        return Err(Error::NotSkewHermitian(deviation));
    }
    // chi(S) is skew-hermitian, so -i*chi(S) is hermitian with real spectrum
    // {+sigma_l, -sigma_l}; the nonnegative half carries one complex
    // eigenvector per quaternionic eigendirection.
    let chi = complex_adjoint(s);
    let herm = chi.map(|z| C64::new(0.0, -1.0) * z);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let mut columns: Vec<Vec<Quaternion>> = Vec::with_capacity(n);
    let mut diag: Vec<Quaternion> = Vec::with_capacity(n);
    for &idx in &order {
        if columns.len() == n {
            break;
        }
        let v = eig.eigenvectors.column(idx).clone_owned();
        let mut x = cvec_to_qvec(&v);
        // Gram-Schmidt over the right quaternionic module. Mirrored
        // eigenvectors of the negative spectrum reduce to zero here, which is
        // what discards them.
        for col in &columns {
            let coef = qdot(col, &x);
            let proj = qvec_scale_right(col, coef);
            for (xi, pi) in x.iter_mut().zip(proj) {
                *xi = *xi - pi;
            }
        }
        let norm = qvec_norm(&x);
        if norm <= 0.5 {
            continue;
        }
        let mut x: Vec<Quaternion> = x.iter().map(|q| q.scale(1.0 / norm)).collect();
        canonicalize_phase(&mut x);
        diag.push(Quaternion::I.scale(eig.eigenvalues[idx].abs()));
        columns.push(x);
    }
    if columns.len() != n {
        return Err(Error::Numerical(
            "failed to assemble a full unitary from the adjoint eigenbasis".into(),
        ));
    }
    let mut unitary = QMatrix::zeros(n);
    for (j, col) in columns.iter().enumerate() {
        for (i, &q) in col.iter().enumerate() {
            unitary[(i, j)] = q;
        }
    }
    // Post-check the decomposition actually diagonalizes within tolerance.
    let residual = unitary
        .adjoint()
        .matmul(s)
        .matmul(&unitary)
        .sub(&QMatrix::diagonal(&diag))
        .max_abs();
    if residual > 1e-8 * scale {
        return Err(Error::Numerical(format!(
            "skew diagonalization residual {residual:.3e}"
        )));
    }
    Ok(SkewDiagonalization { unitary, diag })
}

/// Fixes the free complex phase of an eigenvector column: the first stacked
/// component within a factor two of the largest is rotated to the positive
/// real axis. Thresholding on moduli keeps the pick stable under rounding.
fn canonicalize_phase(x: &mut Vec<Quaternion>) {
    let v = qvec_to_cvec(x);
    let max_mod = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max_mod == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .find(|z| z.norm() >= 0.5 * max_mod)
        .copied()
        .unwrap();
    let phase = lead.conj() / lead.norm();
    let c = Quaternion::from_complex(phase.re, phase.im);
    *x = qvec_scale_right(x, c);
}

/// A unit vector witnessing a real value of the numerical range.
#[derive(Debug, Clone)]
pub struct RealPoint {
    pub x: Vec<Quaternion>,
    pub value: f64,
}

const HERMITIAN_EPS: f64 = 1e-12;

/// Constructs a unit vector `x` with `x* A x` real.
///
/// The skew part is diagonalized; the two largest pure diagonal entries are
/// mixed so their contributions cancel: the first slot keeps the canonical
/// `sigma_1 * i`, the second is conjugated by `j` to flip it into the lower
/// half-plane, and the mixing weight solves `beta*q1 + (1-beta)*q2 = 0`.
pub fn real_point(a: &QMatrix) -> Result<RealPoint> {
    let n = a.dim();
    let scale = 1.0 + a.max_abs();
    let split = hermitian_skew_split(a);
    let d = diagonalize_skew(&split.skew)?;
    let sigma1 = d.diag[0].vector_norm();
    if sigma1 <= HERMITIAN_EPS * scale {
        // Hermitian input: every basis vector already yields a real value.
        let mut x = vec![Quaternion::ZERO; n];
        x[0] = Quaternion::ONE;
        let value = form_value(a, &x);
        return Ok(RealPoint { x, value: value.a0 });
    }
    if n == 1 {
        return Err(Error::NoRealPoint);
    }
    let sigma2 = d.diag[1].vector_norm();
    let beta = sigma2 / (sigma1 + sigma2);
    let col1 = d.unitary.column(0);
    let col2 = d.unitary.column(1);
    let w1 = Quaternion::from_real(beta.sqrt());
    let w2 = Quaternion::J.scale((1.0 - beta).sqrt());
    let x: Vec<Quaternion> = col1
        .iter()
        .zip(&col2)
        .map(|(&c1, &c2)| c1 * w1 + c2 * w2)
        .collect();
    let value = form_value(a, &x);
    if value.vector_norm() > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "real point has residual imaginary part {:.3e}",
            value.vector_norm()
        )));
    }
    Ok(RealPoint { x, value: value.a0 })
}

/// `x* A x` without the unit-norm precondition (internal helper).
pub(crate) fn form_value(a: &QMatrix, x: &[Quaternion]) -> Quaternion {
    let ax = a.matvec(x);
    qdot(x, &ax)
}

/// Sweeps the free relative phase of the real-point construction.
///
/// For any slot pair of the skew eigenbasis, the cancellation
/// `beta*q1 + (1-beta)*q2 = 0` is insensitive to a complex phase on the
/// second slot, while the hermitian part of the form does vary with it. Each
/// sampled phase therefore yields another exact real value of the range; the
/// sweep traces a curve inside `W ∩ ℝ` that anchors the real segment far more
/// tightly than corner-seeking ascent alone.
pub fn real_segment_scan(a: &QMatrix, grid: usize) -> Result<Vec<(Vec<Quaternion>, f64)>> {
    let n = a.dim();
    if n < 2 || grid == 0 {
        return Ok(Vec::new());
    }
    let scale = 1.0 + a.max_abs();
    let split = hermitian_skew_split(a);
    let d = diagonalize_skew(&split.skew)?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let sigma_i = d.diag[i].vector_norm();
            let sigma_j = d.diag[j].vector_norm();
            let total = sigma_i + sigma_j;
            let beta = if total > HERMITIAN_EPS * scale {
                sigma_j / total
            } else {
                0.5
            };
            let col_i = d.unitary.column(i);
            let col_j = d.unitary.column(j);
            let w_i = Quaternion::from_real(beta.sqrt());
            for k in 0..grid {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
                let phase = Quaternion::from_complex(phi.cos(), phi.sin());
                let w_j = (phase * Quaternion::J).scale((1.0 - beta).sqrt());
                let x: Vec<Quaternion> = col_i
                    .iter()
                    .zip(&col_j)
                    .map(|(&ci, &cj)| ci * w_i + cj * w_j)
                    .collect();
                let value = form_value(a, &x);
                if value.vector_norm() <= 1e-9 * scale {
                    out.push((x, value.a0));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(a0: f64, a1: f64, a2: f64, a3: f64) -> Quaternion {
        Quaternion::new(a0, a1, a2, a3)
    }

    /// The worked 2x2 example used across the crate.
    pub(crate) fn example_matrix() -> QMatrix {
        QMatrix::from_rows(vec![
            vec![q(0.0, 0.125, 0.0, 0.0), q(0.25, 0.0, 0.0, 0.0)],
            vec![q(-0.25, 0.0, 0.0, 0.0), q(1.0, 0.125, 0.0, 0.0)],
        ])
        .unwrap()
    }

    fn random_matrix(n: usize, rng: &mut StdRng) -> QMatrix {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        q(
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                        )
                    })
                    .collect()
            })
            .collect();
        QMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn split_of_example() {
        let split = hermitian_skew_split(&example_matrix());
        let h_expected = QMatrix::from_rows(vec![
            vec![Quaternion::ZERO, Quaternion::ZERO],
            vec![Quaternion::ZERO, Quaternion::ONE],
        ])
        .unwrap();
        let s_expected = QMatrix::from_rows(vec![
            vec![q(0.0, 0.125, 0.0, 0.0), q(0.25, 0.0, 0.0, 0.0)],
            vec![q(-0.25, 0.0, 0.0, 0.0), q(0.0, 0.125, 0.0, 0.0)],
        ])
        .unwrap();
        assert!(split.hermitian.sub(&h_expected).max_abs() < 1e-15);
        assert!(split.skew.sub(&s_expected).max_abs() < 1e-15);
    }

    #[test]
    fn split_of_hermitian_is_trivial() {
        let a = QMatrix::diagonal(&[Quaternion::ONE, Quaternion::from_real(2.0)]);
        let split = hermitian_skew_split(&a);
        assert!(split.hermitian.sub(&a).max_abs() == 0.0);
        assert!(split.skew.max_abs() == 0.0);
    }

    #[test]
    fn split_of_pure_scalar() {
        let a = QMatrix::diagonal(&[Quaternion::I]);
        let split = hermitian_skew_split(&a);
        assert!(split.hermitian.max_abs() == 0.0);
        assert!(split.skew.sub(&a).max_abs() == 0.0);
    }

    #[test]
    fn split_reconstructs_input() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=4 {
            let a = random_matrix(n, &mut rng);
            let split = hermitian_skew_split(&a);
            assert!(split.hermitian.add(&split.skew).sub(&a).max_abs() <= 1e-14);
            assert!(split.hermitian.is_hermitian(1e-12));
            assert!(split.skew.is_skew_hermitian(1e-12));
        }
    }

    #[test]
    fn adjoint_of_j() {
        let a = QMatrix::diagonal(&[Quaternion::J]);
        let m = complex_adjoint(&a);
        let expect = [
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        assert_eq!(m[(0, 0)], expect[0]);
        assert_eq!(m[(0, 1)], expect[1]);
        assert_eq!(m[(1, 0)], expect[2]);
        assert_eq!(m[(1, 1)], expect[3]);
    }

    #[test]
    fn adjoint_round_trip() {
        let a = example_matrix();
        let back = from_complex_adjoint(&complex_adjoint(&a), 1e-14).unwrap();
        assert!(back.sub(&a).max_abs() <= 1e-14);
    }

    #[test]
    fn adjoint_rejects_asymmetric() {
        let mut m = complex_adjoint(&example_matrix());
        m[(2, 0)] += C64::new(1e-6, 0.0);
        assert!(matches!(
            from_complex_adjoint(&m, 1e-10),
            Err(Error::NotAdjointImage(_))
        ));
    }

    #[test]
    fn adjoint_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..8 {
            let a = random_matrix(3, &mut rng);
            let b = random_matrix(3, &mut rng);
            let lhs = complex_adjoint(&a.matmul(&b));
            let rhs = complex_adjoint(&a) * complex_adjoint(&b);
            let dev = (lhs - rhs).map(|z| z.norm()).max();
            assert!(dev <= 1e-12, "deviation {dev}");
        }
    }

    #[test]
    fn diagonalize_example_skew() {
        let s = QMatrix::from_rows(vec![
            vec![q(0.0, 0.125, 0.0, 0.0), q(0.25, 0.0, 0.0, 0.0)],
            vec![q(-0.25, 0.0, 0.0, 0.0), q(0.0, 0.125, 0.0, 0.0)],
        ])
        .unwrap();
        let d = diagonalize_skew(&s).unwrap();
        // Characteristic polynomial of the complex 2x2 block gives 3i/8, -i/8;
        // the canonical form reports moduli times i in descending order.
        assert!((d.diag[0] - Quaternion::I.scale(0.375)).norm() < 1e-12);
        assert!((d.diag[1] - Quaternion::I.scale(0.125)).norm() < 1e-12);
    }

    #[test]
    fn diagonalize_zero() {
        let d = diagonalize_skew(&QMatrix::zeros(2)).unwrap();
        assert!(d.diag.iter().all(|s| s.norm() == 0.0));
        assert!(d.unitary.sub(&QMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn diagonalize_pure_diagonal() {
        let s = QMatrix::diagonal(&[Quaternion::I, Quaternion::K.scale(-2.0)]);
        let d = diagonalize_skew(&s).unwrap();
        assert!((d.diag[0] - Quaternion::I.scale(2.0)).norm() < 1e-12);
        assert!((d.diag[1] - Quaternion::I).norm() < 1e-12);
    }

    #[test]
    fn diagonalize_rejects_non_skew() {
        let a = QMatrix::diagonal(&[Quaternion::ONE]);
        assert!(matches!(
            diagonalize_skew(&a),
            Err(Error::NotSkewHermitian(_))
        ));
    }

    #[test]
    fn diagonalize_random_skew() {
        let mut rng = StdRng::seed_from_u64(42);
        for n in 1..=4 {
            for _ in 0..6 {
                let a = random_matrix(n, &mut rng);
                let s = hermitian_skew_split(&a).skew;
                let d = diagonalize_skew(&s).unwrap();
                let utu = d.unitary.adjoint().matmul(&d.unitary);
                assert!(utu.sub(&QMatrix::identity(n)).max_abs() <= 1e-10);
                let diag = d.unitary.adjoint().matmul(&s).matmul(&d.unitary);
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            assert!(diag[(i, j)].norm() <= 1e-8);
                        }
                    }
                    assert!(diag[(i, i)].is_pure(1e-10));
                }
                // descending moduli
                for w in d.diag.windows(2) {
                    assert!(w[0].vector_norm() >= w[1].vector_norm() - 1e-12);
                }
            }
        }
    }

    #[test]
    fn real_point_hermitian() {
        let a = QMatrix::diagonal(&[Quaternion::ONE, Quaternion::from_real(2.0)]);
        let rp = real_point(&a).unwrap();
        assert_eq!(rp.value, 1.0);
        assert!((rp.x[0] - Quaternion::ONE).norm() == 0.0);
    }

    #[test]
    fn real_point_of_example() {
        let rp = real_point(&example_matrix()).unwrap();
        let expected = 0.5 - 3.0f64.sqrt() / 4.0;
        assert!(
            (rp.value - expected).abs() < 1e-9,
            "value {} vs {}",
            rp.value,
            expected
        );
        assert!((qvec_norm(&rp.x) - 1.0).abs() < 1e-12);
        let f = form_value(&example_matrix(), &rp.x);
        assert!(f.vector_norm() < 1e-9);
    }

    #[test]
    fn real_point_symmetric_cancellation() {
        let a = QMatrix::diagonal(&[Quaternion::I, Quaternion::I.scale(-1.0)]);
        let rp = real_point(&a).unwrap();
        assert!(rp.value.abs() < 1e-12);
        let inv = 1.0 / 2.0f64.sqrt();
        assert!((rp.x[0].norm() - inv).abs() < 1e-12);
        assert!((rp.x[1].norm() - inv).abs() < 1e-12);
    }

    #[test]
    fn real_point_rejects_nonreal_scalar() {
        let a = QMatrix::diagonal(&[q(1.0, 2.0, 0.0, 0.0)]);
        assert!(matches!(real_point(&a), Err(Error::NoRealPoint)));
        // ... while a real scalar succeeds through the hermitian branch.
        let a = QMatrix::diagonal(&[Quaternion::from_real(3.0)]);
        assert_eq!(real_point(&a).unwrap().value, 3.0);
    }

    #[test]
    fn real_point_random_matrices() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 2..=4 {
            for _ in 0..8 {
                let a = random_matrix(n, &mut rng);
                let rp = real_point(&a).unwrap();
                assert!((qvec_norm(&rp.x) - 1.0).abs() <= 1e-12);
                let f = form_value(&a, &rp.x);
                assert!(f.vector_norm() <= 1e-9 * (1.0 + a.max_abs()));
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = example_matrix();
        let text = serde_json::to_string(&a).unwrap();
        let back: QMatrix = serde_json::from_str(&text).unwrap();
        assert!(back.sub(&a).max_abs() == 0.0);
        assert!(serde_json::from_str::<QMatrix>(
            "{\"n\":2,\"entries\":[[[0,0,0,0]]]}"
        )
        .is_err());
    }
}
