//! Quaternion arithmetic, similarity classes, and canonical complex
//! representatives.
//!
//! A quaternion `a0 + a1*i + a2*j + a3*k` follows the Hamilton product rules
//! `i^2 = j^2 = k^2 = ijk = -1`. Two quaternions are similar (conjugate by a
//! unit quaternion) exactly when their real parts and vector norms agree, so
//! every similarity class is identified by a point of the closed upper
//! half-plane: the canonical representative `q_r + |q_v|*i`.

use serde::de::{Error as DeError, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Element of the quaternion algebra with real coefficients on `{1, i, j, k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Quaternion { a0, a1, a2, a3 }
    }

    pub const fn from_real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// Embeds `re + im*i` into the `span{1, i}` slice.
    pub const fn from_complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    /// Real part `q_r`.
    pub fn real_part(&self) -> f64 {
        self.a0
    }

    /// Norm of the vector part `|q_v|`.
    pub fn vector_norm(&self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.a0, -self.a1, -self.a2, -self.a3)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a0 * self.a0 + self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.a0 * s, self.a1 * s, self.a2 * s, self.a3 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.a0.is_finite() && self.a1.is_finite() && self.a2.is_finite() && self.a3.is_finite()
    }

    /// True when the vector part vanishes within `eps`.
    pub fn is_real(&self, eps: f64) -> bool {
        self.vector_norm() <= eps
    }

    /// True when the real part vanishes within `eps` (a pure quaternion).
    pub fn is_pure(&self, eps: f64) -> bool {
        self.a0.abs() <= eps
    }

    /// Complex components `(z1, z2)` of the symplectic split `q = z1 + z2*j`.
    pub fn symplectic(&self) -> ((f64, f64), (f64, f64)) {
        ((self.a0, self.a1), (self.a2, self.a3))
    }
}

/// Hamilton product of `p` and `q`.
pub fn hamilton_product(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.a0 * q.a0 - p.a1 * q.a1 - p.a2 * q.a2 - p.a3 * q.a3,
        p.a0 * q.a1 + p.a1 * q.a0 + p.a2 * q.a3 - p.a3 * q.a2,
        p.a0 * q.a2 - p.a1 * q.a3 + p.a2 * q.a0 + p.a3 * q.a1,
        p.a0 * q.a3 + p.a1 * q.a2 - p.a2 * q.a1 + p.a3 * q.a0,
    )
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a0 + rhs.a0,
            self.a1 + rhs.a1,
            self.a2 + rhs.a2,
            self.a3 + rhs.a3,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a0 - rhs.a0,
            self.a1 - rhs.a1,
            self.a2 - rhs.a2,
            self.a3 - rhs.a3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        hamilton_product(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{:+}i{:+}j{:+}k",
            self.a0, self.a1, self.a2, self.a3
        )
    }
}

// Wire format: a plain 4-element array [a0, a1, a2, a3].
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for c in [self.a0, self.a1, self.a2, self.a3] {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct QuatVisitor;
        impl<'de> Visitor<'de> for QuatVisitor {
            type Value = Quaternion;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a 4-element array [a0, a1, a2, a3]")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Quaternion, A::Error> {
                let mut c = [0.0f64; 4];
                for (idx, item) in c.iter_mut().enumerate() {
                    *item = seq
                        .next_element()?
                        .ok_or_else(|| A::Error::invalid_length(idx, &self))?;
                }
                if seq.next_element::<f64>()?.is_some() {
                    return Err(A::Error::invalid_length(5, &self));
                }
                Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
            }
        }
        deserializer.deserialize_seq(QuatVisitor)
    }
}

/// Invariant pair `(q_r, |q_v|)` that labels a similarity class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityClass {
    pub real_part: f64,
    pub vector_norm: f64,
}

impl SimilarityClass {
    pub fn of(q: Quaternion) -> Self {
        SimilarityClass {
            real_part: q.real_part(),
            vector_norm: q.vector_norm(),
        }
    }

    pub fn matches(&self, other: &SimilarityClass, eps: f64) -> bool {
        (self.real_part - other.real_part).abs() <= eps
            && (self.vector_norm - other.vector_norm).abs() <= eps
    }
}

/// Exact similarity test: equal real parts and equal vector norms.
pub fn similar(p: Quaternion, q: Quaternion) -> bool {
    similar_within(p, q, 0.0)
}

/// Toleranced similarity test for sampled (inexact) values.
pub fn similar_within(p: Quaternion, q: Quaternion, eps: f64) -> bool {
    SimilarityClass::of(p).matches(&SimilarityClass::of(q), eps)
}

/// Point of the closed upper half-plane identified with `Re + i*Im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperPoint {
    /// `y` must be nonnegative; tiny negative noise is clamped to zero.
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(y >= -1e-12, "upper-half point with y = {y}");
        UpperPoint { x, y: y.max(0.0) }
    }
}

/// Canonical representative of `[q]` in `span{1, i}^+`: `(q_r, |q_v|)`.
pub fn upper_representative(q: Quaternion) -> UpperPoint {
    UpperPoint::new(q.real_part(), q.vector_norm())
}

/// Moves an upper half-plane point into `span{1, u}^+` for a unit pure `u`.
pub fn rotate_to_slice(p: UpperPoint, u: Quaternion) -> Result<Quaternion> {
    const EPS: f64 = 1e-9;
    if !u.is_pure(EPS) || (u.norm() - 1.0).abs() > EPS {
        return Err(Error::InvalidSliceAxis);
    }
    Ok(Quaternion::from_real(p.x) + u.scale(p.y))
}
