//! Quaternionic numerical range toolkit.
//!
//! The numerical range `W(A)` of a quaternionic matrix is closed under
//! similarity classes, so it is fully described by its bild `W(A) ∩ ℂ` —
//! and the always-convex upper bild by itself. This crate samples the range,
//! reconstructs the upper bild as a convex polygon, derives the tangent lines
//! at the real endpoints that cut out the star-center, and cross-validates
//! everything against a closed-form ellipse family and brute-force property
//! harnesses.

pub mod bild;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod qmatrix;
pub mod sampler;
pub mod verify;
pub mod quat;

pub use error::{Error, Result};
pub use quat::{
    hamilton_product, rotate_to_slice, similar, similar_within, upper_representative, Quaternion,
    SimilarityClass, UpperPoint,
};
