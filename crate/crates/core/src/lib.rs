//! Flux-carrying divergence-free extensions and invading-domain solves for
//! steady planar flow in symmetric domains with one outlet to infinity.
//!
//! The crate builds the symmetric solenoidal extension of arbitrary-flux
//! boundary data (strip carriers, outlet drain, stream-function correctors),
//! solves the perturbation problem on truncated domains with a homotopy in
//! the nonlinearity, and verifies the functional inequalities and growth
//! estimates the construction relies on.
//!
//! All numeric kernels are generic over the scalar type; `f64` aliases are
//! exported below.

pub mod bspline;
pub mod cutoffs;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod quad;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Mat2, Scalar, Vec2};

/// Default scalar type for the concrete aliases.
pub type Real = f64;

pub type OutletProfile = geometry::OutletProfile<Real>;
pub type DomainSpec = geometry::DomainSpec<Real>;
pub type TruncationLadder = geometry::TruncationLadder<Real>;
pub type TruncationMesh = geometry::TruncationMesh<Real>;
pub type OutletCutoff = cutoffs::OutletCutoff<Real>;
pub type TruncationCutoff = cutoffs::TruncationCutoff<Real>;
pub type Point = Vec2<Real>;
