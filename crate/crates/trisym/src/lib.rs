//! Symmetric quadrature rules on triangles and a convergence laboratory.
//!
//! The crate has three layers. [`rules`] holds the quadrature core: compact
//! orbit representations of symmetric rules for polynomial degrees 1–11,
//! their expansion to points and weights, exact monomial moments, and degree
//! verification. [`refine`] polishes those rules beyond double precision by
//! solving the moment equations with Gauss–Newton in quad-double arithmetic.
//! [`lab`] measures what the rules deliver in practice: convergence studies
//! over [`mesh`] sequences, rate fits, and a single-triangle subdivision
//! experiment, all against adaptively computed reference integrals.
//!
//! Everything numerical is generic over [`Real`], instantiated as either
//! `f64` or the quad-double type [`Qd`]; [`geometry`] and [`summation`]
//! supply the shared plumbing.

pub mod geometry;
pub mod lab;
pub mod mesh;
pub mod refine;
pub mod rules;
pub mod scalar;
pub mod summation;

pub use scalar::{PrecisionMode, Qd, Real};
