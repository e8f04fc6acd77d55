//! Exact computation of positive-characteristic singularity invariants.
//!
//! The crate has four mathematical layers:
//!
//! * [`staircase`] — monomial ideals, Frobenius bracket powers and exact
//!   Hilbert-Kunz multiplicities via lattice-point counts;
//! * [`veronese`] — Frobenius decompositions of the module classes on
//!   two-dimensional Veronese subrings, splitting numbers and certified
//!   bounds for surjective (dual F-signature) numbers;
//! * [`gf`], [`matrix`], [`surjectivity`], [`socle`] — finite-field linear
//!   algebra: a randomized surjectivity oracle for Frobenius pushforwards,
//!   socle-injection construction and Matlis duals of finite-length modules;
//! * [`invariants`] — normalized limit estimates, growth-order fits and the
//!   singularity classifier built on certified intervals.
//!
//! All counts are arbitrary-precision integers and all normalized values are
//! exact rationals; floating point appears only in growth-order diagnostics.

pub mod error;
pub mod gf;
pub mod invariants;
pub mod matrix;
pub mod socle;
pub mod staircase;
pub mod surjectivity;
pub mod veronese;

pub use error::{Error, Result};
