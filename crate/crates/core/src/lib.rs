//! One-dimensional mirror symmetry on the desk.
//!
//! This crate models two categories over a shared modulus τ = B + iA in the
//! upper half plane:
//!
//! * [`holo`] — coherent sheaves on the elliptic curve ℂ/(ℤ ⊕ τℤ), presented
//!   as finite direct sums of shifted indecomposables in normal form, with
//!   Hom/Ext spaces and composition computed through theta-function bases;
//! * [`fukaya`] — the additive category of graded Lagrangian lines on the
//!   symplectic torus ℝ²/ℤ² with log-form local systems, where composition
//!   counts holomorphic triangles weighted by `exp(2πiτ·area)`.
//!
//! The [`mirror`] module carries objects and morphisms from the first category
//! to the second and back, coefficient-for-coefficient, so the two composition
//! rules can be compared numerically.
//!
//! Everything downstream rests on [`numerics`]: theta functions with
//! characteristics (including nilpotent matrix shifts), exact finite matrix
//! exponentials, Fourier analysis of periodic sections, and dense complex
//! linear algebra with deterministic pivoting.

pub mod error;
pub mod numerics;
pub mod geometry;
pub mod fukaya;
pub mod holo;
pub mod mirror;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Relative threshold below which pivots and singular directions are treated
/// as zero in rank decisions.
pub const ZERO_THRESHOLD: f64 = 1e-10;
