//! Spectral analysis of momentum operators on the complement of finitely
//! many disjoint closed intervals.
//!
//! The operator under study is `(1/2πi) d/dx` on `L²(Ω)` where
//! `Ω = ℝ \ ∪ [βₖ, αₖ]` has two half-line components and `n−1` bounded
//! components. Its self-adjoint realizations are indexed by unitary
//! `n×n` boundary matrices `B` that couple the endpoint traces,
//! `B·f(β) = f(α)`. This crate computes, for a given geometry and `B`:
//!
//! - scattering coefficients of the generalized plane-wave eigenfunctions,
//!   with meromorphic continuation in the spectral parameter
//!   ([`eigensolver`]);
//! - the embedded point spectrum (real zeros of the characteristic
//!   determinant), its multiplicities and densities, complex pole counts,
//!   and closed-form Dirac-comb spectra for template boundary conditions
//!   ([`pointspec`]);
//! - corner algebra of the boundary matrix: degeneracy, normality, gauge
//!   action, permutation decomposability ([`boundary`]);
//! - the spectral transform, projection-valued measure, unitary time
//!   evolution as per-component Fourier multipliers, dilation semigroups,
//!   and the intertwiner between two boundary conditions ([`transform`]);
//! - Shannon-kernel weighted inner products between boundary conditions
//!   ([`bform`]);
//! - configurations with infinitely many components (Cantor-set
//!   complements, diagonal boundary operators on ℓ²) ([`infinite`]).
//!
//! Everything is driven by a JSON config through the `momspec` binary;
//! see [`cli`].

pub mod bform;
pub mod boundary;
pub mod cli;
pub mod eigensolver;
pub mod error;
pub mod infinite;
pub mod intervals;
pub mod pointspec;
pub mod transform;
pub mod util;
pub mod verify;

pub use error::Error;

/// Convenient alias used throughout: double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
