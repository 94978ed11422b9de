//! Transfer matrices of one-dimensional complex scattering potentials.
//!
//! The time-independent Schrödinger equation `-ψ'' + v(x)ψ = k²ψ` is recast,
//! via the two-component state `Ψ = ½(φ - iφ̇, φ + iφ̇)` in the rescaled
//! coordinate `τ = kx`, as a time-dependent two-level problem with the
//! non-Hermitian generator `H(τ) = -σ₃ + w(τ)N`, `w = v(τ/k)/(2k²)`. The
//! transfer matrix of `v` is then the τ → ±∞ propagator of the associated
//! interaction-picture system, which this crate evaluates
//!
//! * exactly, by adaptive Runge–Kutta integration ([`transfer`]),
//! * perturbatively, through the Dyson/Born expansion to arbitrary order
//!   ([`born`]),
//! * in closed form for rectangular barriers and delta pairs.
//!
//! On top of the engines sit a spectral scanner and a classifier for
//! perturbative unidirectional reflectionlessness/invisibility of locally
//! periodic potentials ([`invisibility`]), and a first-Born inverse-scattering
//! module that reconstructs `v(x)` from the off-diagonal transfer-matrix
//! entries or from a reflection amplitude ([`inverse`]).
//!
//! All computations are pure functions of their inputs; batch scans are safe
//! to run from parallel workers.

pub mod born;
pub mod error;
pub mod fixtures;
pub mod fourier;
pub mod inverse;
pub mod invisibility;
pub mod mat2;
pub mod ode;
pub mod potential;
pub mod quadrature;
pub mod transfer;
pub mod two_level;
pub mod validation;

pub use error::{Error, Result};
pub use mat2::Mat2;
pub use num_complex::Complex64;
pub use potential::{Coupling, Family, PotentialSpec, Support};
pub use transfer::{AmplitudeOrder, Method, ScatteringAmplitudes, TransferMatrix};
