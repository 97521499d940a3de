//! Spectral numerics for a one-dimensional three-body system: two heavy
//! particles (bosons or fermions) and one light particle coupled by
//! attractive contact interactions.
//!
//! After separating the center of mass the system reduces to the rescaled
//! two-variable Hamiltonian
//!
//! ```text
//! H = -eps^2 d^2/dx^2 - d^2/dy^2 + alpha delta(y - x/2) + alpha delta(y + x/2)
//! ```
//!
//! on functions that are even (bosonic) or odd (fermionic) in the heavy-pair
//! coordinate `x`, with `eps^2 = 2*mu/M` the reduced mass ratio and
//! `alpha < 0` the contact coupling. The crate computes the negative
//! eigenvalues of `H` by three independent routes and cross-validates them:
//!
//! * [`birman_schwinger`] — the exact spectral condition: `-lambda` is an
//!   eigenvalue iff `1 + 2*alpha*M(-lambda)` is singular, discretized in the
//!   Fourier variable of the coincidence-line trace;
//! * [`bo_effective`] — the Born-Oppenheimer effective heavy-pair operator
//!   `-eps^2 d^2/dx^2 + V + eps^2 R` built from the light-particle ground
//!   state at frozen `x`;
//! * the Airy asymptotic law `E_k = -alpha^2 + |sigma_k| alpha^2 eps^(2/3)`,
//!   with `sigma_k` the interlaced extrema/zeros of `Ai` ([`specfun`]).
//!
//! [`light_particle`] carries the closed-form spectrum of the two-delta-well
//! fast subsystem, [`numerics`] the shared quadrature/eigensolver kernels,
//! and [`cli`] the command-line front end with the `validate` cross-check
//! suite.

pub mod birman_schwinger;
pub mod bo_effective;
pub mod cli;
pub mod light_particle;
pub mod numerics;
pub mod specfun;

pub use light_particle::{PhysParams, Sector};

/// Crate-wide error type.
///
/// Numerical routines either return a value for every admissible input or
/// report one of these conditions; none of them panic on bad data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Index or size outside the supported range.
    #[error("range error in {op}: {msg}")]
    Range { op: &'static str, msg: String },

    /// An iterative scheme failed to reach its tolerance.
    #[error("{op} did not converge: {msg}")]
    NonConvergence { op: &'static str, msg: String },

    /// Two discretizations that must agree disagreed beyond tolerance.
    #[error("discretization failure in {op}: {msg}")]
    Discretization { op: &'static str, msg: String },

    /// Root bracketing failed (no sign change over the interval).
    #[error("bracket error in {op}: f({lo}) and f({hi}) have the same sign")]
    Bracket { op: &'static str, lo: f64, hi: f64 },

    /// Configuration rejected before dispatch.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
    pub(crate) fn range(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Range { op, msg: msg.into() }
    }
    pub(crate) fn non_convergence(op: &'static str, msg: impl Into<String>) -> Self {
        Error::NonConvergence { op, msg: msg.into() }
    }
    pub(crate) fn discretization(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Discretization { op, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
