//! Hilbert-Schmidt separability profiles of two-qubit and two-rebit states.
//!
//! States are parameterized by the lower-triangular Cholesky factor of the
//! density matrix. The free factor entries fill one-eighth of the unit ball
//! in 9 (rebit) or 15 (qubit) dimensions, and in hyperspherical coordinates
//! the Hilbert-Schmidt volume element splits into a radial power `r^m` and an
//! angular weight. That split drives the estimators here:
//!
//! * [`state`]: exact 4x4 state algebra (Cholesky composition, determinants,
//!   partial transpose, PPT test, spectra, hyperspherical charts).
//! * [`sampling`]: index-addressable Monte Carlo and scrambled-Sobol angular
//!   samples with their Jacobian weights.
//! * [`profile`]: radial and azimuthal separability profiles, their
//!   integration to probabilities, and checkpoint/resume.
//! * [`analytic`]: the regularized incomplete beta function, adaptive
//!   Gauss-Kronrod quadrature, closed-form Bloore-variable identities and the
//!   curve fits applied to profiles.
//! * [`viz`]: the Pauli-diagonal (cube/tetrahedron/octahedron) picture and
//!   pushforward measures under local SL(2) conjugation.
//! * [`cli`]: the `sepscope` command line, result files and SVG plots.

pub mod analytic;
pub mod cli;
mod error;
mod par;
pub mod profile;
pub mod sampling;
pub mod state;
pub mod viz;

pub use error::{Error, Result};
pub use state::Field;
