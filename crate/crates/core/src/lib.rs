//! Spectral toolkit for the radial eigenproblem with potential
//! V(beta, xi) = beta/xi + xi^2.
//!
//! The equation is conditionally solvable: polynomial eigenfunctions exist
//! only at the real roots of a truncation polynomial in beta, and each root
//! pins a single eigenvalue W = 2(n + gamma + 1) of its own potential. The
//! crate computes those exact solutions ([`recurrence`]), the full
//! bound-state spectrum at arbitrary beta by the Ritz method
//! ([`variational`]), an independent grid solver for cross-checks
//! ([`oracle`]), and the map between reduced eigenvalues and physical
//! energies ([`model`]).

pub mod checks;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod recurrence;
pub mod variational;

pub use error::{Error, Result};

/// Dense matrix over `f64`, the working scalar of the solvers.
pub type Mat = numerics::DenseMat<f64>;
/// Polynomial with `f64` coefficients.
pub type Poly = numerics::Polynomial<f64>;
/// Polynomial with exact rational coefficients.
pub type ExactPoly = numerics::Polynomial<num_rational::BigRational>;
