//! Shared numerical primitives with explicit accuracy contracts.

mod eigen;
mod gamma;
mod mat;
mod polynomial;
mod quad;
mod roots;
mod scalar;
mod tridiag;

pub use eigen::{sym_eig, SymEig};
pub use gamma::gamma_fn;
pub use mat::DenseMat;
pub use polynomial::Polynomial;
pub use quad::adaptive_quad;
pub use roots::{real_roots, RealRoots};
pub use scalar::{Real, Scalar};
pub use tridiag::tridiag_lowest_eigs;
