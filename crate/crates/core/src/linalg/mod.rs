//! Dense complex linear algebra used throughout the crate.

mod expm;
mod hermitian;
mod lu;
mod matrix;
mod schur;

pub use expm::expm;
pub use hermitian::{singular_values, HermitianEigen};
pub use lu::Lu;
pub use matrix::ComplexMatrix;
pub use schur::{solve_triangular_sylvester, Schur};
