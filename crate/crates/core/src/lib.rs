pub mod bounds;
pub mod error;
pub mod linalg;
pub mod norms;
pub mod propagate;
pub mod redfield;
pub mod scalar;
pub mod spectral;
pub mod superop;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use scalar::Real;
pub use superop::Superoperator;

pub type Matrix = ComplexMatrix<f64>;
pub type Superop = Superoperator<f64>;
pub type Spectral = spectral::SpectralDecomposition<f64>;
pub type Generator = propagate::TimeDependentGenerator<f64>;
pub type Matrix32 = ComplexMatrix<f32>;
pub type Superop32 = Superoperator<f32>;
