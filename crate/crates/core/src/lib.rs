//! Eigenspace perturbation bounds, contour-integral diagnostics and the
//! sparsified power method.

pub mod bounds;
pub mod contour;
pub mod error;
pub mod io;
pub mod matrix;
pub mod noise;
pub mod power;
pub mod spectral;

pub use error::{Error, PreconditionFailure, Result};
pub use matrix::{ComplexMatrix, SymmetricMatrix};
pub use spectral::{spectral_decompose, Projector, SpectralData, SpectralNorm};
