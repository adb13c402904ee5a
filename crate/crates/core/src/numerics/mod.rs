//! Shared numerical substrate: dense complex matrices, Hermitian eigen
//! decomposition, and adaptive quadrature over ℝ₊ and ℝ.

pub mod eigen;
pub mod matrix;
pub mod quad;

pub use eigen::{hermitian_eig, hermitian_spectrum, spectral_norm, HermitianEig};
pub use matrix::{ComplexMatrix, C64};
pub use quad::{
    integrate_halfline, integrate_halfline_from, integrate_interval, integrate_realline,
    HalflineMap, QuadratureSpec,
};
