//! Numerical laboratory for bilinear Fourier multipliers on periodic grids.
//!
//! The crate is organised bottom-up: [`specfun`] (Bessel functions and kernels),
//! [`fieldgrid`] (sampled functions, DFT, norms, cut-offs), [`symbols`]
//! (biradial symbols and their decompositions), [`operators`] (application
//! engines), [`analysis`] (norm functionals, operator-norm ascent, nets) and
//! [`indices`] (exact exponent geometry).

pub mod analysis;
pub mod error;
pub mod fieldgrid;
pub mod indices;
pub mod operators;
pub mod quad;
pub mod specfun;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
