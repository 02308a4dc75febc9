//! Positivity of complex linear canonical transformations relative to
//! plurisubharmonic quadratic weights, exact kernels of metaplectic Fourier
//! integral operators, and Gaussian Toeplitz operators on Bargmann spaces.
//!
//! Everything here is finite-dimensional linear algebra: weights and phases
//! are quadratic, so every critical value and Gaussian integral is computed
//! exactly by Schur complements. The [`validate`] module provides an
//! independent numerical check by truncation in the monomial basis.

pub mod error;
pub mod fio;
pub mod forms;
pub mod linalg;
pub mod positivity;
pub mod symplectic;
pub mod toeplitz;
pub mod validate;

pub use error::{Error, Result};

/// Relative tolerance: an absolute threshold is `rel · max(1, scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

impl Tolerance {
    pub fn scaled(self, scale: f64) -> f64 {
        self.0 * scale.max(1.0)
    }
}
