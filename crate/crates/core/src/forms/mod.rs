//! Real and holomorphic quadratic forms on complex spaces.
//!
//! Conventions used throughout the crate:
//! holomorphic forms evaluate as `½ zᵀQz`; weights as
//! `Re(xᵀAx) + ½ xᵀLx̄`; ℂⁿ is realified as `(Re x, Im x)` in that block order.

mod gaussian;
mod holomorphic;
mod weight;

pub use gaussian::{gaussian_reduce, GaussianExponent, GaussianReduction};
pub use holomorphic::{
    critical_value_hol, ComplexQuadraticSymbolExponent, CriticalValue, HolomorphicQuadraticForm,
};
pub use weight::{compare_weights, polarize, split_herm_plh, FormComparison, QuadraticWeight};

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse_real, complement, select_real, RMat};

/// Real Schur complement: eliminates coordinates `eliminated` of the real
/// quadratic form `½ vᵀHv` at its critical point.
///
/// Returns the reduced Hessian on the remaining coordinates (ascending order).
pub fn real_critical_value(h: &RMat, eliminated: &[usize]) -> Result<RMat> {
    let m = h.nrows();
    let retained = complement(eliminated, m);
    let p = select_real(h, &retained, &retained);
    let r = select_real(h, eliminated, &retained);
    let t = select_real(h, eliminated, eliminated);
    let t_inv = checked_inverse_real(&t, |smin, smax| Error::DegenerateCriticalPoint {
        smin,
        smax,
    })?;
    Ok(&p - r.transpose() * t_inv * r)
}
