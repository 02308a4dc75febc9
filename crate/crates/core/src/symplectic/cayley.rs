use crate::error::{Error, Result};
use crate::forms::HolomorphicQuadraticForm;
use crate::linalg::{self, checked_inverse, eigenvalues, identity, jmat, CMat, C64};

use super::map::ComplexCanonicalMap;

/// `𝓕 = J·F''`.
pub fn fundamental_matrix(f: &HolomorphicQuadraticForm) -> CMat {
    jmat(f.dim() / 2) * f.matrix()
}

fn nearest_eigenvalue(m: &CMat, target: C64) -> (C64, f64) {
    eigenvalues(m)
        .into_iter()
        .map(|z| (z, (z - target).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((C64::new(0.0, 0.0), f64::INFINITY))
}

fn eigenvalue_two(fm: &CMat) -> Error {
    let (e_plus, d_plus) = nearest_eigenvalue(fm, C64::new(2.0, 0.0));
    let (e_minus, d_minus) = nearest_eigenvalue(fm, C64::new(-2.0, 0.0));
    if d_plus <= d_minus {
        Error::EigenvalueTwo {
            eigenvalue: e_plus,
            distance: d_plus,
        }
    } else {
        Error::EigenvalueTwo {
            eigenvalue: e_minus,
            distance: d_minus,
        }
    }
}

/// `κ = (1 − 𝓕/2)(1 + 𝓕/2)⁻¹`.
pub fn cayley_map(f: &HolomorphicQuadraticForm) -> Result<ComplexCanonicalMap> {
    if !f.dim().is_multiple_of(2) {
        return Err(Error::InvalidInput(
            "Weyl phase must live on an even-dimensional space".into(),
        ));
    }
    let fm = fundamental_matrix(f);
    let id = identity(fm.nrows());
    let half = fm.scale(0.5);
    let plus_inv = checked_inverse(&(&id + &half), |_, _| eigenvalue_two(&fm))?;
    checked_inverse(&(&id - &half), |_, _| eigenvalue_two(&fm))?;
    Ok(ComplexCanonicalMap::from_matrix((&id - &half) * plus_inv))
}

/// Inverse of [`cayley_map`]: `𝓕 = 2(1 + M)⁻¹(1 − M)`, `F'' = −J𝓕`.
pub fn cayley_phase(m: &ComplexCanonicalMap) -> Result<HolomorphicQuadraticForm> {
    let mm = m.matrix();
    let id = identity(mm.nrows());
    let plus_inv = checked_inverse(&(&id + mm), |_, _| {
        let (_, distance) = nearest_eigenvalue(mm, C64::new(-1.0, 0.0));
        Error::CayleySingular { distance }
    })?;
    let fm = (plus_inv * (&id - mm)).scale(2.0);
    let hess = -(jmat(m.n()) * fm);
    debug_assert!(
        linalg::fro(&(&hess - hess.transpose())) <= 1e-6 * linalg::fro(&hess).max(1.0),
        "Cayley phase Hessian is not symmetric"
    );
    HolomorphicQuadraticForm::new(linalg::symmetrize(&hess))
}
