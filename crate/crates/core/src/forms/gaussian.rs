use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, block, checked_inverse, det, eigh_real, real_part, CMat, CVec, C64};

use super::HolomorphicQuadraticForm;

/// Exponent `½ vᵀ H v + bᵀ t + c` with `v = (t, p)`: the first `integrated`
/// coordinates `t ∈ ℝᵈ` are integrated out, the rest are parameters `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExponent {
    pub hessian: CMat,
    pub integrated: usize,
    pub linear: CVec,
    pub constant: C64,
}

impl GaussianExponent {
    /// Pure quadratic exponent, no linear or constant term.
    pub fn quadratic(hessian: CMat, integrated: usize) -> Self {
        Self {
            hessian,
            integrated,
            linear: CVec::zeros(integrated),
            constant: C64::new(0.0, 0.0),
        }
    }
}

/// `∫ exp(exponent) dt = exp(log_amplitude + constant + reduced_linearᵀp + ½ pᵀRp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianReduction {
    /// `(d/2) log 2π − ½ log det(−M)` on the tracked branch.
    pub log_amplitude: C64,
    pub reduced: HolomorphicQuadraticForm,
    pub reduced_linear: CVec,
    pub constant: C64,
    /// `log det(−M)` from the homotopy.
    pub log_det: C64,
    /// Same quantity as a sum of principal eigenvalue logarithms.
    pub log_det_by_eigenvalues: C64,
}

impl GaussianReduction {
    /// Value of the integral at parameters `p`.
    pub fn value(&self, p: &CVec) -> C64 {
        (self.log_amplitude
            + self.constant
            + (self.reduced_linear.transpose() * p)[(0, 0)]
            + self.reduced.eval(p))
        .exp()
    }

    pub fn amplitude(&self) -> C64 {
        self.log_amplitude.exp()
    }
}

/// Exact Gaussian integral over ℝᵈ with a continuously tracked branch.
pub fn gaussian_reduce(exponent: &GaussianExponent) -> Result<GaussianReduction> {
    let total = exponent.hessian.nrows();
    let d = exponent.integrated;
    if exponent.hessian.ncols() != total || d > total {
        return Err(Error::InvalidInput(
            "Gaussian exponent Hessian must be square and cover the integrated block".into(),
        ));
    }
    if exponent.linear.len() != d {
        return Err(Error::DimensionMismatch {
            what: "linear term",
            expected: d,
            got: exponent.linear.len(),
        });
    }
    let r = total - d;
    let h = linalg::symmetrize(&exponent.hessian);
    let m = block(&h, 0, 0, d, d);
    let b = block(&h, 0, d, d, r);
    let p = block(&h, d, d, r, r);

    let (re_eigs, _) = eigh_real(&real_part(&m));
    let max_eig = re_eigs.last().copied().unwrap_or(-1.0);
    let scale = linalg::norm2(&m).max(1.0);
    if max_eig >= -1e-12 * scale {
        return Err(Error::DivergentIntegral {
            max_eigenvalue: max_eig,
        });
    }

    let m_inv = checked_inverse(&m, |smin, smax| Error::SingularHessianBlock { smin, smax })?;
    let neg_m = -&m;
    let log_det = track_log_det(&neg_m)?;
    let log_det_eig = linalg::log_det_by_eigenvalues(&neg_m);

    let reduced = &p - b.transpose() * &m_inv * &b;
    let mb = &m_inv * &exponent.linear;
    let reduced_linear = -(b.transpose() * &mb);
    let constant = exponent.constant - (exponent.linear.transpose() * &mb)[(0, 0)] * 0.5;
    let log_amplitude = C64::new(0.5 * d as f64 * (2.0 * PI).ln(), 0.0) - log_det * 0.5;

    Ok(GaussianReduction {
        log_amplitude,
        reduced: HolomorphicQuadraticForm::from_symmetric(reduced),
        reduced_linear,
        constant,
        log_det,
        log_det_by_eigenvalues: log_det_eig,
    })
}

/// `log det N` continued along `N_t = Re N + t·i·Im N`, `t: 0 → 1`, starting
/// from the real logarithm at `t = 0` (where `Re N` is positive definite).
fn track_log_det(n: &CMat) -> Result<C64> {
    if n.is_empty() {
        return Ok(C64::new(0.0, 0.0));
    }
    let re = real_part(n).map(|x| C64::new(x, 0.0));
    let im = linalg::imag_part(n).map(|x| C64::new(0.0, x));
    let at = |t: f64| det(&(&re + im.scale(t)));
    let scale = linalg::norm2(n).max(1.0).powi(n.nrows() as i32);

    let mut t = 0.0;
    let mut current = at(0.0);
    let mut arg = 0.0;
    let mut step: f64 = 0.125;
    while t < 1.0 {
        let next_t = (t + step).min(1.0);
        let next = at(next_t);
        if next.norm() < 1e-14 * scale {
            return Err(Error::BranchTrackingFailure {
                t: next_t,
                modulus: next.norm(),
            });
        }
        let delta = (next / current).arg();
        if delta.abs() > 0.25 {
            step *= 0.5;
            if step < 1e-12 {
                return Err(Error::BranchTrackingFailure {
                    t,
                    modulus: current.norm(),
                });
            }
            continue;
        }
        arg += delta;
        t = next_t;
        current = next;
        if delta.abs() < 0.05 {
            step = (step * 2.0).min(0.25);
        }
    }
    Ok(C64::new(current.norm().ln(), arg))
}
