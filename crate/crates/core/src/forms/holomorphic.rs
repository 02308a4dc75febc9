use crate::error::{Error, Result};
use crate::linalg::{
    self, bilinear, checked_inverse, complement, conj, fro, select, symmetrize, CMat, CVec, C64,
};
use crate::Tolerance;

use super::QuadraticWeight;

/// Holomorphic quadratic form `q(z) = ½ zᵀ Q z` on ℂᵐ.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicQuadraticForm {
    q: CMat,
}

impl HolomorphicQuadraticForm {
    pub fn new(q: CMat) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(Error::DimensionMismatch {
                what: "holomorphic form matrix",
                expected: q.nrows(),
                got: q.ncols(),
            });
        }
        if q.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("form matrix must be finite".into()));
        }
        let asym = fro(&(&q - q.transpose()));
        if asym > Tolerance::default().scaled(fro(&q)) {
            return Err(Error::InvalidInput(format!(
                "form matrix is not symmetric (|Q - Q^T| = {asym:e})"
            )));
        }
        Ok(Self::from_symmetric(q))
    }

    /// Symmetrizes without checking.
    pub(crate) fn from_symmetric(q: CMat) -> Self {
        Self { q: symmetrize(&q) }
    }

    pub fn zero(m: usize) -> Self {
        Self {
            q: CMat::zeros(m, m),
        }
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// The Hessian `Q`.
    pub fn matrix(&self) -> &CMat {
        &self.q
    }

    pub fn eval(&self, z: &CVec) -> C64 {
        bilinear(z, &self.q, z) * 0.5
    }

    pub fn gradient(&self, z: &CVec) -> CVec {
        &self.q * z
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            q: self.q.map(|z| z * s),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        fro(&(&self.q - &other.q))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                what: "form dimension",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            q: &self.q + &other.q,
        })
    }

    /// The same form on ℂᵐ, with its variables placed at `idx`.
    pub fn embed(&self, idx: &[usize], m: usize) -> Self {
        Self {
            q: embed_matrix(&self.q, idx, m),
        }
    }
}

pub(crate) fn embed_matrix(q: &CMat, idx: &[usize], m: usize) -> CMat {
    let mut out = CMat::zeros(m, m);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[(i, j)] += q[(a, b)];
        }
    }
    out
}

/// Result of eliminating variables from a holomorphic form at its critical point.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalValue {
    /// The critical value as a form on the retained variables.
    pub form: HolomorphicQuadraticForm,
    /// `w = map · z`: the critical point in the eliminated variables.
    pub critical_map: CMat,
    pub retained: Vec<usize>,
    pub eliminated: Vec<usize>,
}

/// Eliminates the variables listed in `eliminated` by stationarity.
///
/// With `Q = [[P, Rᵀ], [R, T]]` (retained first), the critical point is
/// `w = -T⁻¹ R z` and the critical value `½ zᵀ (P - Rᵀ T⁻¹ R) z`.
pub fn critical_value_hol(
    form: &HolomorphicQuadraticForm,
    eliminated: &[usize],
) -> Result<CriticalValue> {
    let m = form.dim();
    if let Some(&bad) = eliminated.iter().find(|&&k| k >= m) {
        return Err(Error::InvalidInput(format!(
            "eliminated index {bad} out of range for dimension {m}"
        )));
    }
    let retained = complement(eliminated, m);
    let q = form.matrix();
    let p = select(q, &retained, &retained);
    let r = select(q, eliminated, &retained);
    let t = select(q, eliminated, eliminated);
    let t_inv = checked_inverse(&t, |smin, smax| Error::SingularHessianBlock { smin, smax })?;
    let critical_map = -(&t_inv * &r);
    let reduced = &p + r.transpose() * &critical_map;
    Ok(CriticalValue {
        form: HolomorphicQuadraticForm::from_symmetric(reduced),
        critical_map,
        retained,
        eliminated: eliminated.to_vec(),
    })
}

/// `q(y) = yᵀQ1y + ȳᵀQ2y + ȳᵀQ3ȳ` on ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexQuadraticSymbolExponent {
    q1: CMat,
    q2: CMat,
    q3: CMat,
}

impl ComplexQuadraticSymbolExponent {
    pub fn new(q1: CMat, q2: CMat, q3: CMat) -> Result<Self> {
        let n = q1.nrows();
        for (what, m) in [("Q1", &q1), ("Q2", &q2), ("Q3", &q3)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: n,
                    got: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput(format!("{what} must be finite")));
            }
        }
        let tol = Tolerance::default();
        for (what, m) in [("Q1", &q1), ("Q3", &q3)] {
            let asym = fro(&(m - m.transpose()));
            if asym > tol.scaled(fro(m)) {
                return Err(Error::InvalidInput(format!(
                    "{what} is not symmetric (|{what} - {what}^T| = {asym:e})"
                )));
            }
        }
        Ok(Self {
            q1: symmetrize(&q1),
            q2,
            q3: symmetrize(&q3),
        })
    }

    /// `q(y) = s·|y|²`, i.e. `Q2 = s·I`.
    pub fn radial(n: usize, s: C64) -> Self {
        Self {
            q1: CMat::zeros(n, n),
            q2: linalg::identity(n).map(|z| z * s),
            q3: CMat::zeros(n, n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::radial(n, C64::new(0.0, 0.0))
    }

    pub fn n(&self) -> usize {
        self.q1.nrows()
    }

    pub fn q1(&self) -> &CMat {
        &self.q1
    }

    pub fn q2(&self) -> &CMat {
        &self.q2
    }

    pub fn q3(&self) -> &CMat {
        &self.q3
    }

    pub fn eval(&self, y: &CVec) -> C64 {
        let yb = y.map(|z| z.conj());
        bilinear(y, &self.q1, y) + bilinear(&yb, &self.q2, y) + bilinear(&yb, &self.q3, &yb)
    }

    /// `Re q` as a weight: `A = Q1 + Q̄3`, `L = Q2ᵀ + Q̄2`.
    pub fn real_part(&self) -> QuadraticWeight {
        let a = &self.q1 + conj(&self.q3);
        let l = self.q2.transpose() + conj(&self.q2);
        QuadraticWeight::new(a, l).expect("real part of a symbol exponent is a weight")
    }

    /// `q(y, θ) = yᵀQ1y + θᵀQ2y + θᵀQ3θ` as a holomorphic form over `(y, θ)`.
    pub fn polarized(&self) -> HolomorphicQuadraticForm {
        let q = linalg::block2(
            &self.q1.scale(2.0),
            &self.q2.transpose(),
            &self.q2,
            &self.q3.scale(2.0),
        );
        HolomorphicQuadraticForm::from_symmetric(q)
    }

    /// True when `q` depends on `|y|` only through `ȳᵀQ2y` with `Q2 = s·I`.
    pub fn is_radial(&self, tol: f64) -> bool {
        let n = self.n();
        let s = if n > 0 {
            self.q2[(0, 0)]
        } else {
            C64::new(0.0, 0.0)
        };
        let off = &self.q2 - linalg::identity(n).map(|z| z * s);
        fro(&self.q1) <= tol && fro(&self.q3) <= tol && fro(&off) <= tol
    }
}
