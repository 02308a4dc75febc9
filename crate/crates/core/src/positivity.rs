//! Positivity of complex Lagrangian planes and canonical maps relative to
//! strictly plurisubharmonic weights.
//!
//! Each decision is made twice: once from the Hermitian form `b` directly,
//! and once through the weight characterization (`Ψ ≤ Φ₀` for planes,
//! `Φ ≤ Φ₁` for maps). The verdict records both and whether they agree.

use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::forms::{compare_weights, FormComparison, HolomorphicQuadraticForm, QuadraticWeight};
use crate::linalg::{
    self, block, checked_inverse, complexify_vec, conj, eigh, extreme_singular_values, fro,
    is_singular, jmat, CMat, CVec,
};
use crate::symplectic::{
    hermitian_b, map_from_generating_function, push_weight, ComplexCanonicalMap,
};
use crate::Tolerance;

/// Two routes contradict each other only when both margins exceed this.
pub const ROUTE_GATE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositivityStatus {
    StrictlyPositive,
    DegeneratePositive,
    NotPositive,
    InconsistentRoutes,
}

impl PositivityStatus {
    pub fn classify(min_eigenvalue: f64, tol: f64) -> Self {
        if min_eigenvalue > tol {
            Self::StrictlyPositive
        } else if min_eigenvalue < -tol {
            Self::NotPositive
        } else {
            Self::DegeneratePositive
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Self::StrictlyPositive | Self::DegeneratePositive)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::StrictlyPositive => "StrictlyPositive",
            Self::DegeneratePositive => "DegeneratePositive",
            Self::NotPositive => "NotPositive",
            Self::InconsistentRoutes => "InconsistentRoutes",
        }
    }

    fn rank(self) -> u8 {
        match self {
            Self::NotPositive => 0,
            Self::DegeneratePositive => 1,
            Self::StrictlyPositive => 2,
            Self::InconsistentRoutes => 3,
        }
    }
}

/// Raw output of one decision route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteOutcome {
    pub status: PositivityStatus,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub witness: CVec,
}

impl RouteOutcome {
    pub(crate) fn from_hermitian(h: &CMat, tol: Tolerance) -> Self {
        let (vals, vecs) = eigh(h);
        let t = tol.scaled(linalg::norm2(h));
        let min = vals.first().copied().unwrap_or(0.0);
        Self {
            status: PositivityStatus::classify(min, t),
            min_eigenvalue: min,
            tol: t,
            witness: if vals.is_empty() {
                CVec::zeros(0)
            } else {
                vecs.column(0).into_owned()
            },
        }
    }

    fn from_comparison(cmp: &FormComparison) -> Self {
        Self {
            status: PositivityStatus::classify(cmp.min_eigenvalue, cmp.tol),
            min_eigenvalue: cmp.min_eigenvalue,
            tol: cmp.tol,
            witness: complexify_vec(&cmp.witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityVerdict {
    pub status: PositivityStatus,
    /// Margin of the direct route.
    pub min_eigenvalue: f64,
    /// Phase-space vector attaining the direct route's minimum.
    pub witness: CVec,
    pub direct: RouteOutcome,
    pub characterization: std::result::Result<RouteOutcome, Error>,
    pub route_agreement: bool,
}

impl PositivityVerdict {
    pub(crate) fn combine(
        direct: RouteOutcome,
        characterization: std::result::Result<RouteOutcome, Error>,
    ) -> Self {
        let (status, route_agreement) = match &characterization {
            Err(_) if direct.status.is_positive() => (PositivityStatus::InconsistentRoutes, false),
            Err(_) => (direct.status, true),
            Ok(c) if c.status == direct.status => (direct.status, true),
            Ok(c)
                if c.min_eigenvalue.abs() > ROUTE_GATE
                    && direct.min_eigenvalue.abs() > ROUTE_GATE =>
            {
                (PositivityStatus::InconsistentRoutes, false)
            }
            Ok(_) => (direct.status, false),
        };
        Self {
            status,
            min_eigenvalue: direct.min_eigenvalue,
            witness: direct.witness.clone(),
            direct,
            characterization,
            route_agreement,
        }
    }

    /// True when the two routes are in contradiction beyond [`ROUTE_GATE`].
    pub fn is_contradiction(&self) -> bool {
        self.status == PositivityStatus::InconsistentRoutes
    }
}

/// A complex Lagrangian subspace of ℂ²ⁿ given by a basis (2n×n).
#[derive(Debug, Clone, PartialEq)]
pub struct CLagrangianPlane {
    basis: CMat,
}

impl CLagrangianPlane {
    pub fn new(basis: CMat) -> Result<Self> {
        let (rows, n) = basis.shape();
        if rows != 2 * n {
            return Err(Error::DimensionMismatch {
                what: "Lagrangian basis rows",
                expected: 2 * n,
                got: rows,
            });
        }
        let (smin, smax) = extreme_singular_values(&basis);
        if is_singular(smin, smax) {
            return Err(Error::RankDeficient { smin });
        }
        let residual = fro(&(basis.transpose() * jmat(n) * &basis));
        if residual > Tolerance::default().scaled(smax * smax) {
            return Err(Error::NotLagrangian { residual });
        }
        Ok(Self { basis })
    }

    /// `{(x, Sx)}` for symmetric `S`.
    pub fn graph(s: &CMat) -> Result<Self> {
        let n = s.nrows();
        Self::new(CMat::from_fn(2 * n, n, |r, c| {
            if r < n {
                if r == c {
                    linalg::ONE
                } else {
                    linalg::ZERO
                }
            } else {
                s[(r - n, c)]
            }
        }))
    }

    /// The fiber `{(0, ξ)}`.
    pub fn fiber(n: usize) -> Self {
        let mut basis = CMat::zeros(2 * n, n);
        for k in 0..n {
            basis[(n + k, k)] = linalg::ONE;
        }
        Self { basis }
    }

    pub fn n(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }
}

/// Positivity of `Λ` relative to `Λ_{Φ₀}`.
pub fn lagrangian_positivity(
    plane: &CLagrangianPlane,
    phi0: &QuadraticWeight,
    tol: Tolerance,
) -> Result<PositivityVerdict> {
    let n = plane.n();
    if phi0.n() != n {
        return Err(Error::DimensionMismatch {
            what: "plane vs weight dimension",
            expected: n,
            got: phi0.n(),
        });
    }
    let b = hermitian_b(phi0)?;
    let basis = plane.basis();
    let restricted = basis.adjoint() * b.matrix() * basis;
    let mut direct = RouteOutcome::from_hermitian(&restricted, tol);
    direct.witness = basis * &direct.witness;

    let characterization = (|| {
        let x = block(basis, 0, 0, n, n);
        let xi = block(basis, n, 0, n, n);
        let x_inv = checked_inverse(&x, |smin, smax| Error::FiberNotTransversal { smin, smax })?;
        let phase = HolomorphicQuadraticForm::new(linalg::symmetrize(&(xi * x_inv)))?;
        let psi = QuadraticWeight::minus_imag_part_of(&phase);
        let cmp = compare_weights(phi0, &psi, tol)?;
        Ok(RouteOutcome::from_comparison(&cmp))
    })();

    Ok(PositivityVerdict::combine(direct, characterization))
}

/// Positivity of `M` relative to `(Λ_{Φ₁}, Λ_{Φ₂})`.
pub fn map_positivity(
    m: &ComplexCanonicalMap,
    phi1: &QuadraticWeight,
    phi2: &QuadraticWeight,
    tol: Tolerance,
) -> Result<PositivityVerdict> {
    let n = m.n();
    for w in [phi1, phi2] {
        if w.n() != n {
            return Err(Error::DimensionMismatch {
                what: "map vs weight dimension",
                expected: n,
                got: w.n(),
            });
        }
    }
    let b1 = hermitian_b(phi1)?;
    let b2 = hermitian_b(phi2)?;
    let mm = m.matrix();
    let h = mm.adjoint() * b1.matrix() * mm - b2.matrix();
    let direct = RouteOutcome::from_hermitian(&h, tol);

    let characterization = push_weight(m, phi2).and_then(|phi| {
        let levi = RouteOutcome::from_hermitian(phi.l(), tol);
        let cmp = RouteOutcome::from_comparison(&compare_weights(phi1, &phi, tol)?);
        Ok(if levi.status.rank() < cmp.status.rank() {
            levi
        } else {
            cmp
        })
    });

    Ok(PositivityVerdict::combine(direct, characterization))
}

/// Positivity of the map generated by `φ(x, θ)` relative to `(Λ_{Φ₁}, Λ_{|x|²/2})`.
///
/// First route: the real form
/// `x̄ᵀL̄x + |θ|² − vᴴL⁻¹v − |φ'_θ|²` with `v = φ'_x + 2iAx`.
/// Second route: the Hermitian form of the induced map.
pub fn positivity_via_generating(
    phi: &HolomorphicQuadraticForm,
    phi1: &QuadraticWeight,
    tol: Tolerance,
) -> Result<PositivityVerdict> {
    let n = phi1.n();
    if phi.dim() != 2 * n {
        return Err(Error::DimensionMismatch {
            what: "generating function dimension",
            expected: 2 * n,
            got: phi.dim(),
        });
    }
    let h = phi.matrix();
    let l_inv = checked_inverse(phi1.l(), |smin, smax| Error::SingularLeviForm {
        smin,
        smax,
    })?;
    let two_i_a = phi1.a().map(|z| z * linalg::I * 2.0);
    let mut v = block(h, 0, 0, n, 2 * n);
    v.view_mut((0, 0), (n, n)).add_assign(&two_i_a);
    let w = block(h, n, 0, n, 2 * n);
    let base = linalg::block_diag(&conj(phi1.l()), &linalg::identity(n));
    let form = base - v.adjoint() * l_inv * &v - w.adjoint() * &w;
    let direct = RouteOutcome::from_hermitian(&form, tol);

    let characterization = map_from_generating_function(phi).and_then(|m| {
        let verdict = map_positivity(&m, phi1, &QuadraticWeight::model(n), tol)?;
        Ok(verdict.direct)
    });
    Ok(PositivityVerdict::combine(direct, characterization))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn model() -> QuadraticWeight {
        QuadraticWeight::model(1)
    }

    #[test]
    fn zero_section_is_strictly_positive() {
        let plane = CLagrangianPlane::graph(&CMat::zeros(1, 1)).unwrap();
        let v = lagrangian_positivity(&plane, &model(), Tolerance::default()).unwrap();
        assert_eq!(v.status, PositivityStatus::StrictlyPositive);
        assert!(v.route_agreement);
    }

    #[test]
    fn fiber_is_not_positive() {
        let v = lagrangian_positivity(&CLagrangianPlane::fiber(1), &model(), Tolerance::default())
            .unwrap();
        assert_eq!(v.status, PositivityStatus::NotPositive);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-14);
        assert!(v.characterization.is_err());
        assert!(v.route_agreement);
    }

    #[test]
    fn unit_graph_is_degenerate() {
        let plane = CLagrangianPlane::graph(&CMat::from_element(1, 1, c64(1.0, 0.0))).unwrap();
        let v = lagrangian_positivity(&plane, &model(), Tolerance::default()).unwrap();
        assert_eq!(v.status, PositivityStatus::DegeneratePositive);
        assert!(v.route_agreement);
    }

    #[test]
    fn dilations_of_the_model_pair() {
        let tol = Tolerance::default();
        let id =
            map_positivity(&ComplexCanonicalMap::identity(1), &model(), &model(), tol).unwrap();
        assert_eq!(id.status, PositivityStatus::DegeneratePositive);
        let two = ComplexCanonicalMap::dilation(1, c64(2.0, 0.0));
        let v = map_positivity(&two, &model(), &model(), tol).unwrap();
        assert_eq!(v.status, PositivityStatus::StrictlyPositive);
        assert!(v.route_agreement);
        let weak = ComplexCanonicalMap::dilation(1, c64(0.6, 0.0));
        let v = map_positivity(&weak, &model(), &model(), tol).unwrap();
        assert_eq!(v.status, PositivityStatus::NotPositive);
        assert!(v.route_agreement);
    }

    #[test]
    fn generating_function_examples() {
        let tol = Tolerance::default();
        let cross = |c: f64| {
            HolomorphicQuadraticForm::new(CMat::from_row_slice(
                2,
                2,
                &[c64(0.0, 0.0), c64(c, 0.0), c64(c, 0.0), c64(0.0, 0.0)],
            ))
            .unwrap()
        };
        let v = positivity_via_generating(&cross(1.0), &model(), tol).unwrap();
        assert_eq!(v.status, PositivityStatus::DegeneratePositive);
        let v = positivity_via_generating(&cross(0.5), &model(), tol).unwrap();
        assert_eq!(v.status, PositivityStatus::StrictlyPositive);
        assert!((v.min_eigenvalue - 0.75).abs() < 1e-14);
        let v = positivity_via_generating(&cross(2.0), &model(), tol).unwrap();
        assert_eq!(v.status, PositivityStatus::NotPositive);
        assert!(v.route_agreement);
    }
}
