use crate::error::{Error, Result};
use crate::linalg::{
    self, bilinear, block, block2, block_diag, c64, conj, eigh, eigh_real, fro, hermitize,
    real_hessian_to_xxbar, symmetrize, xxbar_hessian_to_real, CMat, CVec, RMat, RVec,
};
use crate::Tolerance;

use super::holomorphic::embed_matrix;
use super::HolomorphicQuadraticForm;

/// Real quadratic form `Φ(x) = Re(xᵀAx) + ½ xᵀ L x̄` on ℂⁿ.
///
/// `A` is complex symmetric, `L` Hermitian and equal to twice the Levi
/// matrix `Φ''_{x x̄}` (entry `(j,k)` multiplies `x_j x̄_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticWeight {
    a: CMat,
    l: CMat,
}

impl QuadraticWeight {
    /// Checks symmetry of `a` and hermiticity of `l` to `1e-9·max(1, ‖·‖)`,
    /// then stores the exactly symmetrized parts.
    pub fn new(a: CMat, l: CMat) -> Result<Self> {
        let n = a.nrows();
        check_square("A", &a)?;
        check_square("L", &l)?;
        if l.nrows() != n {
            return Err(Error::DimensionMismatch {
                what: "L rows",
                expected: n,
                got: l.nrows(),
            });
        }
        if a.iter()
            .chain(l.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput("weight matrices must be finite".into()));
        }
        let tol = Tolerance::default();
        let asym = fro(&(&a - a.transpose()));
        if asym > tol.scaled(fro(&a)) {
            return Err(Error::InvalidInput(format!(
                "A is not symmetric (|A - A^T| = {asym:e})"
            )));
        }
        let lherm = fro(&(&l - l.adjoint()));
        if lherm > tol.scaled(fro(&l)) {
            return Err(Error::InvalidInput(format!(
                "L is not Hermitian (|L - L*| = {lherm:e})"
            )));
        }
        Ok(Self {
            a: symmetrize(&a),
            l: hermitize(&l),
        })
    }

    /// `c·|x|²/2`.
    pub fn scaled_model(n: usize, c: f64) -> Self {
        Self {
            a: CMat::zeros(n, n),
            l: linalg::identity(n).scale(c),
        }
    }

    /// The model weight `|x|²/2`.
    pub fn model(n: usize) -> Self {
        Self::scaled_model(n, 1.0)
    }

    pub fn zero(n: usize) -> Self {
        Self::scaled_model(n, 0.0)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn l(&self) -> &CMat {
        &self.l
    }

    pub fn eval(&self, x: &CVec) -> f64 {
        let xbar = x.map(|z| z.conj());
        bilinear(x, &self.a, x).re + 0.5 * bilinear(x, &self.l, &xbar).re
    }

    /// Eigenvalues of `L`, ascending.
    pub fn levi_eigenvalues(&self) -> Vec<f64> {
        eigh(&self.l).0
    }

    pub fn is_strictly_psh(&self, tol: Tolerance) -> bool {
        let t = tol.scaled(linalg::norm2(&self.l));
        self.levi_eigenvalues().first().is_none_or(|&m| m > t)
    }

    pub fn is_pluriharmonic(&self, tol: Tolerance) -> bool {
        linalg::norm2(&self.l) <= tol.scaled(linalg::norm2(&self.a))
    }

    /// `Φ(x) = ½ tᵀ H t` with `t = (Re x, Im x)`.
    pub fn realified_hessian(&self) -> RMat {
        linalg::real_part(&xxbar_hessian_to_real(&self.xxbar_matrix()))
    }

    /// Inverse of [`realified_hessian`](Self::realified_hessian).
    pub fn from_realified_hessian(h: &RMat) -> Result<Self> {
        if !h.nrows().is_multiple_of(2) || h.ncols() != h.nrows() {
            return Err(Error::InvalidInput(
                "realified Hessian must be square of even size".into(),
            ));
        }
        let n = h.nrows() / 2;
        let w = real_hessian_to_xxbar(&linalg::to_complex(&linalg::symmetrize_real(h)));
        Self::new(block(&w, 0, 0, n, n), block(&w, 0, n, n, n).scale(2.0))
    }

    /// `W` with `Φ(x) = ½ [x; x̄]ᵀ W [x; x̄]`; also the polarization matrix.
    fn xxbar_matrix(&self) -> CMat {
        let half_l = self.l.scale(0.5);
        block2(&self.a, &half_l, &half_l.transpose(), &conj(&self.a))
    }

    /// `x ↦ (2/i) ∂_x Φ = -2iAx - iLx̄`, the fiber coordinate of `Λ_Φ`.
    pub fn graph_fiber(&self, x: &CVec) -> CVec {
        let xbar = x.map(|z| z.conj());
        let mi = c64(0.0, -1.0);
        (&self.a * x).scale(2.0).map(|z| z * mi) + (&self.l * xbar).map(|z| z * mi)
    }

    /// Point `(x, (2/i)∂_xΦ(x))` of `Λ_Φ` in ℂ²ⁿ.
    pub fn graph_point(&self, x: &CVec) -> CVec {
        let xi = self.graph_fiber(x);
        CVec::from_iterator(2 * self.n(), x.iter().chain(xi.iter()).copied())
    }

    /// `Φ*(y) = Φ(ȳ)`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: conj(&self.a),
            l: conj(&self.l),
        }
    }

    /// `(x, y) ↦ Φ(x) + Ψ(y)` on ℂⁿ⁺ᵐ.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            a: block_diag(&self.a, &other.a),
            l: block_diag(&self.l, &other.l),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            a: &self.a + &other.a,
            l: &self.l + &other.l,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            a: &self.a - &other.a,
            l: &self.l - &other.l,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: self.a.scale(s),
            l: self.l.scale(s),
        }
    }

    /// `Φ(x) = Re(½ xᵀ P x)` for a holomorphic form, i.e. `A = P/2`, `L = 0`.
    pub fn real_part_of(form: &HolomorphicQuadraticForm) -> Self {
        let m = form.dim();
        Self {
            a: form.matrix().scale(0.5),
            l: CMat::zeros(m, m),
        }
    }

    /// `-Im(½ xᵀ P x) = Re(½ xᵀ (iP) x)`.
    pub fn minus_imag_part_of(form: &HolomorphicQuadraticForm) -> Self {
        let m = form.dim();
        Self {
            a: form.matrix().map(|z| z * linalg::I).scale(0.5),
            l: CMat::zeros(m, m),
        }
    }

    /// Matrix-level distance `‖ΔA‖ + ‖ΔL‖` (Frobenius).
    pub fn distance(&self, other: &Self) -> f64 {
        fro(&(&self.a - &other.a)) + fro(&(&self.l - &other.l))
    }

    /// The same weight on ℂᵐ, with its variables placed at `idx`.
    pub fn embed(&self, idx: &[usize], m: usize) -> Self {
        Self {
            a: embed_matrix(&self.a, idx, m),
            l: embed_matrix(&self.l, idx, m),
        }
    }

    pub fn norm(&self) -> f64 {
        linalg::norm2(&self.a) + linalg::norm2(&self.l)
    }
}

fn check_square(what: &'static str, m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            what,
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    Ok(())
}

fn same_dim(a: &QuadraticWeight, b: &QuadraticWeight) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            what: "weight dimension",
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(())
}

/// `Φ = Φ_herm + Φ_plh`.
pub fn split_herm_plh(phi: &QuadraticWeight) -> (QuadraticWeight, QuadraticWeight) {
    let n = phi.n();
    let herm = QuadraticWeight {
        a: CMat::zeros(n, n),
        l: phi.l.clone(),
    };
    let plh = QuadraticWeight {
        a: phi.a.clone(),
        l: CMat::zeros(n, n),
    };
    (herm, plh)
}

/// The holomorphic form `Ψ` on ℂ²ⁿ with `Ψ(x, x̄) = Φ(x)`.
pub fn polarize(phi: &QuadraticWeight) -> HolomorphicQuadraticForm {
    HolomorphicQuadraticForm::from_symmetric(phi.xxbar_matrix())
}

/// Spectral comparison of two weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FormComparison {
    /// Smallest eigenvalue of the realified Hessian of `Φa − Φb`.
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `(positive, negative, zero)` counts at tolerance `tol`.
    pub signature: (usize, usize, usize),
    pub psd: bool,
    pub pd: bool,
    /// Unit vector in ℝ²ⁿ attaining `min_eigenvalue`.
    pub witness: RVec,
    pub tol: f64,
}

impl FormComparison {
    pub fn from_real_symmetric(h: &RMat, tol: Tolerance) -> Self {
        let (vals, vecs) = eigh_real(h);
        let t = tol.scaled(linalg::norm2_real(h));
        Self::from_spectrum(&vals, vecs.column(0).into_owned(), t)
    }

    fn from_spectrum(vals: &[f64], witness: RVec, t: f64) -> Self {
        let pos = vals.iter().filter(|&&v| v > t).count();
        let neg = vals.iter().filter(|&&v| v < -t).count();
        let min = vals.first().copied().unwrap_or(0.0);
        Self {
            min_eigenvalue: min,
            max_eigenvalue: vals.last().copied().unwrap_or(0.0),
            signature: (pos, neg, vals.len() - pos - neg),
            psd: min >= -t,
            pd: min > t,
            witness,
            tol: t,
        }
    }

    /// Dimension of the numerical kernel.
    pub fn kernel_dimension(&self) -> usize {
        self.signature.2
    }
}

/// Realified spectrum of `Φa − Φb`; `psd` means `Φa ≥ Φb` everywhere.
pub fn compare_weights(
    phi_a: &QuadraticWeight,
    phi_b: &QuadraticWeight,
    tol: Tolerance,
) -> Result<FormComparison> {
    same_dim(phi_a, phi_b)?;
    let h = phi_a.realified_hessian() - phi_b.realified_hessian();
    let (vals, vecs) = eigh_real(&h);
    let scale = linalg::norm2_real(&phi_a.realified_hessian())
        .max(linalg::norm2_real(&phi_b.realified_hessian()));
    let t = tol.scaled(scale);
    let witness = if vals.is_empty() {
        RVec::zeros(0)
    } else {
        vecs.column(0).into_owned()
    };
    Ok(FormComparison::from_spectrum(&vals, witness, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::realify_vec;
    use crate::linalg::{c64, ONE};

    fn scalar(z: crate::linalg::C64) -> CMat {
        CMat::from_element(1, 1, z)
    }

    #[test]
    fn split_of_simple_weight() {
        let phi = QuadraticWeight::new(scalar(ONE), scalar(ONE)).unwrap();
        let (h, p) = split_herm_plh(&phi);
        assert_eq!(h.a()[(0, 0)], c64(0.0, 0.0));
        assert_eq!(h.l()[(0, 0)], ONE);
        assert_eq!(p.a()[(0, 0)], ONE);
        assert_eq!(p.l()[(0, 0)], c64(0.0, 0.0));
    }

    #[test]
    fn model_polarizes_to_half_product() {
        let psi = polarize(&QuadraticWeight::model(1));
        let q = psi.matrix();
        assert_eq!(q[(0, 0)], c64(0.0, 0.0));
        assert_eq!(q[(0, 1)], c64(0.5, 0.0));
        assert_eq!(q[(1, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn compare_model_with_quarter_model() {
        let cmp = compare_weights(
            &QuadraticWeight::model(1),
            &QuadraticWeight::scaled_model(1, 0.25),
            Tolerance::default(),
        )
        .unwrap();
        assert!((cmp.min_eigenvalue - 0.75).abs() < 1e-14);
        assert!((cmp.max_eigenvalue - 0.75).abs() < 1e-14);
        assert!(cmp.pd);
    }

    #[test]
    fn compare_with_self_is_all_zero() {
        let phi = QuadraticWeight::new(scalar(c64(0.3, -0.2)), scalar(c64(2.0, 0.0))).unwrap();
        let cmp = compare_weights(&phi, &phi, Tolerance::default()).unwrap();
        assert_eq!(cmp.signature, (0, 0, 2));
        assert!(cmp.psd && !cmp.pd);
    }

    #[test]
    fn pluriharmonic_boundary_has_one_kernel_direction() {
        // Ψ(x) = -Im(x²/2)
        let psi = QuadraticWeight::new(scalar(c64(0.0, 0.5)), scalar(c64(0.0, 0.0))).unwrap();
        let cmp = compare_weights(&QuadraticWeight::model(1), &psi, Tolerance::default()).unwrap();
        assert!(cmp.psd && !cmp.pd);
        assert_eq!(cmp.signature, (1, 0, 1));
    }

    #[test]
    fn realified_hessian_round_trip() {
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                c64(0.2, 0.1),
                c64(-0.3, 0.4),
                c64(-0.3, 0.4),
                c64(1.0, -2.0),
            ],
        );
        let l = CMat::from_row_slice(
            2,
            2,
            &[c64(2.0, 0.0), c64(0.5, 0.7), c64(0.5, -0.7), c64(1.0, 0.0)],
        );
        let phi = QuadraticWeight::new(a, l).unwrap();
        let back = QuadraticWeight::from_realified_hessian(&phi.realified_hessian()).unwrap();
        assert!(back.distance(&phi) < 1e-13);
        let x = CVec::from_vec(vec![c64(0.3, -1.1), c64(0.7, 0.2)]);
        let t = realify_vec(&x);
        let h = phi.realified_hessian();
        assert!((0.5 * (t.transpose() * &h * &t)[(0, 0)] - phi.eval(&x)).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian_levi_matrix() {
        let l = CMat::from_row_slice(2, 2, &[ONE, ONE, c64(0.0, 0.0), ONE]);
        assert!(QuadraticWeight::new(CMat::zeros(2, 2), l).is_err());
    }
}
