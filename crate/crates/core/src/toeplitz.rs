//! Toeplitz operators `Top(e^{2q})` on `H_{Φ₀}` with Gaussian symbols.
//!
//! The Weyl symbol is obtained exactly from the Gaussian convolution of
//! `e^{2q}`; boundedness is the sign of `Im F` on `Λ_{Φ₀}` and is checked
//! against positivity of the canonical map.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fio::NondegeneratePhase;
use crate::forms::{
    compare_weights, gaussian_reduce, split_herm_plh, ComplexQuadraticSymbolExponent,
    GaussianExponent, HolomorphicQuadraticForm, QuadraticWeight,
};
use crate::linalg::{
    self, block2, checked_inverse, det, eigh_real, real_hessian_to_xxbar, real_part, realify_vec,
    to_complex, xxbar_hessian_to_real, CMat, CVec, C64,
};
use crate::positivity::{map_positivity, PositivityStatus, PositivityVerdict, RouteOutcome};
use crate::symplectic::{cayley_map, fundamental_matrix, ComplexCanonicalMap};
use crate::Tolerance;

/// `a = c·e^{iF}` with `F` a holomorphic quadratic form over `(x, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSymbol {
    pub c: C64,
    pub f: HolomorphicQuadraticForm,
    /// `G` with `a(x, ξ(x)) = c·exp(½ sᵀGs)` on `Λ_{Φ₀}`, `s = (Re x, Im x)`.
    pub lambda_exponent: CMat,
}

impl GaussianSymbol {
    pub fn n(&self) -> usize {
        self.f.dim() / 2
    }

    pub fn eval(&self, x: &CVec, xi: &CVec) -> C64 {
        let z = CVec::from_iterator(x.len() + xi.len(), x.iter().chain(xi.iter()).copied());
        self.c * (self.f.eval(&z) * linalg::I).exp()
    }

    /// Value at the point of `Λ_{Φ₀}` above `x`.
    pub fn eval_on_lambda(&self, x: &CVec) -> C64 {
        let s = realify_vec(x).map(|v| C64::new(v, 0.0));
        self.c * ((s.transpose() * &self.lambda_exponent * &s)[(0, 0)] * 0.5).exp()
    }

    /// Realified Hessian of `x ↦ Im F(x, ξ(x))`, which equals `−Re G`.
    pub fn im_f_on_lambda(&self) -> linalg::RMat {
        -real_part(&self.lambda_exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flag {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nondegeneracy {
    pub holds: bool,
    /// `|det(L₀/2 − Q2)|`.
    pub det_abs: f64,
    pub threshold: f64,
    /// Set when the determinant is below the threshold: no verdict is drawn from it.
    pub marginal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// `Φ_herm − 2Re q` positive definite.
    pub densely_defined: Flag,
    /// `4Φ_herm − 2Re q` positive definite: the convolution defining the symbol converges.
    pub convergent: Flag,
    pub nondegenerate: Nondegeneracy,
}

fn check_levi(phi0: &QuadraticWeight) -> Result<()> {
    if !phi0.is_strictly_psh(Tolerance::default()) {
        let (smin, smax) = linalg::extreme_singular_values(phi0.l());
        return Err(Error::SingularLeviForm { smin, smax });
    }
    Ok(())
}

fn check_dims(q: &ComplexQuadraticSymbolExponent, phi0: &QuadraticWeight) -> Result<()> {
    if q.n() != phi0.n() {
        return Err(Error::DimensionMismatch {
            what: "symbol exponent vs weight dimension",
            expected: phi0.n(),
            got: q.n(),
        });
    }
    Ok(())
}

pub fn admissibility(
    q: &ComplexQuadraticSymbolExponent,
    phi0: &QuadraticWeight,
    tol: Tolerance,
) -> Result<Admissibility> {
    check_dims(q, phi0)?;
    check_levi(phi0)?;
    let n = phi0.n();
    let (herm, _) = split_herm_plh(phi0);
    let two_re_q = q.real_part().scale(2.0);
    let dd = compare_weights(&herm, &two_re_q, tol)?;
    let conv = compare_weights(&herm.scale(4.0), &two_re_q, tol)?;
    let half_l = phi0.l().scale(0.5);
    let det_abs = det(&(&half_l - q.q2().transpose())).norm();
    let threshold = 1e-10 * linalg::norm2(&half_l).powi(n as i32);
    let holds = det_abs > threshold;
    Ok(Admissibility {
        densely_defined: Flag {
            holds: dd.pd,
            margin: dd.min_eigenvalue,
        },
        convergent: Flag {
            holds: conv.pd,
            margin: conv.min_eigenvalue,
        },
        nondegenerate: Nondegeneracy {
            holds,
            det_abs,
            threshold,
            marginal: !holds,
        },
    })
}

/// Weyl symbol of `Top(e^{2q})` on `H_{Φ₀}`.
///
/// On `Λ_{Φ₀}` the symbol is `C ∫ exp(−4Φ_herm(x−y) + 2q(y)) L(dy)` with
/// `C = (2/π)ⁿ det L₀`; the fiber variable is then restored through
/// `x̄ = L₀⁻¹(iξ − 2A₀x)`.
pub fn weyl_symbol(
    q: &ComplexQuadraticSymbolExponent,
    phi0: &QuadraticWeight,
) -> Result<GaussianSymbol> {
    check_dims(q, phi0)?;
    check_levi(phi0)?;
    let n = phi0.n();
    let (herm, _) = split_herm_plh(phi0);
    let h_h = to_complex(&herm.realified_hessian());
    let h_q = xxbar_hessian_to_real(q.polarized().matrix());
    let four_h = h_h.scale(4.0);
    let m = &h_q.scale(2.0) - &four_h;
    let hess = block2(&m, &four_h, &four_h, &-&four_h);
    let red = gaussian_reduce(&GaussianExponent::quadratic(hess, 2 * n))?;
    let norm = (2.0 / PI).powi(n as i32) * det(phi0.l()).re;
    let c = red.amplitude() * norm;
    let g = red.reduced.matrix().clone();

    let w = real_hessian_to_xxbar(&g);
    let l_inv = checked_inverse(phi0.l(), |smin, smax| Error::SingularLeviForm {
        smin,
        smax,
    })?;
    let s = block2(
        &linalg::identity(n),
        &CMat::zeros(n, n),
        &(&l_inv * phi0.a()).scale(-2.0),
        &l_inv.map(|z| z * linalg::I),
    );
    let f = (s.transpose() * w * &s).map(|z| z * C64::new(0.0, -1.0));
    Ok(GaussianSymbol {
        c,
        f: HolomorphicQuadraticForm::new(linalg::symmetrize(&f))?,
        lambda_exponent: g,
    })
}

/// Canonical map of `Top(e^{2q})`, read off the polarized phase.
pub fn toeplitz_map(
    q: &ComplexQuadraticSymbolExponent,
    phi0: &QuadraticWeight,
) -> Result<ComplexCanonicalMap> {
    check_dims(q, phi0)?;
    NondegeneratePhase::toeplitz(q, phi0)?.canonical_map()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzReport {
    pub admissibility: Admissibility,
    pub weyl: Option<GaussianSymbol>,
    pub kappa: Option<ComplexCanonicalMap>,
    /// `‖κ − cayley_map(F)‖`, when both exist.
    pub cayley_residual: Option<f64>,
    /// Direct route: `Im F ≥ 0` on `Λ_{Φ₀}`; second route: the Hermitian
    /// form of `κ` relative to `(Λ_{Φ₀}, Λ_{Φ₀})`.
    pub bounded: Option<PositivityVerdict>,
    /// Full two-route positivity verdict of `κ`.
    pub map_verdict: Option<PositivityVerdict>,
    pub trace_class: bool,
    pub unitary_up_to_phase: bool,
    pub trace: Option<C64>,
}

impl ToeplitzReport {
    pub fn boundedness_label(&self) -> &'static str {
        match self.bounded.as_ref().map(|v| v.status) {
            None => "not analyzed (convolution diverges)",
            Some(PositivityStatus::StrictlyPositive) => "bounded",
            Some(PositivityStatus::DegeneratePositive) => "bounded (degenerate)",
            Some(PositivityStatus::NotPositive) => "unbounded (by example-class evidence)",
            Some(PositivityStatus::InconsistentRoutes) => "inconsistent routes",
        }
    }
}

pub fn analyze(
    q: &ComplexQuadraticSymbolExponent,
    phi0: &QuadraticWeight,
    tol: Tolerance,
) -> Result<ToeplitzReport> {
    let adm = admissibility(q, phi0, tol)?;
    let mut report = ToeplitzReport {
        admissibility: adm,
        weyl: None,
        kappa: None,
        cayley_residual: None,
        bounded: None,
        map_verdict: None,
        trace_class: false,
        unitary_up_to_phase: false,
        trace: None,
    };
    if !adm.convergent.holds {
        return Ok(report);
    }
    let n = phi0.n();
    let weyl = weyl_symbol(q, phi0)?;
    let im_f = weyl.im_f_on_lambda();

    let kappa = if adm.nondegenerate.holds {
        toeplitz_map(q, phi0)
    } else {
        Err(Error::SingularMixedBlock {
            smin: adm.nondegenerate.det_abs,
            smax: adm.nondegenerate.threshold,
        })
    };
    let cayley = cayley_map(&weyl.f);
    if let (Ok(k), Ok(c)) = (&kappa, &cayley) {
        report.cayley_residual = Some(k.distance(c));
    }
    let map_verdict = match &kappa {
        Ok(k) => Some(map_positivity(k, phi0, phi0, tol)?),
        Err(_) => None,
    };

    let mut direct = RouteOutcome::from_hermitian(&to_complex(&im_f), tol);
    direct.witness = direct.witness.map(|z| C64::new(z.re, 0.0));
    let second = match (&map_verdict, &kappa) {
        (Some(v), _) => Ok(v.direct.clone()),
        (None, Err(e)) => Err(e.clone()),
        (None, Ok(_)) => unreachable!("verdict exists whenever the map does"),
    };
    let bounded = PositivityVerdict::combine(direct, second);

    report.trace_class = bounded.status == PositivityStatus::StrictlyPositive;
    let (vals, _) = eigh_real(&im_f);
    let im_f_zero = vals.iter().all(|v| v.abs() <= bounded.direct.tol);
    let fm = fundamental_matrix(&weyl.f);
    let half = linalg::identity(2 * n) - fm.scale(0.5);
    let det_mod = det(&half).norm().sqrt();
    report.unitary_up_to_phase =
        im_f_zero && (weyl.c.norm() - det_mod).abs() <= tol.scaled(weyl.c.norm());

    if report.trace_class {
        let red = gaussian_reduce(&GaussianExponent::quadratic(
            weyl.lambda_exponent.clone(),
            2 * n,
        ))?;
        let density = det(phi0.l()).re / PI.powi(n as i32);
        report.trace = Some(weyl.c * red.amplitude() * density);
    }

    report.kappa = kappa.ok();
    report.bounded = Some(bounded);
    report.map_verdict = map_verdict;
    report.weyl = Some(weyl);
    Ok(report)
}
