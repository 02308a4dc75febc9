use crate::error::{Error, Result};
use crate::forms::{HolomorphicQuadraticForm, QuadraticWeight};
use crate::linalg::{
    self, block2, checked_inverse, conj, eigh, hermitize, is_singular, jmat, symmetrize, CMat,
    CVec, C64, I,
};

use super::map::{lower_shear, AntilinearInvolution, ComplexCanonicalMap};

fn times_i(m: &CMat, s: f64) -> CMat {
    m.map(|z| z * I * s)
}

fn levi_inverse_conj(phi: &QuadraticWeight) -> Result<CMat> {
    checked_inverse(&conj(phi.l()), |smin, smax| Error::SingularLeviForm {
        smin,
        smax,
    })
}

/// The antilinear involution of ℂ²ⁿ fixing `Λ_Φ` pointwise.
///
/// `ι(y, η) = (x, ξ)` is defined by `η = (2/i)(Ay + ½Lx̄)` and
/// `ξ = (2/i)(Ax + ½Lȳ)`.
pub fn involution_of(phi: &QuadraticWeight) -> Result<AntilinearInvolution> {
    let a = phi.a();
    let l = phi.l();
    let lb_inv = levi_inverse_conj(phi)?;
    let ab = conj(a);
    let k11 = (&lb_inv * &ab).scale(-2.0);
    let k12 = times_i(&lb_inv, -1.0);
    let k21 = times_i(&(a * &lb_inv * &ab), 4.0) - times_i(l, 1.0);
    let k22 = (a * &lb_inv).scale(-2.0);
    Ok(AntilinearInvolution::new(block2(&k11, &k12, &k21, &k22)))
}

/// Hermitian form `b(ν, μ) = (1/i) σ(ν, ι_Φ μ)`, stored as `b(ν, μ) = μᴴ B ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianFormOnPhase {
    b: CMat,
}

impl HermitianFormOnPhase {
    pub fn matrix(&self) -> &CMat {
        &self.b
    }

    pub fn value(&self, nu: &CVec, mu: &CVec) -> C64 {
        linalg::sesquilinear(mu, &self.b, nu)
    }

    /// `b(μ, μ)`.
    pub fn quad(&self, mu: &CVec) -> f64 {
        linalg::sesquilinear(mu, &self.b, mu).re
    }
}

pub fn hermitian_b(phi: &QuadraticWeight) -> Result<HermitianFormOnPhase> {
    let iota = involution_of(phi)?;
    let j = jmat(phi.n());
    let b = times_i(&(iota.matrix().transpose() * j), -1.0);
    Ok(HermitianFormOnPhase { b: hermitize(&b) })
}

/// The weight `Φ'` with `M(Λ_Φ) = Λ_Φ'`.
pub fn push_weight(m: &ComplexCanonicalMap, phi: &QuadraticWeight) -> Result<QuadraticWeight> {
    if m.n() != phi.n() {
        return Err(Error::DimensionMismatch {
            what: "map vs weight dimension",
            expected: m.n(),
            got: phi.n(),
        });
    }
    let n = m.n();
    let (m11, m12, m21, m22) = (m.blk(0, 0), m.blk(0, 1), m.blk(1, 0), m.blk(1, 1));
    let a = phi.a();
    let l = phi.l();
    // x = P y + Q ȳ, ξ = R y + S ȳ along the image of Λ_Φ.
    let p = &m11 - times_i(&(&m12 * a), 2.0);
    let q = times_i(&(&m12 * l), -1.0);
    let r = &m21 - times_i(&(&m22 * a), 2.0);
    let s = times_i(&(&m22 * l), -1.0);
    let big = block2(&p, &q, &conj(&q), &conj(&p));
    let w = checked_inverse(&big, |smin, smax| Error::FiberNotTransversal { smin, smax })?;
    let p_inv = linalg::block(&w, 0, 0, n, n);
    let q_inv = linalg::block(&w, 0, n, n, n);
    let u = &r * &p_inv + &s * conj(&q_inv);
    let v = &r * &q_inv + &s * conj(&p_inv);
    let a_new = times_i(&u, 0.5);
    let l_new = times_i(&v, 1.0);
    debug_assert!(
        linalg::fro(&(&a_new - a_new.transpose())) <= 1e-6 * linalg::fro(&a_new).max(1.0),
        "pushed A is not symmetric"
    );
    Ok(QuadraticWeight::new(symmetrize(&a_new), hermitize(&l_new))
        .expect("symmetrized push-forward data"))
}

/// `κ_A(y, η) = (y, η + (2/i)A y)`, carrying `Λ_{Φ_herm}` onto `Λ_Φ`.
pub fn shear_map(phi: &QuadraticWeight) -> ComplexCanonicalMap {
    ComplexCanonicalMap::from_matrix(lower_shear(&times_i(phi.a(), -2.0)))
}

/// `κ_C(y, η) = (C⁻¹y, Cᵀη)`; it maps `Λ_Φ` onto `Λ_{Φ∘C}`.
pub fn linear_change(c: &CMat) -> Result<ComplexCanonicalMap> {
    let n = c.nrows();
    let c_inv = checked_inverse(c, |smin, smax| {
        Error::InvalidInput(format!(
            "coordinate change is singular (smallest singular value {smin:e}, largest {smax:e})"
        ))
    })?;
    Ok(ComplexCanonicalMap::from_matrix(block2(
        &c_inv,
        &CMat::zeros(n, n),
        &CMat::zeros(n, n),
        &c.transpose(),
    )))
}

/// Reduction of a strictly psh weight to `|x|²/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelReduction {
    /// `κ = κ_C ∘ κ_A⁻¹` with `push_weight(κ, Φ) = |x|²/2`.
    pub map: ComplexCanonicalMap,
    pub shear: ComplexCanonicalMap,
    /// `C = L̄^{-1/2} · U` with `Cᴴ L̄ C = I`.
    pub c_factor: CMat,
    pub inverse_sqrt: CMat,
    pub unitary: CMat,
}

pub fn reduce_to_model(phi: &QuadraticWeight) -> Result<ModelReduction> {
    let n = phi.n();
    let lb = conj(phi.l());
    let (vals, vecs) = eigh(&lb);
    let smax = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let smin = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if n > 0 && (is_singular(smin, smax) || vals[0] <= 0.0) {
        return Err(Error::SingularLeviForm {
            smin: vals[0],
            smax,
        });
    }
    let d = CMat::from_diagonal(&CVec::from_iterator(
        n,
        vals.iter().map(|v| C64::new(1.0 / v.sqrt(), 0.0)),
    ));
    let inverse_sqrt = &vecs * d * vecs.adjoint();
    let unitary = linalg::identity(n);
    let c_factor = &inverse_sqrt * &unitary;
    let shear = shear_map(phi);
    let map = linear_change(&c_factor)?.compose(&shear.inverse());
    Ok(ModelReduction {
        map,
        shear,
        c_factor,
        inverse_sqrt,
        unitary,
    })
}

/// `φ(x, η)` with `κ: (φ'_η, η) ↦ (x, φ'_x)`.
pub fn generating_function(m: &ComplexCanonicalMap) -> Result<HolomorphicQuadraticForm> {
    let (m11, m12, m21, m22) = (m.blk(0, 0), m.blk(0, 1), m.blk(1, 0), m.blk(1, 1));
    let m11_inv = checked_inverse(&m11, |smin, smax| Error::NoGeneratingFunction {
        smin,
        smax,
    })?;
    let xx = &m21 * &m11_inv;
    let xe = &m22 - &xx * &m12;
    let ee = -(&m11_inv * &m12);
    let h = block2(&xx, &xe, &m11_inv, &ee);
    HolomorphicQuadraticForm::new(symmetrize(&h))
}

/// The map generated by `φ(x, η)`: `(φ'_η, η) ↦ (x, φ'_x)`.
pub fn map_from_generating_function(phi: &HolomorphicQuadraticForm) -> Result<ComplexCanonicalMap> {
    let n = phi.dim() / 2;
    let h = phi.matrix();
    let f_xx = linalg::block(h, 0, 0, n, n);
    let f_xe = linalg::block(h, 0, n, n, n);
    let f_ex = linalg::block(h, n, 0, n, n);
    let f_ee = linalg::block(h, n, n, n, n);
    let x = checked_inverse(&f_ex, |smin, smax| Error::SingularMixedBlock { smin, smax })?;
    let m11 = x.clone();
    let m12 = -(&x * &f_ee);
    let m21 = &f_xx * &x;
    let m22 = &f_xe - &f_xx * &x * &f_ee;
    Ok(ComplexCanonicalMap::from_matrix(block2(
        &m11, &m12, &m21, &m22,
    )))
}
