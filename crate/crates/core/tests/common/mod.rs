#![allow(dead_code)]

use canonpos_core::forms::{HolomorphicQuadraticForm, QuadraticWeight};
use canonpos_core::linalg::{self, c64, CMat, RMat, C64};
use canonpos_core::symplectic::{linear_change, reduce_to_model, ComplexCanonicalMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cnum(rng: &mut impl Rng, s: f64) -> C64 {
    c64(rng.random_range(-s..s), rng.random_range(-s..s))
}

pub fn cmat(rng: &mut impl Rng, n: usize, s: f64) -> CMat {
    CMat::from_fn(n, n, |_, _| cnum(rng, s))
}

pub fn symmetric(rng: &mut impl Rng, n: usize, s: f64) -> CMat {
    linalg::symmetrize(&cmat(rng, n, s))
}

/// Strictly plurisubharmonic weight with Levi eigenvalues in roughly `[0.5, 2]`.
pub fn weight(rng: &mut impl Rng, n: usize) -> QuadraticWeight {
    let x = cmat(rng, n, 0.5);
    let l = &x * x.adjoint() + linalg::identity(n).scale(0.5);
    QuadraticWeight::new(symmetric(rng, n, 0.5), l).unwrap()
}

pub fn unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let h = linalg::hermitize(&cmat(rng, n, 1.0));
    let (vals, vecs) = linalg::eigh(&h);
    let d = CMat::from_diagonal(&linalg::CVec::from_iterator(
        n,
        vals.iter().map(|v| C64::from_polar(1.0, 3.0 * v)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Real quadratic form with realified Hessian `V Vᵀ` of the given rank.
pub fn psd_weight(rng: &mut impl Rng, n: usize, rank: usize) -> QuadraticWeight {
    let v = RMat::from_fn(2 * n, rank, |_, _| rng.random_range(-1.0..1.0));
    QuadraticWeight::from_realified_hessian(&(&v * v.transpose())).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Strict,
    Degenerate,
    Not,
}

pub struct Instance {
    pub map: ComplexCanonicalMap,
    pub phi1: QuadraticWeight,
    pub phi2: QuadraticWeight,
    pub kind: Kind,
}

/// `M = R_Ψ⁻¹ ∘ κ_U ∘ R_{Φ₂}` with `Ψ = Φ₁ − P`, so that `M(Λ_{Φ₂}) = Λ_Ψ`.
///
/// `P` positive definite gives strict positivity, rank-deficient `P ≥ 0`
/// degenerate positivity, and `P` indefinite non-positivity.
pub fn instance(rng: &mut impl Rng, n: usize, kind: Kind) -> Instance {
    let phi1 = weight(rng, n);
    let phi2 = weight(rng, n);
    instance_between(rng, phi1, phi2, kind)
}

pub fn instance_between(
    rng: &mut impl Rng,
    phi1: QuadraticWeight,
    phi2: QuadraticWeight,
    kind: Kind,
) -> Instance {
    let n = phi1.n();
    let p = match kind {
        Kind::Strict => psd_weight(rng, n, 2 * n)
            .add(&QuadraticWeight::scaled_model(n, 0.2))
            .unwrap(),
        Kind::Degenerate => psd_weight(rng, n, 2 * n - 1),
        Kind::Not => {
            let pos = psd_weight(rng, n, 2 * n - 1);
            pos.sub(&psd_weight(rng, n, 1)).unwrap()
        }
    };
    let levi_min = phi1.levi_eigenvalues()[0];
    let p_levi = linalg::norm2(p.l()).max(1e-12);
    let p_size = linalg::norm2_real(&p.realified_hessian()).max(1e-12);
    let s = (0.5 * levi_min / p_levi).min(1.0 / p_size) * rng.random_range(0.2..1.0);
    let psi = phi1.sub(&p.scale(s)).unwrap();
    let r2 = reduce_to_model(&phi2).unwrap().map;
    let rpsi = reduce_to_model(&psi).unwrap().map;
    let u = linear_change(&unitary(rng, n)).unwrap();
    let map = rpsi.inverse().compose(&u).compose(&r2);
    Instance {
        map,
        phi1,
        phi2,
        kind,
    }
}

pub fn kind_for(i: usize) -> Kind {
    match i % 3 {
        0 => Kind::Strict,
        1 => Kind::Degenerate,
        _ => Kind::Not,
    }
}

/// Product of shears and a linear change, without positivity structure.
pub fn random_map(rng: &mut impl Rng, n: usize, s: f64) -> ComplexCanonicalMap {
    let lower = ComplexCanonicalMap::new(linalg::block2(
        &linalg::identity(n),
        &CMat::zeros(n, n),
        &symmetric(rng, n, s),
        &linalg::identity(n),
    ))
    .unwrap();
    let upper = ComplexCanonicalMap::new(linalg::block2(
        &linalg::identity(n),
        &symmetric(rng, n, s),
        &CMat::zeros(n, n),
        &linalg::identity(n),
    ))
    .unwrap();
    let c = linalg::identity(n) + cmat(rng, n, 0.3 * s);
    linear_change(&c).unwrap().compose(&lower).compose(&upper)
}

pub fn random_form(rng: &mut impl Rng, m: usize, s: f64) -> HolomorphicQuadraticForm {
    HolomorphicQuadraticForm::new(symmetric(rng, m, s)).unwrap()
}

/// Real-linear parametrization `s ↦ (x, ξ(x))` of `Λ_Φ`, `x = s₁ + i s₂`.
pub fn lambda_basis(phi: &QuadraticWeight) -> CMat {
    let n = phi.n();
    let mut k = CMat::zeros(2 * n, 2 * n);
    for c in 0..2 * n {
        let mut x = linalg::CVec::zeros(n);
        x[c % n] = if c < n { c64(1.0, 0.0) } else { c64(0.0, 1.0) };
        k.set_column(c, &phi.graph_point(&x));
    }
    k
}

/// Weyl phase `F` with `F|_{Λ_Φ}(s) = ½ sᵀGs`, and its Cayley map.
///
/// `Im G` is positive definite (strict), positive semidefinite of corank one
/// (degenerate), or has one negative direction (not positive).
pub fn cayley_instance(
    rng: &mut impl Rng,
    phi: &QuadraticWeight,
    kind: Kind,
) -> Option<(HolomorphicQuadraticForm, ComplexCanonicalMap)> {
    let m = 2 * phi.n();
    let gr = RMat::from_fn(m, m, |_, _| rng.random_range(-0.5..0.5));
    let v = RMat::from_fn(m, m, |_, _| rng.random_range(-0.7..0.7));
    let mut gi = &v * v.transpose();
    let (vals, vecs) = linalg::eigh_real(&gi);
    let lowest = vecs.column(0).into_owned();
    let shift = match kind {
        Kind::Strict => 0.1,
        Kind::Degenerate => -vals[0],
        Kind::Not => -vals[0] - rng.random_range(0.1..0.5),
    };
    gi += &lowest * lowest.transpose() * shift;
    let g = CMat::from_fn(m, m, |r, c| {
        c64(
            0.5 * (gr[(r, c)] + gr[(c, r)]),
            0.5 * (gi[(r, c)] + gi[(c, r)]),
        )
    });
    let k_inv = linalg::checked_inverse(&lambda_basis(phi), |_, _| {
        canonpos_core::Error::InvalidInput("Lambda basis".into())
    })
    .ok()?;
    let f = linalg::symmetrize(&(k_inv.transpose() * g * k_inv));
    let f = HolomorphicQuadraticForm::new(f).ok()?;
    let kappa = canonpos_core::symplectic::cayley_map(&f).ok()?;
    Some((f, kappa))
}
