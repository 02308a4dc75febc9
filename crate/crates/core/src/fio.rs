//! Metaplectic Fourier integral operators between Bargmann spaces: phases,
//! image weights, Bergman kernels `â e^{2Ψ(x,ȳ)}` and the maps they define.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::{
    compare_weights, critical_value_hol, polarize, real_critical_value,
    ComplexQuadraticSymbolExponent, FormComparison, HolomorphicQuadraticForm, QuadraticWeight,
};
use crate::linalg::{
    self, block, block2, checked_inverse, det, eigenvalues, extreme_singular_values, is_singular,
    realified_indices, select, CMat, C64, I,
};
use crate::positivity::{
    lagrangian_positivity, map_positivity, CLagrangianPlane, PositivityStatus, PositivityVerdict,
};
use crate::symplectic::ComplexCanonicalMap;
use crate::Tolerance;

/// Joint quadratic phase `φ(x, y, θ)` in that variable order.
#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneratePhase {
    nx: usize,
    ny: usize,
    ntheta: usize,
    form: HolomorphicQuadraticForm,
}

impl NondegeneratePhase {
    /// Requires the θ-rows of the Hessian to have full rank.
    pub fn new(
        nx: usize,
        ny: usize,
        ntheta: usize,
        form: HolomorphicQuadraticForm,
    ) -> Result<Self> {
        let m = nx + ny + ntheta;
        if form.dim() != m {
            return Err(Error::DimensionMismatch {
                what: "phase dimension",
                expected: m,
                got: form.dim(),
            });
        }
        if ntheta > 0 {
            let rows: Vec<usize> = (nx + ny..m).collect();
            let all: Vec<usize> = (0..m).collect();
            let (smin, smax) = extreme_singular_values(&select(form.matrix(), &rows, &all));
            if is_singular(smin, smax) {
                return Err(Error::RankDeficient { smin });
            }
        }
        Ok(Self {
            nx,
            ny,
            ntheta,
            form,
        })
    }

    /// `(2/i)(Ψ(x,θ) − Ψ₂(y,θ))`, forms over `(x,θ)` and `(y,θ)`.
    pub fn from_kernels(
        psi: &HolomorphicQuadraticForm,
        psi2: &HolomorphicQuadraticForm,
        n: usize,
    ) -> Result<Self> {
        let nt = psi.dim() - n;
        let m = 2 * n + nt;
        let theta: Vec<usize> = (2 * n..m).collect();
        let xs: Vec<usize> = (0..n).chain(theta.iter().copied()).collect();
        let ys: Vec<usize> = (n..2 * n).chain(theta.iter().copied()).collect();
        let joint = psi
            .embed(&xs, m)
            .add(&psi2.embed(&ys, m).scale(C64::new(-1.0, 0.0)))?;
        Self::new(n, n, nt, joint.scale(C64::new(0.0, -2.0)))
    }

    /// `φ(x, θ) − y·θ` for a generating function `φ(x, η)`.
    pub fn from_generating_function(gen: &HolomorphicQuadraticForm) -> Result<Self> {
        let n = gen.dim() / 2;
        let m = 3 * n;
        let xs: Vec<usize> = (0..n).chain(2 * n..3 * n).collect();
        let mut q = gen.embed(&xs, m).matrix().clone();
        for k in 0..n {
            q[(n + k, 2 * n + k)] -= linalg::ONE;
            q[(2 * n + k, n + k)] -= linalg::ONE;
        }
        Self::new(n, n, n, HolomorphicQuadraticForm::new(q)?)
    }

    /// `(2/i)(Ψ₀(x,θ) − Ψ₀(y,θ) + q(y,θ))`, the phase of `Top(e^{2q})`.
    pub fn toeplitz(q: &ComplexQuadraticSymbolExponent, phi0: &QuadraticWeight) -> Result<Self> {
        let n = phi0.n();
        let psi0 = polarize(phi0);
        let m = 3 * n;
        let xs: Vec<usize> = (0..n).chain(2 * n..m).collect();
        let ys: Vec<usize> = (n..m).collect();
        let on_y = psi0.scale(C64::new(-1.0, 0.0)).add(&q.polarized())?;
        let joint = psi0.embed(&xs, m).add(&on_y.embed(&ys, m))?;
        Self::new(n, n, n, joint.scale(C64::new(0.0, -2.0)))
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.ntheta)
    }

    pub fn form(&self) -> &HolomorphicQuadraticForm {
        &self.form
    }

    fn part(&self, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> CMat {
        block(self.form.matrix(), r.start, c.start, r.len(), c.len())
    }

    /// The canonical map `(y, −φ'_y) ↦ (x, φ'_x)` on `{φ'_θ = 0}`.
    pub fn canonical_map(&self) -> Result<ComplexCanonicalMap> {
        if self.nx != self.ny {
            return Err(Error::InvalidInput(
                "canonical map requires equal x and y dimensions".into(),
            ));
        }
        let n = self.nx;
        let nt = self.ntheta;
        let (x, y, t) = (0..n, n..2 * n, 2 * n..2 * n + nt);
        let sys = block2(
            &self.part(t.clone(), x.clone()),
            &self.part(t.clone(), t.clone()),
            &self.part(y.clone(), x.clone()),
            &self.part(y.clone(), t.clone()),
        );
        let sys_inv = checked_inverse(&sys, |smin, smax| Error::SingularMixedBlock { smin, smax })?;
        let rhs = block2(
            &-self.part(t.clone(), y.clone()),
            &CMat::zeros(nt, n),
            &-self.part(y.clone(), y.clone()),
            &-linalg::identity(n),
        );
        // rows: x (n), θ (nt); columns: (y, η)
        let sol = sys_inv * rhs;
        let x_of = block(&sol, 0, 0, n, 2 * n);
        let t_of = block(&sol, n, 0, nt, 2 * n);
        let y_in = linalg::hstack(&linalg::identity(n), &CMat::zeros(n, n));
        let xi_of = self.part(x.clone(), x.clone()) * &x_of
            + self.part(x.clone(), y) * y_in
            + self.part(x, t) * t_of;
        Ok(ComplexCanonicalMap::from_matrix(linalg::vstack(
            &x_of, &xi_of,
        )))
    }
}

/// Critical value of `(y,θ) ↦ −Im φ(x,y,θ) + Φ₂(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageWeight {
    pub weight: QuadraticWeight,
    /// Spectrum of the real Hessian over `(y, θ)`; expected signature `(n+N, n+N, 0)`.
    pub critical_hessian: FormComparison,
}

pub fn image_weight(phase: &NondegeneratePhase, phi2: &QuadraticWeight) -> Result<ImageWeight> {
    let (nx, ny, nt) = phase.dims();
    if phi2.n() != ny {
        return Err(Error::DimensionMismatch {
            what: "image weight: Φ₂ dimension",
            expected: ny,
            got: phi2.n(),
        });
    }
    let m = nx + ny + nt;
    let ys: Vec<usize> = (nx..nx + ny).collect();
    let total = QuadraticWeight::minus_imag_part_of(phase.form()).add(&phi2.embed(&ys, m))?;
    let h = total.realified_hessian();
    let elim = realified_indices(&(nx..m).collect::<Vec<_>>(), m);
    let critical_hessian = FormComparison::from_real_symmetric(
        &linalg::select_real(&h, &elim, &elim),
        Tolerance::default(),
    );
    let reduced = real_critical_value(&h, &elim)?;
    Ok(ImageWeight {
        weight: QuadraticWeight::from_realified_hessian(&reduced)?,
        critical_hessian,
    })
}

/// Kernel `amplitude · e^{2Ψ(x,ȳ)}` with `Ψ` a holomorphic form over `(x, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BergmanKernel {
    pub amplitude: C64,
    pub psi: HolomorphicQuadraticForm,
}

impl BergmanKernel {
    pub fn n(&self) -> usize {
        self.psi.dim() / 2
    }

    /// `K(x, y)` at a pair of points.
    pub fn eval(&self, x: &linalg::CVec, y: &linalg::CVec) -> C64 {
        let w = linalg::CVec::from_iterator(
            x.len() + y.len(),
            x.iter().copied().chain(y.iter().map(|z| z.conj())),
        );
        self.amplitude * (self.psi.eval(&w) * 2.0).exp()
    }
}

/// `a₂ = det(L)/πⁿ` and `Ψ = polarize(Φ)`: the kernel of the orthogonal
/// projection onto `H_Φ`.
pub fn projection_kernel(phi: &QuadraticWeight) -> Result<BergmanKernel> {
    let n = phi.n();
    if !phi.is_strictly_psh(Tolerance::default()) {
        let (smin, smax) = extreme_singular_values(phi.l());
        return Err(Error::SingularLeviForm { smin, smax });
    }
    let a2 = det(phi.l()).re / PI.powi(n as i32);
    Ok(BergmanKernel {
        amplitude: C64::new(a2, 0.0),
        psi: polarize(phi),
    })
}

/// `2Ψ(x,z) = vc_{ỹ,θ}(iφ(x,ỹ,θ) + 2Ψ₂(ỹ,z))`, amplitude `a₂·det(iH)^{-1/2}`.
pub fn kernel_from_phase(
    phase: &NondegeneratePhase,
    phi2: &QuadraticWeight,
) -> Result<BergmanKernel> {
    let (nx, ny, nt) = phase.dims();
    if phi2.n() != ny {
        return Err(Error::DimensionMismatch {
            what: "kernel: Φ₂ dimension",
            expected: ny,
            got: phi2.n(),
        });
    }
    let m = nx + ny + nt + ny;
    let first: Vec<usize> = (0..nx + ny + nt).collect();
    let pair: Vec<usize> = (nx..nx + ny).chain(nx + ny + nt..m).collect();
    let total = phase
        .form()
        .scale(I)
        .embed(&first, m)
        .add(&polarize(phi2).scale(C64::new(2.0, 0.0)).embed(&pair, m))?;
    let elim: Vec<usize> = (nx..nx + ny + nt).collect();
    let cv = critical_value_hol(&total, &elim)?;
    let hess = select(total.matrix(), &elim, &elim).map(|z| z * I);
    let inv_sqrt_det: C64 = eigenvalues(&hess)
        .iter()
        .map(|mu| mu.sqrt().inv())
        .product();
    let a2 = projection_kernel(phi2)?.amplitude;
    Ok(BergmanKernel {
        amplitude: a2 * inv_sqrt_det,
        psi: cv.form.scale(C64::new(0.5, 0.0)),
    })
}

/// `κ_Ψ: (θ, −(2/i)∂_θΨ) ↦ (x, (2/i)∂_xΨ)` for `Ψ` over `(x, θ)`.
pub fn kernel_map(psi: &HolomorphicQuadraticForm) -> Result<ComplexCanonicalMap> {
    let n = psi.dim() / 2;
    let h = psi.matrix();
    let p_xx = block(h, 0, 0, n, n);
    let p_xt = block(h, 0, n, n, n);
    let p_tx = block(h, n, 0, n, n);
    let p_tt = block(h, n, n, n, n);
    let x = checked_inverse(&p_tx, |smin, smax| Error::SingularMixedBlock { smin, smax })?;
    let x_theta = -(&x * &p_tt);
    let x_tau = x.map(|z| z * C64::new(0.0, -0.5));
    let minus_2i = C64::new(0.0, -2.0);
    let xi_theta = (&p_xx * &x_theta + &p_xt).map(|z| z * minus_2i);
    let xi_tau = (&p_xx * &x_tau).map(|z| z * minus_2i);
    Ok(ComplexCanonicalMap::from_matrix(block2(
        &x_theta, &x_tau, &xi_theta, &xi_tau,
    )))
}

/// `κ = κ_Ψ ∘ κ_{Ψ₂}⁻¹`.
pub fn map_from_kernel(
    psi: &HolomorphicQuadraticForm,
    psi2: &HolomorphicQuadraticForm,
) -> Result<ComplexCanonicalMap> {
    Ok(kernel_map(psi)?.compose(&kernel_map(psi2)?.inverse()))
}

/// The kernel weight `Ψ(x,θ)` with `κ_Ψ = M ∘ κ_{Ψ₂}`, `Ψ₂ = polarize(Φ₂)`.
pub fn kernel_from_map(
    m: &ComplexCanonicalMap,
    phi2: &QuadraticWeight,
) -> Result<HolomorphicQuadraticForm> {
    let n = m.n();
    let nm = m.compose(&kernel_map(&polarize(phi2))?);
    let (n11, n12, n21, n22) = (nm.blk(0, 0), nm.blk(0, 1), nm.blk(1, 0), nm.blk(1, 1));
    let n12_inv = checked_inverse(&n12, |smin, smax| Error::SingularMixedBlock { smin, smax })?;
    let half_i = C64::new(0.0, 0.5);
    let psi_xx = (&n22 * &n12_inv).map(|z| z * half_i);
    let psi_xt = (&n21 - &n22 * &n12_inv * &n11).map(|z| z * half_i);
    let psi_tx = n12_inv.map(|z| -z * half_i);
    let psi_tt = (&n12_inv * &n11).map(|z| z * half_i);
    debug_assert!(n == psi_xx.nrows());
    Ok(HolomorphicQuadraticForm::from_symmetric(block2(
        &psi_xx, &psi_xt, &psi_tx, &psi_tt,
    )))
}

/// `F(x,y) = Φ(x) + Φ₂*(y) − 2Re Ψ(x,y)` on ℂ²ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub comparison: FormComparison,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub kernel_dimension: usize,
}

pub fn kernel_domination_check(
    psi: &HolomorphicQuadraticForm,
    phi: &QuadraticWeight,
    phi2: &QuadraticWeight,
    tol: Tolerance,
) -> Result<DominationReport> {
    let sum = phi.direct_sum(&phi2.conjugate());
    let two_re_psi = QuadraticWeight::real_part_of(psi).scale(2.0);
    let comparison = compare_weights(&sum, &two_re_psi, tol)?;
    Ok(DominationReport {
        min_eigenvalue: comparison.min_eigenvalue,
        psd: comparison.psd,
        kernel_dimension: comparison.kernel_dimension(),
        comparison,
    })
}

/// The three equivalent conditions for positivity of `M` via its kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEquivalenceReport {
    pub kernel: HolomorphicQuadraticForm,
    /// Positivity of `M` relative to `(Λ_{Φ₁}, Λ_{Φ₂})`.
    pub map: PositivityVerdict,
    /// Positivity of `Λ_{2Re Ψ(x,y)}` relative to `Λ_{Φ₁(x) + Φ₂*(y)}`.
    pub doubled_plane: PositivityVerdict,
    /// `Φ₁(x) + Φ₂(y) − 2Re Ψ(x,ȳ)`.
    pub domination: FormComparison,
    pub domination_status: PositivityStatus,
    pub all_agree: bool,
}

pub fn kernel_equivalence(
    m: &ComplexCanonicalMap,
    phi1: &QuadraticWeight,
    phi2: &QuadraticWeight,
    tol: Tolerance,
) -> Result<KernelEquivalenceReport> {
    let n = m.n();
    let kernel = kernel_from_map(m, phi2)?;
    let map = map_positivity(m, phi1, phi2, tol)?;

    let q = kernel.matrix();
    let basis = CMat::from_fn(4 * n, 2 * n, |r, c| {
        if r < 2 * n {
            if r == c {
                linalg::ONE
            } else {
                linalg::ZERO
            }
        } else {
            q[(r - 2 * n, c)] * C64::new(0.0, -2.0)
        }
    });
    let plane = CLagrangianPlane::new(basis)?;
    let doubled_plane = lagrangian_positivity(&plane, &phi1.direct_sum(&phi2.conjugate()), tol)?;

    let p = block(q, 0, n, n, n);
    let a = linalg::block_diag(&block(q, 0, 0, n, n), &linalg::conj(&block(q, n, n, n, n)));
    let l = block2(
        &CMat::zeros(n, n),
        &p.scale(2.0),
        &p.adjoint().scale(2.0),
        &CMat::zeros(n, n),
    );
    let w = QuadraticWeight::new(a, l)?;
    let domination = compare_weights(&phi1.direct_sum(phi2), &w, tol)?;
    let domination_status = PositivityStatus::classify(domination.min_eigenvalue, domination.tol);

    let all_agree = map.status == doubled_plane.status && map.status == domination_status;
    Ok(KernelEquivalenceReport {
        kernel,
        map,
        doubled_plane,
        domination,
        domination_status,
        all_agree,
    })
}
