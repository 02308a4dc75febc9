use crate::error::{Error, Result};
use crate::linalg::{self, block, block2, fro, jmat, CMat, CVec, C64};
use crate::Tolerance;

/// The complex symplectic structure on ℂ²ⁿ.
///
/// `σ((x,ξ),(y,η)) = ξ·y − x·η`, `J = [[0, I], [−I, 0]]`, and
/// `Γ(y,η) = (ȳ, −η̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticContext {
    n: usize,
    j: CMat,
}

impl SymplecticContext {
    pub fn new(n: usize) -> Self {
        Self { n, j: jmat(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    /// `σ(t, s) = ⟨Jt, s⟩` (bilinear).
    pub fn sigma(&self, t: &CVec, s: &CVec) -> C64 {
        ((&self.j * t).transpose() * s)[(0, 0)]
    }

    pub fn gamma(&self, t: &CVec) -> CVec {
        let n = self.n;
        CVec::from_fn(2 * n, |k, _| if k < n { t[k].conj() } else { -t[k].conj() })
    }

    /// `Γ` as an antilinear involution.
    pub fn gamma_involution(&self) -> AntilinearInvolution {
        let n = self.n;
        let k = CMat::from_fn(2 * n, 2 * n, |r, c| match (r == c, r < n) {
            (true, true) => linalg::ONE,
            (true, false) => -linalg::ONE,
            _ => linalg::ZERO,
        });
        AntilinearInvolution { k }
    }
}

/// Complex linear canonical transformation, stored as the 2n×2n matrix
/// sending `(y, η)` to `(x, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCanonicalMap {
    m: CMat,
}

impl ComplexCanonicalMap {
    /// Rejects matrices with `‖MᵀJM − J‖ > 1e-9·max(1, ‖M‖²)`.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "canonical map must be square of even size".into(),
            ));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("canonical map must be finite".into()));
        }
        let residual = symplectic_residual(&m);
        let norm = linalg::norm2(&m);
        if residual > Tolerance::default().scaled(norm * norm) {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self { m })
    }

    /// Wraps a matrix known to be symplectic up to rounding.
    pub(crate) fn from_matrix(m: CMat) -> Self {
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: linalg::identity(2 * n),
        }
    }

    /// `(y, η) ↦ (s·y, η/s)` in every coordinate.
    pub fn dilation(n: usize, s: C64) -> Self {
        let mut m = CMat::zeros(2 * n, 2 * n);
        for k in 0..n {
            m[(k, k)] = s;
            m[(n + k, n + k)] = s.inv();
        }
        Self { m }
    }

    pub fn n(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Block `(r, c)` of the 2×2 block decomposition, `r, c ∈ {0, 1}`.
    pub fn blk(&self, r: usize, c: usize) -> CMat {
        let n = self.n();
        block(&self.m, r * n, c * n, n, n)
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.m * v
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: &self.m * &other.m,
        }
    }

    /// `M⁻¹ = −J Mᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = jmat(self.n());
        Self {
            m: -(&j * self.m.transpose() * &j),
        }
    }

    pub fn symplectic_residual(&self) -> f64 {
        symplectic_residual(&self.m)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        fro(&(&self.m - &other.m))
    }
}

pub fn symplectic_residual(m: &CMat) -> f64 {
    let j = jmat(m.nrows() / 2);
    fro(&(m.transpose() * &j * m - &j))
}

/// Antilinear map `ρ ↦ K·conj(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearInvolution {
    pub(crate) k: CMat,
}

impl AntilinearInvolution {
    pub fn new(k: CMat) -> Self {
        Self { k }
    }

    pub fn matrix(&self) -> &CMat {
        &self.k
    }

    pub fn apply(&self, rho: &CVec) -> CVec {
        &self.k * rho.map(|z| z.conj())
    }

    /// `self ∘ other` is linear, with matrix `K₁·conj(K₂)`.
    pub fn compose(&self, other: &Self) -> CMat {
        &self.k * linalg::conj(&other.k)
    }

    /// `self ∘ M`, antilinear with matrix `K·conj(M)`.
    pub fn after_linear(&self, m: &CMat) -> Self {
        Self {
            k: &self.k * linalg::conj(m),
        }
    }

    /// `M ∘ self`, antilinear with matrix `M·K`.
    pub fn before_linear(&self, m: &CMat) -> Self {
        Self { k: m * &self.k }
    }

    /// `‖K·conj(K) − I‖`.
    pub fn involution_defect(&self) -> f64 {
        fro(&(self.compose(self) - linalg::identity(self.k.nrows())))
    }
}

/// `κ_A = [[I, 0], [(2/i)A, I]]` built from a symmetric block.
pub(crate) fn lower_shear(s: &CMat) -> CMat {
    let n = s.nrows();
    block2(
        &linalg::identity(n),
        &CMat::zeros(n, n),
        s,
        &linalg::identity(n),
    )
}
