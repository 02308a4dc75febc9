//! Dense complex linear algebra shared by every module.
//!
//! Thin wrappers over nalgebra that fix orderings (ascending eigenvalues,
//! descending singular values) and turn near-singular systems into errors
//! instead of silently producing huge entries.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<C64>;
pub type RVec = DVector<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// A matrix counts as singular when `smin < SINGULAR_RATIO * smax`.
pub const SINGULAR_RATIO: f64 = 1e-8;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `(m + mᵀ)/2`.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.transpose()).scale(0.5)
}

/// `(m + mᴴ)/2`.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn symmetrize_real(m: &RMat) -> RMat {
    (m + m.transpose()).scale(0.5)
}

pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn fro_real(m: &RMat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn singular_values_real(m: &RMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Spectral norm.
pub fn norm2(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn norm2_real(m: &RMat) -> f64 {
    singular_values_real(m).first().copied().unwrap_or(0.0)
}

/// `(smin, smax)` of a matrix.
pub fn extreme_singular_values(m: &CMat) -> (f64, f64) {
    let s = singular_values(m);
    match (s.last(), s.first()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    }
}

pub fn extreme_singular_values_real(m: &RMat) -> (f64, f64) {
    let s = singular_values_real(m);
    match (s.last(), s.first()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    }
}

#[inline]
pub fn is_singular(smin: f64, smax: f64) -> bool {
    smax == 0.0 || smin < SINGULAR_RATIO * smax
}

/// Inverse of a square complex matrix, or `on_singular(smin, smax)`.
pub fn checked_inverse(m: &CMat, on_singular: impl Fn(f64, f64) -> Error) -> Result<CMat> {
    let (smin, smax) = extreme_singular_values(m);
    if is_singular(smin, smax) {
        return Err(on_singular(smin, smax));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| on_singular(smin, smax))
}

pub fn checked_inverse_real(m: &RMat, on_singular: impl Fn(f64, f64) -> Error) -> Result<RMat> {
    let (smin, smax) = extreme_singular_values_real(m);
    if is_singular(smin, smax) {
        return Err(on_singular(smin, smax));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| on_singular(smin, smax))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is hermitized first; columns of the returned matrix are the
/// matching unit eigenvectors.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn eigh_real(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), RMat::zeros(0, 0));
    }
    let eig = symmetrize_real(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a general complex matrix (complex Schur form).
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.is_empty() {
        return Vec::new();
    }
    let (_, t) = m.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

pub fn det(m: &CMat) -> C64 {
    if m.is_empty() {
        return ONE;
    }
    m.clone().lu().determinant()
}

/// Copy of a rectangular block.
pub fn block(m: &CMat, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
    m.view((r0, c0), (nr, nc)).into_owned()
}

pub fn block_real(m: &RMat, r0: usize, c0: usize, nr: usize, nc: usize) -> RMat {
    m.view((r0, c0), (nr, nc)).into_owned()
}

/// `[[a, b], [c, d]]`.
pub fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = CMat::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

/// `[a; b]` (same column count).
pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// `[a, b]` (same row count).
pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Block-diagonal `diag(a, b)`.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    block2(
        a,
        &CMat::zeros(a.nrows(), b.ncols()),
        &CMat::zeros(b.nrows(), a.ncols()),
        b,
    )
}

/// Select rows and columns by index, in the given order.
pub fn select(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn select_real(m: &RMat, rows: &[usize], cols: &[usize]) -> RMat {
    RMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// The standard symplectic matrix `[[0, I], [-I, 0]]` of size 2n.
pub fn jmat(n: usize) -> CMat {
    let mut j = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = ONE;
        j[(n + k, k)] = -ONE;
    }
    j
}

/// `U` with `(x, x̄) = U (Re x, Im x)`, i.e. `[[I, iI], [I, -iI]]`.
pub fn xxbar_from_real(n: usize) -> CMat {
    let id = identity(n);
    block2(&id, &id.scale(1.0).map(|z| z * I), &id, &id.map(|z| -z * I))
}

/// `U⁻¹ = ½ [[I, I], [-iI, iI]]`.
pub fn real_from_xxbar(n: usize) -> CMat {
    let id = identity(n);
    block2(&id, &id, &id.map(|z| -z * I), &id.map(|z| z * I)).scale(0.5)
}

/// Hessian over `(Re x, Im x)` of `f = ½ [x; x̄]ᵀ W [x; x̄]`.
pub fn xxbar_hessian_to_real(w: &CMat) -> CMat {
    let u = xxbar_from_real(w.nrows() / 2);
    u.transpose() * w * u
}

/// Inverse of [`xxbar_hessian_to_real`].
pub fn real_hessian_to_xxbar(h: &CMat) -> CMat {
    let u_inv = real_from_xxbar(h.nrows() / 2);
    u_inv.transpose() * h * u_inv
}

pub fn realify_vec(x: &CVec) -> RVec {
    let n = x.len();
    RVec::from_fn(2 * n, |k, _| if k < n { x[k].re } else { x[k - n].im })
}

pub fn complexify_vec(v: &RVec) -> CVec {
    let n = v.len() / 2;
    CVec::from_fn(n, |k, _| C64::new(v[k], v[n + k]))
}

/// Realified indices of a set of complex coordinates among `m` of them.
pub fn realified_indices(complex_indices: &[usize], m: usize) -> Vec<usize> {
    complex_indices
        .iter()
        .copied()
        .chain(complex_indices.iter().map(|&k| k + m))
        .collect()
}

/// Complement of `idx` in `0..m`, ascending.
pub fn complement(idx: &[usize], m: usize) -> Vec<usize> {
    (0..m).filter(|k| !idx.contains(k)).collect()
}

/// Bilinear `xᵀ M y` (no conjugation).
pub fn bilinear(x: &CVec, m: &CMat, y: &CVec) -> C64 {
    (x.transpose() * m * y)[(0, 0)]
}

/// Sesquilinear `xᴴ M y`.
pub fn sesquilinear(x: &CVec, m: &CMat, y: &CVec) -> C64 {
    (x.adjoint() * m * y)[(0, 0)]
}

/// Principal logarithm of the determinant of a matrix whose eigenvalues all
/// lie off the closed negative real axis, as a sum of per-eigenvalue logs.
pub fn log_det_by_eigenvalues(m: &CMat) -> C64 {
    eigenvalues(m).iter().map(|z| z.ln()).sum()
}
