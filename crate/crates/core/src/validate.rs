//! Truncated matrices of `Top(e^{2q})` on `H_{|x|²/2}(ℂ)`.
//!
//! Entries are taken in the orthonormal basis `e_k = z^k/√(π k!)`, either
//! from Gaussian moments (analytic) or by polar Gauss–Legendre quadrature.
//! Restricted to one complex dimension.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::forms::ComplexQuadraticSymbolExponent;
use crate::linalg::{self, CMat, C64, ZERO};

pub const MAX_ORDER: usize = 200;
pub const QUADRATURE_LIMIT: f64 = 1e-8;
const TAIL: f64 = 1e-14;
const PANEL_ORDER: usize = 16;
const MAX_REFINEMENTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub order: usize,
    pub entries: CMat,
    pub method: Method,
    /// Relative change under node doubling; `None` on the analytic path.
    pub error_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub operator_norm: f64,
    pub singular_values: Vec<f64>,
    pub trace_partial: C64,
    pub unitary_defect: f64,
    /// `exp` of the least-squares slope of `ln s_j` against `j`.
    pub decay_fit: f64,
}

/// `min_θ (1 − 2Re q(e^{iθ}))`; positive exactly when `e^{2q}` is integrable
/// against `e^{−|y|²}`.
fn integrability_margin(q: &ComplexQuadraticSymbolExponent) -> f64 {
    let q1 = q.q1()[(0, 0)];
    let q2 = q.q2()[(0, 0)];
    let q3 = q.q3()[(0, 0)];
    1.0 - 2.0 * q2.re - 2.0 * (q1 + q3.conj()).norm()
}

fn check(q: &ComplexQuadraticSymbolExponent, order: usize) -> Result<f64> {
    if q.n() != 1 {
        return Err(Error::DimensionMismatch {
            what: "truncation oracle dimension",
            expected: 1,
            got: q.n(),
        });
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "truncation order must lie in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let c = integrability_margin(q);
    if c <= 0.0 {
        return Err(Error::DivergentIntegral { max_eigenvalue: -c });
    }
    Ok(c)
}

/// Analytic path when `q` is radial, quadrature otherwise.
pub fn truncated_matrix(
    q: &ComplexQuadraticSymbolExponent,
    order: usize,
) -> Result<TruncatedOperator> {
    let method = if q.is_radial(0.0) {
        Method::Analytic
    } else {
        Method::Quadrature
    };
    truncated_matrix_with(q, order, method)
}

pub fn truncated_matrix_with(
    q: &ComplexQuadraticSymbolExponent,
    order: usize,
    method: Method,
) -> Result<TruncatedOperator> {
    let c = check(q, order)?;
    match method {
        Method::Analytic => Ok(TruncatedOperator {
            order,
            entries: moment_matrix(q, order)?,
            method,
            error_estimate: None,
        }),
        Method::Quadrature => {
            let (entries, estimate) = quadrature_gram(q, c, order)?;
            Ok(TruncatedOperator {
                order,
                entries,
                method,
                error_estimate: Some(estimate),
            })
        }
    }
}

fn log_factorials(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    for i in 1..=m {
        out[i] = out[i - 1] + (i as f64).ln();
    }
    out
}

/// Entries from `∫ y^a ȳ^b e^{−β|y|²} = δ_ab π a!/β^{a+1}` after expanding
/// `e^{2Q1y²}` and `e^{2Q3ȳ²}`.
fn moment_matrix(q: &ComplexQuadraticSymbolExponent, order: usize) -> Result<CMat> {
    let a1 = q.q1()[(0, 0)] * 2.0;
    let a3 = q.q3()[(0, 0)] * 2.0;
    let beta = C64::new(1.0, 0.0) - q.q2()[(0, 0)] * 2.0;
    let mut t = CMat::zeros(order, order);
    if a1.norm() == 0.0 && a3.norm() == 0.0 {
        for k in 0..order {
            t[(k, k)] = beta.powi(-(k as i32 + 1));
        }
        return Ok(t);
    }
    // Successive terms shrink by a factor tending to 16|Q1Q3|/|β|².
    let ratio = 4.0 * (a1 * a3).norm() / beta.norm_sqr();
    if ratio >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "moment series diverges (term ratio {ratio:e}); use quadrature"
        )));
    }
    let max_terms = 20_000;
    let lf = log_factorials(2 * order + 2 * max_terms + 4);
    let (ln_a1, ln_a3, ln_beta) = (a1.ln(), a3.ln(), beta.ln());
    for j in 0..order {
        for k in 0..order {
            if (j + k) % 2 == 1 {
                continue;
            }
            // k + 2m = j + 2l
            let m0 = j.saturating_sub(k) / 2;
            let mut sum = ZERO;
            let mut previous = f64::INFINITY;
            for m in m0..m0 + max_terms {
                let l = (k + 2 * m - j) / 2;
                if (m > 0 && a1.norm() == 0.0) || (l > 0 && a3.norm() == 0.0) {
                    break;
                }
                let p = k + 2 * m;
                let mut ln_term = C64::new(lf[p] - lf[m] - lf[l] - 0.5 * (lf[j] + lf[k]), 0.0)
                    - ln_beta * (p as f64 + 1.0);
                if m > 0 {
                    ln_term += ln_a1 * m as f64;
                }
                if l > 0 {
                    ln_term += ln_a3 * l as f64;
                }
                let term = ln_term.exp();
                sum += term;
                let size = term.norm();
                if size < previous && size <= 1e-17 * sum.norm().max(1e-300) {
                    break;
                }
                previous = size;
            }
            t[(j, k)] = sum;
        }
    }
    Ok(t)
}

/// Radius beyond which every basis integrand has tail below `TAIL`.
fn radius_cut(c: f64, nbasis: usize) -> f64 {
    let lf = log_factorials(nbasis);
    let mut r = (2.0 * nbasis as f64 / c).sqrt() + 1.0;
    loop {
        let worst = (0..nbasis)
            .map(|k| 2.0 * k as f64 * r.ln() - c * r * r - c.ln() - lf[k])
            .fold(f64::NEG_INFINITY, f64::max);
        if worst < TAIL.ln() {
            return r;
        }
        r += 0.25;
    }
}

fn panel_nodes(rule: &GaussLegendre, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for &(x, w) in rule.as_node_weight_pairs() {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// `Eᴴ D E` with `E[ν, k] = e_k(y_ν)` and `D` the weighted symbol at the nodes.
fn gram_at(
    q: &ComplexQuadraticSymbolExponent,
    rule: &GaussLegendre,
    radius: f64,
    r_panels: usize,
    t_panels: usize,
    nbasis: usize,
) -> CMat {
    let q1 = q.q1()[(0, 0)] * 2.0;
    let q0 = q.q2()[(0, 0)] * 2.0 - 1.0;
    let q3 = q.q3()[(0, 0)] * 2.0;
    let radial = panel_nodes(rule, 0.0, radius, r_panels);
    let angular = panel_nodes(rule, 0.0, 2.0 * PI, t_panels);
    let inv_sqrt_k: Vec<f64> = (0..nbasis)
        .map(|k| 1.0 / (k.max(1) as f64).sqrt())
        .collect();
    let mut t = CMat::zeros(nbasis, nbasis);
    let mut basis = vec![ZERO; nbasis];
    let mut weighted = vec![ZERO; nbasis];
    for &(theta, wt) in &angular {
        let u = C64::from_polar(1.0, theta);
        let h = q1 * u * u + q0 + q3 * u.conj() * u.conj();
        for &(r, wr) in &radial {
            let y = u * r;
            let d = (h * (r * r)).exp() * (wr * wt * r);
            basis[0] = C64::new(1.0 / PI.sqrt(), 0.0);
            for k in 1..nbasis {
                basis[k] = basis[k - 1] * y * inv_sqrt_k[k];
            }
            for k in 0..nbasis {
                weighted[k] = basis[k] * d;
            }
            for j in 0..nbasis {
                let ej = basis[j].conj();
                for k in 0..nbasis {
                    t[(j, k)] += ej * weighted[k];
                }
            }
        }
    }
    t
}

fn quadrature_gram(
    q: &ComplexQuadraticSymbolExponent,
    c: f64,
    nbasis: usize,
) -> Result<(CMat, f64)> {
    let rule = GaussLegendre::new(PANEL_ORDER).expect("panel order is at least 2");
    let radius = radius_cut(c, nbasis);
    let mut r_panels = (radius / 1.5).ceil() as usize;
    let mut t_panels = 2 + nbasis / 8;
    let mut coarse = gram_at(q, &rule, radius, r_panels, t_panels, nbasis);
    let mut estimate = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        r_panels *= 2;
        t_panels *= 2;
        let fine = gram_at(q, &rule, radius, r_panels, t_panels, nbasis);
        let scale = fine.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
        estimate = (&fine - &coarse)
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()))
            / scale;
        if estimate <= QUADRATURE_LIMIT {
            return Ok((fine, estimate));
        }
        coarse = fine;
    }
    Err(Error::QuadratureFailure {
        estimate,
        limit: QUADRATURE_LIMIT,
    })
}

pub fn spectral_report(t: &TruncatedOperator) -> SpectralReport {
    let m = &t.entries;
    let singular_values = linalg::singular_values(m);
    let operator_norm = singular_values.first().copied().unwrap_or(0.0);
    let trace_partial = m.diagonal().iter().copied().fold(ZERO, |a, b| a + b);
    let unitary_defect = linalg::norm2(&(m.adjoint() * m - linalg::identity(m.nrows())));
    let pts: Vec<(f64, f64)> = singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > 1e-300)
        .map(|(j, s)| (j as f64, s.ln()))
        .collect();
    let decay_fit = if pts.len() < 2 {
        f64::NAN
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxy / sxx).exp()
    };
    SpectralReport {
        operator_norm,
        singular_values,
        trace_partial,
        unitary_defect,
        decay_fit,
    }
}

/// Truncated Bergman projection of `H_{|x|²/2}(ℂ)` with kernel `a₂ e^{x·ȳ}`.
///
/// The kernel is expanded as `π Σ_m e_m(x) conj(e_m(y))` over `m < order + 10`
/// and the remaining inner products are computed by quadrature. Returns
/// `‖P² − P‖ + ‖P − I‖`.
pub fn projection_idempotence(order: usize, a2: f64) -> Result<f64> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "truncation order must lie in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let m = order + 10;
    let zero = ComplexQuadraticSymbolExponent::zero(1);
    let (g, _) = quadrature_gram(&zero, 1.0, m)?;
    let left = linalg::block(&g, 0, 0, order, m);
    let right = linalg::block(&g, 0, 0, m, order);
    let p = (left * right).map(|z| z * (a2 * PI));
    let id = linalg::identity(order);
    Ok(linalg::norm2(&(&p * &p - &p)) + linalg::norm2(&(p - id)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn symbol(q1: C64, q2: C64, q3: C64) -> ComplexQuadraticSymbolExponent {
        ComplexQuadraticSymbolExponent::new(
            CMat::from_element(1, 1, q1),
            CMat::from_element(1, 1, q2),
            CMat::from_element(1, 1, q3),
        )
        .unwrap()
    }

    #[test]
    fn zero_symbol_is_identity() {
        let t = truncated_matrix(&ComplexQuadraticSymbolExponent::zero(1), 5).unwrap();
        assert_eq!(t.method, Method::Analytic);
        assert!(linalg::fro(&(t.entries - linalg::identity(5))) < 1e-15);
    }

    #[test]
    fn radial_minus_one() {
        let q = ComplexQuadraticSymbolExponent::radial(1, c64(-0.5, 0.0));
        let t = truncated_matrix(&q, 5).unwrap();
        for k in 0..5 {
            assert!((t.entries[(k, k)].re - 0.5f64.powi(k as i32 + 1)).abs() < 1e-16);
        }
        let quad = truncated_matrix_with(&q, 5, Method::Quadrature).unwrap();
        assert!(linalg::fro(&(quad.entries - t.entries)) < 1e-10);
    }

    #[test]
    fn dual_paths_agree_off_diagonal() {
        let q = symbol(c64(0.05, 0.02), c64(-0.3, 0.1), c64(-0.03, 0.04));
        let a = truncated_matrix_with(&q, 8, Method::Analytic).unwrap();
        let b = truncated_matrix(&q, 8).unwrap();
        assert_eq!(b.method, Method::Quadrature);
        let worst = (&a.entries - &b.entries)
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        assert!(worst < 1e-9, "{worst:e}");
        assert!(a.entries[(2, 0)].norm() > 1e-3);
    }

    #[test]
    fn divergent_symbol() {
        let q = ComplexQuadraticSymbolExponent::radial(1, c64(0.6, 0.0));
        assert!(matches!(
            truncated_matrix(&q, 4),
            Err(Error::DivergentIntegral { .. })
        ));
    }

    #[test]
    fn report_on_geometric_diagonal() {
        let q = ComplexQuadraticSymbolExponent::radial(1, c64(-0.5, 0.0));
        let rep = spectral_report(&truncated_matrix(&q, 20).unwrap());
        assert!((rep.decay_fit - 0.5).abs() < 1e-12);
        assert!((rep.operator_norm - 0.5).abs() < 1e-15);
        assert!((rep.trace_partial.re - (1.0 - 0.5f64.powi(20))).abs() < 1e-14);
    }

    #[test]
    fn projection_constant() {
        assert!(projection_idempotence(10, 1.0 / PI).unwrap() < 1e-8);
        assert!(projection_idempotence(1, 1.0 / PI).unwrap() < 1e-12);
        assert!(projection_idempotence(10, 1.0).unwrap() > 1.0);
    }
}
