use thiserror::Error;

/// Failures of the numerical pipeline.
///
/// Singular systems carry the offending singular value together with the
/// largest one of the same matrix, so callers can judge how close to the
/// threshold the input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Levi form is singular (smallest singular value {smin:e}, largest {smax:e})")]
    SingularLeviForm { smin: f64, smax: f64 },

    #[error("Hessian block over eliminated variables is singular (smallest singular value {smin:e}, largest {smax:e})")]
    SingularHessianBlock { smin: f64, smax: f64 },

    #[error("real Hessian over critical variables is degenerate (smallest singular value {smin:e}, largest {smax:e})")]
    DegenerateCriticalPoint { smin: f64, smax: f64 },

    #[error(
        "mixed Hessian block is singular (smallest singular value {smin:e}, largest {smax:e})"
    )]
    SingularMixedBlock { smin: f64, smax: f64 },

    #[error("image plane is not transversal to the fiber (smallest singular value {smin:e}, largest {smax:e})")]
    FiberNotTransversal { smin: f64, smax: f64 },

    #[error("no generating function: (x, eta) projection is singular (smallest singular value {smin:e}, largest {smax:e})")]
    NoGeneratingFunction { smin: f64, smax: f64 },

    #[error("fundamental matrix has eigenvalue {eigenvalue} at distance {distance:e} from +-2")]
    EigenvalueTwo {
        eigenvalue: num_complex::Complex64,
        distance: f64,
    },

    #[error("map has eigenvalue -1 (distance {distance:e}); Cayley phase undefined")]
    CayleySingular { distance: f64 },

    #[error("plane is not Lagrangian (|B^T J B| = {residual:e})")]
    NotLagrangian { residual: f64 },

    #[error("basis does not have full column rank (smallest singular value {smin:e})")]
    RankDeficient { smin: f64 },

    #[error("map is not symplectic (|M^T J M - J| = {residual:e})")]
    NotSymplectic { residual: f64 },

    #[error("Gaussian integral diverges: real part of the Hessian has eigenvalue {max_eigenvalue:e} >= 0")]
    DivergentIntegral { max_eigenvalue: f64 },

    #[error("square-root branch tracking failed at t = {t}: determinant modulus {modulus:e}")]
    BranchTrackingFailure { t: f64, modulus: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds {limit:e}")]
    QuadratureFailure { estimate: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
