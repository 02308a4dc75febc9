//! The complex symplectic space ℂ²ⁿ, weights as real Lagrangians `Λ_Φ`,
//! and the maps between them.

mod cayley;
mod map;
mod weights;

pub use cayley::{cayley_map, cayley_phase, fundamental_matrix};
pub use map::{symplectic_residual, AntilinearInvolution, ComplexCanonicalMap, SymplecticContext};
pub use weights::{
    generating_function, hermitian_b, involution_of, linear_change, map_from_generating_function,
    push_weight, reduce_to_model, shear_map, HermitianFormOnPhase, ModelReduction,
};
