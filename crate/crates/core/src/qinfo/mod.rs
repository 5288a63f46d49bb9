//! States, entropies, divergences, purification and Uhlmann alignment.
//!
//! Every function here is a pure function of its arguments. Entropies are in
//! nats.

mod divergence;
mod entropy;
mod purify;
pub mod random;
mod state;

pub use divergence::{
    fidelity, fidelity_pure, relative_entropy, sandwiched_renyi, trace_distance, trace_norm_distance, Divergence,
    KERNEL_WEIGHT_TOL, SUPPORT_TOL,
};
pub use entropy::{conditional_entropy, entropy_vn, marginal_entropy, mutual_information, shannon};
pub use purify::{purify, purify_into, uhlmann_align, Alignment, RANK_TOL};
pub use state::{reduce, Bipartition, DensityMatrix, PureState, Reduce};

/// Allowed deviation of a state's squared norm from 1.
pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are rounding noise; below is an error.
pub const EIGEN_CLAMP: f64 = 1e-10;
