//! Quantizer design for binary-input continuous-output channels.
//!
//! Discretizes the channel output into posterior-sorted atoms, then finds the
//! N-level quantizer maximizing `beta * I(X;Z) - C(p_Z)` for a separable
//! output penalty `C`. The optimum is always attained by interval cells in
//! posterior space, so a dynamic program over the sorted grid is globally
//! optimal; brute-force oracles verify this on small instances.

pub mod channel;
pub mod constraints;
pub mod dp;
pub mod error;
pub mod measure;
pub mod oracle;
pub mod threshold;

pub use channel::{
    compute_posterior, discretize, eval_density, Atom, BinaryPrior, ChannelSpec, DensitySpec,
    PosteriorGrid,
};
pub use constraints::{assemble_objective, output_entropy, Constraint, Objective, PenaltyFn};
pub use dp::{interval_cost, solve, solve_with_permutations, sweep_beta, ConvexCellQuantizer, SolveResult};
pub use error::{Error, Result};
pub use measure::{
    binary_entropy, cell_centroid, cell_distortion, kl_divergence, mutual_information_xy,
    mutual_information_xz, total_distortion, verify_identity, CellStats, PrefixSums,
};
pub use oracle::{
    brute_force_solve, centroid_numeric_argmin, rearrange_to_convex, GeneralQuantizer, Rearranged,
};
pub use threshold::{
    check_single_threshold, map_r_threshold_to_y, scan_scalar_threshold, ScalarThreshold,
};
