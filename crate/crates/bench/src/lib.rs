//! Shared fixtures for the solver benchmarks.

use chanq::{discretize, BinaryPrior, ChannelSpec, DensitySpec, PosteriorGrid};

/// Symmetric two-level-input AWGN channel discretized to `m` atoms.
pub fn biawgn_grid(m: usize) -> PosteriorGrid {
    let ch = ChannelSpec::new(
        BinaryPrior::uniform(),
        DensitySpec::Gaussian { mean: 1.0, stddev: 1.0 },
        DensitySpec::Gaussian { mean: -1.0, stddev: 1.0 },
    )
    .unwrap();
    discretize(&ch, -7.0, 7.0, m).unwrap()
}
