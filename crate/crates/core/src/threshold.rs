//! Two-level quantizers by scalar-threshold search in posterior space,
//! the single-threshold sufficiency test, and the mapping from a posterior
//! threshold back to output-line cuts.

use serde::{Deserialize, Serialize};

use crate::channel::{eval_density, ChannelSpec, PosteriorGrid};
use crate::constraints::Constraint;
use crate::dp::{self, SolveResult};
use crate::error::{Error, Result};

/// Best two-level threshold in posterior space and its preimage on the
/// output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarThreshold {
    /// Threshold a* in (0, 1): the left cell takes atoms with r <= a*.
    pub a_star: f64,
    /// Output values y where the posterior crosses a*.
    pub y_cuts: Vec<f64>,
    /// True when the cut set is a single output threshold.
    pub single_threshold: bool,
}

/// Exhaustive scan over candidate thresholds a in {eps, 2 eps, ...}.
///
/// Each candidate partitions the grid at the first atom with r > a; the best
/// objective wins, ties to the smallest a. Agrees with the N=2 dynamic
/// program up to the scan resolution.
pub fn scan_scalar_threshold(
    grid: &PosteriorGrid,
    beta: f64,
    constraint: &Constraint,
    epsilon: f64,
) -> Result<(ScalarThreshold, SolveResult)> {
    if constraint.n_terms() != 2 {
        return Err(Error::TermCountMismatch {
            got: constraint.n_terms(),
            expected: 2,
        });
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be in (0, 0.5), got {epsilon}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let atoms = grid.atoms();

    let mut best_a = epsilon;
    let mut best_obj = f64::NEG_INFINITY;
    let mut best_cut = 0usize;
    let steps = (1.0 / epsilon).ceil() as usize;
    for k in 1..steps {
        let a = k as f64 * epsilon;
        if a >= 1.0 {
            break;
        }
        let cut = atoms.partition_point(|at| at.r <= a);
        let res = dp::build_result(grid, vec![0, cut, atoms.len()], beta, constraint)?;
        if res.objective > best_obj {
            best_obj = res.objective;
            best_a = a;
            best_cut = cut;
        }
    }
    let result = dp::build_result(grid, vec![0, best_cut, atoms.len()], beta, constraint)?;
    let y_cuts = map_r_threshold_to_y(grid, best_a)?;
    let single_threshold = y_cuts.len() == 1;
    Ok((
        ScalarThreshold { a_star: best_a, y_cuts, single_threshold },
        result,
    ))
}

/// Tests the single-threshold sufficiency condition: the likelihood ratio
/// phi2(y) / phi1(y) must be strictly monotone where both densities are
/// positive.
///
/// The ratio is probed on a uniform grid over `[y_min, y_max]`. Flat runs
/// (successive differences within 1e-12) are tolerated only at the ends of
/// the probe range, where a dominated tail pins the ratio; any interior flat
/// stretch or sign change yields false.
pub fn check_single_threshold(
    channel: &ChannelSpec,
    y_min: f64,
    y_max: f64,
    probe_points: usize,
) -> Result<bool> {
    if probe_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 probe points, got {probe_points}"
        )));
    }
    if !(y_min < y_max) {
        return Err(Error::InvalidArgument(format!(
            "need y_min < y_max, got [{y_min}, {y_max}]"
        )));
    }
    let mut ratios = Vec::with_capacity(probe_points);
    for k in 0..probe_points {
        let y = y_min + (y_max - y_min) * k as f64 / (probe_points - 1) as f64;
        let f1 = match eval_density(&channel.phi1, y) {
            Ok(v) => v,
            Err(Error::OutOfSupport { .. }) => continue,
            Err(e) => return Err(e),
        };
        let f2 = match eval_density(&channel.phi2, y) {
            Ok(v) => v,
            Err(Error::OutOfSupport { .. }) => continue,
            Err(e) => return Err(e),
        };
        if f1 <= 0.0 {
            // ratio undefined, point excluded
            continue;
        }
        ratios.push(f2 / f1);
    }
    if ratios.len() < 3 {
        return Ok(false);
    }

    const TOL: f64 = 1e-12;
    // signs of successive differences: +1, -1, or 0 (flat)
    let signs: Vec<i8> = ratios
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            if d > TOL {
                1
            } else if d < -TOL {
                -1
            } else {
                0
            }
        })
        .collect();
    let has_pos = signs.contains(&1);
    let has_neg = signs.contains(&-1);
    if has_pos == has_neg {
        // mixed directions, or entirely flat
        return Ok(false);
    }
    // flats allowed only as a prefix and/or suffix run
    let first_strict = signs.iter().position(|&s| s != 0).unwrap();
    let last_strict = signs.iter().rposition(|&s| s != 0).unwrap();
    Ok(signs[first_strict..=last_strict].iter().all(|&s| s != 0))
}

/// Maps a posterior threshold back to output-line cuts: scans atoms in
/// y-order and emits the midpoint y between each adjacent pair that
/// straddles `a_star` under the rule "left cell iff r <= a".
pub fn map_r_threshold_to_y(grid: &PosteriorGrid, a_star: f64) -> Result<Vec<f64>> {
    if !(a_star > 0.0 && a_star < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be in (0, 1), got {a_star}"
        )));
    }
    let in_y = grid.atoms_in_y_order();
    let mut cuts = Vec::new();
    for w in in_y.windows(2) {
        if (w[0].r <= a_star) != (w[1].r <= a_star) {
            cuts.push(0.5 * (w[0].y + w[1].y));
        }
    }
    Ok(cuts)
}
