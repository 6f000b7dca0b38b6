//! Independent brute-force verifiers: exhaustive labeling search, numeric
//! centroid argmin, and the rearrangement of an arbitrary two-cell quantizer
//! into a convex-cell one with the same cell masses and no higher distortion.
//!
//! These deliberately avoid the prefix-sum and DP code paths they are used
//! to check.

use serde::{Deserialize, Serialize};

use crate::channel::PosteriorGrid;
use crate::constraints::Constraint;
use crate::dp::ConvexCellQuantizer;
use crate::error::{Error, Result};
use crate::measure::{binary_entropy, kl_divergence};

const LABELING_GUARD: u64 = 10_000_000;

/// Arbitrary quantizer: one cell label per atom, in sorted-grid order.
/// Cells need not be intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralQuantizer {
    pub labels: Vec<usize>,
}

impl GeneralQuantizer {
    pub fn new(labels: Vec<usize>, n_cells: usize) -> Result<Self> {
        if let Some(&l) = labels.iter().find(|&&l| l >= n_cells) {
            return Err(Error::InvalidArgument(format!(
                "label {l} out of range for {n_cells} cells"
            )));
        }
        Ok(Self { labels })
    }
}

/// Objective beta * I(X;Z) - C(p_Z) of an arbitrary labeling, computed
/// directly from the per-cell joint masses.
pub fn evaluate_labeling(
    grid: &PosteriorGrid,
    labels: &[usize],
    n_cells: usize,
    beta: f64,
    constraint: &Constraint,
) -> Result<f64> {
    if labels.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "labeling covers {} atoms, grid has {}",
            labels.len(),
            grid.len()
        )));
    }
    let mut mass = vec![0.0f64; n_cells];
    let mut moment = vec![0.0f64; n_cells];
    for (atom, &l) in grid.atoms().iter().zip(labels) {
        mass[l] += atom.mass;
        moment[l] += atom.mass * atom.r;
    }
    let p1: f64 = moment.iter().sum();
    let mut cond = 0.0;
    for i in 0..n_cells {
        if mass[i] > 0.0 {
            cond += mass[i] * binary_entropy((moment[i] / mass[i]).clamp(0.0, 1.0));
        }
    }
    let mi = (binary_entropy(p1) - cond).max(0.0);
    let masses: Vec<f64> = mass.iter().map(|&p| p.clamp(0.0, 1.0)).collect();
    Ok(beta * mi - constraint.eval(&masses)?)
}

/// Total KL distortion of an arbitrary labeling.
pub fn labeling_distortion(grid: &PosteriorGrid, labels: &[usize], n_cells: usize) -> f64 {
    let mut mass = vec![0.0f64; n_cells];
    let mut moment = vec![0.0f64; n_cells];
    for (atom, &l) in grid.atoms().iter().zip(labels) {
        mass[l] += atom.mass;
        moment[l] += atom.mass * atom.r;
    }
    let mut d = 0.0;
    for (atom, &l) in grid.atoms().iter().zip(labels) {
        if mass[l] > 0.0 {
            d += atom.mass * kl_divergence(atom.r, (moment[l] / mass[l]).clamp(0.0, 1.0));
        }
    }
    d.max(0.0)
}

/// Enumerates every one of the N^M labelings and returns an argmax of the
/// trade-off objective, ties to the lexicographically smallest labeling.
pub fn brute_force_solve(
    grid: &PosteriorGrid,
    n_cells: usize,
    beta: f64,
    constraint: &Constraint,
) -> Result<(GeneralQuantizer, f64)> {
    let m = grid.len();
    if n_cells < 1 || m == 0 {
        return Err(Error::InvalidArgument("need atoms and at least one cell".into()));
    }
    let total = (n_cells as u64).checked_pow(m as u32);
    match total {
        Some(t) if t <= LABELING_GUARD => {}
        _ => {
            return Err(Error::OracleTooLarge {
                n_cells,
                m_atoms: m,
                guard: LABELING_GUARD,
            })
        }
    }

    let mut labels = vec![0usize; m];
    let mut best_labels = labels.clone();
    let mut best = evaluate_labeling(grid, &labels, n_cells, beta, constraint)?;
    // mixed-radix counter over labelings
    loop {
        let mut k = 0;
        loop {
            if k == m {
                return Ok((GeneralQuantizer { labels: best_labels }, best));
            }
            labels[k] += 1;
            if labels[k] < n_cells {
                break;
            }
            labels[k] = 0;
            k += 1;
        }
        let obj = evaluate_labeling(grid, &labels, n_cells, beta, constraint)?;
        if obj > best {
            best = obj;
            best_labels = labels.clone();
        }
    }
}

/// Result of rearranging an arbitrary two-cell quantizer into convex cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearranged {
    pub quantizer: ConvexCellQuantizer,
    /// False when no atom-granularity prefix achieves the original left-cell
    /// mass exactly; the nearest boundary is returned instead.
    pub exact_split: bool,
}

/// Builds the convex two-cell quantizer whose left cell takes the leftmost
/// atoms (in r-order) up to the mass of the input cell with the smaller
/// centroid. Cell masses are preserved exactly whenever a prefix of atoms
/// realizes them; the rearranged distortion never exceeds the original.
pub fn rearrange_to_convex(grid: &PosteriorGrid, q: &GeneralQuantizer) -> Result<Rearranged> {
    let m = grid.len();
    if q.labels.len() != m {
        return Err(Error::InvalidArgument(format!(
            "labeling covers {} atoms, grid has {m}",
            q.labels.len()
        )));
    }
    if let Some(&l) = q.labels.iter().find(|&&l| l > 1) {
        return Err(Error::InvalidArgument(format!(
            "rearrangement is defined for two cells, found label {l}"
        )));
    }
    let mut mass = [0.0f64; 2];
    let mut moment = [0.0f64; 2];
    for (atom, &l) in grid.atoms().iter().zip(&q.labels) {
        mass[l] += atom.mass;
        moment[l] += atom.mass * atom.r;
    }
    // an empty cell, or two cells sharing a centroid, merge to a single cell
    let degenerate = if mass[0] == 0.0 {
        Some(vec![0, 0, m])
    } else if mass[1] == 0.0 {
        Some(vec![0, m, m])
    } else {
        let c0 = moment[0] / mass[0];
        let c1 = moment[1] / mass[1];
        if (c0 - c1).abs() < 1e-15 {
            Some(vec![0, m, m])
        } else {
            None
        }
    };
    if let Some(b) = degenerate {
        return Ok(Rearranged {
            quantizer: ConvexCellQuantizer::from_boundaries(b, grid)?,
            exact_split: true,
        });
    }

    // the cell with the smaller centroid becomes the leftmost interval
    let left_mass = if moment[0] / mass[0] < moment[1] / mass[1] {
        mass[0]
    } else {
        mass[1]
    };
    let mut cum = 0.0;
    let mut boundary = 0;
    let mut best_gap = left_mass;
    for (k, atom) in grid.atoms().iter().enumerate() {
        cum += atom.mass;
        let gap = (cum - left_mass).abs();
        if gap < best_gap {
            best_gap = gap;
            boundary = k + 1;
        }
    }
    Ok(Rearranged {
        quantizer: ConvexCellQuantizer::from_boundaries(vec![0, boundary, m], grid)?,
        exact_split: best_gap <= 1e-12,
    })
}

/// Golden-section minimization of the cell's KL objective over c in (0, 1).
/// Independent check of the closed-form centroid.
pub fn centroid_numeric_argmin(atoms: &[(f64, f64)]) -> Result<f64> {
    let mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
    if !(mass > 0.0) {
        return Err(Error::EmptyCell);
    }
    let objective =
        |c: f64| -> f64 { atoms.iter().map(|&(r, m)| m * kl_divergence(r, c)).sum() };

    const DELTA: f64 = 1e-9;
    const TOL: f64 = 1e-10;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (DELTA, 1.0 - DELTA);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    Ok(0.5 * (lo + hi))
}
