//! KL divergence, cell centroids and distortion, prefix sums for O(1)
//! interval queries, and the mutual-information identities tying distortion
//! to I(X;Y) - I(X;Z).
//!
//! All information quantities are in bits. The convention 0 * log 0 = 0 is
//! applied throughout.

use serde::{Deserialize, Serialize};

use crate::channel::PosteriorGrid;
use crate::dp::ConvexCellQuantizer;
use crate::error::{Error, Result};

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    let q = 1.0 - p;
    if q > 0.0 {
        h -= q * q.log2();
    }
    h
}

/// KL divergence in bits between the pairs [a, 1-a] and [b, 1-b].
///
/// Returns `f64::INFINITY` when some component of `a` is positive where the
/// matching component of `b` is zero.
pub fn kl_divergence(a: f64, b: f64) -> f64 {
    let mut d = 0.0;
    if a > 0.0 {
        if b == 0.0 {
            return f64::INFINITY;
        }
        d += a * (a / b).log2();
    }
    let (ac, bc) = (1.0 - a, 1.0 - b);
    if ac > 0.0 {
        if bc == 0.0 {
            return f64::INFINITY;
        }
        d += ac * (ac / bc).log2();
    }
    d.max(0.0)
}

/// Mass-weighted mean posterior of the cell, which minimizes the
/// mass-weighted KL divergence to a common pair.
pub fn cell_centroid(atoms: &[(f64, f64)]) -> Result<f64> {
    let mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
    if !(mass > 0.0) {
        return Err(Error::EmptyCell);
    }
    let moment: f64 = atoms.iter().map(|&(r, m)| r * m).sum();
    Ok((moment / mass).clamp(0.0, 1.0))
}

/// Mass-weighted KL divergence of the cell's posteriors to its centroid.
/// Empty cells contribute zero.
pub fn cell_distortion(atoms: &[(f64, f64)]) -> f64 {
    let mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
    if !(mass > 0.0) {
        return 0.0;
    }
    let c = atoms.iter().map(|&(r, m)| r * m).sum::<f64>() / mass;
    atoms
        .iter()
        .map(|&(r, m)| m * kl_divergence(r, c))
        .sum::<f64>()
        .max(0.0)
}

/// Per-cell summary used in solver reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mass: f64,
    pub centroid: f64,
    pub distortion: f64,
}

impl CellStats {
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Self {
        let mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
        if mass > 0.0 {
            Self {
                mass,
                centroid: cell_centroid(atoms).expect("positive mass"),
                distortion: cell_distortion(atoms),
            }
        } else {
            Self { mass: 0.0, centroid: f64::NAN, distortion: 0.0 }
        }
    }
}

/// Cumulative sums over the r-sorted grid enabling O(1) interval statistics.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    /// S0[k] = sum of mass over the first k atoms.
    s0: Vec<f64>,
    /// S1[k] = sum of mass * r.
    s1: Vec<f64>,
    /// Sh[k] = sum of mass * H_b(r).
    sh: Vec<f64>,
}

impl PrefixSums {
    pub fn new(grid: &PosteriorGrid) -> Self {
        let m = grid.len();
        let mut s0 = Vec::with_capacity(m + 1);
        let mut s1 = Vec::with_capacity(m + 1);
        let mut sh = Vec::with_capacity(m + 1);
        s0.push(0.0);
        s1.push(0.0);
        sh.push(0.0);
        for a in grid.atoms() {
            s0.push(s0.last().unwrap() + a.mass);
            s1.push(s1.last().unwrap() + a.mass * a.r);
            sh.push(sh.last().unwrap() + a.mass * binary_entropy(a.r));
        }
        Self { s0, s1, sh }
    }

    pub fn atom_count(&self) -> usize {
        self.s0.len() - 1
    }

    pub fn interval_mass(&self, i: usize, j: usize) -> f64 {
        self.s0[j] - self.s0[i]
    }

    pub fn interval_moment(&self, i: usize, j: usize) -> f64 {
        self.s1[j] - self.s1[i]
    }

    /// Centroid of atoms [i, j); NaN for an empty interval.
    pub fn interval_centroid(&self, i: usize, j: usize) -> f64 {
        let p = self.interval_mass(i, j);
        if p > 0.0 {
            (self.interval_moment(i, j) / p).clamp(0.0, 1.0)
        } else {
            f64::NAN
        }
    }

    /// KL distortion of atoms [i, j) to their centroid, via the
    /// entropy-difference form p * H_b(c) - sum(mass * H_b(r)).
    pub fn interval_distortion(&self, i: usize, j: usize) -> f64 {
        let p = self.interval_mass(i, j);
        if !(p > 0.0) {
            return 0.0;
        }
        let c = self.interval_moment(i, j) / p;
        (p * binary_entropy(c.clamp(0.0, 1.0)) - (self.sh[j] - self.sh[i])).max(0.0)
    }
}

fn cell_atoms(grid: &PosteriorGrid, q: &ConvexCellQuantizer, i: usize) -> Vec<(f64, f64)> {
    grid.atoms()[q.boundaries()[i]..q.boundaries()[i + 1]]
        .iter()
        .map(|a| (a.r, a.mass))
        .collect()
}

/// Total KL distortion of a convex-cell quantizer over the grid.
pub fn total_distortion(grid: &PosteriorGrid, q: &ConvexCellQuantizer) -> Result<f64> {
    q.validate(grid.len())?;
    Ok((0..q.n_cells())
        .map(|i| cell_distortion(&cell_atoms(grid, q, i)))
        .sum())
}

/// Mutual information between the input and the grid output, in bits.
///
/// The input marginal is the one implied by the grid (sum of mass * r), so
/// that the distortion identity holds to machine precision on any grid.
pub fn mutual_information_xy(grid: &PosteriorGrid) -> f64 {
    let p1: f64 = grid.atoms().iter().map(|a| a.mass * a.r).sum();
    let cond: f64 = grid
        .atoms()
        .iter()
        .map(|a| a.mass * binary_entropy(a.r))
        .sum();
    (binary_entropy(p1) - cond).max(0.0)
}

/// Mutual information between the input and the quantized output, in bits,
/// from the joint distribution assembled over the cells.
pub fn mutual_information_xz(grid: &PosteriorGrid, q: &ConvexCellQuantizer) -> Result<f64> {
    q.validate(grid.len())?;
    let p1: f64 = grid.atoms().iter().map(|a| a.mass * a.r).sum();
    let mut cond = 0.0;
    for i in 0..q.n_cells() {
        let atoms = cell_atoms(grid, q, i);
        let mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
        if mass > 0.0 {
            let c = atoms.iter().map(|&(r, m)| r * m).sum::<f64>() / mass;
            cond += mass * binary_entropy(c.clamp(0.0, 1.0));
        }
    }
    Ok((binary_entropy(p1) - cond).max(0.0))
}

/// Residual of the identity D(Q) = I(X;Y) - I(X;Z).
pub fn verify_identity(grid: &PosteriorGrid, q: &ConvexCellQuantizer) -> Result<f64> {
    let d = total_distortion(grid, q)?;
    let ixy = mutual_information_xy(grid);
    let ixz = mutual_information_xz(grid, q)?;
    Ok((d - (ixy - ixz)).abs())
}
