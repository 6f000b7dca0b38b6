//! Globally optimal convex-cell quantizer by dynamic programming over the
//! r-sorted grid.
//!
//! Every optimal quantizer of a binary-input channel partitions the sorted
//! posteriors into intervals, so the search space is the set of monotone
//! boundary sequences. The DP minimizes beta * D(Q) + C(p_Z), which is the
//! same as maximizing beta * I(X;Z) - C(p_Z) because beta * I(X;Y) does not
//! depend on the quantizer.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::channel::PosteriorGrid;
use crate::constraints::Constraint;
use crate::error::{Error, Result};
use crate::measure::{self, CellStats, PrefixSums};

/// Quantizer whose cells are intervals of the r-sorted grid.
///
/// `boundaries` holds N+1 cut positions b_0 = 0 <= b_1 <= ... <= b_N = M;
/// cell i covers sorted atom indices [b_i, b_{i+1}). `r_thresholds` holds the
/// corresponding posterior thresholds h_0 = 0 <= ... <= h_N = 1, with interior
/// values at the midpoint of the r gap at each cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexCellQuantizer {
    boundaries: Vec<usize>,
    r_thresholds: Vec<f64>,
}

impl ConvexCellQuantizer {
    pub fn from_boundaries(boundaries: Vec<usize>, grid: &PosteriorGrid) -> Result<Self> {
        let m = grid.len();
        check_boundaries(&boundaries, m)?;
        let n = boundaries.len() - 1;
        let rs: Vec<f64> = grid.atoms().iter().map(|a| a.r).collect();
        let mut r_thresholds = Vec::with_capacity(n + 1);
        r_thresholds.push(0.0);
        for &b in &boundaries[1..n] {
            let h = if b == 0 {
                0.0
            } else if b == m {
                1.0
            } else {
                0.5 * (rs[b - 1] + rs[b])
            };
            r_thresholds.push(h);
        }
        r_thresholds.push(1.0);
        Ok(Self { boundaries, r_thresholds })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn r_thresholds(&self) -> &[f64] {
        &self.r_thresholds
    }

    pub fn n_cells(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn validate(&self, m_atoms: usize) -> Result<()> {
        check_boundaries(&self.boundaries, m_atoms)
    }

    /// Cell index of the sorted atom position, by binary search.
    pub fn cell_of(&self, sorted_index: usize) -> usize {
        self.boundaries[1..].partition_point(|&b| b <= sorted_index)
    }
}

fn check_boundaries(boundaries: &[usize], m_atoms: usize) -> Result<()> {
    if boundaries.len() < 2 {
        return Err(Error::InvalidQuantizer(
            "need at least two boundary positions".into(),
        ));
    }
    if boundaries[0] != 0 || *boundaries.last().unwrap() != m_atoms {
        return Err(Error::InvalidQuantizer(format!(
            "boundaries must start at 0 and end at {m_atoms}, got {boundaries:?}"
        )));
    }
    if boundaries.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidQuantizer(format!(
            "boundaries must be nondecreasing, got {boundaries:?}"
        )));
    }
    Ok(())
}

/// Outcome of one solve: the quantizer plus its scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub quantizer: ConvexCellQuantizer,
    /// I(X;Z) in bits.
    pub mi_xz: f64,
    /// C(p_Z).
    pub constraint_value: f64,
    /// KL distortion D(Q) in bits.
    pub distortion: f64,
    /// beta * mi_xz - constraint_value.
    pub objective: f64,
    pub per_cell: Vec<CellStats>,
}

/// DP cost of assigning sorted atoms [i, j) to cell n (0-based):
/// beta * distortion + g_n(mass). An empty interval costs g_n(0).
pub fn interval_cost(
    prefix: &PrefixSums,
    i: usize,
    j: usize,
    n: usize,
    beta: f64,
    constraint: &Constraint,
) -> Result<f64> {
    let m = prefix.atom_count();
    if i > j || j > m {
        return Err(Error::InvalidArgument(format!(
            "interval [{i}, {j}) out of range for {m} atoms"
        )));
    }
    let p = prefix.interval_mass(i, j).clamp(0.0, 1.0);
    Ok(beta * prefix.interval_distortion(i, j) + constraint.eval_term(n, p)?)
}

/// Finds the convex-cell quantizer minimizing
/// sum_n beta * distortion(cell_n) + g_n(mass(cell_n)) over all monotone
/// boundary sequences, and therefore the global maximizer of
/// beta * I(X;Z) - C(p_Z). O(N * M^2) time, O(N * M) space. Empty cells are
/// permitted; backtracking ties go to the smallest predecessor.
pub fn solve(
    grid: &PosteriorGrid,
    n_cells: usize,
    beta: f64,
    constraint: &Constraint,
) -> Result<SolveResult> {
    if n_cells < 1 {
        return Err(Error::InvalidArgument("need at least one cell".into()));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if constraint.n_terms() != n_cells {
        return Err(Error::TermCountMismatch {
            got: constraint.n_terms(),
            expected: n_cells,
        });
    }
    let m = grid.len();
    let prefix = PrefixSums::new(grid);

    // dp[m'] after layer n = best cost of covering the first m' atoms with
    // cells 0..=n
    let mut dp = vec![f64::INFINITY; m + 1];
    let mut from = vec![vec![0usize; m + 1]; n_cells];
    for j in 0..=m {
        dp[j] = interval_cost(&prefix, 0, j, 0, beta, constraint)?;
    }
    for n in 1..n_cells {
        let mut next = vec![f64::INFINITY; m + 1];
        for j in 0..=m {
            let mut best = f64::INFINITY;
            let mut arg = 0;
            for i in 0..=j {
                if dp[i].is_infinite() {
                    continue;
                }
                let cost = dp[i] + interval_cost(&prefix, i, j, n, beta, constraint)?;
                if cost < best {
                    best = cost;
                    arg = i;
                }
            }
            next[j] = best;
            from[n][j] = arg;
        }
        dp = next;
    }

    let mut boundaries = vec![m];
    let mut pos = m;
    for n in (1..n_cells).rev() {
        pos = from[n][pos];
        boundaries.push(pos);
    }
    boundaries.push(0);
    boundaries.reverse();

    build_result(grid, boundaries, beta, constraint)
}

/// Assembles a [`SolveResult`] for explicit boundaries.
pub fn build_result(
    grid: &PosteriorGrid,
    boundaries: Vec<usize>,
    beta: f64,
    constraint: &Constraint,
) -> Result<SolveResult> {
    let q = ConvexCellQuantizer::from_boundaries(boundaries, grid)?;
    let per_cell: Vec<CellStats> = (0..q.n_cells())
        .map(|i| {
            let atoms: Vec<(f64, f64)> = grid.atoms()
                [q.boundaries()[i]..q.boundaries()[i + 1]]
                .iter()
                .map(|a| (a.r, a.mass))
                .collect();
            CellStats::from_atoms(&atoms)
        })
        .collect();
    let masses: Vec<f64> = per_cell.iter().map(|c| c.mass.clamp(0.0, 1.0)).collect();
    let constraint_value = constraint.eval(&masses)?;
    let mi_xz = measure::mutual_information_xz(grid, &q)?;
    let distortion = measure::total_distortion(grid, &q)?;
    Ok(SolveResult {
        objective: beta * mi_xz - constraint_value,
        quantizer: q,
        mi_xz,
        constraint_value,
        distortion,
        per_cell,
    })
}

/// One solve per trade-off weight, in input order.
pub fn sweep_beta(
    grid: &PosteriorGrid,
    n_cells: usize,
    constraint: &Constraint,
    betas: &[f64],
) -> Result<Vec<SolveResult>> {
    if betas.is_empty() {
        return Err(Error::InvalidArgument("beta list is empty".into()));
    }
    if let Some(&b) = betas.iter().find(|&&b| !(b >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "beta values must be nonnegative, got {b}"
        )));
    }
    betas
        .iter()
        .map(|&b| solve(grid, n_cells, b, constraint))
        .collect()
}

/// Solves once per permutation of the constraint terms onto cells and keeps
/// the best objective. Closes the gap left by heterogeneous per-cell
/// penalties, where the index order along r is not known to be optimal.
/// Guarded to N <= 4.
pub fn solve_with_permutations(
    grid: &PosteriorGrid,
    n_cells: usize,
    beta: f64,
    constraint: &Constraint,
) -> Result<SolveResult> {
    if n_cells > 4 {
        return Err(Error::InvalidArgument(
            "constraint permutation search is limited to N <= 4".into(),
        ));
    }
    let mut best: Option<SolveResult> = None;
    for perm in (0..n_cells).permutations(n_cells) {
        let c = constraint.permuted(&perm);
        let res = solve(grid, n_cells, beta, &c)?;
        if best.as_ref().map_or(true, |b| res.objective > b.objective) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one permutation"))
}
