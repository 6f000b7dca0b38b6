//! Separable quantized-output penalties C(p_Z) = sum_i g_i(p_i) and the
//! trade-off objective beta * I(X;Z) - C(p_Z).

use serde::{Deserialize, Serialize};

use crate::channel::PosteriorGrid;
use crate::dp::ConvexCellQuantizer;
use crate::error::{Error, Result};
use crate::measure;

/// One per-cell penalty function g(p), evaluable on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PenaltyFn {
    /// g(p) = -lambda * p * log2(p), with g(0) = 0. Summed over all cells
    /// with a shared lambda this is lambda * H(Z).
    Entropy { lambda: f64 },
    /// g(p) = w * p.
    Linear { w: f64 },
    /// g(p) = w * p^e.
    Power { w: f64, e: f64 },
    /// g(p) = 0.
    Zero,
}

impl PenaltyFn {
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(match *self {
            PenaltyFn::Entropy { lambda } => {
                if p > 0.0 {
                    -lambda * p * p.log2()
                } else {
                    0.0
                }
            }
            PenaltyFn::Linear { w } => w * p,
            PenaltyFn::Power { w, e } => w * p.powf(e),
            PenaltyFn::Zero => 0.0,
        })
    }
}

/// Separable constraint: one penalty function per output cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    terms: Vec<PenaltyFn>,
}

impl Constraint {
    pub fn per_cell(terms: Vec<PenaltyFn>) -> Self {
        Self { terms }
    }

    /// The same penalty on every one of `n_cells` cells.
    pub fn shared(g: PenaltyFn, n_cells: usize) -> Self {
        Self { terms: vec![g; n_cells] }
    }

    /// No penalty at all.
    pub fn none(n_cells: usize) -> Self {
        Self::shared(PenaltyFn::Zero, n_cells)
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[PenaltyFn] {
        &self.terms
    }

    /// g_n(p) for cell index n (0-based).
    pub fn eval_term(&self, n: usize, p: f64) -> Result<f64> {
        self.terms
            .get(n)
            .ok_or_else(|| Error::InvalidArgument(format!("cell index {n} out of range")))?
            .eval(p)
    }

    /// C(p_Z) for the full vector of cell masses.
    pub fn eval(&self, cell_masses: &[f64]) -> Result<f64> {
        if cell_masses.len() != self.terms.len() {
            return Err(Error::TermCountMismatch {
                got: self.terms.len(),
                expected: cell_masses.len(),
            });
        }
        let mut c = 0.0;
        for (g, &p) in self.terms.iter().zip(cell_masses) {
            c += g.eval(p.clamp(0.0, 1.0))?;
        }
        Ok(c)
    }

    /// Reorders the per-cell terms by the given permutation.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { terms: perm.iter().map(|&i| self.terms[i]).collect() }
    }
}

/// The two equivalent faces of the trade-off objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    /// beta * I(X;Z) - C(p_Z), the quantity being maximized.
    pub value: f64,
    /// beta * D(Q) + C(p_Z), the quantity the dynamic program minimizes.
    pub distortion_form: f64,
}

/// Evaluates both faces of the objective for a quantizer.
/// The two satisfy value = beta * I(X;Y) - distortion_form.
pub fn assemble_objective(
    beta: f64,
    grid: &PosteriorGrid,
    q: &ConvexCellQuantizer,
    constraint: &Constraint,
) -> Result<Objective> {
    q.validate(grid.len())?;
    if constraint.n_terms() != q.n_cells() {
        return Err(Error::TermCountMismatch {
            got: constraint.n_terms(),
            expected: q.n_cells(),
        });
    }
    let masses: Vec<f64> = (0..q.n_cells())
        .map(|i| {
            grid.atoms()[q.boundaries()[i]..q.boundaries()[i + 1]]
                .iter()
                .map(|a| a.mass)
                .sum()
        })
        .collect();
    let c = constraint.eval(&masses)?;
    let mi = measure::mutual_information_xz(grid, q)?;
    let d = measure::total_distortion(grid, q)?;
    Ok(Objective { value: beta * mi - c, distortion_form: beta * d + c })
}

/// Entropy of the quantized output, in bits.
pub fn output_entropy(cell_masses: &[f64]) -> f64 {
    cell_masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::PosteriorGrid;
    use crate::dp::ConvexCellQuantizer;
    use approx::assert_abs_diff_eq;

    #[test]
    fn term_examples() {
        let h = PenaltyFn::Entropy { lambda: 1.0 };
        assert_abs_diff_eq!(h.eval(0.5).unwrap(), 0.5);
        assert_eq!(h.eval(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(PenaltyFn::Linear { w: 2.0 }.eval(0.25).unwrap(), 0.5);
        assert!(h.eval(1.5).is_err());
        assert!(h.eval(-0.1).is_err());
    }

    #[test]
    fn entropy_constraint_is_output_entropy() {
        let c = Constraint::shared(PenaltyFn::Entropy { lambda: 1.0 }, 3);
        let masses = [0.2, 0.3, 0.5];
        assert_abs_diff_eq!(
            c.eval(&masses).unwrap(),
            output_entropy(&masses),
            epsilon = 1e-15
        );
        assert!(c.eval(&masses).unwrap() <= 3f64.log2());
    }

    fn grid() -> PosteriorGrid {
        PosteriorGrid::from_raw(vec![
            (0.0, 0.25, 0.1),
            (1.0, 0.25, 0.4),
            (2.0, 0.25, 0.6),
            (3.0, 0.25, 0.9),
        ])
        .unwrap()
    }

    #[test]
    fn single_cell_zero_constraint_objective_is_zero() {
        let g = grid();
        let q = ConvexCellQuantizer::from_boundaries(vec![0, 4], &g).unwrap();
        let obj = assemble_objective(1.0, &g, &q, &Constraint::none(1)).unwrap();
        assert_abs_diff_eq!(obj.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn beta_zero_reduces_to_negated_constraint() {
        let g = grid();
        let q = ConvexCellQuantizer::from_boundaries(vec![0, 2, 4], &g).unwrap();
        let c = Constraint::shared(PenaltyFn::Entropy { lambda: 1.0 }, 2);
        let obj = assemble_objective(0.0, &g, &q, &c).unwrap();
        assert_abs_diff_eq!(obj.value, -1.0, epsilon = 1e-12); // H(Z) of (0.5, 0.5)
    }

    #[test]
    fn objective_faces_are_consistent() {
        let g = grid();
        let beta = 1.7;
        let c = Constraint::shared(PenaltyFn::Entropy { lambda: 0.4 }, 3);
        let q = ConvexCellQuantizer::from_boundaries(vec![0, 1, 3, 4], &g).unwrap();
        let obj = assemble_objective(beta, &g, &q, &c).unwrap();
        let ixy = crate::measure::mutual_information_xy(&g);
        assert_abs_diff_eq!(obj.value + obj.distortion_form, beta * ixy, epsilon = 1e-9);
    }

    #[test]
    fn term_count_mismatch_is_an_error() {
        let g = grid();
        let q = ConvexCellQuantizer::from_boundaries(vec![0, 2, 4], &g).unwrap();
        let c = Constraint::none(3);
        assert!(matches!(
            assemble_objective(1.0, &g, &q, &c),
            Err(crate::error::Error::TermCountMismatch { .. })
        ));
    }
}
