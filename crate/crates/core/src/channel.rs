//! Binary-input continuous-output channel model and its discretization.
//!
//! The channel is specified by an input prior and two conditional output
//! densities. [`discretize`] turns the continuous output line into a finite
//! grid of atoms, each carrying an output mass and a posterior probability of
//! the first input symbol, sorted by posterior.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input distribution over the two channel symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryPrior {
    pub p1: f64,
    pub p2: f64,
}

impl BinaryPrior {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1 > 0.0) || !(p2 > 0.0) {
            return Err(Error::InvalidPrior(format!(
                "probabilities must be positive, got p1={p1}, p2={p2}"
            )));
        }
        if (p1 + p2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrior(format!(
                "p1 + p2 must equal 1, got {}",
                p1 + p2
            )));
        }
        Ok(Self { p1, p2 })
    }

    /// Uniform prior over the two inputs.
    pub fn uniform() -> Self {
        Self { p1: 0.5, p2: 0.5 }
    }
}

/// Conditional output density family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DensitySpec {
    Gaussian { mean: f64, stddev: f64 },
    Laplace { location: f64, scale: f64 },
    Uniform { low: f64, high: f64 },
    /// Piecewise-linear density given by (y, density) knots; zero outside the
    /// knot range is not assumed, evaluation outside is a domain error.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl DensitySpec {
    /// Validates the family parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            DensitySpec::Gaussian { stddev, .. } => {
                if !(*stddev > 0.0) {
                    return Err(Error::InvalidDensity(format!(
                        "gaussian stddev must be positive, got {stddev}"
                    )));
                }
            }
            DensitySpec::Laplace { scale, .. } => {
                if !(*scale > 0.0) {
                    return Err(Error::InvalidDensity(format!(
                        "laplace scale must be positive, got {scale}"
                    )));
                }
            }
            DensitySpec::Uniform { low, high } => {
                if !(low < high) {
                    return Err(Error::InvalidDensity(format!(
                        "uniform requires low < high, got [{low}, {high}]"
                    )));
                }
            }
            DensitySpec::Tabulated { knots } => {
                if knots.len() < 2 {
                    return Err(Error::InvalidDensity(
                        "tabulated density needs at least two knots".into(),
                    ));
                }
                for w in knots.windows(2) {
                    if !(w[0].0 < w[1].0) {
                        return Err(Error::InvalidDensity(
                            "tabulated knots must have strictly increasing y".into(),
                        ));
                    }
                }
                if knots.iter().any(|&(_, d)| d < 0.0 || !d.is_finite()) {
                    return Err(Error::InvalidDensity(
                        "tabulated densities must be finite and nonnegative".into(),
                    ));
                }
                // trapezoid rule is exact for the piecewise-linear interpolant
                let integral: f64 = knots
                    .windows(2)
                    .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
                    .sum();
                if (integral - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidDensity(format!(
                        "tabulated density integrates to {integral}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// A y-range capturing essentially all of the density's mass. Used as the
    /// default truncation window for unbounded families.
    pub fn envelope(&self) -> (f64, f64) {
        match self {
            DensitySpec::Gaussian { mean, stddev } => (mean - 6.0 * stddev, mean + 6.0 * stddev),
            // 6 sigma for a laplace(0, b) is 6 * sqrt(2) * b; exp(-6*sqrt(2)) < 1e-3
            // is too loose, so widen to match the <= 1e-8 tail target.
            DensitySpec::Laplace { location, scale } => {
                (location - 19.0 * scale, location + 19.0 * scale)
            }
            DensitySpec::Uniform { low, high } => (*low, *high),
            DensitySpec::Tabulated { knots } => (knots[0].0, knots[knots.len() - 1].0),
        }
    }
}

/// Evaluates the density at `y`.
pub fn eval_density(spec: &DensitySpec, y: f64) -> Result<f64> {
    match spec {
        DensitySpec::Gaussian { mean, stddev } => {
            let z = (y - mean) / stddev;
            Ok((-0.5 * z * z).exp() / (stddev * (2.0 * std::f64::consts::PI).sqrt()))
        }
        DensitySpec::Laplace { location, scale } => {
            Ok((-(y - location).abs() / scale).exp() / (2.0 * scale))
        }
        DensitySpec::Uniform { low, high } => {
            if y >= *low && y <= *high {
                Ok(1.0 / (high - low))
            } else {
                Ok(0.0)
            }
        }
        DensitySpec::Tabulated { knots } => {
            let first = knots[0].0;
            let last = knots[knots.len() - 1].0;
            if y < first || y > last {
                return Err(Error::OutOfSupport { y });
            }
            let idx = knots.partition_point(|&(ky, _)| ky <= y);
            if idx == knots.len() {
                return Ok(knots[knots.len() - 1].1);
            }
            let (y0, d0) = knots[idx - 1];
            let (y1, d1) = knots[idx];
            let t = (y - y0) / (y1 - y0);
            Ok(d0 + t * (d1 - d0))
        }
    }
}

/// Full channel model: prior plus the two conditional densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub prior: BinaryPrior,
    pub phi1: DensitySpec,
    pub phi2: DensitySpec,
}

impl ChannelSpec {
    pub fn new(prior: BinaryPrior, phi1: DensitySpec, phi2: DensitySpec) -> Result<Self> {
        phi1.validate()?;
        phi2.validate()?;
        Ok(Self { prior, phi1, phi2 })
    }

    /// Default truncation window: the union of both densities' envelopes.
    pub fn default_range(&self) -> (f64, f64) {
        let (a1, b1) = self.phi1.envelope();
        let (a2, b2) = self.phi2.envelope();
        (a1.min(a2), b1.max(b2))
    }
}

/// Posterior probability of the first input given the two density values.
pub fn compute_posterior(prior: &BinaryPrior, phi1_val: f64, phi2_val: f64) -> Result<f64> {
    if phi1_val < 0.0 || phi2_val < 0.0 {
        return Err(Error::InvalidArgument(
            "density values must be nonnegative".into(),
        ));
    }
    let num = prior.p1 * phi1_val;
    let den = num + prior.p2 * phi2_val;
    if den == 0.0 {
        return Err(Error::UndefinedPosterior);
    }
    Ok(num / den)
}

/// One discretized output point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Output value at the midpoint of the grid cell.
    pub y: f64,
    /// Output probability mass of the cell.
    pub mass: f64,
    /// Posterior probability of the first input given this output.
    pub r: f64,
    /// Position of this atom in y-order, among the retained atoms.
    pub original_index: usize,
}

/// Discretized channel output, stored in nondecreasing posterior order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorGrid {
    atoms: Vec<Atom>,
}

impl PosteriorGrid {
    /// Builds a grid from raw (y, mass, r) triples given in y-order.
    /// Masses are renormalized to sum to 1; zero-mass triples are dropped.
    pub fn from_raw(raw: Vec<(f64, f64, f64)>) -> Result<Self> {
        let total: f64 = raw.iter().map(|&(_, m, _)| m).sum();
        if !(total > 0.0) {
            return Err(Error::EmptyGrid);
        }
        let mut atoms: Vec<Atom> = raw
            .into_iter()
            .filter(|&(_, m, _)| m > 0.0)
            .enumerate()
            .map(|(i, (y, mass, r))| Atom {
                y,
                mass: mass / total,
                r,
                original_index: i,
            })
            .collect();
        for a in &atoms {
            if !(0.0..=1.0).contains(&a.r) {
                return Err(Error::InvalidArgument(format!(
                    "posterior {} outside [0, 1]",
                    a.r
                )));
            }
        }
        // stable sort: ties in r keep y-order
        atoms.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms re-ordered by output value (original y-order).
    pub fn atoms_in_y_order(&self) -> Vec<Atom> {
        let mut v = self.atoms.clone();
        v.sort_by_key(|a| a.original_index);
        v
    }

    /// Number of distinct posterior values on the grid.
    pub fn distinct_r_count(&self) -> usize {
        let mut count = 0;
        let mut prev = f64::NAN;
        for a in &self.atoms {
            if a.r != prev {
                count += 1;
                prev = a.r;
            }
        }
        count
    }
}

/// Discretizes the channel output on `[y_min, y_max]` with `m_atoms`
/// midpoint-rule atoms. Atoms with zero output density are dropped and the
/// remaining masses renormalized.
pub fn discretize(
    channel: &ChannelSpec,
    y_min: f64,
    y_max: f64,
    m_atoms: usize,
) -> Result<PosteriorGrid> {
    if !(y_min < y_max) {
        return Err(Error::InvalidDiscretization(format!(
            "need y_min < y_max, got [{y_min}, {y_max}]"
        )));
    }
    if m_atoms < 2 {
        return Err(Error::InvalidDiscretization(format!(
            "need at least 2 atoms, got {m_atoms}"
        )));
    }
    let dy = (y_max - y_min) / m_atoms as f64;
    let mut raw = Vec::with_capacity(m_atoms);
    for m in 0..m_atoms {
        let y = y_min + (m as f64 + 0.5) * dy;
        let f1 = eval_density(&channel.phi1, y)?;
        let f2 = eval_density(&channel.phi2, y)?;
        let mu = channel.prior.p1 * f1 + channel.prior.p2 * f2;
        if mu <= 0.0 {
            continue;
        }
        let r = compute_posterior(&channel.prior, f1, f2)?;
        raw.push((y, mu * dy, r));
    }
    PosteriorGrid::from_raw(raw)
}
