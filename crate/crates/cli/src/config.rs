//! Run configuration: JSON schema, parsing, and validation. Validation
//! failures name the offending field.

use chanq::{BinaryPrior, ChannelSpec, Constraint, DensitySpec, PenaltyFn};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelConfig,
    pub discretization: Discretization,
    pub solver: SolverConfig,
    #[serde(default)]
    pub constraint: Option<ConstraintConfig>,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub prior: PriorConfig,
    pub phi1: DensitySpec,
    pub phi2: DensitySpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorConfig {
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    /// Defaults to the envelope of the two densities when omitted.
    #[serde(default)]
    pub y_min: Option<f64>,
    #[serde(default)]
    pub y_max: Option<f64>,
    pub m_atoms: usize,
}

fn default_epsilon() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub n_cells: usize,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub beta_sweep: Option<Vec<f64>>,
    /// Step for the N=2 scalar-threshold scan.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ConstraintConfig {
    /// One penalty applied to every cell.
    Shared(PenaltyFn),
    /// One penalty per cell, in cell order.
    PerCell(Vec<PenaltyFn>),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Table,
    Report,
    Both,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub run_oracle: bool,
    #[serde(default)]
    pub permute_constraints: bool,
    #[serde(default)]
    pub check_lemma1: bool,
}

/// A config error naming the field that failed.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

/// Everything the solver pipeline needs, validated.
#[derive(Debug)]
pub struct ValidatedRun {
    pub channel: ChannelSpec,
    pub y_min: f64,
    pub y_max: f64,
    pub m_atoms: usize,
    pub n_cells: usize,
    pub betas: Vec<f64>,
    pub epsilon: f64,
    pub constraint: Constraint,
    pub flags: Flags,
}

impl RunConfig {
    pub fn validate(&self) -> Result<ValidatedRun, ConfigError> {
        let prior = BinaryPrior::new(self.channel.prior.p1, self.channel.prior.p2)
            .map_err(|e| err("channel.prior.p1", e.to_string()))?;
        self.channel
            .phi1
            .validate()
            .map_err(|e| err("channel.phi1", e.to_string()))?;
        self.channel
            .phi2
            .validate()
            .map_err(|e| err("channel.phi2", e.to_string()))?;
        let channel = ChannelSpec::new(prior, self.channel.phi1.clone(), self.channel.phi2.clone())
            .map_err(|e| err("channel", e.to_string()))?;

        let (env_min, env_max) = channel.default_range();
        let y_min = self.discretization.y_min.unwrap_or(env_min);
        let y_max = self.discretization.y_max.unwrap_or(env_max);
        if !(y_min < y_max) {
            return Err(err(
                "discretization.y_min",
                format!("need y_min < y_max, got [{y_min}, {y_max}]"),
            ));
        }
        if self.discretization.m_atoms < 2 {
            return Err(err("discretization.m_atoms", "need at least 2 atoms"));
        }

        let n_cells = self.solver.n_cells;
        if n_cells < 1 {
            return Err(err("solver.n_cells", "need at least one cell"));
        }
        let betas = match (&self.solver.beta, &self.solver.beta_sweep) {
            (Some(_), Some(_)) => {
                return Err(err(
                    "solver.beta",
                    "set either beta or beta_sweep, not both",
                ))
            }
            (Some(b), None) => vec![*b],
            (None, Some(list)) if !list.is_empty() => list.clone(),
            _ => return Err(err("solver.beta", "one of beta or beta_sweep is required")),
        };
        if let Some(b) = betas.iter().find(|&&b| !(b >= 0.0) || !b.is_finite()) {
            return Err(err(
                "solver.beta",
                format!("beta values must be finite and nonnegative, got {b}"),
            ));
        }
        if !(self.solver.epsilon > 0.0 && self.solver.epsilon < 0.5) {
            return Err(err(
                "solver.epsilon",
                format!("epsilon must be in (0, 0.5), got {}", self.solver.epsilon),
            ));
        }

        let constraint = match &self.constraint {
            None => Constraint::none(n_cells),
            Some(ConstraintConfig::Shared(g)) => Constraint::shared(*g, n_cells),
            Some(ConstraintConfig::PerCell(terms)) => {
                if terms.len() != n_cells {
                    return Err(err(
                        "constraint.per_cell",
                        format!("{} terms for {} cells", terms.len(), n_cells),
                    ));
                }
                Constraint::per_cell(terms.clone())
            }
        };
        for (i, g) in constraint.terms().iter().enumerate() {
            g.eval(0.0)
                .and(g.eval(1.0))
                .map_err(|e| err(&format!("constraint[{i}]"), e.to_string()))?;
        }

        if self.flags.permute_constraints && n_cells > 4 {
            return Err(err(
                "flags.permute_constraints",
                "constraint permutation search is limited to n_cells <= 4",
            ));
        }

        Ok(ValidatedRun {
            channel,
            y_min,
            y_max,
            m_atoms: self.discretization.m_atoms,
            n_cells,
            betas,
            epsilon: self.solver.epsilon,
            constraint,
            flags: self.flags.clone(),
        })
    }
}

pub fn load(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err("<config path>", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| err("<config json>", e.to_string()))
}
