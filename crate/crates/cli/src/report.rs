//! Structured report and flat-table emission.

use chanq::{CellStats, SolveResult};
use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA: &str = "chanq-report/1";

/// Formats a float with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{x:.11e}");
    // trim the exponent form back to plain digits where it is short
    match s.parse::<f64>() {
        Ok(v) => format!("{v}"),
        Err(_) => s,
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    /// Wall-clock stamp; the only non-deterministic field, confined to the header.
    pub generated_at: String,
    pub config: RunConfig,
    pub grid: GridSummary,
    pub results: Vec<BetaRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma1_single_threshold: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

#[derive(Debug, Serialize)]
pub struct GridSummary {
    pub m_atoms: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub mi_xy_bits: f64,
}

#[derive(Debug, Serialize)]
pub struct BetaRecord {
    pub beta: f64,
    pub mi_xz: f64,
    pub constraint_value: f64,
    pub distortion: f64,
    pub objective: f64,
    pub boundaries: Vec<usize>,
    pub r_thresholds: Vec<f64>,
    pub y_cuts: Vec<Vec<f64>>,
    pub per_cell: Vec<CellStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_scan: Option<ScalarScanRecord>,
}

#[derive(Debug, Serialize)]
pub struct ScalarScanRecord {
    pub a_star: f64,
    pub objective: f64,
    pub y_cuts: Vec<f64>,
    pub single_threshold: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleComparison {
    pub beta: f64,
    pub dp_objective: f64,
    pub oracle_objective: f64,
    pub gap: f64,
    pub matches: bool,
}

/// One CSV row per beta: beta, mi_xz, constraint_value, distortion,
/// objective, boundaries (pipe-separated).
pub fn emit_frontier(pairs: &[(f64, &SolveResult)]) -> String {
    let mut out = String::from("beta,mi_xz,constraint_value,distortion,objective,boundaries\n");
    for (beta, res) in pairs {
        let bounds = res
            .quantizer
            .boundaries()
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig12(*beta),
            sig12(res.mi_xz),
            sig12(res.constraint_value),
            sig12(res.distortion),
            sig12(res.objective),
            bounds
        ));
    }
    out
}
