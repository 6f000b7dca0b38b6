//! Solver orchestration: config in, report and frontier table out.

use std::path::{Path, PathBuf};

use chanq::{
    brute_force_solve, check_single_threshold, discretize, map_r_threshold_to_y,
    mutual_information_xy, scan_scalar_threshold, solve, solve_with_permutations, SolveResult,
};

use crate::config::{self, OutputFormat, RunConfig, ValidatedRun};
use crate::report::{
    emit_frontier, BetaRecord, GridSummary, OracleComparison, Report, ScalarScanRecord, SCHEMA,
};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;

const ORACLE_TOLERANCE: f64 = 1e-9;

pub enum RunError {
    Config(String),
    Numeric(String),
    OracleMismatch(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numeric(_) => EXIT_NUMERIC,
            RunError::OracleMismatch(_) => EXIT_ORACLE_MISMATCH,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Config(m) | RunError::Numeric(m) | RunError::OracleMismatch(m) => m,
        }
    }
}

fn numeric(e: impl std::fmt::Display) -> RunError {
    RunError::Numeric(e.to_string())
}

pub struct RunOutput {
    pub report: Report,
    pub frontier_csv: String,
}

/// Runs the full pipeline for a validated config. `force_oracle` is set by
/// the `oracle` subcommand.
pub fn execute(cfg: &RunConfig, force_oracle: bool) -> Result<RunOutput, RunError> {
    let v: ValidatedRun = cfg
        .validate()
        .map_err(|e| RunError::Config(e.to_string()))?;

    let grid = discretize(&v.channel, v.y_min, v.y_max, v.m_atoms).map_err(numeric)?;
    let mi_xy = mutual_information_xy(&grid);

    let mut results: Vec<SolveResult> = Vec::with_capacity(v.betas.len());
    let mut records: Vec<BetaRecord> = Vec::with_capacity(v.betas.len());
    for &beta in &v.betas {
        let res = if v.flags.permute_constraints {
            solve_with_permutations(&grid, v.n_cells, beta, &v.constraint).map_err(numeric)?
        } else {
            solve(&grid, v.n_cells, beta, &v.constraint).map_err(numeric)?
        };

        let scalar_scan = if v.n_cells == 2 {
            let (th, scan_res) =
                scan_scalar_threshold(&grid, beta, &v.constraint, v.epsilon).map_err(numeric)?;
            Some(ScalarScanRecord {
                a_star: th.a_star,
                objective: scan_res.objective,
                y_cuts: th.y_cuts,
                single_threshold: th.single_threshold,
            })
        } else {
            None
        };

        let y_cuts = res.quantizer.r_thresholds()[1..res.quantizer.n_cells()]
            .iter()
            .map(|&h| {
                if h > 0.0 && h < 1.0 {
                    map_r_threshold_to_y(&grid, h).map_err(numeric)
                } else {
                    Ok(Vec::new())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        records.push(BetaRecord {
            beta,
            mi_xz: res.mi_xz,
            constraint_value: res.constraint_value,
            distortion: res.distortion,
            objective: res.objective,
            boundaries: res.quantizer.boundaries().to_vec(),
            r_thresholds: res.quantizer.r_thresholds().to_vec(),
            y_cuts,
            per_cell: res.per_cell.clone(),
            scalar_scan,
        });
        results.push(res);
    }

    for rec in &records {
        let fields = [
            rec.mi_xz,
            rec.constraint_value,
            rec.distortion,
            rec.objective,
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(RunError::Numeric(format!(
                "non-finite value in the beta={} record",
                rec.beta
            )));
        }
        if (rec.objective - (rec.beta * rec.mi_xz - rec.constraint_value)).abs() > 1e-9 {
            return Err(RunError::Numeric(format!(
                "objective identity violated in the beta={} record",
                rec.beta
            )));
        }
    }

    let lemma1_single_threshold = if v.flags.check_lemma1 {
        Some(
            check_single_threshold(&v.channel, v.y_min, v.y_max, 1001)
                .map_err(numeric)?,
        )
    } else {
        None
    };

    let oracle = if v.flags.run_oracle || force_oracle {
        let beta = v.betas[0];
        let (_, oracle_obj) = brute_force_solve(&grid, v.n_cells, beta, &v.constraint)
            .map_err(|e| match e {
                chanq::Error::OracleTooLarge { .. } => RunError::Config(format!(
                    "refusing brute-force comparison: {e}"
                )),
                other => numeric(other),
            })?;
        let dp_obj = results[0].objective;
        let gap = (oracle_obj - dp_obj).abs();
        let cmp = OracleComparison {
            beta,
            dp_objective: dp_obj,
            oracle_objective: oracle_obj,
            gap,
            matches: gap <= ORACLE_TOLERANCE,
        };
        if !cmp.matches {
            return Err(RunError::OracleMismatch(format!(
                "dp objective {dp_obj} differs from exhaustive maximum {oracle_obj} by {gap:e}"
            )));
        }
        Some(cmp)
    } else {
        None
    };

    let frontier_csv = emit_frontier(
        &v.betas
            .iter()
            .copied()
            .zip(results.iter())
            .collect::<Vec<_>>(),
    );

    Ok(RunOutput {
        report: Report {
            schema: SCHEMA,
            generated_at: timestamp(),
            config: cfg.clone(),
            grid: GridSummary {
                m_atoms: grid.len(),
                y_min: v.y_min,
                y_max: v.y_max,
                mi_xy_bits: mi_xy,
            },
            results: records,
            lemma1_single_threshold,
            oracle,
        },
        frontier_csv,
    })
}

fn timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

pub fn write_outputs(
    out: &RunOutput,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| RunError::Config(format!("cannot create output dir: {e}")))?;
    let mut written = Vec::new();
    if matches!(format, OutputFormat::Report | OutputFormat::Both) {
        let path = dir.join("report.json");
        let json = serde_json::to_string_pretty(&out.report)
            .map_err(|e| RunError::Numeric(format!("report serialization failed: {e}")))?;
        std::fs::write(&path, json)
            .map_err(|e| RunError::Config(format!("cannot write report: {e}")))?;
        written.push(path);
    }
    if matches!(format, OutputFormat::Table | OutputFormat::Both) {
        let path = dir.join("frontier.csv");
        std::fs::write(&path, &out.frontier_csv)
            .map_err(|e| RunError::Config(format!("cannot write table: {e}")))?;
        written.push(path);
    }
    Ok(written)
}

/// `check-lemma1`: prints the verdict, no files.
pub fn run_lemma1(cfg: &RunConfig) -> Result<bool, RunError> {
    let v = cfg
        .validate()
        .map_err(|e| RunError::Config(e.to_string()))?;
    check_single_threshold(&v.channel, v.y_min, v.y_max, 1001).map_err(numeric)
}

pub fn load_config(path: &Path) -> Result<RunConfig, RunError> {
    config::load(path).map_err(|e| RunError::Config(e.to_string()))
}
