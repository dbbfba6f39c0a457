//! Execution harness behind the CLI: single-instance reports, sweep runs
//! with CSV output and a metadata sidecar, and the solver verification loop.
//!
//! CSV schema is fixed: the columns below in order, comma separators, `.`
//! decimal point, `\n` line endings, UTF-8, no quoting. Floats are rendered
//! with 12 significant digits; log10 columns are appended at render time
//! only and never touch stored raw values.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, SolveConfig, SweepConfig};
use crate::model::{Scenario, Weights};
use crate::scenario::{
    build_sweep, sample_scenario, ParameterRanges, ScenarioError, PRNG_ALGORITHM,
};
use crate::solver::{
    baseline_arg, baseline_ars, solve_bruteforce, solve_ilpb, Method, Solution, SolveError,
    TIE_EPSILON,
};

pub const CSV_COLUMNS: [&str; 11] = [
    "axis_value",
    "replication",
    "method",
    "raw_T_seconds",
    "raw_E_joules",
    "norm_T",
    "norm_E",
    "Z",
    "split_index",
    "nodes_explored",
    "seed",
];
pub const CSV_LOG10_COLUMNS: [&str; 2] = ["log10_raw_T_seconds", "log10_raw_E_joules"];

/// Whether rendered output carries the extra log10 columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportScale {
    Raw,
    Log10,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("validation error: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("validation error: {0}")]
    Solve(#[from] SolveError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    InvalidArgument(String),
}

impl RunError {
    /// Process exit code: 2 for config/environment problems, 3 for model
    /// validation failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Io(_) | RunError::InvalidArgument(_) => 2,
            RunError::Scenario(_) | RunError::Solve(_) => 3,
        }
    }
}

/// Render with 12 significant digits (scientific, deterministic across
/// platforms).
pub fn format_significant(value: f64) -> String {
    format!("{value:.11e}")
}

// ---------------------------------------------------------------------------
// solve

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub scenario: Scenario,
    /// Seed that produced the scenario when it was sampled.
    pub seed: Option<u64>,
    pub solution: Solution,
}

pub fn run_solve(
    config: &SolveConfig,
    seed_override: Option<u64>,
) -> Result<SolveReport, RunError> {
    let (scenario, seed) = config.resolve(seed_override)?;
    let solution = solve_ilpb(&scenario)?;
    Ok(SolveReport {
        scenario,
        seed,
        solution,
    })
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.solution;
        write!(
            f,
            "instance: K={} layers, D={} KB, mu={}, lambda={}",
            self.scenario.request.layer_count(),
            format_significant(self.scenario.request.data_size),
            format_significant(self.scenario.weights.mu),
            format_significant(self.scenario.weights.lambda),
        )?;
        if let Some(seed) = self.seed {
            write!(f, ", seed={seed}")?;
        }
        writeln!(f)?;
        writeln!(f, "method: {}", s.method.as_str())?;
        let bits: Vec<&str> = s
            .decision
            .assignments()
            .iter()
            .map(|&h| if h { "1" } else { "0" })
            .collect();
        let placement = match s.split_index() {
            0 => "every layer offloaded".to_string(),
            split if split == s.decision.layer_count() => {
                "every layer on the satellite".to_string()
            }
            split => format!("layers 1..={split} on the satellite"),
        };
        writeln!(
            f,
            "decision: h = [{}] (split index {}: {placement})",
            bits.join(", "),
            s.split_index(),
        )?;
        writeln!(
            f,
            "latency [s]: satellite={} s_to_g={} g_to_c={} cloud={} total={}",
            format_significant(s.latency.t_satellite),
            format_significant(s.latency.t_s_to_g),
            format_significant(s.latency.t_g_to_c),
            format_significant(s.latency.t_cloud),
            format_significant(s.latency.total),
        )?;
        writeln!(
            f,
            "energy [J]: processing={} transmission={} total={}",
            format_significant(s.energy.e_processing),
            format_significant(s.energy.e_transmission),
            format_significant(s.energy.total),
        )?;
        writeln!(
            f,
            "objective: Z={} norm_E={} norm_T={}",
            format_significant(s.objective.z),
            format_significant(s.objective.norm_e),
            format_significant(s.objective.norm_t),
        )?;
        write!(f, "nodes explored: {}", s.nodes_explored)
    }
}

// ---------------------------------------------------------------------------
// sweep

/// One CSV row: a method's result on one sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub axis_value: f64,
    pub replication: usize,
    pub method: Method,
    pub raw_t_seconds: f64,
    pub raw_e_joules: f64,
    pub norm_t: f64,
    pub norm_e: f64,
    pub z: f64,
    pub split_index: usize,
    pub nodes_explored: u64,
    pub seed: u64,
}

/// Per-axis-point method means and the ILPB-to-baseline ratio
/// `mean Z(ILPB) / mean((Z(ARG) + Z(ARS)) / 2)`.
#[derive(Debug, Clone, Serialize)]
pub struct AxisSummary {
    pub axis_value: f64,
    pub mean_z_ilpb: f64,
    pub mean_z_arg: f64,
    pub mean_z_ars: f64,
    pub ilpb_to_baseline_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub axis: &'static str,
    pub axis_unit: &'static str,
    pub points: usize,
    pub replications: usize,
    pub seed: u64,
    pub per_axis: Vec<AxisSummary>,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sweep axis={} [{}], {} points x {} replications, seed {}",
            self.axis, self.axis_unit, self.points, self.replications, self.seed
        )?;
        writeln!(
            f,
            "{:<20} {:<20} {:<20} {:<20} {:<20}",
            "axis_value", "mean_Z_ILPB", "mean_Z_ARG", "mean_Z_ARS", "Z_ILPB/avg(ARG,ARS)"
        )?;
        for axis in &self.per_axis {
            let ratio = if axis.ilpb_to_baseline_mean.is_finite() {
                format_significant(axis.ilpb_to_baseline_mean)
            } else {
                "n/a".to_string()
            };
            writeln!(
                f,
                "{:<20} {:<20} {:<20} {:<20} {:<20}",
                format_significant(axis.axis_value),
                format_significant(axis.mean_z_ilpb),
                format_significant(axis.mean_z_arg),
                format_significant(axis.mean_z_ars),
                ratio,
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    pub summary: SweepSummary,
}

/// The sweep config with any CLI seed override applied.
pub fn resolve_sweep_config(config: &SweepConfig, seed_override: Option<u64>) -> SweepConfig {
    let mut resolved = config.clone();
    if let Some(seed) = seed_override {
        resolved.spec.seed = seed;
    }
    resolved
}

/// Evaluate ILPB, ARG and ARS over the whole sweep grid. Rows come out in
/// (axis point, replication, method) order regardless of evaluation order.
pub fn evaluate_sweep(config: &SweepConfig) -> Result<SweepOutcome, RunError> {
    let grid = build_sweep(&config.spec, &config.ranges, config.layers, config.weights)?;
    let mut rows = Vec::with_capacity(grid.len() * 3);
    for point in &grid {
        for method in [Method::Ilpb, Method::Arg, Method::Ars] {
            let solution = match method {
                Method::Ilpb => solve_ilpb(&point.scenario)?,
                Method::Arg => baseline_arg(&point.scenario)?,
                Method::Ars => baseline_ars(&point.scenario)?,
                Method::BruteForce => unreachable!("sweeps report ILPB and the baselines"),
            };
            rows.push(ResultRow {
                axis_value: point.axis_value,
                replication: point.replication,
                method,
                raw_t_seconds: solution.latency.total,
                raw_e_joules: solution.energy.total,
                norm_t: solution.objective.norm_t,
                norm_e: solution.objective.norm_e,
                z: solution.objective.z,
                split_index: solution.split_index(),
                nodes_explored: solution.nodes_explored,
                seed: point.seed,
            });
        }
    }

    let mut per_axis = Vec::with_capacity(config.spec.points.len());
    for &axis_value in &config.spec.points {
        let at_point: Vec<&ResultRow> =
            rows.iter().filter(|r| r.axis_value == axis_value).collect();
        let mean = |method: Method| {
            let zs: Vec<f64> = at_point
                .iter()
                .filter(|r| r.method == method)
                .map(|r| r.z)
                .collect();
            zs.iter().sum::<f64>() / zs.len() as f64
        };
        let mean_z_ilpb = mean(Method::Ilpb);
        let mean_z_arg = mean(Method::Arg);
        let mean_z_ars = mean(Method::Ars);
        let baseline_mean = 0.5 * (mean_z_arg + mean_z_ars);
        per_axis.push(AxisSummary {
            axis_value,
            mean_z_ilpb,
            mean_z_arg,
            mean_z_ars,
            ilpb_to_baseline_mean: mean_z_ilpb / baseline_mean,
        });
    }

    Ok(SweepOutcome {
        rows,
        summary: SweepSummary {
            axis: config.spec.axis.as_str(),
            axis_unit: config.spec.axis.axis_unit(),
            points: config.spec.points.len(),
            replications: config.spec.replications,
            seed: config.spec.seed,
            per_axis,
        },
    })
}

/// Serialize rows in the fixed CSV schema.
pub fn write_csv(rows: &[ResultRow], scale: ReportScale, mut out: impl Write) -> io::Result<()> {
    let mut header = CSV_COLUMNS.join(",");
    if scale == ReportScale::Log10 {
        header.push(',');
        header.push_str(&CSV_LOG10_COLUMNS.join(","));
    }
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        let mut fields = vec![
            format_significant(row.axis_value),
            row.replication.to_string(),
            row.method.as_str().to_string(),
            format_significant(row.raw_t_seconds),
            format_significant(row.raw_e_joules),
            format_significant(row.norm_t),
            format_significant(row.norm_e),
            format_significant(row.z),
            row.split_index.to_string(),
            row.nodes_explored.to_string(),
            row.seed.to_string(),
        ];
        if scale == ReportScale::Log10 {
            fields.push(format_significant(row.raw_t_seconds.log10()));
            fields.push(format_significant(row.raw_e_joules.log10()));
        }
        out.write_all(fields.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    prng: &'static str,
    scale: ReportScale,
    axis_unit: &'static str,
    csv_columns: Vec<&'static str>,
    config: &'a SweepConfig,
}

/// Path of the metadata sidecar written next to a CSV.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Run a sweep, write the CSV and its metadata sidecar, return the rows and
/// summary.
pub fn run_sweep(
    config: &SweepConfig,
    out: &Path,
    scale: ReportScale,
    seed_override: Option<u64>,
) -> Result<SweepOutcome, RunError> {
    let resolved = resolve_sweep_config(config, seed_override);
    let outcome = evaluate_sweep(&resolved)?;

    let mut writer = BufWriter::new(File::create(out)?);
    write_csv(&outcome.rows, scale, &mut writer)?;
    writer.flush()?;

    let mut columns: Vec<&'static str> = CSV_COLUMNS.to_vec();
    if scale == ReportScale::Log10 {
        columns.extend(CSV_LOG10_COLUMNS);
    }
    let sidecar = Sidecar {
        tool: "leosplit",
        version: env!("CARGO_PKG_VERSION"),
        prng: PRNG_ALGORITHM,
        scale,
        axis_unit: resolved.spec.axis.axis_unit(),
        csv_columns: columns,
        config: &resolved,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    std::fs::write(sidecar_path(out), json)?;

    Ok(outcome)
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub instances: usize,
    pub k_max: usize,
    pub seed: u64,
}

/// A fully reproducible counterexample: the scenario can be rebuilt with
/// `sample_scenario(default ranges, layers, weights, scenario_seed)`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyFailure {
    pub instance: usize,
    pub layers: usize,
    pub lambda: f64,
    pub scenario_seed: u64,
    pub reason: String,
    pub candidate_split: usize,
    pub candidate_z: f64,
    pub oracle_split: usize,
    pub oracle_z: f64,
    pub arg_z: f64,
    pub ars_z: f64,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<VerifyFailure>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "verified {} instances: all passed", self.checked)
        } else {
            writeln!(
                f,
                "verified {} instances: {} FAILED",
                self.checked, self.failures
            )?;
            let failure = self
                .first_failure
                .as_ref()
                .expect("failures imply a counterexample");
            writeln!(f, "first counterexample:")?;
            write!(
                f,
                "{}",
                serde_json::to_string_pretty(failure).expect("counterexample serializes")
            )
        }
    }
}

/// Check the branch-and-bound solver against the exhaustive oracle and the
/// two baselines on seeded instances.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyOutcome, RunError> {
    run_verify_with(config, solve_ilpb)
}

/// [`run_verify`] with an injectable solver, so a deliberately broken solver
/// can prove the harness catches regressions.
pub fn run_verify_with(
    config: &VerifyConfig,
    solver: impl Fn(&Scenario) -> Result<Solution, SolveError>,
) -> Result<VerifyOutcome, RunError> {
    if config.k_max == 0 {
        return Err(RunError::InvalidArgument("k-max must be >= 1".to_string()));
    }
    let ranges = ParameterRanges::default();
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut failures = 0usize;
    let mut first_failure = None;

    for instance in 0..config.instances {
        let layers = master.random_range(1..=config.k_max);
        let lambda = master.random_range(0.0..=1.0);
        let scenario_seed: u64 = master.random();
        let scenario =
            sample_scenario(&ranges, layers, Weights::from_lambda(lambda), scenario_seed)?;

        let candidate = solver(&scenario)?;
        let oracle = solve_bruteforce(&scenario)?;
        let arg = baseline_arg(&scenario)?;
        let ars = baseline_ars(&scenario)?;

        let reason = if (candidate.objective.z - oracle.objective.z).abs() > TIE_EPSILON {
            Some("objective differs from the exhaustive oracle beyond 1e-12")
        } else if candidate.decision != oracle.decision {
            Some("decision differs from the exhaustive oracle under the shared tie-break")
        } else if candidate.objective.z > arg.objective.z {
            Some("objective exceeds the all-to-ground baseline")
        } else if candidate.objective.z > ars.objective.z {
            Some("objective exceeds the all-on-satellite baseline")
        } else {
            None
        };

        if let Some(reason) = reason {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(VerifyFailure {
                    instance,
                    layers,
                    lambda,
                    scenario_seed,
                    reason: reason.to_string(),
                    candidate_split: candidate.split_index(),
                    candidate_z: candidate.objective.z,
                    oracle_split: oracle.split_index(),
                    oracle_z: oracle.objective.z,
                    arg_z: arg.objective.z,
                    ars_z: ars.objective.z,
                    scenario,
                });
            }
        }
    }

    Ok(VerifyOutcome {
        checked: config.instances,
        failures,
        first_failure,
    })
}
