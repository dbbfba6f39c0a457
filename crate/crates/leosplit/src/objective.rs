//! Min-max normalization bounds, the weighted-sum objective Z, and
//! constraint verification for candidate decisions.
//!
//! Bounds are taken over the feasible decision set of a scenario — the K+1
//! prefix splits — so every feasible decision lands in [0, 1] on both axes.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cost::{total_energy, total_latency, CostError};
use crate::model::{OffloadDecision, Scenario};

/// Relative span below which a normalization denominator is treated as
/// degenerate and the corresponding term is defined as 0 for all decisions.
pub const DEGENERATE_SPAN: f64 = 1e-12;

/// Energy and latency extrema over the feasible decisions of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationBounds {
    pub e_min: f64,
    pub e_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    digest: u64,
}

impl NormalizationBounds {
    /// Digest of the scenario these bounds were computed from.
    pub fn scenario_digest(&self) -> u64 {
        self.digest
    }

    /// Min-max normalized energy; 0 when the feasible set is degenerate in E.
    pub fn normalize_energy(&self, energy: f64) -> f64 {
        normalize(energy, self.e_min, self.e_max)
    }

    /// Min-max normalized latency; 0 when the feasible set is degenerate in T.
    pub fn normalize_latency(&self, latency: f64) -> f64 {
        normalize(latency, self.t_min, self.t_max)
    }
}

fn normalize(value: f64, min: f64, max: f64) -> f64 {
    let span = max - min;
    if span <= DEGENERATE_SPAN * max.abs() {
        0.0
    } else {
        (value - min) / span
    }
}

/// The scalarized objective of one decision together with its raw inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveValue {
    /// `mu * norm_e + lambda * norm_t`.
    pub z: f64,
    pub norm_e: f64,
    pub norm_t: f64,
    /// Total onboard energy, joules.
    pub raw_e: f64,
    /// Total latency, seconds.
    pub raw_t: f64,
}

impl ObjectiveValue {
    /// Single place where Z is assembled, so every caller shares one
    /// floating-point path.
    pub(crate) fn from_raw(
        raw_t: f64,
        raw_e: f64,
        scenario: &Scenario,
        bounds: &NormalizationBounds,
    ) -> Self {
        let norm_e = bounds.normalize_energy(raw_e);
        let norm_t = bounds.normalize_latency(raw_t);
        Self {
            z: scenario.weights.mu * norm_e + scenario.weights.lambda * norm_t,
            norm_e,
            norm_t,
            raw_e,
            raw_t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectiveError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("bounds were computed for a different scenario (digest {expected:#018x}, got {actual:#018x})")]
    ScenarioMismatch { expected: u64, actual: u64 },
}

/// Evaluate energy and latency for every feasible decision of `scenario`
/// (the K+1 prefix splits) and take component-wise extrema.
pub fn normalization_bounds(scenario: &Scenario) -> NormalizationBounds {
    let layers = scenario.request.layer_count();
    let mut e_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    let mut t_min = f64::INFINITY;
    let mut t_max = f64::NEG_INFINITY;
    for split in 0..=layers {
        let decision =
            OffloadDecision::from_split(split, layers).expect("split ranges over 0..=layers");
        let latency =
            total_latency(&decision, scenario).expect("prefix decisions are always feasible");
        let energy =
            total_energy(&decision, scenario).expect("prefix decisions are always feasible");
        e_min = e_min.min(energy.total);
        e_max = e_max.max(energy.total);
        t_min = t_min.min(latency.total);
        t_max = t_max.max(latency.total);
    }
    NormalizationBounds {
        e_min,
        e_max,
        t_min,
        t_max,
        digest: scenario_digest(scenario),
    }
}

/// Z of one feasible decision under precomputed bounds. Rejects bounds that
/// were computed from a different scenario.
pub fn objective(
    decision: &OffloadDecision,
    scenario: &Scenario,
    bounds: &NormalizationBounds,
) -> Result<ObjectiveValue, ObjectiveError> {
    let actual = scenario_digest(scenario);
    if bounds.digest != actual {
        return Err(ObjectiveError::ScenarioMismatch {
            expected: bounds.digest,
            actual,
        });
    }
    let latency = total_latency(decision, scenario)?;
    let energy = total_energy(decision, scenario)?;
    Ok(ObjectiveValue::from_raw(
        latency.total,
        energy.total,
        scenario,
        bounds,
    ))
}

/// One violated problem constraint. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConstraintViolation {
    /// Cloud per-KB latency exceeds its configured cap.
    GammaCap { gamma: f64, gamma_max: f64 },
    /// The decision does not assign every layer of the request exactly once.
    LayerCountMismatch {
        decision_layers: usize,
        request_layers: usize,
    },
    /// More than one onboard→cloud transition.
    MultipleTransmissions { count: usize },
    /// A cloud layer is followed by a satellite layer, at 1-based `layer`.
    MonotonicityViolated { layer: usize },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GammaCap { gamma, gamma_max } => {
                write!(
                    f,
                    "gamma cap violated: gamma = {gamma} s/KB exceeds gamma_max = {gamma_max} s/KB"
                )
            }
            Self::LayerCountMismatch {
                decision_layers,
                request_layers,
            } => {
                write!(f, "decision assigns {decision_layers} layers but the request has {request_layers}")
            }
            Self::MultipleTransmissions { count } => {
                write!(
                    f,
                    "decision downlinks {count} times; at most one transmission is allowed"
                )
            }
            Self::MonotonicityViolated { layer } => {
                write!(f, "monotonicity violated at layer {layer}: a cloud layer precedes a satellite layer")
            }
        }
    }
}

/// Check a decision and scenario against the problem constraints: the gamma
/// cap, completeness of the assignment, the single-transmission rule, and
/// prefix monotonicity. Binarity holds structurally for `OffloadDecision`.
pub fn check_constraints(
    decision: &OffloadDecision,
    scenario: &Scenario,
) -> Vec<ConstraintViolation> {
    let mut violations = Vec::new();
    if scenario.cloud.gamma > scenario.cloud.gamma_max {
        violations.push(ConstraintViolation::GammaCap {
            gamma: scenario.cloud.gamma,
            gamma_max: scenario.cloud.gamma_max,
        });
    }
    if decision.layer_count() != scenario.request.layer_count() {
        violations.push(ConstraintViolation::LayerCountMismatch {
            decision_layers: decision.layer_count(),
            request_layers: scenario.request.layer_count(),
        });
    }
    let transmissions = decision.transmission_count();
    if transmissions > 1 {
        violations.push(ConstraintViolation::MultipleTransmissions {
            count: transmissions,
        });
    }
    for (i, pair) in decision.assignments().windows(2).enumerate() {
        if !pair[0] && pair[1] {
            violations.push(ConstraintViolation::MonotonicityViolated { layer: i + 1 });
        }
    }
    violations
}

/// Order-sensitive FNV-1a digest of every scenario field, used to detect
/// bounds reuse across scenarios.
pub fn scenario_digest(scenario: &Scenario) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(PRIME);
        }
    };
    let sat = &scenario.satellite;
    let cloud = &scenario.cloud;
    let req = &scenario.request;
    for value in [
        sat.beta,
        sat.zeta,
        sat.p_max,
        sat.p_idle,
        sat.p_leak,
        sat.p_off,
        sat.rate_down,
        sat.t_cyc,
        sat.t_con,
        cloud.gamma,
        cloud.gamma_max,
        cloud.rate_gs_dc,
        req.data_size,
        scenario.weights.mu,
        scenario.weights.lambda,
    ] {
        eat(&value.to_bits().to_le_bytes());
    }
    eat(&[cloud.colocated as u8]);
    eat(&(req.alphas.len() as u64).to_le_bytes());
    for &alpha in &req.alphas {
        eat(&alpha.to_bits().to_le_bytes());
    }
    hash
}
