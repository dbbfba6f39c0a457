//! Domain types for the satellite-ground system, the partitioned inference
//! request, and offloading decisions.
//!
//! All quantities use canonical units: data in KB (decimal, 1 KB = 1000 B),
//! time in seconds, rates in KB/s, power in watts, energy in joules. Config
//! ingestion converts from whatever unit a value was written in, so nothing
//! past this layer ever guesses a unit.

use serde::Serialize;
use thiserror::Error;

/// Tolerance for the `mu + lambda = 1` weight check.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Onboard compute, power, and downlink parameters of one LEO satellite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatelliteProfile {
    /// Processing latency per KB, seconds.
    pub beta: f64,
    /// Max data processed per second at max power, KB/s.
    pub zeta: f64,
    /// Max power draw of the processing payload, watts.
    pub p_max: f64,
    /// Idle power, watts.
    pub p_idle: f64,
    /// Leakage power of the processing units, watts.
    pub p_leak: f64,
    /// Antenna transmission power, watts.
    pub p_off: f64,
    /// Satellite-to-ground-station rate, KB/s.
    pub rate_down: f64,
    /// Orbital contact period, seconds.
    pub t_cyc: f64,
    /// Contact duration per pass, seconds.
    pub t_con: f64,
}

/// Ground-station-to-data-center segment and cloud processing speed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloudSegment {
    /// Cloud processing latency per KB, seconds.
    pub gamma: f64,
    /// Configured cap on `gamma`, seconds per KB.
    pub gamma_max: f64,
    /// Ground station to data center rate, KB/s.
    pub rate_gs_dc: f64,
    /// True when the data center is attached to the ground station, which
    /// skips the relay leg entirely.
    pub colocated: bool,
}

/// One inference request, already partitioned into per-layer subtasks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceRequest {
    /// Original captured data size, KB.
    pub data_size: f64,
    /// Input-size ratio of each layer relative to `data_size`, one entry
    /// per layer, each in (0, 1].
    pub alphas: Vec<f64>,
}

impl InferenceRequest {
    /// Number of layers K.
    pub fn layer_count(&self) -> usize {
        self.alphas.len()
    }

    /// Input data size of 1-based layer `layer` in KB, `None` if out of range.
    pub fn layer_input_size(&self, layer: usize) -> Option<f64> {
        if layer == 0 {
            return None;
        }
        self.alphas.get(layer - 1).map(|a| a * self.data_size)
    }
}

/// Energy/latency weighting, `mu` on energy and `lambda` on latency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    pub mu: f64,
    pub lambda: f64,
}

impl Weights {
    /// Equal weight on energy and latency.
    pub fn balanced() -> Self {
        Self {
            mu: 0.5,
            lambda: 0.5,
        }
    }

    /// Weights from the latency share, `mu = 1 - lambda`.
    pub fn from_lambda(lambda: f64) -> Self {
        Self {
            mu: 1.0 - lambda,
            lambda,
        }
    }
}

/// One fully bound problem instance: a single satellite, one ground station
/// link, one data center, one partitioned request, and the objective weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub satellite: SatelliteProfile,
    pub cloud: CloudSegment,
    pub request: InferenceRequest,
    pub weights: Weights,
}

/// Strictly positive and finite; rejects NaN and infinities.
pub(crate) fn strictly_positive(value: f64) -> bool {
    value.is_finite() && value > 0.0
}

impl Scenario {
    /// Check every type invariant; `Err` names the first violated one.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let sat = &self.satellite;
        for (field, value) in [
            ("beta", sat.beta),
            ("zeta", sat.zeta),
            ("p_max", sat.p_max),
            ("p_idle", sat.p_idle),
            ("p_leak", sat.p_leak),
            ("p_off", sat.p_off),
            ("rate_down", sat.rate_down),
            ("t_cyc", sat.t_cyc),
            ("t_con", sat.t_con),
        ] {
            if !strictly_positive(value) {
                return Err(ValidationError::NonPositiveSatelliteField { field, value });
            }
        }
        let contact_fits = sat.t_con < sat.t_cyc;
        if !contact_fits {
            return Err(ValidationError::ContactLongerThanCycle {
                t_con: sat.t_con,
                t_cyc: sat.t_cyc,
            });
        }

        let cloud = &self.cloud;
        for (field, value) in [
            ("gamma", cloud.gamma),
            ("gamma_max", cloud.gamma_max),
            ("rate_gs_dc", cloud.rate_gs_dc),
        ] {
            if !strictly_positive(value) {
                return Err(ValidationError::NonPositiveCloudField { field, value });
            }
        }
        let gamma_capped = cloud.gamma <= cloud.gamma_max;
        if !gamma_capped {
            return Err(ValidationError::GammaCapViolated {
                gamma: cloud.gamma,
                gamma_max: cloud.gamma_max,
            });
        }

        let req = &self.request;
        if !strictly_positive(req.data_size) {
            return Err(ValidationError::NonPositiveDataSize {
                value: req.data_size,
            });
        }
        if req.alphas.is_empty() {
            return Err(ValidationError::NoLayers);
        }
        for (i, &alpha) in req.alphas.iter().enumerate() {
            let in_unit_interval = alpha > 0.0 && alpha <= 1.0;
            if !in_unit_interval {
                return Err(ValidationError::AlphaOutOfRange {
                    layer: i + 1,
                    value: alpha,
                });
            }
        }

        let w = &self.weights;
        let non_negative = w.mu >= 0.0 && w.lambda >= 0.0;
        if !non_negative {
            return Err(ValidationError::NegativeWeight {
                mu: w.mu,
                lambda: w.lambda,
            });
        }
        let normalized = (w.mu + w.lambda - 1.0).abs() <= WEIGHT_SUM_TOLERANCE;
        if !normalized {
            return Err(ValidationError::WeightsNotNormalized {
                sum: w.mu + w.lambda,
            });
        }
        Ok(())
    }
}

/// Validate a scenario and hand it back unchanged, or report the first
/// violated invariant.
pub fn validate_scenario(scenario: Scenario) -> Result<Scenario, ValidationError> {
    scenario.validate()?;
    Ok(scenario)
}

/// Per-layer placement of an inference request: entry k is true when layer
/// k+1 runs on the satellite.
///
/// The raw captured data originates on the satellite, so the virtual layer 0
/// is always on the satellite. A decision is *feasible* when the satellite
/// layers form a prefix: once a layer runs in the cloud every later layer
/// does too, so the intermediate output crosses the downlink exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffloadDecision {
    assignments: Vec<bool>,
}

impl OffloadDecision {
    /// Decision from an arbitrary assignment vector, feasible or not.
    pub fn from_assignments(assignments: Vec<bool>) -> Self {
        Self { assignments }
    }

    /// The prefix decision keeping layers `1..=split` on the satellite.
    pub fn from_split(split: usize, layers: usize) -> Result<Self, ValidationError> {
        if split > layers {
            return Err(ValidationError::SplitOutOfRange { split, layers });
        }
        Ok(Self {
            assignments: (0..layers).map(|k| k < split).collect(),
        })
    }

    pub fn layer_count(&self) -> usize {
        self.assignments.len()
    }

    pub fn assignments(&self) -> &[bool] {
        &self.assignments
    }

    /// Whether 1-based layer `layer` runs on the satellite; layer 0 is the
    /// raw capture and always onboard.
    pub fn on_satellite(&self, layer: usize) -> bool {
        if layer == 0 {
            return true;
        }
        self.assignments.get(layer - 1).copied().unwrap_or(false)
    }

    /// True iff the satellite layers form a prefix with at most one
    /// downlink transmission.
    pub fn is_feasible(&self) -> bool {
        let monotone = self.assignments.windows(2).all(|w| w[0] || !w[1]);
        monotone && self.transmission_count() <= 1
    }

    /// Number of onboard→cloud transitions, counting the virtual layer 0 as
    /// onboard. Feasible decisions have at most one.
    pub fn transmission_count(&self) -> usize {
        (1..=self.assignments.len())
            .filter(|&k| self.on_satellite(k - 1) && !self.on_satellite(k))
            .count()
    }

    /// Number of layers on the satellite; for feasible decisions this is the
    /// split index.
    pub fn split_index(&self) -> usize {
        self.assignments.iter().filter(|&&h| h).count()
    }

    /// 1-based layer whose input crosses the downlink, `None` when every
    /// layer stays onboard. Meaningful for feasible decisions.
    pub fn transmission_layer(&self) -> Option<usize> {
        (1..=self.assignments.len()).find(|&k| self.on_satellite(k - 1) && !self.on_satellite(k))
    }
}

/// See [`OffloadDecision::from_split`].
pub fn decision_from_split(
    split: usize,
    layers: usize,
) -> Result<OffloadDecision, ValidationError> {
    OffloadDecision::from_split(split, layers)
}

/// See [`OffloadDecision::is_feasible`].
pub fn is_feasible(decision: &OffloadDecision) -> bool {
    decision.is_feasible()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("satellite.{field} must be strictly positive, got {value}")]
    NonPositiveSatelliteField { field: &'static str, value: f64 },
    #[error("contact duration t_con = {t_con} s must be shorter than the contact period t_cyc = {t_cyc} s")]
    ContactLongerThanCycle { t_con: f64, t_cyc: f64 },
    #[error("cloud.{field} must be strictly positive, got {value}")]
    NonPositiveCloudField { field: &'static str, value: f64 },
    #[error("gamma cap violated: gamma = {gamma} s/KB exceeds gamma_max = {gamma_max} s/KB")]
    GammaCapViolated { gamma: f64, gamma_max: f64 },
    #[error("request.data_size must be strictly positive, got {value}")]
    NonPositiveDataSize { value: f64 },
    #[error("K must be >= 1: request.alphas is empty")]
    NoLayers,
    #[error("alpha_{layer} = {value} is outside (0, 1]")]
    AlphaOutOfRange { layer: usize, value: f64 },
    #[error("weights must be non-negative, got mu = {mu}, lambda = {lambda}")]
    NegativeWeight { mu: f64, lambda: f64 },
    #[error("weights must satisfy mu + lambda = 1 within 1e-12, got sum = {sum}")]
    WeightsNotNormalized { sum: f64 },
    #[error("split index {split} is out of range 0..={layers}")]
    SplitOutOfRange { split: usize, layers: usize },
}
