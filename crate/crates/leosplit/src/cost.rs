//! Latency and onboard-energy calculators for any feasible offload decision.
//!
//! Latency has four parts: onboard processing, satellite-to-ground downlink
//! (transmission plus whole contact periods spent waiting when the data does
//! not fit one pass), ground-station-to-data-center relay, and cloud
//! processing. Onboard energy has two: processing and antenna transmission.
//! Waiting periods consume no transmission energy; the antenna is idle.

use serde::Serialize;
use thiserror::Error;

use crate::model::{CloudSegment, InferenceRequest, OffloadDecision, SatelliteProfile, Scenario};

/// Relative guard applied before the contact-window ceiling so data that
/// exactly fills a whole number of passes never pays a phantom extra orbit
/// from 1-ulp rounding.
pub const CEILING_GUARD: f64 = 1e-9;

/// The four latency terms and their sum, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatencyBreakdown {
    pub t_satellite: f64,
    pub t_s_to_g: f64,
    pub t_g_to_c: f64,
    pub t_cloud: f64,
    pub total: f64,
}

/// Onboard energy terms and their sum, joules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub e_processing: f64,
    pub e_transmission: f64,
    pub total: f64,
}

/// Downlink latency split into active transmission and waiting time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DownlinkLatency {
    /// Time the antenna actually transmits, seconds.
    pub transmit: f64,
    /// Whole contact periods spent waiting for further passes, seconds.
    pub waiting: f64,
}

impl DownlinkLatency {
    pub fn total(&self) -> f64 {
        self.transmit + self.waiting
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("layer index {layer} out of range 1..={layers}")]
    LayerOutOfRange { layer: usize, layers: usize },
    #[error("decision covers {decision_layers} layers but the request has {request_layers}")]
    LayerCountMismatch {
        decision_layers: usize,
        request_layers: usize,
    },
    #[error("offload decision is infeasible: satellite layers must form a prefix")]
    InfeasibleDecision,
}

fn layer_size(layer: usize, request: &InferenceRequest) -> Result<f64, CostError> {
    request
        .layer_input_size(layer)
        .ok_or(CostError::LayerOutOfRange {
            layer,
            layers: request.layer_count(),
        })
}

/// Time to process layer `layer` on the satellite, seconds.
pub fn proc_latency_satellite(
    layer: usize,
    request: &InferenceRequest,
    satellite: &SatelliteProfile,
) -> Result<f64, CostError> {
    Ok(layer_size(layer, request)? * satellite.beta)
}

/// Time to process layer `layer` in the cloud data center, seconds.
pub fn proc_latency_cloud(
    layer: usize,
    request: &InferenceRequest,
    cloud: &CloudSegment,
) -> Result<f64, CostError> {
    Ok(layer_size(layer, request)? * cloud.gamma)
}

/// Downlink latency for the input of layer `layer`: active transmission time
/// plus whole contact periods spent waiting when the data exceeds one pass's
/// capacity `rate_down * t_con`.
pub fn downlink_latency(
    layer: usize,
    request: &InferenceRequest,
    satellite: &SatelliteProfile,
) -> Result<DownlinkLatency, CostError> {
    let size = layer_size(layer, request)?;
    let transmit = size / satellite.rate_down;
    let passes_needed = size / (satellite.rate_down * satellite.t_con);
    let passes = (passes_needed * (1.0 - CEILING_GUARD)).ceil().max(1.0);
    Ok(DownlinkLatency {
        transmit,
        waiting: satellite.t_cyc * (passes - 1.0),
    })
}

/// Relay latency from the ground station to the data center; zero when the
/// data center is attached to the ground station.
pub fn gs_to_dc_latency(
    layer: usize,
    request: &InferenceRequest,
    cloud: &CloudSegment,
) -> Result<f64, CostError> {
    let size = layer_size(layer, request)?;
    if cloud.colocated {
        Ok(0.0)
    } else {
        Ok(size / cloud.rate_gs_dc)
    }
}

/// Onboard energy for processing layer `layer`, joules: processing time times
/// the sum of the throughput-scaled max power and the idle and leak power.
pub fn proc_energy_satellite(
    layer: usize,
    request: &InferenceRequest,
    satellite: &SatelliteProfile,
) -> Result<f64, CostError> {
    let size = layer_size(layer, request)?;
    let proc_latency = size * satellite.beta;
    Ok(proc_latency
        * (size / (satellite.zeta * proc_latency) * satellite.p_max
            + satellite.p_idle
            + satellite.p_leak))
}

/// Antenna energy for downlinking the input of layer `layer`, joules. Only
/// active transmission time draws `p_off`; waiting consumes nothing.
pub fn offload_energy(
    layer: usize,
    request: &InferenceRequest,
    satellite: &SatelliteProfile,
) -> Result<f64, CostError> {
    let size = layer_size(layer, request)?;
    Ok(size / satellite.rate_down * satellite.p_off)
}

fn check_decision(decision: &OffloadDecision, request: &InferenceRequest) -> Result<(), CostError> {
    if decision.layer_count() != request.layer_count() {
        return Err(CostError::LayerCountMismatch {
            decision_layers: decision.layer_count(),
            request_layers: request.layer_count(),
        });
    }
    if !decision.is_feasible() {
        return Err(CostError::InfeasibleDecision);
    }
    Ok(())
}

/// End-to-end latency of a feasible decision. At most one layer contributes
/// to the two transmission terms because the satellite layers form a prefix.
pub fn total_latency(
    decision: &OffloadDecision,
    scenario: &Scenario,
) -> Result<LatencyBreakdown, CostError> {
    check_decision(decision, &scenario.request)?;
    let request = &scenario.request;

    let mut t_satellite = 0.0;
    let mut t_cloud = 0.0;
    for layer in 1..=request.layer_count() {
        if decision.on_satellite(layer) {
            t_satellite += proc_latency_satellite(layer, request, &scenario.satellite)?;
        } else {
            t_cloud += proc_latency_cloud(layer, request, &scenario.cloud)?;
        }
    }

    let (t_s_to_g, t_g_to_c) = match decision.transmission_layer() {
        Some(layer) => (
            downlink_latency(layer, request, &scenario.satellite)?.total(),
            gs_to_dc_latency(layer, request, &scenario.cloud)?,
        ),
        None => (0.0, 0.0),
    };

    Ok(LatencyBreakdown {
        t_satellite,
        t_s_to_g,
        t_g_to_c,
        t_cloud,
        total: t_satellite + t_s_to_g + t_g_to_c + t_cloud,
    })
}

/// Onboard energy of a feasible decision: processing energy for satellite
/// layers plus transmission energy for the single downlinked layer, if any.
pub fn total_energy(
    decision: &OffloadDecision,
    scenario: &Scenario,
) -> Result<EnergyBreakdown, CostError> {
    check_decision(decision, &scenario.request)?;
    let request = &scenario.request;

    let mut e_processing = 0.0;
    for layer in 1..=request.layer_count() {
        if decision.on_satellite(layer) {
            e_processing += proc_energy_satellite(layer, request, &scenario.satellite)?;
        }
    }
    let e_transmission = match decision.transmission_layer() {
        Some(layer) => offload_energy(layer, request, &scenario.satellite)?,
        None => 0.0,
    };

    Ok(EnergyBreakdown {
        e_processing,
        e_transmission,
        total: e_processing + e_transmission,
    })
}
