//! Layer-wise DNN inference offloading between a LEO satellite and the
//! ground segment.
//!
//! A captured-data request is partitioned into per-layer subtasks; the open
//! choice is the split point: how many leading layers run on the satellite
//! before the intermediate output is downlinked and the rest finish in a
//! cloud data center. This crate models the latency and onboard energy of
//! every such decision, scalarizes them into a weighted normalized objective,
//! and finds the optimum by branch and bound, cross-checked against
//! exhaustive enumeration. A seeded scenario generator and sweep harness
//! reproduce the experiment grids this model is normally studied on.

pub mod config;
pub mod cost;
pub mod model;
pub mod objective;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod units;

pub use cost::{
    downlink_latency, gs_to_dc_latency, offload_energy, proc_energy_satellite, proc_latency_cloud,
    proc_latency_satellite, total_energy, total_latency, CostError, DownlinkLatency,
    EnergyBreakdown, LatencyBreakdown,
};
pub use model::{
    decision_from_split, is_feasible, validate_scenario, CloudSegment, InferenceRequest,
    OffloadDecision, SatelliteProfile, Scenario, ValidationError, Weights,
};
pub use objective::{
    check_constraints, normalization_bounds, objective, ConstraintViolation, NormalizationBounds,
    ObjectiveError, ObjectiveValue,
};
pub use scenario::{
    build_sweep, geometric_alphas, sample_scenario, ParameterRanges, ScenarioError, SweepAxis,
    SweepPoint, SweepSpec,
};
pub use solver::{
    baseline_arg, baseline_ars, lower_bound, solve_bruteforce, solve_ilpb, solve_ilpb_with, Method,
    PruneMode, Solution, SolveError,
};
