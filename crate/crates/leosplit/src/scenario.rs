//! Seeded random scenario generation and paired sweep construction.
//!
//! Scalar parameters are drawn uniformly from configured ranges; layer
//! ratios follow a geometric profile `alpha_k = c^k` with the base drawn
//! once per scenario, reflecting feature maps that shrink layer by layer.
//! Sweeps pin one axis parameter per point while every other parameter is
//! redrawn per replication and shared across axis points, so trends along
//! the axis are never sampling artifacts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{
    CloudSegment, InferenceRequest, SatelliteProfile, Scenario, ValidationError, Weights,
};
use crate::units::{KBS_PER_MBS, KB_PER_GB};

/// Seeded generator algorithm, recorded in output metadata so result files
/// stay reproducible across tool versions.
pub const PRNG_ALGORITHM: &str = "ChaCha8";

/// Layer count used when a config does not specify one.
pub const DEFAULT_LAYERS: usize = 10;

/// Sampling ranges (canonical units) plus the fixed parameters that have no
/// published range. The defaults carry no ground-truth claim; they are
/// plausible for a small LEO payload and overridable in config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterRanges {
    /// Satellite downlink rate, KB/s.
    pub rate_down: (f64, f64),
    /// Satellite per-KB processing latency, s/KB.
    pub beta: (f64, f64),
    /// Cloud per-KB processing latency, s/KB.
    pub gamma: (f64, f64),
    /// Base of the geometric layer-ratio profile.
    pub alpha_base: (f64, f64),
    /// Max payload power, W.
    pub p_max: (f64, f64),
    /// Initial data size, KB.
    pub data_size: (f64, f64),
    /// Contact period, s.
    pub t_cyc: f64,
    /// Contact duration per pass, s.
    pub t_con: f64,
    /// Max throughput at max power, KB/s.
    pub zeta: f64,
    pub p_idle: f64,
    pub p_leak: f64,
    pub p_off: f64,
    /// Ground station to data center rate, KB/s.
    pub rate_gs_dc: f64,
    /// Cap on gamma, s/KB.
    pub gamma_max: f64,
    pub colocated: bool,
}

impl Default for ParameterRanges {
    fn default() -> Self {
        Self {
            rate_down: (1250.0, 12_500.0), // 10..100 Mbps
            beta: (0.01, 0.03),
            gamma: (0.0001, 0.001),
            alpha_base: (0.05, 0.9),
            p_max: (1.0, 10.0),
            data_size: (1.0e6, 1.0e9), // 1..1000 GB
            t_cyc: 28_800.0,           // 8 h
            t_con: 360.0,              // 6 min
            zeta: 1000.0,
            p_idle: 1.0,
            p_leak: 0.5,
            p_off: 2.0,
            rate_gs_dc: 1.0e5,
            gamma_max: 0.001,
            colocated: false,
        }
    }
}

impl ParameterRanges {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (name, (lo, hi)) in [
            ("rate_down", self.rate_down),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("alpha_base", self.alpha_base),
            ("p_max", self.p_max),
            ("data_size", self.data_size),
        ] {
            let well_formed = crate::model::strictly_positive(lo) && hi >= lo && hi.is_finite();
            if !well_formed {
                return Err(ScenarioError::InvalidRange { name, lo, hi });
            }
        }
        if self.alpha_base.1 > 1.0 {
            return Err(ScenarioError::InvalidRange {
                name: "alpha_base",
                lo: self.alpha_base.0,
                hi: self.alpha_base.1,
            });
        }
        for (name, value) in [
            ("t_cyc", self.t_cyc),
            ("t_con", self.t_con),
            ("zeta", self.zeta),
            ("p_idle", self.p_idle),
            ("p_leak", self.p_leak),
            ("p_off", self.p_off),
            ("rate_gs_dc", self.rate_gs_dc),
            ("gamma_max", self.gamma_max),
        ] {
            if !crate::model::strictly_positive(value) {
                return Err(ScenarioError::NonPositiveParameter { name, value });
            }
        }
        if self.gamma.1 > self.gamma_max {
            return Err(ScenarioError::GammaRangeExceedsCap {
                hi: self.gamma.1,
                gamma_max: self.gamma_max,
            });
        }
        Ok(())
    }
}

/// The parameter a sweep varies. Axis values are in the unit the figure-style
/// reports use: GB for data size, MB/s for the downlink rate, and the latency
/// weight lambda (mu = 1 - lambda) for the weight ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    DataSize,
    RateDown,
    WeightRatio,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::DataSize => "data_size",
            SweepAxis::RateDown => "rate_down",
            SweepAxis::WeightRatio => "weight_ratio",
        }
    }

    pub fn axis_unit(&self) -> &'static str {
        match self {
            SweepAxis::DataSize => "GB",
            SweepAxis::RateDown => "MB/s",
            SweepAxis::WeightRatio => "lambda",
        }
    }
}

/// One sweep: the axis, its points, and how many paired replications to draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Axis values in the axis unit, strictly monotone.
    pub points: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.points.is_empty() {
            return Err(ScenarioError::EmptyPoints);
        }
        let increasing = self.points.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.points.windows(2).all(|w| w[0] > w[1]);
        if self.points.len() > 1 && !increasing && !decreasing {
            return Err(ScenarioError::NonMonotonePoints);
        }
        for &value in &self.points {
            let valid = match self.axis {
                SweepAxis::DataSize | SweepAxis::RateDown => value > 0.0 && value.is_finite(),
                SweepAxis::WeightRatio => (0.0..=1.0).contains(&value),
            };
            if !valid {
                return Err(ScenarioError::InvalidAxisValue {
                    axis: self.axis.as_str(),
                    value,
                });
            }
        }
        if self.replications == 0 {
            return Err(ScenarioError::ZeroReplications);
        }
        Ok(())
    }
}

/// One generated sweep cell: the pinned axis value, which replication drew
/// the remaining parameters, and the seed that reproduces that draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub replication: usize,
    pub seed: u64,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("range {name} invalid: lo = {lo}, hi = {hi}")]
    InvalidRange {
        name: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("parameter {name} must be strictly positive and finite, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("gamma range upper bound {hi} s/KB exceeds gamma_max {gamma_max} s/KB")]
    GammaRangeExceedsCap { hi: f64, gamma_max: f64 },
    #[error("sweep points must be non-empty")]
    EmptyPoints,
    #[error("sweep points must be strictly monotone")]
    NonMonotonePoints,
    #[error("replications must be >= 1")]
    ZeroReplications,
    #[error("axis value {value} outside physical validity for axis {axis}")]
    InvalidAxisValue { axis: &'static str, value: f64 },
}

/// Geometric layer-ratio profile `alpha_k = base^k`, k = 1..=layers.
pub fn geometric_alphas(base: f64, layers: usize) -> Vec<f64> {
    (1..=layers).map(|k| base.powi(k as i32)).collect()
}

/// Deterministically sample one scenario. Identical arguments always yield a
/// field-for-field identical scenario.
pub fn sample_scenario(
    ranges: &ParameterRanges,
    layers: usize,
    weights: Weights,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_scenario_with(ranges, layers, weights, &mut rng)
}

/// [`sample_scenario`] on a caller-provided generator. Draw order is fixed:
/// rate_down, beta, gamma, alpha base, p_max, data_size.
pub fn sample_scenario_with(
    ranges: &ParameterRanges,
    layers: usize,
    weights: Weights,
    rng: &mut impl Rng,
) -> Result<Scenario, ScenarioError> {
    ranges.validate()?;
    let rate_down = rng.random_range(ranges.rate_down.0..=ranges.rate_down.1);
    let beta = rng.random_range(ranges.beta.0..=ranges.beta.1);
    let gamma = rng.random_range(ranges.gamma.0..=ranges.gamma.1);
    let alpha_base = rng.random_range(ranges.alpha_base.0..=ranges.alpha_base.1);
    let p_max = rng.random_range(ranges.p_max.0..=ranges.p_max.1);
    let data_size = rng.random_range(ranges.data_size.0..=ranges.data_size.1);

    let scenario = Scenario {
        satellite: SatelliteProfile {
            beta,
            zeta: ranges.zeta,
            p_max,
            p_idle: ranges.p_idle,
            p_leak: ranges.p_leak,
            p_off: ranges.p_off,
            rate_down,
            t_cyc: ranges.t_cyc,
            t_con: ranges.t_con,
        },
        cloud: CloudSegment {
            gamma,
            gamma_max: ranges.gamma_max,
            rate_gs_dc: ranges.rate_gs_dc,
            colocated: ranges.colocated,
        },
        request: InferenceRequest {
            data_size,
            alphas: geometric_alphas(alpha_base, layers),
        },
        weights,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Build the full grid of one sweep: every axis point crossed with every
/// replication, in (axis point, replication) order. Within a replication the
/// scenarios differ only in the swept parameter.
pub fn build_sweep(
    spec: &SweepSpec,
    ranges: &ParameterRanges,
    layers: usize,
    weights: Weights,
) -> Result<Vec<SweepPoint>, ScenarioError> {
    spec.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let rep_seeds: Vec<u64> = (0..spec.replications).map(|_| master.random()).collect();
    let bases: Vec<Scenario> = rep_seeds
        .iter()
        .map(|&s| sample_scenario(ranges, layers, weights, s))
        .collect::<Result<_, _>>()?;

    let mut grid = Vec::with_capacity(spec.points.len() * spec.replications);
    for &axis_value in &spec.points {
        for (replication, base) in bases.iter().enumerate() {
            let mut scenario = base.clone();
            match spec.axis {
                SweepAxis::DataSize => scenario.request.data_size = axis_value * KB_PER_GB,
                SweepAxis::RateDown => scenario.satellite.rate_down = axis_value * KBS_PER_MBS,
                SweepAxis::WeightRatio => scenario.weights = Weights::from_lambda(axis_value),
            }
            grid.push(SweepPoint {
                axis_value,
                replication,
                seed: rep_seeds[replication],
                scenario,
            });
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let ranges = ParameterRanges::default();
        let a = sample_scenario(&ranges, 10, Weights::balanced(), 7).unwrap();
        let b = sample_scenario(&ranges, 10, Weights::balanced(), 7).unwrap();
        assert_eq!(a, b);
        let c = sample_scenario(&ranges, 10, Weights::balanced(), 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn draws_stay_inside_their_ranges() {
        let ranges = ParameterRanges::default();
        for seed in 0..10_000u64 {
            let s = sample_scenario(&ranges, 1, Weights::balanced(), seed).unwrap();
            assert!((0.01..=0.03).contains(&s.satellite.beta), "seed {seed}");
            assert!((1250.0..=12_500.0).contains(&s.satellite.rate_down));
            assert!((0.0001..=0.001).contains(&s.cloud.gamma));
            assert!((1.0..=10.0).contains(&s.satellite.p_max));
            assert!((1.0e6..=1.0e9).contains(&s.request.data_size));
        }
    }

    #[test]
    fn alpha_profile_is_geometric() {
        assert_eq!(geometric_alphas(0.5, 3), vec![0.5, 0.25, 0.125]);
        let ranges = ParameterRanges::default();
        let s = sample_scenario(&ranges, 6, Weights::balanced(), 3).unwrap();
        let base = s.request.alphas[0];
        for (k, &alpha) in s.request.alphas.iter().enumerate() {
            assert!((alpha - base.powi(k as i32 + 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let inverted = ParameterRanges {
            beta: (0.03, 0.01),
            ..Default::default()
        };
        assert!(matches!(
            sample_scenario(&inverted, 3, Weights::balanced(), 0),
            Err(ScenarioError::InvalidRange { name: "beta", .. })
        ));

        let uncapped = ParameterRanges {
            gamma: (0.0001, 0.01),
            ..Default::default()
        };
        assert!(matches!(
            uncapped.validate(),
            Err(ScenarioError::GammaRangeExceedsCap { .. })
        ));

        let oversized = ParameterRanges {
            alpha_base: (0.5, 1.5),
            ..Default::default()
        };
        assert!(matches!(
            oversized.validate(),
            Err(ScenarioError::InvalidRange {
                name: "alpha_base",
                ..
            })
        ));
    }

    #[test]
    fn rate_sweep_pins_only_the_rate() {
        let spec = SweepSpec {
            axis: SweepAxis::RateDown,
            points: (1..=10).map(|i| (i * 10) as f64).collect(),
            replications: 1,
            seed: 42,
        };
        let grid =
            build_sweep(&spec, &ParameterRanges::default(), 10, Weights::balanced()).unwrap();
        assert_eq!(grid.len(), 10);
        for (point, window) in grid.iter().zip(grid.iter().skip(1)) {
            assert_eq!(point.seed, window.seed);
            let mut a = point.scenario.clone();
            let mut b = window.scenario.clone();
            assert_eq!(a.satellite.rate_down, point.axis_value * KBS_PER_MBS);
            a.satellite.rate_down = 0.0;
            b.satellite.rate_down = 0.0;
            assert_eq!(a, b, "scenarios must differ only in the swept rate");
        }
    }

    #[test]
    fn weight_sweep_pins_only_the_weights() {
        let spec = SweepSpec {
            axis: SweepAxis::WeightRatio,
            points: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            replications: 2,
            seed: 9,
        };
        let grid = build_sweep(&spec, &ParameterRanges::default(), 5, Weights::balanced()).unwrap();
        assert_eq!(grid.len(), 10);
        for point in &grid {
            assert_eq!(
                point.scenario.weights,
                Weights::from_lambda(point.axis_value)
            );
        }
        // paired design: replication r is the same base scenario at every point
        for r in 0..2usize {
            let mut per_rep: Vec<Scenario> = grid
                .iter()
                .filter(|p| p.replication == r)
                .map(|p| p.scenario.clone())
                .collect();
            for s in &mut per_rep {
                s.weights = Weights::balanced();
            }
            assert!(per_rep.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn data_sweep_with_replications_repeats_each_draw_at_every_point() {
        let spec = SweepSpec {
            axis: SweepAxis::DataSize,
            points: vec![1.0, 10.0, 100.0],
            replications: 2,
            seed: 5,
        };
        let grid = build_sweep(&spec, &ParameterRanges::default(), 4, Weights::balanced()).unwrap();
        assert_eq!(grid.len(), 6);
        let seeds: Vec<u64> = grid.iter().map(|p| p.seed).collect();
        assert_eq!(seeds[0..2], seeds[2..4]);
        assert_eq!(seeds[0..2], seeds[4..6]);
        assert_ne!(seeds[0], seeds[1], "replications draw independently");
        for point in &grid {
            assert_eq!(
                point.scenario.request.data_size,
                point.axis_value * KB_PER_GB
            );
        }
    }

    #[test]
    fn sweep_validation_errors() {
        let ranges = ParameterRanges::default();
        let base = SweepSpec {
            axis: SweepAxis::RateDown,
            points: vec![10.0, 20.0],
            replications: 1,
            seed: 0,
        };

        let mut spec = base.clone();
        spec.points.clear();
        assert!(matches!(
            build_sweep(&spec, &ranges, 3, Weights::balanced()),
            Err(ScenarioError::EmptyPoints)
        ));

        let mut spec = base.clone();
        spec.points = vec![10.0, 30.0, 20.0];
        assert!(matches!(
            build_sweep(&spec, &ranges, 3, Weights::balanced()),
            Err(ScenarioError::NonMonotonePoints)
        ));

        let mut spec = base.clone();
        spec.points = vec![-5.0, 10.0];
        assert!(matches!(
            build_sweep(&spec, &ranges, 3, Weights::balanced()),
            Err(ScenarioError::InvalidAxisValue {
                axis: "rate_down",
                ..
            })
        ));

        let mut spec = base.clone();
        spec.replications = 0;
        assert!(matches!(
            build_sweep(&spec, &ranges, 3, Weights::balanced()),
            Err(ScenarioError::ZeroReplications)
        ));

        let mut spec = base;
        spec.axis = SweepAxis::WeightRatio;
        spec.points = vec![0.5, 1.5];
        assert!(matches!(
            build_sweep(&spec, &ranges, 3, Weights::balanced()),
            Err(ScenarioError::InvalidAxisValue {
                axis: "weight_ratio",
                ..
            })
        ));
    }

    #[test]
    fn sweep_output_is_reproducible() {
        let spec = SweepSpec {
            axis: SweepAxis::DataSize,
            points: vec![1.0, 10.0, 100.0, 1000.0],
            replications: 3,
            seed: 2024,
        };
        let ranges = ParameterRanges::default();
        let a = build_sweep(&spec, &ranges, 8, Weights::balanced()).unwrap();
        let b = build_sweep(&spec, &ranges, 8, Weights::balanced()).unwrap();
        assert_eq!(a, b);
    }
}
