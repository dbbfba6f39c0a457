//! Branch-and-bound split solver, exhaustive oracle, and the two baselines:
//! all-layers-to-ground and all-layers-on-satellite.
//!
//! The search assigns layers in order with value order {onboard, offload}.
//! Setting a layer to offload forces every later layer to offload too, so
//! that branch closes into a single complete decision; the live part of the
//! tree is the all-onboard chain plus one forced leaf per depth, at most
//! 2K+1 nodes. A branch is pruned when its admissible lower bound exceeds
//! the incumbent by more than the tie window, which keeps every decision
//! tied with the optimum explored and makes the tie-break exact.

use serde::Serialize;
use thiserror::Error;

use crate::cost::{
    proc_energy_satellite, proc_latency_cloud, proc_latency_satellite, total_energy, total_latency,
    EnergyBreakdown, LatencyBreakdown,
};
use crate::model::{OffloadDecision, Scenario, ValidationError};
use crate::objective::{normalization_bounds, NormalizationBounds, ObjectiveValue};

/// Decisions with Z within this window of the minimum count as tied; ties
/// resolve to the smallest split index.
pub const TIE_EPSILON: f64 = 1e-12;

/// How a solution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Ilpb,
    BruteForce,
    Arg,
    Ars,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Ilpb => "ILPB",
            Method::BruteForce => "BruteForce",
            Method::Arg => "ARG",
            Method::Ars => "ARS",
        }
    }
}

/// A solved instance: the chosen decision and its full cost picture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub decision: OffloadDecision,
    pub objective: ObjectiveValue,
    pub latency: LatencyBreakdown,
    pub energy: EnergyBreakdown,
    /// Search-tree nodes visited (for the baselines, the single evaluation).
    pub nodes_explored: u64,
    pub method: Method,
}

impl Solution {
    pub fn split_index(&self) -> usize {
        self.decision.split_index()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Whether the bound test is applied; `Disabled` explores every node and
/// `Inverted` deliberately prunes the promising branches. Both exist for
/// soundness and mutation testing of the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneMode {
    Enabled,
    Disabled,
    Inverted,
}

struct Evaluation {
    decision: OffloadDecision,
    objective: ObjectiveValue,
    latency: LatencyBreakdown,
    energy: EnergyBreakdown,
}

fn evaluate_split(split: usize, scenario: &Scenario, bounds: &NormalizationBounds) -> Evaluation {
    let decision = OffloadDecision::from_split(split, scenario.request.layer_count())
        .expect("split within 0..=layers");
    let latency = total_latency(&decision, scenario).expect("prefix decisions are feasible");
    let energy = total_energy(&decision, scenario).expect("prefix decisions are feasible");
    let objective = ObjectiveValue::from_raw(latency.total, energy.total, scenario, bounds);
    Evaluation {
        decision,
        objective,
        latency,
        energy,
    }
}

/// Smallest split whose Z lies within [`TIE_EPSILON`] of the exact minimum.
fn best_split(candidates: &[(usize, f64)]) -> usize {
    let z_min = candidates
        .iter()
        .map(|&(_, z)| z)
        .fold(f64::INFINITY, f64::min);
    candidates
        .iter()
        .filter(|&&(_, z)| z <= z_min + TIE_EPSILON)
        .map(|&(split, _)| split)
        .min()
        .expect("candidate set is never empty")
}

fn finish(
    split: usize,
    scenario: &Scenario,
    bounds: &NormalizationBounds,
    nodes_explored: u64,
    method: Method,
) -> Solution {
    let eval = evaluate_split(split, scenario, bounds);
    Solution {
        decision: eval.decision,
        objective: eval.objective,
        latency: eval.latency,
        energy: eval.energy,
        nodes_explored,
        method,
    }
}

/// Evaluate Z for every prefix decision and take the tie-broken minimum.
/// Independent of the branch-and-bound path; used as its oracle.
pub fn solve_bruteforce(scenario: &Scenario) -> Result<Solution, SolveError> {
    scenario.validate()?;
    let layers = scenario.request.layer_count();
    let bounds = normalization_bounds(scenario);
    let candidates: Vec<(usize, f64)> = (0..=layers)
        .map(|split| (split, evaluate_split(split, scenario, &bounds).objective.z))
        .collect();
    Ok(finish(
        best_split(&candidates),
        scenario,
        &bounds,
        (layers + 1) as u64,
        Method::BruteForce,
    ))
}

/// Branch-and-bound over the layer placement variables.
pub fn solve_ilpb(scenario: &Scenario) -> Result<Solution, SolveError> {
    solve_ilpb_with(scenario, PruneMode::Enabled)
}

/// [`solve_ilpb`] with an explicit prune mode, for diagnostics and tests.
pub fn solve_ilpb_with(scenario: &Scenario, prune: PruneMode) -> Result<Solution, SolveError> {
    scenario.validate()?;
    let bounds = normalization_bounds(scenario);
    let mut search = Search {
        scenario,
        bounds: &bounds,
        prune,
        prefix: vec![false; scenario.request.layer_count()],
        incumbent: f64::INFINITY,
        nodes: 0,
        leaves: Vec::with_capacity(scenario.request.layer_count() + 1),
    };
    search.descend(0);
    let split = best_split(&search.leaves);
    Ok(finish(split, scenario, &bounds, search.nodes, Method::Ilpb))
}

struct Search<'a> {
    scenario: &'a Scenario,
    bounds: &'a NormalizationBounds,
    prune: PruneMode,
    prefix: Vec<bool>,
    incumbent: f64,
    nodes: u64,
    leaves: Vec<(usize, f64)>,
}

impl Search<'_> {
    /// Visit the node whose first `depth` layers are onboard.
    fn descend(&mut self, depth: usize) {
        self.nodes += 1;
        let layers = self.prefix.len();
        if depth == layers {
            self.record_leaf(layers);
            return;
        }

        // keep layer depth+1 onboard
        self.prefix[depth] = true;
        let bound = lower_bound(&self.prefix[..=depth], self.scenario, self.bounds);
        if !self.should_prune(bound) {
            self.descend(depth + 1);
        }

        // offload layer depth+1; everything after is forced off the
        // satellite, so this child is the complete decision at split `depth`
        self.prefix[depth] = false;
        let bound = lower_bound(&self.prefix[..=depth], self.scenario, self.bounds);
        if !self.should_prune(bound) {
            self.nodes += 1;
            self.record_leaf(depth);
        }
        self.prefix[depth] = true;
    }

    fn record_leaf(&mut self, split: usize) {
        let z = evaluate_split(split, self.scenario, self.bounds)
            .objective
            .z;
        self.leaves.push((split, z));
        if z < self.incumbent {
            self.incumbent = z;
        }
    }

    fn should_prune(&self, bound: f64) -> bool {
        match self.prune {
            PruneMode::Enabled => bound > self.incumbent + TIE_EPSILON,
            PruneMode::Disabled => false,
            PruneMode::Inverted => {
                self.incumbent.is_finite() && bound <= self.incumbent + TIE_EPSILON
            }
        }
    }
}

/// Admissible lower bound on Z over all feasible completions of a partial
/// layer assignment.
///
/// `decided` is the prefix of assigned layers and must be monotone
/// (no satellite layer after a cloud layer); `bounds` must come from
/// `scenario`. Once any layer is offloaded the completion is forced, so the
/// bound equals that completion's exact Z. For an all-onboard prefix the
/// bound commits the onboard terms, takes the cheaper side of each undecided
/// layer, and lower-bounds the transmission terms by zero; normalization is
/// monotone affine, so admissibility carries over from raw values.
///
/// # Panics
/// If `decided` is longer than the request or not monotone.
pub fn lower_bound(decided: &[bool], scenario: &Scenario, bounds: &NormalizationBounds) -> f64 {
    let layers = scenario.request.layer_count();
    assert!(
        decided.len() <= layers,
        "partial assignment longer than the request"
    );
    assert!(
        decided.windows(2).all(|w| w[0] || !w[1]),
        "partial assignment violates monotonicity"
    );

    if let Some(first_off) = decided.iter().position(|&onboard| !onboard) {
        // completion forced: exactly the prefix decision at split `first_off`
        return evaluate_split(first_off, scenario, bounds).objective.z;
    }
    if decided.len() == layers {
        return evaluate_split(layers, scenario, bounds).objective.z;
    }

    let request = &scenario.request;
    let mut optimistic_latency = 0.0;
    let mut committed_energy = 0.0;
    for layer in 1..=layers {
        let onboard_latency =
            proc_latency_satellite(layer, request, &scenario.satellite).expect("layer in range");
        if layer <= decided.len() {
            optimistic_latency += onboard_latency;
            committed_energy +=
                proc_energy_satellite(layer, request, &scenario.satellite).expect("layer in range");
        } else {
            let cloud_latency =
                proc_latency_cloud(layer, request, &scenario.cloud).expect("layer in range");
            optimistic_latency += onboard_latency.min(cloud_latency);
        }
    }
    ObjectiveValue::from_raw(optimistic_latency, committed_energy, scenario, bounds).z
}

/// Baseline: transmit everything and process in the cloud (split 0).
pub fn baseline_arg(scenario: &Scenario) -> Result<Solution, SolveError> {
    scenario.validate()?;
    let bounds = normalization_bounds(scenario);
    Ok(finish(0, scenario, &bounds, 1, Method::Arg))
}

/// Baseline: run every layer on the satellite (split K).
pub fn baseline_ars(scenario: &Scenario) -> Result<Solution, SolveError> {
    scenario.validate()?;
    let bounds = normalization_bounds(scenario);
    Ok(finish(
        scenario.request.layer_count(),
        scenario,
        &bounds,
        1,
        Method::Ars,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{decision_from_split, Weights};
    use crate::objective::objective;
    use crate::scenario::{sample_scenario, ParameterRanges};
    use crate::testutil::t1a_scenario;

    #[test]
    fn bruteforce_t1a_balanced() {
        let solution = solve_bruteforce(&t1a_scenario()).unwrap();
        assert_eq!(solution.split_index(), 0);
        assert_eq!(solution.objective.z, 0.0);
        assert_eq!(solution.nodes_explored, 4);
        assert_eq!(solution.method, Method::BruteForce);
    }

    #[test]
    fn bruteforce_latency_only_picks_min_latency() {
        let mut scenario = t1a_scenario();
        scenario.weights = Weights {
            mu: 0.0,
            lambda: 1.0,
        };
        let solution = solve_bruteforce(&scenario).unwrap();
        // T over splits is {10.1, 20.9, 25.2, 26}
        assert_eq!(solution.split_index(), 0);
        assert!((solution.latency.total - 10.1).abs() < 1e-9);
    }

    #[test]
    fn ilpb_matches_bruteforce_on_t1a() {
        let scenario = t1a_scenario();
        let ilpb = solve_ilpb(&scenario).unwrap();
        let oracle = solve_bruteforce(&scenario).unwrap();
        assert_eq!(ilpb.decision, oracle.decision);
        assert!((ilpb.objective.z - oracle.objective.z).abs() <= TIE_EPSILON);
        assert_eq!(ilpb.method, Method::Ilpb);
    }

    #[test]
    fn single_layer_is_a_two_candidate_race() {
        let mut scenario = t1a_scenario();
        scenario.request.alphas = vec![0.8];
        let ilpb = solve_ilpb(&scenario).unwrap();
        let oracle = solve_bruteforce(&scenario).unwrap();
        assert_eq!(oracle.nodes_explored, 2);
        assert_eq!(ilpb.decision, oracle.decision);
        assert_eq!(ilpb.objective.z, oracle.objective.z);
    }

    #[test]
    fn node_counts_stay_within_the_collapsed_tree() {
        for seed in 0..50u64 {
            let layers = 1 + (seed as usize % 20);
            let scenario = sample_scenario(
                &ParameterRanges::default(),
                layers,
                Weights::balanced(),
                seed,
            )
            .unwrap();
            let ilpb = solve_ilpb(&scenario).unwrap();
            assert!(
                ilpb.nodes_explored <= (2 * layers + 1) as u64,
                "seed {seed}"
            );
            let exhaustive = solve_ilpb_with(&scenario, PruneMode::Disabled).unwrap();
            assert_eq!(exhaustive.nodes_explored, (2 * layers + 1) as u64);
        }
    }

    #[test]
    fn pruning_never_changes_the_answer() {
        for seed in 0..200u64 {
            let layers = 1 + (seed as usize % 16);
            let scenario = sample_scenario(
                &ParameterRanges::default(),
                layers,
                Weights::from_lambda((seed % 11) as f64 / 10.0),
                seed,
            )
            .unwrap();
            let pruned = solve_ilpb(&scenario).unwrap();
            let exhaustive = solve_ilpb_with(&scenario, PruneMode::Disabled).unwrap();
            assert_eq!(pruned.decision, exhaustive.decision, "seed {seed}");
            assert_eq!(pruned.objective.z, exhaustive.objective.z, "seed {seed}");
        }
    }

    #[test]
    fn oracle_equivalence_and_dominance_on_sampled_scenarios() {
        for seed in 0..300u64 {
            let layers = 1 + (seed as usize % 24);
            let scenario = sample_scenario(
                &ParameterRanges::default(),
                layers,
                Weights::from_lambda((seed % 5) as f64 / 4.0),
                seed,
            )
            .unwrap();
            let ilpb = solve_ilpb(&scenario).unwrap();
            let oracle = solve_bruteforce(&scenario).unwrap();
            assert_eq!(ilpb.decision, oracle.decision, "seed {seed}");
            assert!((ilpb.objective.z - oracle.objective.z).abs() <= TIE_EPSILON);
            let arg = baseline_arg(&scenario).unwrap();
            let ars = baseline_ars(&scenario).unwrap();
            assert!(ilpb.objective.z <= arg.objective.z, "seed {seed}");
            assert!(ilpb.objective.z <= ars.objective.z, "seed {seed}");
        }
    }

    #[test]
    fn lower_bound_of_full_assignments_is_exact() {
        let scenario = t1a_scenario();
        let bounds = normalization_bounds(&scenario);
        for split in 0..=3usize {
            let assignment: Vec<bool> = (0..3).map(|k| k < split).collect();
            let exact = objective(&decision_from_split(split, 3).unwrap(), &scenario, &bounds)
                .unwrap()
                .z;
            assert_eq!(lower_bound(&assignment, &scenario, &bounds), exact);
        }
    }

    #[test]
    fn lower_bound_admissible_from_empty_assignment() {
        for seed in 0..50u64 {
            let layers = 1 + (seed as usize % 12);
            let scenario = sample_scenario(
                &ParameterRanges::default(),
                layers,
                Weights::balanced(),
                seed,
            )
            .unwrap();
            let bounds = normalization_bounds(&scenario);
            let root = lower_bound(&[], &scenario, &bounds);
            for split in 0..=layers {
                let z = objective(
                    &decision_from_split(split, layers).unwrap(),
                    &scenario,
                    &bounds,
                )
                .unwrap()
                .z;
                assert!(root <= z + 1e-15, "seed {seed} split {split}: {root} > {z}");
            }
        }
    }

    #[test]
    fn lower_bound_after_first_offload_equals_arg() {
        let scenario = t1a_scenario();
        let bounds = normalization_bounds(&scenario);
        let arg_z = objective(&decision_from_split(0, 3).unwrap(), &scenario, &bounds)
            .unwrap()
            .z;
        assert_eq!(lower_bound(&[false], &scenario, &bounds), arg_z);
    }

    #[test]
    fn ties_resolve_to_the_smallest_split() {
        // One layer, parameters tuned so both decisions cost the same in
        // both E and T: beta = 1/rate_down + 1/rate_gs_dc + gamma makes the
        // latencies equal, p_off = e_sat * rate_down / data_size the energies.
        let mut scenario = t1a_scenario();
        scenario.request.alphas = vec![1.0];
        scenario.satellite.beta = 0.012; // latency 12 s on either side
        scenario.satellite.p_off = 11.8; // energy 118 J on either side
        let both_sides_equal = |s: &Scenario| {
            let b = normalization_bounds(s);
            (b.e_max - b.e_min).abs() < 1e-9 && (b.t_max - b.t_min).abs() < 1e-9
        };
        assert!(both_sides_equal(&scenario));
        assert_eq!(solve_bruteforce(&scenario).unwrap().split_index(), 0);
        assert_eq!(solve_ilpb(&scenario).unwrap().split_index(), 0);
    }

    #[test]
    fn baselines_pin_the_endpoints() {
        let scenario = t1a_scenario();
        let arg = baseline_arg(&scenario).unwrap();
        assert_eq!(arg.split_index(), 0);
        assert_eq!(arg.latency.t_satellite, 0.0);
        assert_eq!(arg.energy.e_processing, 0.0);
        assert!((arg.latency.total - 10.1).abs() < 1e-9);
        assert!((arg.energy.total - 16.0).abs() < 1e-9);

        let ars = baseline_ars(&scenario).unwrap();
        assert_eq!(ars.split_index(), 3);
        assert_eq!(ars.latency.t_s_to_g, 0.0);
        assert_eq!(ars.latency.t_g_to_c, 0.0);
        assert_eq!(ars.latency.t_cloud, 0.0);
        assert_eq!(ars.energy.e_transmission, 0.0);
        assert!((ars.latency.total - 26.0).abs() < 1e-9);
        assert!((ars.energy.total - 169.0).abs() < 1e-9);

        // ARS ignores the downlink rate entirely
        let mut fast_link = scenario.clone();
        fast_link.satellite.rate_down *= 50.0;
        let ars_fast = baseline_ars(&fast_link).unwrap();
        assert_eq!(ars_fast.latency, ars.latency);
        assert_eq!(ars_fast.energy, ars.energy);
    }

    #[test]
    fn solutions_are_recomputable_from_decision_and_scenario() {
        for seed in 0..50u64 {
            let layers = 1 + (seed as usize % 14);
            let scenario = sample_scenario(
                &ParameterRanges::default(),
                layers,
                Weights::from_lambda((seed % 7) as f64 / 6.0),
                seed,
            )
            .unwrap();
            for solution in [
                solve_ilpb(&scenario).unwrap(),
                solve_bruteforce(&scenario).unwrap(),
                baseline_arg(&scenario).unwrap(),
                baseline_ars(&scenario).unwrap(),
            ] {
                let latency = total_latency(&solution.decision, &scenario).unwrap();
                let energy = total_energy(&solution.decision, &scenario).unwrap();
                let bounds = normalization_bounds(&scenario);
                let value = objective(&solution.decision, &scenario, &bounds).unwrap();
                assert!((latency.total - solution.latency.total).abs() <= 1e-12);
                assert!((energy.total - solution.energy.total).abs() <= 1e-12);
                assert!((value.z - solution.objective.z).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn invalid_scenario_is_rejected_up_front() {
        let mut scenario = t1a_scenario();
        scenario.request.alphas.clear();
        assert!(matches!(
            solve_ilpb(&scenario),
            Err(SolveError::Validation(_))
        ));
        assert!(matches!(
            solve_bruteforce(&scenario),
            Err(SolveError::Validation(_))
        ));
    }
}
