//! Python bindings for the offloading model and solvers.
//!
//! Exposes the scenario types, offload decisions, cost breakdowns, and the
//! ILPB / brute-force / baseline solvers as an in-process extension module.
//! The keyword for the latency weight is `lam` because `lambda` is reserved
//! in Python; `mu = 1 - lam` unless given explicitly.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use leosplit::{cost, model, objective, scenario, solver};

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

#[pyclass(name = "SatelliteProfile", from_py_object)]
#[derive(Clone)]
struct PySatelliteProfile {
    inner: model::SatelliteProfile,
}

#[pymethods]
impl PySatelliteProfile {
    /// Units: beta s/KB, zeta KB/s, powers W, rate_down KB/s, times s.
    #[new]
    #[allow(clippy::too_many_arguments)]
    fn new(
        beta: f64,
        zeta: f64,
        p_max: f64,
        p_idle: f64,
        p_leak: f64,
        p_off: f64,
        rate_down: f64,
        t_cyc: f64,
        t_con: f64,
    ) -> Self {
        Self {
            inner: model::SatelliteProfile {
                beta,
                zeta,
                p_max,
                p_idle,
                p_leak,
                p_off,
                rate_down,
                t_cyc,
                t_con,
            },
        }
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn rate_down(&self) -> f64 {
        self.inner.rate_down
    }

    fn __repr__(&self) -> String {
        format!(
            "SatelliteProfile(beta={}, zeta={}, rate_down={} KB/s)",
            self.inner.beta, self.inner.zeta, self.inner.rate_down
        )
    }
}

#[pyclass(name = "CloudSegment", from_py_object)]
#[derive(Clone)]
struct PyCloudSegment {
    inner: model::CloudSegment,
}

#[pymethods]
impl PyCloudSegment {
    #[new]
    #[pyo3(signature = (gamma, gamma_max, rate_gs_dc, colocated = false))]
    fn new(gamma: f64, gamma_max: f64, rate_gs_dc: f64, colocated: bool) -> Self {
        Self {
            inner: model::CloudSegment {
                gamma,
                gamma_max,
                rate_gs_dc,
                colocated,
            },
        }
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    fn __repr__(&self) -> String {
        format!(
            "CloudSegment(gamma={}, rate_gs_dc={} KB/s, colocated={})",
            self.inner.gamma, self.inner.rate_gs_dc, self.inner.colocated
        )
    }
}

#[pyclass(name = "InferenceRequest", from_py_object)]
#[derive(Clone)]
struct PyInferenceRequest {
    inner: model::InferenceRequest,
}

#[pymethods]
impl PyInferenceRequest {
    /// `data_size` in KB, `alphas` one per-layer input ratio each in (0, 1].
    #[new]
    fn new(data_size: f64, alphas: Vec<f64>) -> Self {
        Self {
            inner: model::InferenceRequest { data_size, alphas },
        }
    }

    #[getter]
    fn data_size(&self) -> f64 {
        self.inner.data_size
    }

    #[getter]
    fn alphas(&self) -> Vec<f64> {
        self.inner.alphas.clone()
    }

    fn layer_count(&self) -> usize {
        self.inner.layer_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "InferenceRequest(data_size={} KB, layers={})",
            self.inner.data_size,
            self.inner.layer_count()
        )
    }
}

#[pyclass(name = "Scenario", skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: model::Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (satellite, cloud, request, mu = 0.5, lam = 0.5))]
    fn new(
        satellite: PySatelliteProfile,
        cloud: PyCloudSegment,
        request: PyInferenceRequest,
        mu: f64,
        lam: f64,
    ) -> Self {
        Self {
            inner: model::Scenario {
                satellite: satellite.inner,
                cloud: cloud.inner,
                request: request.inner,
                weights: model::Weights { mu, lambda: lam },
            },
        }
    }

    /// Raise ValueError on the first violated invariant.
    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(value_err)
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.weights.mu
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.weights.lambda
    }

    fn layer_count(&self) -> usize {
        self.inner.request.layer_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(layers={}, data_size={} KB, mu={}, lam={})",
            self.inner.request.layer_count(),
            self.inner.request.data_size,
            self.inner.weights.mu,
            self.inner.weights.lambda
        )
    }
}

#[pyclass(name = "OffloadDecision", skip_from_py_object)]
#[derive(Clone)]
struct PyOffloadDecision {
    inner: model::OffloadDecision,
}

#[pymethods]
impl PyOffloadDecision {
    /// Per-layer placement, True = on the satellite.
    #[new]
    fn new(assignments: Vec<bool>) -> Self {
        Self {
            inner: model::OffloadDecision::from_assignments(assignments),
        }
    }

    /// Prefix decision: layers 1..=split on the satellite, the rest offloaded.
    #[staticmethod]
    fn from_split(split: usize, layers: usize) -> PyResult<Self> {
        Ok(Self {
            inner: model::OffloadDecision::from_split(split, layers).map_err(value_err)?,
        })
    }

    fn assignments(&self) -> Vec<bool> {
        self.inner.assignments().to_vec()
    }

    fn is_feasible(&self) -> bool {
        self.inner.is_feasible()
    }

    fn split_index(&self) -> usize {
        self.inner.split_index()
    }

    /// 1-based layer whose input crosses the downlink, None if none does.
    fn transmission_layer(&self) -> Option<usize> {
        self.inner.transmission_layer()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let bits: Vec<&str> = self
            .inner
            .assignments()
            .iter()
            .map(|&h| if h { "1" } else { "0" })
            .collect();
        format!("OffloadDecision([{}])", bits.join(", "))
    }
}

#[pyclass(name = "LatencyBreakdown", skip_from_py_object)]
#[derive(Clone)]
struct PyLatencyBreakdown {
    inner: cost::LatencyBreakdown,
}

#[pymethods]
impl PyLatencyBreakdown {
    #[getter]
    fn t_satellite(&self) -> f64 {
        self.inner.t_satellite
    }

    #[getter]
    fn t_s_to_g(&self) -> f64 {
        self.inner.t_s_to_g
    }

    #[getter]
    fn t_g_to_c(&self) -> f64 {
        self.inner.t_g_to_c
    }

    #[getter]
    fn t_cloud(&self) -> f64 {
        self.inner.t_cloud
    }

    #[getter]
    fn total(&self) -> f64 {
        self.inner.total
    }

    fn __repr__(&self) -> String {
        format!(
            "LatencyBreakdown(satellite={}, s_to_g={}, g_to_c={}, cloud={}, total={})",
            self.inner.t_satellite,
            self.inner.t_s_to_g,
            self.inner.t_g_to_c,
            self.inner.t_cloud,
            self.inner.total
        )
    }
}

#[pyclass(name = "EnergyBreakdown", skip_from_py_object)]
#[derive(Clone)]
struct PyEnergyBreakdown {
    inner: cost::EnergyBreakdown,
}

#[pymethods]
impl PyEnergyBreakdown {
    #[getter]
    fn e_processing(&self) -> f64 {
        self.inner.e_processing
    }

    #[getter]
    fn e_transmission(&self) -> f64 {
        self.inner.e_transmission
    }

    #[getter]
    fn total(&self) -> f64 {
        self.inner.total
    }

    fn __repr__(&self) -> String {
        format!(
            "EnergyBreakdown(processing={}, transmission={}, total={})",
            self.inner.e_processing, self.inner.e_transmission, self.inner.total
        )
    }
}

#[pyclass(name = "Solution")]
struct PySolution {
    inner: solver::Solution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }

    #[getter]
    fn decision(&self) -> PyOffloadDecision {
        PyOffloadDecision {
            inner: self.inner.decision.clone(),
        }
    }

    #[getter]
    fn split_index(&self) -> usize {
        self.inner.split_index()
    }

    #[getter]
    fn z(&self) -> f64 {
        self.inner.objective.z
    }

    #[getter]
    fn norm_e(&self) -> f64 {
        self.inner.objective.norm_e
    }

    #[getter]
    fn norm_t(&self) -> f64 {
        self.inner.objective.norm_t
    }

    #[getter]
    fn raw_t(&self) -> f64 {
        self.inner.objective.raw_t
    }

    #[getter]
    fn raw_e(&self) -> f64 {
        self.inner.objective.raw_e
    }

    #[getter]
    fn latency(&self) -> PyLatencyBreakdown {
        PyLatencyBreakdown {
            inner: self.inner.latency,
        }
    }

    #[getter]
    fn energy(&self) -> PyEnergyBreakdown {
        PyEnergyBreakdown {
            inner: self.inner.energy,
        }
    }

    #[getter]
    fn nodes_explored(&self) -> u64 {
        self.inner.nodes_explored
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(method={}, split={}, Z={}, T={} s, E={} J, nodes={})",
            self.inner.method.as_str(),
            self.inner.split_index(),
            self.inner.objective.z,
            self.inner.objective.raw_t,
            self.inner.objective.raw_e,
            self.inner.nodes_explored
        )
    }
}

fn solve_with(
    scenario: &PyScenario,
    solve: impl Fn(&model::Scenario) -> Result<solver::Solution, solver::SolveError>,
) -> PyResult<PySolution> {
    Ok(PySolution {
        inner: solve(&scenario.inner).map_err(value_err)?,
    })
}

/// Branch-and-bound optimum of the scenario.
#[pyfunction]
fn solve_ilpb(scenario: &PyScenario) -> PyResult<PySolution> {
    solve_with(scenario, solver::solve_ilpb)
}

/// Exhaustive-enumeration optimum (the oracle).
#[pyfunction]
fn solve_bruteforce(scenario: &PyScenario) -> PyResult<PySolution> {
    solve_with(scenario, solver::solve_bruteforce)
}

/// Baseline: transmit everything to the ground (split 0).
#[pyfunction]
fn baseline_arg(scenario: &PyScenario) -> PyResult<PySolution> {
    solve_with(scenario, solver::baseline_arg)
}

/// Baseline: run everything on the satellite (split K).
#[pyfunction]
fn baseline_ars(scenario: &PyScenario) -> PyResult<PySolution> {
    solve_with(scenario, solver::baseline_ars)
}

/// Latency breakdown of one feasible decision.
#[pyfunction]
fn total_latency(
    decision: &PyOffloadDecision,
    scenario: &PyScenario,
) -> PyResult<PyLatencyBreakdown> {
    Ok(PyLatencyBreakdown {
        inner: cost::total_latency(&decision.inner, &scenario.inner).map_err(value_err)?,
    })
}

/// Onboard energy breakdown of one feasible decision.
#[pyfunction]
fn total_energy(
    decision: &PyOffloadDecision,
    scenario: &PyScenario,
) -> PyResult<PyEnergyBreakdown> {
    Ok(PyEnergyBreakdown {
        inner: cost::total_energy(&decision.inner, &scenario.inner).map_err(value_err)?,
    })
}

/// Z of a decision under the scenario's feasible-set normalization, as
/// (z, norm_e, norm_t).
#[pyfunction]
fn objective_value(
    decision: &PyOffloadDecision,
    scenario: &PyScenario,
) -> PyResult<(f64, f64, f64)> {
    let bounds = objective::normalization_bounds(&scenario.inner);
    let value =
        objective::objective(&decision.inner, &scenario.inner, &bounds).map_err(value_err)?;
    Ok((value.z, value.norm_e, value.norm_t))
}

/// Human-readable constraint violations; empty means feasible.
#[pyfunction]
fn check_constraints(decision: &PyOffloadDecision, scenario: &PyScenario) -> Vec<String> {
    objective::check_constraints(&decision.inner, &scenario.inner)
        .iter()
        .map(|v| v.to_string())
        .collect()
}

/// Draw a scenario from the default parameter ranges, deterministically in
/// the seed.
#[pyfunction]
#[pyo3(signature = (layers = 10, seed = 0, mu = 0.5, lam = 0.5))]
fn sample_scenario(layers: usize, seed: u64, mu: f64, lam: f64) -> PyResult<PyScenario> {
    let ranges = scenario::ParameterRanges::default();
    let weights = model::Weights { mu, lambda: lam };
    Ok(PyScenario {
        inner: scenario::sample_scenario(&ranges, layers, weights, seed).map_err(value_err)?,
    })
}

/// Geometric layer-ratio profile base^k for k = 1..=layers.
#[pyfunction]
fn geometric_alphas(base: f64, layers: usize) -> Vec<f64> {
    scenario::geometric_alphas(base, layers)
}

#[pymodule]
fn leosplit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySatelliteProfile>()?;
    m.add_class::<PyCloudSegment>()?;
    m.add_class::<PyInferenceRequest>()?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyOffloadDecision>()?;
    m.add_class::<PyLatencyBreakdown>()?;
    m.add_class::<PyEnergyBreakdown>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve_ilpb, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_arg, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_ars, m)?)?;
    m.add_function(wrap_pyfunction!(total_latency, m)?)?;
    m.add_function(wrap_pyfunction!(total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(objective_value, m)?)?;
    m.add_function(wrap_pyfunction!(check_constraints, m)?)?;
    m.add_function(wrap_pyfunction!(sample_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_alphas, m)?)?;
    Ok(())
}
