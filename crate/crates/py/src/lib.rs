//! Python bindings.
//!
//! ```python
//! import trust_pomdp_py as tp
//! b = tp.TrustBelief(100.0, 50.0)
//! b.update(True).trust_mean()
//! tp.run_monte_carlo('{"n_episodes": 200}')
//! ```

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use trust_pomdp::experiment::{parse_config, RunConfig};
use trust_pomdp::mission::{generate_mission, SeedStream};
use trust_pomdp::{
    backward_induction, BehaviorModel, ConfigError, Error, Lattice, PlanningProblem, RewardSpec, RunError, TrustParams,
};

fn value_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config_err(e: ConfigError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run_err(e: RunError) -> PyErr {
    match e {
        RunError::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn model(name: &str) -> PyResult<BehaviorModel> {
    name.parse().map_err(value_err)
}

fn config(json: Option<&str>) -> PyResult<RunConfig> {
    parse_config(json.unwrap_or("")).map_err(config_err)
}

/// Beta trust belief `(alpha, beta)`.
#[pyclass(name = "TrustBelief", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyTrustBelief {
    inner: trust_pomdp::TrustBelief,
}

#[pymethods]
impl PyTrustBelief {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: trust_pomdp::TrustBelief::new(alpha, beta).map_err(value_err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    fn trust_mean(&self) -> f64 {
        self.inner.trust_mean()
    }

    fn follow_probability(&self) -> f64 {
        self.inner.follow_probability()
    }

    #[pyo3(signature = (success, w_success = 10.0, w_failure = 20.0))]
    fn update(&self, success: bool, w_success: f64, w_failure: f64) -> PyResult<Self> {
        let params = TrustParams::new(w_success, w_failure, 1.0, 1.0).map_err(value_err)?;
        Ok(Self {
            inner: self.inner.update(success, &params),
        })
    }

    fn __repr__(&self) -> String {
        format!("TrustBelief({}, {})", self.inner.alpha(), self.inner.beta())
    }
}

/// Probability that the human wears gear.
#[pyfunction]
fn wear_probability(model_name: &str, belief: PyTrustBelief, recommend_wear: bool, reported_threat: f64) -> PyResult<f64> {
    let dist = trust_pomdp::human_action_distribution(model(model_name)?, &belief.inner, recommend_wear, reported_threat)
        .map_err(value_err)?;
    Ok(dist.p_wear())
}

/// Expected one-site task reward under the default cost table and weights.
#[pyfunction]
fn expected_task_reward(
    model_name: &str,
    belief: PyTrustBelief,
    recommend_wear: bool,
    threat_prob: f64,
    reported_threat: f64,
) -> PyResult<f64> {
    trust_pomdp::expected_task_reward(
        &belief.inner,
        model(model_name)?,
        recommend_wear,
        threat_prob,
        reported_threat,
        &RewardSpec::default(),
    )
    .map_err(value_err)
}

/// Optimal recommendation, value, and q-values `(q0, q1)` at one belief.
#[pyfunction]
#[pyo3(signature = (belief, sensed, reported_current, reported_future, model_name, trust_seeking = false, current_site = 1, discount = 0.9))]
#[allow(clippy::too_many_arguments)]
fn plan(
    belief: PyTrustBelief,
    sensed: f64,
    reported_current: f64,
    reported_future: Vec<f64>,
    model_name: &str,
    trust_seeking: bool,
    current_site: usize,
    discount: f64,
) -> PyResult<(bool, f64, (f64, f64))> {
    let problem = PlanningProblem {
        current_site,
        sensed_current: sensed,
        reported_current,
        reported_future,
        assumed_model: model(model_name)?,
        reward_spec: RewardSpec {
            trust_seeking,
            ..RewardSpec::default()
        },
        trust_params: TrustParams::default(),
        discount,
    };
    let sol = backward_induction(&problem, &Lattice::single(belief.inner)).map_err(value_err)?;
    let cell = sol.first().lookup(&belief.inner).expect("anchor is on the lattice");
    Ok((cell.recommend_wear, cell.value, (cell.q[0], cell.q[1])))
}

/// Mission sites as `(danger, threat_present, reported, sensed)` tuples.
#[pyfunction]
#[pyo3(signature = (config_json = None, seed = None))]
fn mission(config_json: Option<&str>, seed: Option<u64>) -> PyResult<Vec<(f64, bool, f64, f64)>> {
    let cfg = config(config_json)?;
    let env = cfg.scenario.env;
    let sites = generate_mission(&env, &SeedStream::new(seed.unwrap_or(env.seed))).map_err(value_err)?;
    Ok(sites
        .into_iter()
        .map(|s| (s.danger, s.threat_present, s.reported, s.sensed))
        .collect())
}

/// Policy grid rows `(site, alpha, beta, q0, q1, value, action)` for the
/// configured scenario at `site` of the fixed-seed mission.
#[pyfunction]
#[pyo3(signature = (site, config_json = None))]
fn policy_grid(site: usize, config_json: Option<&str>) -> PyResult<Vec<(usize, f64, f64, f64, f64, f64, bool)>> {
    let cfg = config(config_json)?;
    let env = cfg.scenario.env;
    let sites = generate_mission(&env, &SeedStream::new(env.seed)).map_err(value_err)?;
    let problem = cfg.scenario.problem_at(&sites, site).map_err(value_err)?;
    let sol = backward_induction(&problem, &cfg.lattice()).map_err(value_err)?;
    Ok(sol
        .first()
        .iter()
        .map(|(b, c)| (site, b.alpha(), b.beta(), c.q[0], c.q[1], c.value, c.recommend_wear))
        .collect())
}

/// Monte Carlo statistics of the configured scenario as a dict.
#[pyfunction]
#[pyo3(signature = (config_json = None))]
fn run_monte_carlo<'py>(py: Python<'py>, config_json: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(config_json)?;
    let stats = py
        .detach(|| trust_pomdp::run_monte_carlo(&cfg.scenario))
        .map_err(|e| run_err(e.into()))?;
    let d = PyDict::new(py);
    d.set_item("n_episodes", stats.n_episodes)?;
    d.set_item("mean_reward", stats.mean_reward)?;
    d.set_item("std_reward", stats.std_reward)?;
    d.set_item("se_reward", stats.se_reward())?;
    d.set_item("mean_final_trust", stats.mean_final_trust)?;
    d.set_item("std_final_trust", stats.std_final_trust)?;
    d.set_item("se_final_trust", stats.se_final_trust())?;
    Ok(d)
}

#[pymodule]
fn trust_pomdp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrustBelief>()?;
    m.add_function(wrap_pyfunction!(wear_probability, m)?)?;
    m.add_function(wrap_pyfunction!(expected_task_reward, m)?)?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(mission, m)?)?;
    m.add_function(wrap_pyfunction!(policy_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    Ok(())
}
