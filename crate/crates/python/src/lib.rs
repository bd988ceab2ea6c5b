//! Python bindings for lfunlab.

use std::collections::HashMap;

use lfunlab::constants::Constants;
use lfunlab::identities::{self, EulerHadamard};
use lfunlab::instances::{instance_by_name, LFunctionInstance};
use lfunlab::report::IdentityReport;
use lfunlab::special::BumpKernel;
use lfunlab::{eval, meanvalue, zeros, Error};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(pylfunlab, LfunlabError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(msg) => PyIOError::new_err(msg),
        other => LfunlabError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for lfunlab::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Round-trips a serde value into plain Python objects through `json`.
fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| to_py(e.into()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn constants(overrides: Option<HashMap<String, f64>>) -> PyResult<Constants> {
    let map = overrides.unwrap_or_default().into_iter().collect();
    Constants::default().with_overrides(&map).py_err()
}

/// An L-function instance: `chi<q>`, `chi<q>:<index>` or `delta`.
#[pyclass(name = "Instance", module = "pylfunlab", frozen)]
struct PyInstance {
    inner: LFunctionInstance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (name, delta_cache = 100_000))]
    fn new(py: Python<'_>, name: &str, delta_cache: u64) -> PyResult<Self> {
        let inner = py.detach(|| instance_by_name(name, delta_cache)).py_err()?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn kappa(&self) -> u32 {
        self.inner.kappa()
    }

    #[getter]
    fn a0(&self) -> f64 {
        self.inner.a0()
    }

    #[getter]
    fn root_number(&self) -> Complex64 {
        self.inner.gamma().root_number
    }

    #[getter]
    fn real_coefficients(&self) -> bool {
        self.inner.has_real_coefficients()
    }

    #[pyo3(signature = (t = 0.0))]
    fn analytic_conductor(&self, t: f64) -> f64 {
        self.inner.analytic_conductor(t)
    }

    fn coefficient(&self, n: u64) -> PyResult<Complex64> {
        self.inner.coefficient(n).py_err()
    }

    fn l_value(&self, py: Python<'_>, s: Complex64) -> PyResult<Complex64> {
        py.detach(|| eval::l_value(&self.inner, s)).py_err()
    }

    fn completed_l(&self, py: Python<'_>, s: Complex64) -> PyResult<Complex64> {
        py.detach(|| eval::completed_l(&self.inner, s)).py_err()
    }

    fn log_l(&self, py: Python<'_>, s: Complex64) -> PyResult<Complex64> {
        py.detach(|| eval::log_l(&self.inner, s)).py_err()
    }

    fn hardy_z(&self, py: Python<'_>, t: f64) -> PyResult<f64> {
        py.detach(|| eval::hardy_z(&self.inner, t)).py_err()
    }

    /// `sum_{n <= x} Lambda_f(n) n^(-i phi)`.
    #[pyo3(signature = (x, phi = 0.0))]
    fn partial_sum(&self, py: Python<'_>, x: f64, phi: f64) -> PyResult<Complex64> {
        py.detach(|| meanvalue::partial_sum_lambda(&self.inner, x, phi)).py_err()
    }

    fn descriptor(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &self.inner.descriptor())
    }

    fn __repr__(&self) -> String {
        format!("Instance({:?})", self.inner.name())
    }
}

/// Certified zeros with ordinates in `[0, t_max]`.
#[pyclass(name = "ZeroSet", module = "pylfunlab", frozen)]
struct PyZeroSet {
    inner: zeros::ZeroSet,
}

#[pymethods]
impl PyZeroSet {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = zeros::ZeroSet::load(path.as_ref()).py_err()?;
        Ok(PyZeroSet { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = zeros::ZeroSet::from_json(text).py_err()?;
        Ok(PyZeroSet { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path.as_ref()).py_err()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().py_err()
    }

    #[getter]
    fn instance(&self) -> &str {
        &self.inner.instance.name
    }

    #[getter]
    fn t_max(&self) -> f64 {
        self.inner.t_max()
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.certified
    }

    #[getter]
    fn argument_count(&self) -> i64 {
        self.inner.argument_count
    }

    #[getter]
    fn ordinates(&self) -> Vec<f64> {
        self.inner.zeros.iter().map(|z| z.gamma).collect()
    }

    fn count_in_disc(&self, center: Complex64, radius: f64) -> PyResult<usize> {
        self.inner.count_in_disc(center, radius).py_err()
    }

    fn __len__(&self) -> usize {
        self.inner.zeros.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ZeroSet({:?}, t_max={}, zeros={})",
            self.inner.instance.name,
            self.inner.t_max(),
            self.inner.zeros.len()
        )
    }
}

/// Outcome of one numerical check.
#[pyclass(name = "Report", module = "pylfunlab", frozen)]
struct PyReport {
    inner: IdentityReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn op(&self) -> &str {
        &self.inner.op
    }

    #[getter]
    fn instance(&self) -> &str {
        &self.inner.instance
    }

    #[getter]
    fn lhs(&self) -> Complex64 {
        self.inner.lhs
    }

    #[getter]
    fn rhs(&self) -> Complex64 {
        self.inner.rhs
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn bound(&self) -> f64 {
        self.inner.bound
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    #[getter]
    fn inputs(&self) -> HashMap<String, f64> {
        self.inner.inputs.clone().into_iter().collect()
    }

    #[getter]
    fn extras(&self) -> HashMap<String, f64> {
        self.inner.extras.clone().into_iter().collect()
    }

    #[getter]
    fn constants(&self) -> HashMap<String, f64> {
        self.inner.constants.clone().into_iter().collect()
    }

    #[getter]
    fn flags(&self) -> Vec<String> {
        self.inner.flags.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| to_py(e.into()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Report({:?}, residual={:e}, bound={:e}, passed={})",
            self.inner.op, self.inner.residual, self.inner.bound, self.inner.pass
        )
    }
}

fn report(r: lfunlab::Result<IdentityReport>) -> PyResult<PyReport> {
    Ok(PyReport { inner: r.py_err()? })
}

#[pyfunction]
fn find_zeros(py: Python<'_>, inst: &PyInstance, t_max: f64) -> PyResult<PyZeroSet> {
    let inner = py.detach(|| zeros::find_zeros(&inst.inner, t_max)).py_err()?;
    Ok(PyZeroSet { inner })
}

#[pyfunction]
#[pyo3(signature = (inst, phi, lam, t_param, constants = None))]
fn plancherel_check(
    py: Python<'_>,
    inst: &PyInstance,
    phi: f64,
    lam: f64,
    t_param: f64,
    constants: Option<HashMap<String, f64>>,
) -> PyResult<PyReport> {
    let c = self::constants(constants)?;
    report(py.detach(|| identities::plancherel_check(&inst.inner, phi, lam, t_param, &c)))
}

#[pyfunction]
#[pyo3(signature = (inst, x, constants = None))]
fn power_saving_check(
    py: Python<'_>,
    inst: &PyInstance,
    x: f64,
    constants: Option<HashMap<String, f64>>,
) -> PyResult<PyReport> {
    let c = self::constants(constants)?;
    report(py.detach(|| identities::power_saving_check(&inst.inner, x, &c)))
}

#[pyfunction]
#[pyo3(signature = (inst, sigma, t, ceiling = 10.0))]
fn convexity_check(py: Python<'_>, inst: &PyInstance, sigma: f64, t: f64, ceiling: f64) -> PyResult<PyReport> {
    report(py.detach(|| eval::convexity_check(&inst.inner, sigma, t, ceiling)))
}

/// Full-form reports at each point, followed by one truncated-form report
/// per disc radius in `big_k`.
#[pyfunction]
#[pyo3(signature = (inst, zeros, points, log_x, tail_height = 40.0, big_k = None, k = None, constants = None))]
#[allow(clippy::too_many_arguments)]
fn euler_hadamard(
    py: Python<'_>,
    inst: &PyInstance,
    zeros: &PyZeroSet,
    points: Vec<Complex64>,
    log_x: f64,
    tail_height: f64,
    big_k: Option<Vec<f64>>,
    k: Option<f64>,
    constants: Option<HashMap<String, f64>>,
) -> PyResult<Vec<PyReport>> {
    let mut c = self::constants(constants)?;
    if let Some(k) = k {
        c.set(lfunlab::constants::EH_K, k).py_err()?;
    }
    let k = c.get(lfunlab::constants::EH_K);
    let big_k = big_k.unwrap_or_default();
    let reports = py.detach(|| -> lfunlab::Result<Vec<IdentityReport>> {
        let eh = EulerHadamard::new(&inst.inner, &zeros.inner, BumpKernel::shared(), log_x, &points, &c)?;
        let mut out = Vec::new();
        for i in 0..eh.len() {
            out.push(eh.full(i, tail_height)?);
            for &kk in &big_k {
                out.push(eh.truncated(i, kk, k)?);
            }
        }
        Ok(out)
    });
    Ok(reports.py_err()?.into_iter().map(|inner| PyReport { inner }).collect())
}

#[pyfunction]
#[pyo3(signature = (inst, x, t_cap = 200.0, ceiling = 20.0))]
fn halasz_ratio(py: Python<'_>, inst: &PyInstance, x: f64, t_cap: f64, ceiling: f64) -> PyResult<PyReport> {
    report(py.detach(|| meanvalue::halasz_ratio(&inst.inner, x, t_cap, ceiling)))
}

/// `(M, t_star)` for the Halász quantity at `x`.
#[pyfunction]
#[pyo3(signature = (inst, x, t_cap = 200.0))]
fn halasz_m(py: Python<'_>, inst: &PyInstance, x: f64, t_cap: f64) -> PyResult<(f64, f64)> {
    let hm = py.detach(|| meanvalue::halasz_m(&inst.inner, x, t_cap)).py_err()?;
    Ok((hm.m, hm.scan.t))
}

#[pyfunction]
#[pyo3(signature = (inst, x, omega, t_cap = 200.0, ceiling = 20.0))]
fn lipschitz_defect(
    py: Python<'_>,
    inst: &PyInstance,
    x: f64,
    omega: f64,
    t_cap: f64,
    ceiling: f64,
) -> PyResult<PyReport> {
    report(py.detach(|| meanvalue::lipschitz_defect(&inst.inner, x, omega, t_cap, ceiling)))
}

/// The twist selection at `y0` as a dict; raises when `S(e^y0) = 0`.
#[pyfunction]
#[pyo3(signature = (inst, y0, t_cap = 200.0))]
fn twist_phi(py: Python<'_>, inst: &PyInstance, y0: f64, t_cap: f64) -> PyResult<Py<PyAny>> {
    let tw = py.detach(|| meanvalue::twist_phi(&inst.inner, y0, t_cap)).py_err()?;
    to_python(py, &tw)
}

#[pyfunction]
fn mertens_sums(py: Python<'_>, inst: &PyInstance, y0: f64) -> PyResult<Py<PyAny>> {
    let m = py.detach(|| meanvalue::mertens_sums(&inst.inner, y0)).py_err()?;
    to_python(py, &m)
}

#[pyfunction]
#[pyo3(signature = (tau, x, c = 1.0, slack = 1.0))]
fn cosine_sum(py: Python<'_>, tau: f64, x: f64, c: f64, slack: f64) -> PyResult<PyReport> {
    report(py.detach(|| meanvalue::cosine_sum(tau, x, c, slack)))
}

/// `(records, summary)` for every `(y0, lambda)` pair, as plain dicts.
#[pyfunction]
#[pyo3(signature = (inst, delta, y0_grid, lambda_grid, zeros, constants = None))]
fn repulsion_scan(
    py: Python<'_>,
    inst: &PyInstance,
    delta: f64,
    y0_grid: Vec<f64>,
    lambda_grid: Vec<f64>,
    zeros: &PyZeroSet,
    constants: Option<HashMap<String, f64>>,
) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
    let c = self::constants(constants)?;
    let (records, summary) = py
        .detach(|| identities::repulsion_scan(&inst.inner, delta, &y0_grid, &lambda_grid, &zeros.inner, &c))
        .py_err()?;
    Ok((to_python(py, &records)?, to_python(py, &summary)?))
}

/// The registered constants with their default values.
#[pyfunction]
fn default_constants() -> HashMap<String, f64> {
    Constants::default().as_map().clone().into_iter().collect()
}

#[pymodule]
fn pylfunlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LfunlabError", m.py().get_type::<LfunlabError>())?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyZeroSet>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_check, m)?)?;
    m.add_function(wrap_pyfunction!(power_saving_check, m)?)?;
    m.add_function(wrap_pyfunction!(convexity_check, m)?)?;
    m.add_function(wrap_pyfunction!(euler_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(halasz_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(halasz_m, m)?)?;
    m.add_function(wrap_pyfunction!(lipschitz_defect, m)?)?;
    m.add_function(wrap_pyfunction!(twist_phi, m)?)?;
    m.add_function(wrap_pyfunction!(mertens_sums, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_sum, m)?)?;
    m.add_function(wrap_pyfunction!(repulsion_scan, m)?)?;
    m.add_function(wrap_pyfunction!(default_constants, m)?)?;
    Ok(())
}
