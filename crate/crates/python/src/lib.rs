//! Python bindings. States are passed as their codes ("EDU", "PE", ...) and
//! quarters as "YYYY.Q" strings.

use std::path::PathBuf;

use labor_flows as lf;
use labor_flows::report;
use lf::{AgeBand, CohortFilter, LaborState, MacroRegion, QuarterId, Sex, N_STATES};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: lf::Error) -> PyErr {
    match e {
        lf::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn state(code: &str) -> PyResult<LaborState> {
    code.parse().map_err(py_err)
}

fn quarter(text: &str) -> PyResult<QuarterId> {
    text.parse().map_err(py_err)
}

fn cohort(
    age: Option<&str>,
    sex: Option<&str>,
    citizen: Option<bool>,
    region: Option<&str>,
) -> PyResult<CohortFilter> {
    let mut f = match age {
        Some(a) => CohortFilter::age(a.parse::<AgeBand>().map_err(py_err)?),
        None => CohortFilter::all(),
    };
    if let Some(s) = sex {
        f = f.with_sex(s.parse::<Sex>().map_err(py_err)?);
    }
    if let Some(c) = citizen {
        f = f.with_citizen(c);
    }
    if let Some(r) = region {
        f = f.with_region(r.parse::<MacroRegion>().map_err(py_err)?);
    }
    Ok(f)
}

/// A 7x7 quarter-on-quarter transition matrix, estimated or taken from a fixture.
#[pyclass(name = "TransitionMatrix", module = "labor_flows", frozen)]
struct PyTransitionMatrix {
    inner: lf::TransitionMatrix,
}

#[pymethods]
impl PyTransitionMatrix {
    #[getter]
    fn entries(&self) -> Vec<Vec<f64>> {
        self.inner.entries.iter().map(|r| r.to_vec()).collect()
    }

    #[getter]
    fn row_counts(&self) -> Option<Vec<f64>> {
        self.inner.row_counts.map(|c| c.to_vec())
    }

    #[getter]
    fn get_from_quarter(&self) -> String {
        self.inner.from_quarter.to_string()
    }

    #[getter]
    fn get_to_quarter(&self) -> String {
        self.inner.to_quarter.to_string()
    }

    #[getter]
    fn filter(&self) -> String {
        self.inner.filter.to_string()
    }

    #[getter]
    fn fallback_rows(&self) -> Vec<&'static str> {
        self.inner.fallback_rows.iter().map(|s| s.code()).collect()
    }

    #[getter]
    fn provenance(&self) -> &str {
        &self.inner.provenance
    }

    #[staticmethod]
    fn states() -> Vec<String> {
        LaborState::codes()
    }

    fn get(&self, source: &str, target: &str) -> PyResult<f64> {
        Ok(self.inner.get(state(source)?, state(target)?))
    }

    fn to_csv(&self) -> String {
        report::matrix_csv(&self.inner)
    }

    fn to_json(&self) -> String {
        report::matrix_json(&self.inner).to_string()
    }

    fn pretty(&self) -> String {
        report::matrix_pretty(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "TransitionMatrix({} -> {}, {})",
            self.inner.from_quarter, self.inner.to_quarter, self.inner.filter
        )
    }
}

/// Linked quarter-to-quarter observation pairs.
#[pyclass(name = "PanelDataset", module = "labor_flows", frozen)]
struct PyPanelDataset {
    inner: lf::PanelDataset,
}

#[pymethods]
impl PyPanelDataset {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn provenance(&self) -> &str {
        &self.inner.provenance
    }

    /// Writes the pairs in pair-rows CSV layout.
    fn write_csv(&self, path: PathBuf) -> PyResult<()> {
        let file = std::fs::File::create(&path).map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
        self.inner.write_pair_rows(std::io::BufWriter::new(file)).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("PanelDataset({} pairs, {:?})", self.inner.len(), self.inner.provenance)
    }
}

fn chain(m: &PyTransitionMatrix) -> PyResult<lf::StochasticMatrix> {
    m.inner.chain().map_err(py_err)
}

fn efpt_dict<'py>(py: Python<'py>, r: &lf::EfptResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("efpt_quarters", r.efpt_quarters)?;
    d.set_item("efpt_years", r.efpt_years)?;
    d.set_item("covered_mass", r.covered_mass)?;
    d.set_item("converged", r.converged)?;
    d.set_item("terms", r.terms)?;
    let method = match r.method {
        lf::EfptMethod::Series => "series",
        lf::EfptMethod::LinearSystem => "linear_system",
    };
    d.set_item("method", method)?;
    Ok(d)
}

#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    lf::fixtures().iter().map(|f| f.name).collect()
}

/// Renormalized matrix of an embedded fixture.
#[pyfunction]
fn fixture(name: &str) -> PyResult<PyTransitionMatrix> {
    let inner = lf::fixture(name).map_err(py_err)?.transition_matrix();
    Ok(PyTransitionMatrix { inner })
}

/// Published expected first-passage times as (category, target, quarter, years, fixture).
#[pyfunction]
fn efpt_targets() -> Vec<(&'static str, &'static str, String, f64, Option<&'static str>)> {
    lf::efpt_targets()
        .iter()
        .map(|t| {
            let q = format!("{}.{}", t.quarter.0, t.quarter.1);
            (t.category, t.target.code(), q, t.years, t.fixture)
        })
        .collect()
}

/// Reads a panel file; returns the dataset and (line, reason) rejections.
#[pyfunction]
#[pyo3(signature = (path, wave_rows = false))]
fn parse_panel(path: PathBuf, wave_rows: bool) -> PyResult<(PyPanelDataset, Vec<(u64, String)>)> {
    let format = if wave_rows { lf::PanelFormat::WaveRows } else { lf::PanelFormat::PairRows };
    let (inner, report) = lf::parse_panel_file(&path, format).map_err(py_err)?;
    let rejected = report.rejections.into_iter().map(|r| (r.line, r.reason)).collect();
    Ok((PyPanelDataset { inner }, rejected))
}

/// Synthetic panel drawn from a fixture matrix with uniform initial shares.
#[pyfunction]
#[pyo3(signature = (fixture, n, seed = 0, n_quarters = 2, start = None))]
fn generate_panel(
    fixture: &str,
    n: usize,
    seed: u64,
    n_quarters: u32,
    start: Option<&str>,
) -> PyResult<PyPanelDataset> {
    let fx = lf::fixture(fixture).map_err(py_err)?;
    let start = match start {
        Some(q) => quarter(q)?,
        None => fx.from_quarter(),
    };
    let spec = lf::SyntheticPanelSpec::new(
        fx.renormalized(),
        [1.0 / N_STATES as f64; N_STATES],
        n,
        start,
        n_quarters,
        seed,
    );
    let inner = lf::generate_synthetic_panel(&spec).map_err(py_err)?;
    Ok(PyPanelDataset { inner })
}

/// State shares in `quarter` as a {code: share} dict.
#[pyfunction]
#[pyo3(signature = (data, quarter, age = None, sex = None, citizen = None, region = None))]
fn compute_shares<'py>(
    py: Python<'py>,
    data: &PyPanelDataset,
    quarter: &str,
    age: Option<&str>,
    sex: Option<&str>,
    citizen: Option<bool>,
    region: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let f = cohort(age, sex, citizen, region)?;
    let t = lf::compute_shares(&data.inner, &f, self::quarter(quarter)?).map_err(py_err)?;
    let d = PyDict::new(py);
    for s in LaborState::ALL {
        d.set_item(s.code(), t.share(s))?;
    }
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (data, from_quarter, age = None, sex = None, citizen = None, region = None))]
fn estimate_transition_matrix(
    data: &PyPanelDataset,
    from_quarter: &str,
    age: Option<&str>,
    sex: Option<&str>,
    citizen: Option<bool>,
    region: Option<&str>,
) -> PyResult<PyTransitionMatrix> {
    let f = cohort(age, sex, citizen, region)?;
    let inner = lf::estimate_transition_matrix(&data.inner, &f, quarter(from_quarter)?).map_err(py_err)?;
    Ok(PyTransitionMatrix { inner })
}

/// First-passage probabilities f(1..=horizon) with their cdf and survival.
#[pyfunction]
fn fpt_distribution<'py>(
    py: Python<'py>,
    matrix: &PyTransitionMatrix,
    source: &str,
    target: &str,
    horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let m = chain(matrix)?;
    let r = lf::fpt_distribution(&m, state(source)?.index(), state(target)?.index(), horizon)
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("cdf", r.cdf())?;
    d.set_item("survival", r.survival())?;
    d.set_item("f", r.f)?;
    d.set_item("covered_mass", r.covered_mass)?;
    d.set_item("residual", r.residual)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (matrix, source, target, epsilon = lf::fpt::DEFAULT_EPSILON, max_horizon = lf::fpt::DEFAULT_MAX_HORIZON))]
fn efpt_series<'py>(
    py: Python<'py>,
    matrix: &PyTransitionMatrix,
    source: &str,
    target: &str,
    epsilon: f64,
    max_horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let m = chain(matrix)?;
    let r = lf::efpt_series(&m, state(source)?.index(), state(target)?.index(), epsilon, max_horizon)
        .map_err(py_err)?;
    efpt_dict(py, &r)
}

/// Raises ValueError when the expected first-passage time is infinite.
#[pyfunction]
fn efpt_linear<'py>(
    py: Python<'py>,
    matrix: &PyTransitionMatrix,
    source: &str,
    target: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let m = chain(matrix)?;
    let r = lf::efpt_linear(&m, state(source)?.index(), state(target)?.index()).map_err(py_err)?;
    efpt_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (matrix, source, target, epsilon = lf::fpt::DEFAULT_EPSILON, max_horizon = lf::fpt::DEFAULT_MAX_HORIZON))]
fn check_well_defined<'py>(
    py: Python<'py>,
    matrix: &PyTransitionMatrix,
    source: &str,
    target: &str,
    epsilon: f64,
    max_horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let m = chain(matrix)?;
    let w = lf::check_well_defined(&m, state(source)?.index(), state(target)?.index(), epsilon, max_horizon)
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("verdict", w.verdict.to_string())?;
    d.set_item("mass_at_horizon", w.mass_at_horizon)?;
    d.set_item("reachable", w.reachable)?;
    d.set_item("horizon", w.horizon)?;
    Ok(d)
}

/// Age band label, or None outside 15-34.
#[pyfunction]
fn age_band_of(age: u32) -> Option<&'static str> {
    lf::age_band_of(age).map(AgeBand::label)
}

#[pyfunction]
fn quarter_successor(q: &str) -> PyResult<String> {
    Ok(lf::quarter_successor(quarter(q)?).to_string())
}

#[pymodule]
#[pyo3(name = "labor_flows")]
fn labor_flows_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTransitionMatrix>()?;
    m.add_class::<PyPanelDataset>()?;
    m.add("STATES", LaborState::codes())?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    m.add_function(wrap_pyfunction!(efpt_targets, m)?)?;
    m.add_function(wrap_pyfunction!(parse_panel, m)?)?;
    m.add_function(wrap_pyfunction!(generate_panel, m)?)?;
    m.add_function(wrap_pyfunction!(compute_shares, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_transition_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(fpt_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(efpt_series, m)?)?;
    m.add_function(wrap_pyfunction!(efpt_linear, m)?)?;
    m.add_function(wrap_pyfunction!(check_well_defined, m)?)?;
    m.add_function(wrap_pyfunction!(age_band_of, m)?)?;
    m.add_function(wrap_pyfunction!(quarter_successor, m)?)?;
    Ok(())
}
