//! Python bindings: `import qperc`.
//!
//! States are lists of Python `complex`; matrices are lists of rows.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qperc::gates::named_gate;
use qperc::perceptron::{self, TrainOptions};
use qperc::{Error, Matrix, PerceptronModel, StateVector, TrainingSet};

type Rows = Vec<Vec<Complex64>>;
type Pairs = Vec<(Vec<Complex64>, Vec<Complex64>)>;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NumericalFailure(_) | Error::DivergenceDetected { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix(rows: Rows) -> PyResult<Matrix> {
    Matrix::from_rows(rows).map_err(py_err)
}

fn state(amps: Vec<Complex64>) -> PyResult<StateVector> {
    StateVector::new(amps).map_err(py_err)
}

fn training_set(pairs: Pairs, rank_tol: f64) -> PyResult<TrainingSet> {
    let pairs = pairs
        .into_iter()
        .map(|(x, y)| perceptron::TrainingPair::new(state(x)?, state(y)?).map_err(py_err))
        .collect::<PyResult<Vec<_>>>()?;
    TrainingSet::with_rank_tol(pairs, rank_tol).map_err(py_err)
}

#[pyclass(name = "Model", module = "qperc", frozen)]
struct PyModel {
    inner: PerceptronModel,
}

#[pymethods]
impl PyModel {
    fn predict(&self, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(perceptron::predict(&self.inner, &state(x)?).map_err(py_err)?.into_amplitudes())
    }

    #[getter]
    fn unitary(&self) -> Rows {
        self.inner.unitary.to_rows()
    }

    #[getter]
    fn f(&self) -> Rows {
        self.inner.f.to_rows()
    }

    #[getter]
    fn w_new(&self) -> Rows {
        self.inner.w_new.to_rows()
    }

    #[getter]
    fn sigma(&self) -> Vec<f64> {
        self.inner.sigma.clone()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    fn is_full_rank(&self) -> bool {
        self.inner.is_full_rank()
    }

    fn to_json(&self) -> String {
        qperc::io::serialize_model(&self.inner)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: qperc::io::parse_model(text).map_err(py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Model(dim={}, rank={}, sigma={:?})", self.inner.dim, self.inner.rank, self.inner.sigma)
    }
}

/// Train on `[(input, target), ...]` with a single SVD.
#[pyfunction]
#[pyo3(signature = (pairs, rank_tol = qperc::svd::DEFAULT_RANK_TOL, force = false))]
fn train(pairs: Pairs, rank_tol: f64, force: bool) -> PyResult<PyModel> {
    let set = training_set(pairs, rank_tol)?;
    let opts = TrainOptions { rank_tol, force };
    Ok(PyModel {
        inner: perceptron::train(&set, &opts).map_err(py_err)?,
    })
}

/// Returns `(u, sigma, v_dag, rank)`.
#[pyfunction]
#[pyo3(signature = (m, rank_tol = qperc::svd::DEFAULT_RANK_TOL))]
fn svd(m: Rows, rank_tol: f64) -> PyResult<(Rows, Vec<f64>, Rows, usize)> {
    let s = qperc::svd::svd_with_rank_tol(&matrix(m)?, rank_tol).map_err(py_err)?;
    Ok((s.u.to_rows(), s.sigma, s.v_dag.to_rows(), s.rank))
}

/// Returns `(u v^†, rank)`.
#[pyfunction]
#[pyo3(signature = (m, rank_tol = qperc::svd::DEFAULT_RANK_TOL))]
fn polar_unitary(m: Rows, rank_tol: f64) -> PyResult<(Rows, usize)> {
    let (u, rank) = qperc::svd::polar_unitary(&matrix(m)?, rank_tol).map_err(py_err)?;
    Ok((u.to_rows(), rank))
}

#[pyfunction]
fn gate(name: &str) -> PyResult<Rows> {
    Ok(named_gate(name).map_err(py_err)?.matrix.to_rows())
}

#[pyfunction]
fn complete_training_set(name: &str) -> PyResult<Pairs> {
    let g = named_gate(name).map_err(py_err)?;
    let set = qperc::gates::complete_training_set(&g).map_err(py_err)?;
    Ok(set
        .pairs()
        .iter()
        .map(|p| (p.input().amplitudes().to_vec(), p.target().amplitudes().to_vec()))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (pairs, rank_tol = qperc::svd::DEFAULT_RANK_TOL))]
fn classify(pairs: Pairs, rank_tol: f64) -> PyResult<String> {
    Ok(training_set(pairs, rank_tol)?.completeness().to_string())
}

/// Returns `(ok, worst_pair, violation)`.
#[pyfunction]
#[pyo3(signature = (pairs, tol = perceptron::CONSISTENCY_TOL))]
fn consistency_check(pairs: Pairs, tol: f64) -> PyResult<(bool, Option<(usize, usize)>, f64)> {
    let r = perceptron::consistency_check(&training_set(pairs, qperc::svd::DEFAULT_RANK_TOL)?, tol);
    Ok((r.ok, r.worst_pair, r.violation))
}

#[pyfunction]
#[pyo3(signature = (a, b, phase_invariant = true))]
fn fidelity(a: Vec<Complex64>, b: Vec<Complex64>, phase_invariant: bool) -> PyResult<f64> {
    perceptron::fidelity(&state(a)?, &state(b)?, phase_invariant).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (id, tol = qperc::fixtures::FIXTURE_TOL))]
fn run_fixture<'py>(py: Python<'py>, id: u8, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = qperc::fixtures::run_fixture_with_tol(id, tol).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("id", r.id)?;
    d.set_item("gate", r.gate)?;
    d.set_item("label", r.label.to_string())?;
    d.set_item("classified", r.classified.map(|c| c.to_string()))?;
    d.set_item("rank", r.rank)?;
    d.set_item("sigma", r.sigma.clone())?;
    d.set_item("worst_diff", r.worst_diff())?;
    d.set_item("note", r.note)?;
    d.set_item("error", r.error.clone())?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

#[pymodule(name = "qperc")]
fn qperc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(svd, m)?)?;
    m.add_function(wrap_pyfunction!(polar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(gate, m)?)?;
    m.add_function(wrap_pyfunction!(complete_training_set, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_check, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(run_fixture, m)?)?;
    Ok(())
}
