//! Python bindings.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lrn_core::curves::{enumerate_mordell_curves, enumerate_p7_curves, enumerate_quartic_curves, P7Family, SearchBounds};
use lrn_core::fib_lucas::CohnKind;
use lrn_core::lehmer::{lehmer_number_any, LehmerInstance};
use lrn_core::oracle::{self, SearchBox};
use lrn_core::solver::{self, ReportDetails, SolverConfig, DEFAULT_P5_KMAX};
use lrn_core::tables;
use lrn_core::{Error, SolutionTuple};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A verified tuple (x, y, a, b, c, m, n).
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "Solution")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySolution(SolutionTuple);

#[pymethods]
impl PySolution {
    #[new]
    fn new(x: BigUint, y: BigUint, a: u32, b: u32, c: u32, m: u32, n: u32) -> PyResult<Self> {
        SolutionTuple::new(x, y, a, b, c, m, n).map(PySolution).map_err(py_err)
    }

    #[getter]
    fn x(&self) -> BigUint {
        self.0.x.clone()
    }
    #[getter]
    fn y(&self) -> BigUint {
        self.0.y.clone()
    }
    #[getter]
    fn a(&self) -> u32 {
        self.0.a
    }
    #[getter]
    fn b(&self) -> u32 {
        self.0.b
    }
    #[getter]
    fn c(&self) -> u32 {
        self.0.c
    }
    #[getter]
    fn m(&self) -> u32 {
        self.0.m
    }
    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }

    fn as_tuple(&self) -> (BigUint, BigUint, u32, u32, u32, u32, u32) {
        let t = &self.0;
        (t.x.clone(), t.y.clone(), t.a, t.b, t.c, t.m, t.n)
    }

    fn __repr__(&self) -> String {
        format!("Solution{}", self.0)
    }
}

fn wrap(v: Vec<SolutionTuple>) -> Vec<PySolution> {
    v.into_iter().map(PySolution).collect()
}

/// (valid, diagnostic) for a candidate tuple.
#[pyfunction]
fn verify_solution(x: BigUint, y: BigUint, a: u32, b: u32, c: u32, m: u32, n: u32) -> (bool, Option<String>) {
    let v = oracle::verify_solution(&x, &y, a, b, c, m, n);
    (v.valid, v.diagnostic.map(|d| d.to_string()))
}

#[pyfunction]
#[pyo3(signature = (n, y_max, a_max=10, b_max=4, c_max=3, m_max=1))]
fn brute_force_search(
    py: Python<'_>,
    n: Vec<u32>,
    y_max: u64,
    a_max: u32,
    b_max: u32,
    c_max: u32,
    m_max: u32,
) -> PyResult<Vec<PySolution>> {
    let b = SearchBox::new(a_max, b_max, c_max, m_max, n, y_max).map_err(py_err)?;
    let found = py.detach(|| oracle::brute_force_search(&b)).map_err(py_err)?;
    Ok(wrap(found))
}

/// Runs the full case analysis and returns the merged solution list.
#[pyfunction]
#[pyo3(signature = (nmax=16, denom_bound=2, numer_bound=10_000, verify_tables=true))]
fn solve(py: Python<'_>, nmax: u32, denom_bound: u32, numer_bound: u64, verify_tables: bool) -> PyResult<Vec<PySolution>> {
    let cfg = SolverConfig {
        nmax,
        bounds: SearchBounds { denom_bound, numer_bound },
        pmax: (nmax as u64).max(11),
        p5_kmax: DEFAULT_P5_KMAX,
        verify: if verify_tables { tables::corrected_golden_set() } else { Vec::new() },
    };
    let res = py.detach(|| solver::solve_master(&cfg)).map_err(py_err)?;
    Ok(wrap(res.solutions))
}

/// Rejected final equations and surviving solutions of the exponent-5 analysis.
#[pyfunction]
#[pyo3(signature = (kmax=DEFAULT_P5_KMAX))]
fn p5_analysis<'py>(py: Python<'py>, kmax: u32) -> PyResult<Bound<'py, PyDict>> {
    if kmax < 3 {
        return Err(PyValueError::new_err("kmax must be at least 3"));
    }
    let r = solver::solve_p5(kmax);
    let d = PyDict::new(py);
    if let ReportDetails::FibonacciLucas { rejected_equations, analysis } = &r.details {
        let eqs: Vec<String> = rejected_equations.iter().map(|e| e.to_string()).collect();
        d.set_item("rejected_equations", eqs)?;
        d.set_item("candidates", analysis.entries.len())?;
    }
    d.set_item("solutions", wrap(r.solutions().to_vec()))?;
    Ok(d)
}

/// Number of primes 7 < p ≤ pmax with a verified elimination certificate.
#[pyfunction]
fn p_gt7_certificates(pmax: u64) -> PyResult<usize> {
    let r = solver::solve_p_gt7(pmax).map_err(py_err)?;
    match r.details {
        ReportDetails::Certificates(c) => Ok(c.iter().filter(|c| c.verify()).count()),
        _ => unreachable!(),
    }
}

/// Printed table rows as (table, index, row, correction).
#[pyfunction]
#[allow(clippy::type_complexity)]
fn golden_rows() -> Vec<(&'static str, usize, tables::RawRow, Option<tables::RawRow>)> {
    tables::golden_rows().map(|r| (r.table.name(), r.index, r.row, r.correction)).collect()
}

#[pyfunction]
fn corrected_golden_set() -> Vec<PySolution> {
    wrap(tables::corrected_golden_set())
}

#[pyfunction]
fn class_number(d: u64) -> PyResult<u64> {
    lrn_core::quad_class::class_number(d).map_err(py_err)
}

#[pyfunction]
fn lehmer_number(u: u64, v: u64, d: u64, m: u32, n: u32) -> PyResult<num_bigint::BigInt> {
    let inst = LehmerInstance::new(u, v, d, m).map_err(py_err)?;
    lehmer_number_any(&inst, n).map_err(py_err)
}

/// Indices k ≤ limit with F_k or L_k of the given shape: "F=x^2", "F=2x^2", "L=x^2", "L=2x^2".
#[pyfunction]
fn cohn_classify(kind: &str, limit: u32) -> PyResult<Vec<(u32, BigUint)>> {
    let k = CohnKind::ALL
        .into_iter()
        .find(|k| k.to_string() == kind)
        .ok_or_else(|| PyValueError::new_err(format!("unknown kind {kind:?}")))?;
    Ok(lrn_core::fib_lucas::cohn_classify(k, limit))
}

#[pyfunction]
fn curve_counts<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("quartic", enumerate_quartic_curves().len())?;
    d.set_item("mordell", enumerate_mordell_curves().len())?;
    for f in P7Family::ALL {
        d.set_item(format!("p7 {}", f.name()), enumerate_p7_curves(f).len())?;
    }
    Ok(d)
}

#[pymodule]
fn lrn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(verify_solution, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_search, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(p5_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(p_gt7_certificates, m)?)?;
    m.add_function(wrap_pyfunction!(golden_rows, m)?)?;
    m.add_function(wrap_pyfunction!(corrected_golden_set, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(lehmer_number, m)?)?;
    m.add_function(wrap_pyfunction!(cohn_classify, m)?)?;
    m.add_function(wrap_pyfunction!(curve_counts, m)?)?;
    Ok(())
}
