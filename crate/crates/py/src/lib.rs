//! Python bindings. Each function runs the matching CLI command in process and
//! returns its JSON report as Python objects, so integers arrive as decimal strings.

use covermonoid_cli::{execute_args, CliError};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn run<'py>(py: Python<'py>, args: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let rendered = py.detach(|| execute_args(args)).map_err(|e| match e {
        CliError::Parse(m) => PyValueError::new_err(m),
        CliError::Failure(m) => PyRuntimeError::new_err(m),
    })?;
    py.import("json")?.call_method1("loads", (rendered.output,))
}

fn args(words: &[&str]) -> Vec<String> {
    words.iter().map(|s| s.to_string()).collect()
}

/// Runs any command line, e.g. `run_command(["sigma", "2,2", "--weak"])`.
#[pyfunction]
fn run_command<'py>(py: Python<'py>, argv: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let mut full = args(&["--format", "json"]);
    full.extend(argv);
    run(py, full)
}

#[pyfunction]
fn lattice<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["lattice", group]))
}

#[pyfunction]
fn presentation<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["presentation", group]))
}

/// Extremal rays of the dual cone of the cover monoid.
#[pyfunction]
fn extremal_rays<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["rays", group]))
}

#[pyfunction]
fn omega<'py>(py: Python<'py>, beta: u64, n: u64) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["omega", &beta.to_string(), &n.to_string()]))
}

#[pyfunction]
fn invariants<'py>(py: Python<'py>, r: u64, alpha: u64, n: u64, q_bar: u64) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["invariants", &r.to_string(), &alpha.to_string(), &n.to_string(), &q_bar.to_string()]))
}

#[pyfunction]
#[pyo3(signature = (group, weak = false))]
fn sigma<'py>(py: Python<'py>, group: &str, weak: bool) -> PyResult<Bound<'py, PyAny>> {
    let mut a = args(&["sigma", group]);
    if weak {
        a.push("--weak".into());
    }
    run(py, a)
}

#[pyfunction]
fn nc_table<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["nc-table", group]))
}

#[pyfunction]
fn smooth_stack<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["smooth-stack", group]))
}

#[pyfunction]
fn reducible<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["reducible", group]))
}

/// Runs the property suite. Failing properties are reported in the result, not raised.
#[pyfunction]
#[pyo3(signature = (max_order = 12, prime = 101))]
fn verify<'py>(py: Python<'py>, max_order: u64, prime: u64) -> PyResult<Bound<'py, PyAny>> {
    run(py, args(&["--max-order", &max_order.to_string(), "--prime", &prime.to_string(), "verify"]))
}

#[pymodule]
fn covermonoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    m.add_function(wrap_pyfunction!(lattice, m)?)?;
    m.add_function(wrap_pyfunction!(presentation, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_rays, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(nc_table, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_stack, m)?)?;
    m.add_function(wrap_pyfunction!(reducible, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
