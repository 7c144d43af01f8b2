//! Python bindings for `binodiv-core`.
//!
//! Exact rationals are returned as `fractions.Fraction`; reports come back as
//! plain dicts with the same field names as the CLI's JSON.

use binodiv_core::format::rational;
use binodiv_core::rows::SparseRow;
use binodiv_core::stats::{self, CenteringRule, ScanMode, SecondMomentConfig, UPoint};
use binodiv_core::valuation::BlockWord;
use binodiv_core::{gf, rows, valuation, Error, ExactRational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

pyo3::create_exception!(binodiv, GuardError, PyValueError, "A size guard was exceeded.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Guard { .. } => GuardError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for binodiv_core::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn fraction<'py>(py: Python<'py>, r: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((rational(r),))
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// One row of counts, keyed by the shifted index k = s_p(n) + (p-1)j.
#[pyclass(frozen, name = "Row", module = "binodiv")]
struct PyRow {
    inner: SparseRow,
}

#[pymethods]
impl PyRow {
    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    /// `[(k, count), ...]` in increasing k.
    fn entries(&self) -> Vec<(u64, u128)> {
        self.inner.entries().to_vec()
    }

    fn get(&self, k: i64) -> u128 {
        self.inner.get(k)
    }

    fn partial_sum(&self, k: i64) -> u128 {
        self.inner.partial_sum(k)
    }

    /// Number of entries with valuation exactly j.
    fn theta(&self, j: i64) -> u128 {
        self.inner.theta(j)
    }

    /// Number of entries with valuation at most j.
    fn theta_partial(&self, j: i64) -> u128 {
        self.inner.theta_partial(j)
    }

    fn total(&self) -> u128 {
        self.inner.total()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Row({})", self.inner.to_json())
    }
}

#[pyfunction]
fn nu_binomial(n: u64, t: i64, p: u64) -> PyResult<u64> {
    valuation::nu_binomial(n, t, p).or_py()
}

#[pyfunction]
fn nu_factorial(n: u64, p: u64) -> PyResult<u64> {
    valuation::nu_factorial(n, p).or_py()
}

#[pyfunction]
fn lucas_residue(n: u64, t: i64, p: u64) -> PyResult<u64> {
    valuation::lucas_residue(n, t, p).or_py()
}

#[pyfunction]
fn digit_sum(n: u64, p: u64) -> PyResult<u64> {
    valuation::digit_sum(n, p).or_py()
}

/// Overlapping occurrences of a binary word such as "10" in n.
#[pyfunction]
fn block_count(n: u64, word: &str) -> PyResult<u64> {
    Ok(valuation::block_count(n, &BlockWord::binary(word).or_py()?))
}

#[pyfunction]
fn tilde_row(n: u64) -> PyRow {
    PyRow {
        inner: rows::tilde_row(n),
    }
}

#[pyfunction]
#[pyo3(signature = (n, p = 2))]
fn row(n: u64, p: u64) -> PyResult<PyRow> {
    Ok(PyRow {
        inner: rows::row(n, p).or_py()?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, p = 2))]
fn row_bruteforce(n: u64, p: u64) -> PyResult<PyRow> {
    Ok(PyRow {
        inner: rows::row_bruteforce(n, p).or_py()?,
    })
}

#[pyfunction]
fn theta_tilde(k: i64, n: u64) -> u128 {
    rows::theta_tilde(k, n)
}

/// `(formula, ratio)` for Howard's block-count expression, j in 1..=3.
#[pyfunction]
fn howard_check<'py>(
    py: Python<'py>,
    n: u64,
    j: u32,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let (formula, ratio) = rows::howard_check(n, j).or_py()?;
    Ok((fraction(py, &formula)?, fraction(py, &ratio)?))
}

#[pyfunction]
fn mu_n(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &rows::mu_n(n))
}

/// Interval moments as a dict of family name to a list of Fractions in k.
#[pyfunction]
#[pyo3(name = "moments_direct")]
fn moments<'py>(py: Python<'py>, lam: u32) -> PyResult<Bound<'py, PyAny>> {
    let t = gf::moments_direct(lam).or_py()?;
    let out = pyo3::types::PyDict::new(py);
    for (name, family) in [
        ("m", &t.m),
        ("frak_m", &t.frak_m),
        ("m_prime", &t.m_prime),
        ("frak_m_prime", &t.frak_m_prime),
        ("m2", &t.m2),
        ("frak_m2", &t.frak_m2),
    ] {
        let values = family
            .iter()
            .map(|v| fraction(py, v))
            .collect::<PyResult<Vec<_>>>()?;
        out.set_item(name, values)?;
    }
    Ok(out.into_any())
}

/// Discrepancies between closed forms and direct sums; empty when clean.
#[pyfunction]
fn verify_gf_identities(py: Python<'_>, lambda_max: u32) -> PyResult<Bound<'_, PyAny>> {
    let report = gf::verify_gf_identities(lambda_max).or_py()?;
    to_py(py, &report.discrepancies)
}

#[pyfunction]
fn phi(x: f64) -> f64 {
    stats::phi(x)
}

#[pyfunction]
fn sup_distance(n: u64, lam: u32) -> PyResult<f64> {
    stats::sup_distance(n, lam).or_py()
}

/// Full scan unless `count` is given, in which case `seed` is required.
#[pyfunction]
#[pyo3(signature = (lam, epsilon, count = None, seed = None))]
fn clt_scan(
    py: Python<'_>,
    lam: u32,
    epsilon: f64,
    count: Option<u64>,
    seed: Option<u64>,
) -> PyResult<Bound<'_, PyAny>> {
    let mode = match (count, seed) {
        (None, _) => ScanMode::Full,
        (Some(count), Some(seed)) => ScanMode::Sample { count, seed },
        (Some(_), None) => return Err(PyValueError::new_err("sampling needs a seed")),
    };
    to_py(py, &stats::clt_scan(lam, epsilon, mode).or_py()?)
}

/// `v` defaults to Φ(u/√λ) + v_shift.
#[pyfunction]
#[pyo3(signature = (lam, us, v = None, v_shift = 0.0, w = 0.0))]
fn second_moment_scan(
    py: Python<'_>,
    lam: u32,
    us: Vec<i64>,
    v: Option<f64>,
    v_shift: f64,
    w: f64,
) -> PyResult<Bound<'_, PyAny>> {
    let config = SecondMomentConfig {
        v: v.map_or(CenteringRule::Phi { shift: v_shift }, CenteringRule::Constant),
        w,
        ..Default::default()
    };
    to_py(py, &stats::second_moment_scan(lam, &us, &config).or_py()?)
}

#[pyfunction]
fn uniform_moments(py: Python<'_>, lam: u32) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &stats::uniform_moments(lam))
}

/// `us` entries are integers or multiples of ⌊√λ⌋ written "s", "-2s", ...
#[pyfunction]
fn lemma_ratio_checks(py: Python<'_>, lambdas: Vec<u32>, us: Vec<String>) -> PyResult<Bound<'_, PyAny>> {
    let points = us
        .iter()
        .map(|s| s.parse::<UPoint>())
        .collect::<binodiv_core::Result<Vec<_>>>()
        .or_py()?;
    to_py(py, &stats::lemma_ratio_checks(&lambdas, &points).or_py()?)
}

#[pyfunction]
#[pyo3(signature = (n_total, j = 0, p = 2))]
fn singmaster_average(py: Python<'_>, n_total: u64, j: u32, p: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &stats::singmaster_average(n_total, j, p).or_py()?)
}

#[pymodule]
fn binodiv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    m.add_class::<PyRow>()?;
    m.add_function(wrap_pyfunction!(nu_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(nu_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_residue, m)?)?;
    m.add_function(wrap_pyfunction!(digit_sum, m)?)?;
    m.add_function(wrap_pyfunction!(block_count, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_row, m)?)?;
    m.add_function(wrap_pyfunction!(row, m)?)?;
    m.add_function(wrap_pyfunction!(row_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(theta_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(howard_check, m)?)?;
    m.add_function(wrap_pyfunction!(mu_n, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gf_identities, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(sup_distance, m)?)?;
    m.add_function(wrap_pyfunction!(clt_scan, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment_scan, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_moments, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_ratio_checks, m)?)?;
    m.add_function(wrap_pyfunction!(singmaster_average, m)?)?;
    Ok(())
}
