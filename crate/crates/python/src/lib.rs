//! Python module `wishart_nc`.
//!
//! Exact values come back as `fractions.Fraction`, Monte Carlo rows as dicts.
//! Errors from the core library raise `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use wishart_nc::model::CumulantSpec;
use wishart_nc::moments::{limit_moment_enumerative, limit_moment_pair};
use wishart_nc::numbers;
use wishart_nc::partition as part;
use wishart_nc::rational::{parse_rational, parse_rational_list, Rational};
use wishart_nc::rmt::{empirical_wishart_moments, EnsembleSpec, Normalization, SpectralLaw};
use wishart_nc::series::solve::{dependent_moments, solve_psi_independent};
use wishart_nc::series::verify::{run_suite, Suite};
use wishart_nc::{words, CumulantSequence, LabelPattern, ModelParams};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = v.iter().map(|q| fraction(py, q)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Accepts `int`, `str` or `fractions.Fraction`.
fn rational_arg(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_string()).map_err(err)
}

fn pattern(labels: &str) -> PyResult<LabelPattern> {
    labels.parse().map_err(err)
}

fn cap(cap: Option<usize>) -> usize {
    cap.unwrap_or_else(wishart_nc::cap_from_env)
}

/// Noncrossing (or arbitrary) set partition of `[n]`.
#[pyclass(name = "Partition", module = "wishart_nc", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPartition {
    inner: part::Partition,
}

#[pymethods]
impl PyPartition {
    #[new]
    fn new(n: usize, blocks: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyPartition { inner: part::Partition::new(n, blocks).map_err(err)? })
    }

    /// Parses `"1,8|2,3,4,5|6,7"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPartition { inner: text.parse().map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.blocks().to_vec()
    }

    fn is_noncrossing(&self) -> bool {
        self.inner.is_noncrossing()
    }

    fn kreweras_complement(&self) -> PyResult<Self> {
        Ok(PyPartition { inner: self.inner.kreweras_complement().map_err(err)? })
    }

    /// `(depth, number of nearest inner blocks)` of block `index` (0-based).
    fn block_stats(&self, index: usize) -> PyResult<(usize, usize)> {
        let s = self.inner.block_stats(index).map_err(err)?;
        Ok((s.depth, s.nearest_inner_count))
    }

    /// Pairs of `α(π)` on `[2n]`.
    fn alpha(&self) -> PyResult<Vec<(usize, usize)>> {
        Ok(part::alpha(&self.inner).map_err(err)?.pairs().to_vec())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Partition.parse('{}')", self.inner)
    }
}

/// Word over the colored alphabet; `Word.w(p, labels)` builds `1 ... p p* ... 1*`.
#[pyclass(name = "Word", module = "wishart_nc", frozen)]
struct PyWord {
    inner: words::Word,
}

#[pymethods]
impl PyWord {
    /// Parses `"1@a 2@b 2*@b 1*@a"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyWord { inner: text.parse().map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (p, labels = "same"))]
    fn w(p: usize, labels: &str) -> PyResult<Self> {
        let l = pattern(labels)?.labels(p).map_err(err)?;
        Ok(PyWord { inner: words::make_w(p, &l).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (p, labels = "same"))]
    fn w_tilde(p: usize, labels: &str) -> PyResult<Self> {
        let l = pattern(labels)?.labels(p).map_err(err)?;
        Ok(PyWord { inner: words::make_wtilde(p, &l).map_err(err)? })
    }

    fn power(&self, k: usize) -> Self {
        PyWord { inner: self.inner.power(k) }
    }

    fn is_adapted(&self, partition: PyRef<'_, PyPartition>) -> PyResult<bool> {
        self.inner.is_adapted(&partition.inner).map_err(err)
    }

    /// Segment coloring of a block as a string of color digits.
    fn block_coloring(&self, block: Vec<usize>) -> PyResult<String> {
        Ok(self.inner.block_coloring(&block).map_err(err)?.to_string())
    }

    #[pyo3(signature = (cap = None))]
    fn count_adapted(&self, cap: Option<usize>) -> PyResult<u64> {
        self.inner.count_adapted(self::cap(cap)).map_err(err)
    }

    #[pyo3(signature = (cap = None))]
    fn enumerate_adapted(&self, cap: Option<usize>) -> PyResult<Vec<PyPartition>> {
        Ok(self
            .inner
            .enumerate_adapted(self::cap(cap))
            .map_err(err)?
            .into_iter()
            .map(|inner| PyPartition { inner })
            .collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.inner)
    }
}

fn model(p: usize, dims: Option<&str>, laws: Vec<String>, labels: &str, len: usize) -> PyResult<ModelParams> {
    let dims = match dims {
        Some(d) => parse_rational_list(d).map_err(err)?,
        None => vec![Rational::from_integer(1.into()); p + 1],
    };
    let laws = if laws.is_empty() { vec!["semicircle".to_string()] } else { laws };
    let specs = laws.iter().map(|s| s.parse::<CumulantSpec>().map_err(err)).collect::<PyResult<Vec<_>>>()?;
    let seqs: Vec<CumulantSequence> = match specs.len() {
        1 => vec![specs[0].sequence(len); p],
        n if n == p => specs.iter().map(|s| s.sequence(len)).collect(),
        n => return Err(err(format!("expected 1 or {p} laws, found {n}"))),
    };
    ModelParams::per_block(p, dims, &pattern(labels)?, seqs).map_err(err)
}

/// Exact limit moment `m_k`. `dims` is a comma list such as `"1,1/2,2"`;
/// `laws` holds one cumulant spec for all blocks or one per block.
#[pyfunction]
#[pyo3(signature = (p, k, dims = None, laws = Vec::new(), labels = "distinct", route = "enumerative", cap = None))]
fn moment<'py>(
    py: Python<'py>,
    p: usize,
    k: usize,
    dims: Option<&str>,
    laws: Vec<String>,
    labels: &str,
    route: &str,
    cap: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = model(p, dims, laws, labels, 2 * p * k + 2)?;
    let res = match route {
        "enumerative" => limit_moment_enumerative(k, &m, self::cap(cap)),
        "pair" => limit_moment_pair(k, &m, self::cap(cap)),
        other => return Err(err(format!("unknown route `{other}`"))),
    }
    .map_err(err)?;
    fraction(py, &res.moment)
}

/// `|NC(W^k)|` for `W = 1 ... p p* ... 1*`.
#[pyfunction]
#[pyo3(signature = (p, k, labels = "same", cap = None))]
fn count(p: usize, k: usize, labels: &str, cap: Option<usize>) -> PyResult<u64> {
    PyWord::w(p, labels)?.inner.power(k).count_adapted(self::cap(cap)).map_err(err)
}

#[pyfunction]
fn catalan(n: u64) -> String {
    numbers::catalan(n).to_string()
}

#[pyfunction]
fn fuss_catalan(py: Python<'_>, k: u64, p: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &numbers::fuss_catalan(k, p))
}

#[pyfunction]
fn raney<'py>(py: Python<'py>, n: u64, p: u64, r: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &numbers::raney(n, p, &rational_arg(r)?))
}

/// Moments `m_1..m_order` from the functional equations; `mode` is
/// `"independent"` (distinct labels) or `"dependent"` (two blocks of one matrix).
#[pyfunction]
#[pyo3(signature = (order, p = 1, dims = None, laws = Vec::new(), mode = "independent"))]
fn series<'py>(
    py: Python<'py>,
    order: usize,
    p: usize,
    dims: Option<&str>,
    laws: Vec<String>,
    mode: &str,
) -> PyResult<Bound<'py, PyList>> {
    match mode {
        "independent" => {
            let m = model(p, dims, laws, "distinct", 2 * order + 2)?;
            let psi = solve_psi_independent(&m, order).map_err(err)?;
            fractions(py, &psi.coeffs()[1..])
        }
        "dependent" => {
            let spec: CumulantSpec = laws.first().map_or("semicircle", String::as_str).parse().map_err(err)?;
            fractions(py, &dependent_moments(&spec.sequence(4 * order), order).map_err(err)?)
        }
        other => Err(err(format!("unknown mode `{other}`"))),
    }
}

/// Runs a verification suite and returns whether every check passed.
#[pyfunction]
#[pyo3(signature = (suite = "all", kmax = 3, cap = None))]
fn verify(suite: &str, kmax: usize, cap: Option<usize>) -> PyResult<bool> {
    let s: Suite = suite.parse().map_err(err)?;
    Ok(run_suite(s, kmax, self::cap(cap)).map_err(err)?.iter().all(|r| r.passed()))
}

/// Monte Carlo `τ₁((BB*)^k)` for `k = 1..=kmax`; one dict per `k`.
#[pyfunction]
#[pyo3(signature = (blocks, laws = Vec::new(), labels = "distinct", trials = 100, seed = 0, kmax = 3, normalization = "total"))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    blocks: Vec<usize>,
    laws: Vec<String>,
    labels: &str,
    trials: usize,
    seed: u64,
    kmax: usize,
    normalization: &str,
) -> PyResult<Bound<'py, PyList>> {
    let p = blocks.len().saturating_sub(1);
    let labs = pattern(labels)?.labels(p).map_err(err)?;
    let laws = if laws.is_empty() { vec!["semicircle".to_string()] } else { laws };
    let parsed = laws.iter().map(|s| s.parse::<SpectralLaw>().map_err(err)).collect::<PyResult<Vec<_>>>()?;
    let mut map = std::collections::BTreeMap::new();
    for (j, l) in labs.iter().enumerate() {
        let law = if parsed.len() == 1 { parsed[0].clone() } else { parsed.get(j).cloned().ok_or_else(|| err("one law per block"))? };
        map.insert(l.clone(), law);
    }
    let spec = EnsembleSpec {
        block_sizes: blocks,
        labels: labs,
        laws: map,
        trials,
        seed,
        normalization: normalization.parse::<Normalization>().map_err(err)?,
    };
    let res = py.detach(|| empirical_wishart_moments(&spec, kmax)).map_err(err)?;
    let rows = PyList::empty(py);
    for r in res.rows {
        let d = PyDict::new(py);
        d.set_item("k", r.k)?;
        d.set_item("estimate", r.estimate)?;
        d.set_item("stderr", r.stderr)?;
        d.set_item("trials", r.trials)?;
        rows.append(d)?;
    }
    Ok(rows)
}

#[pymodule(name = "wishart_nc")]
fn wishart_nc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartition>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(fuss_catalan, m)?)?;
    m.add_function(wrap_pyfunction!(raney, m)?)?;
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
