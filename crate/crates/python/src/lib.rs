//! Python bindings. Weights and degrees are plain lists of Python ints;
//! complexes are wrapped classes; reports come back as dicts.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::de::DeserializeOwned;
use serde::Serialize;

use wciq::maps::{self, Compatibility, FamilySearch, Limits};
use wciq::nef::{self, NefMode, NefPartition};
use wciq::{arith, complex, oracle, realize, regularity, DegreeTuple, Error, Representability, WeightTuple};

create_exception!(wciq, WciqError, PyException);
create_exception!(wciq, InputError, WciqError);
create_exception!(wciq, ResourceError, WciqError);
create_exception!(wciq, HypothesisError, WciqError);
create_exception!(wciq, ConsistencyError, WciqError);

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Input(_) => InputError::new_err(msg),
        Error::Hypothesis { witness, .. } => HypothesisError::new_err((msg, witness)),
        Error::Consistency { .. } => ConsistencyError::new_err(msg),
        _ => ResourceError::new_err(msg),
    }
}

fn weights(w: Vec<BigUint>) -> PyResult<WeightTuple> {
    WeightTuple::new(w).map_err(err)
}

fn degrees(d: Vec<BigUint>) -> PyResult<DegreeTuple> {
    DegreeTuple::new(d).map_err(err)
}

fn limits(dp_cap: u64, node_budget: u64) -> Limits {
    Limits { dp_cap, node_budget }
}

// Reports cross the boundary as JSON, parsed by the stdlib on the other side.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| WciqError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| InputError::new_err(e.to_string()))
}

type Obj<'py> = Bound<'py, PyAny>;

fn mode(s: &str) -> PyResult<NefMode> {
    s.parse().map_err(err)
}

/// Finite simplicial complex on `0..n_vertices`, stored by facets.
#[pyclass(module = "wciq", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Complex(wciq::Complex);

#[pymethods]
impl Complex {
    #[new]
    fn new(n_vertices: usize, generators: Vec<Vec<usize>>) -> PyResult<Self> {
        wciq::Complex::new(n_vertices, generators).map(Complex).map_err(err)
    }

    #[staticmethod]
    fn skeleton(n: usize, l: usize) -> Self {
        Complex(wciq::Complex::skeleton(n, l))
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.0.n_vertices()
    }

    #[getter]
    fn facets(&self) -> Vec<Vec<usize>> {
        self.0.facets().to_vec()
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        self.0.faces().collect()
    }

    fn is_face(&self, face: Vec<usize>) -> PyResult<bool> {
        self.0.is_face(&face).map_err(err)
    }

    fn minimal_nonfaces(&self) -> Vec<Vec<usize>> {
        self.0.minimal_nonfaces()
    }

    fn __repr__(&self) -> String {
        format!("Complex({}, {:?})", self.0.n_vertices(), self.0.facets())
    }
}

/// A complex with positive vertex weights.
#[pyclass(module = "wciq", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct WeightedComplex(wciq::WeightedComplex);

#[pymethods]
impl WeightedComplex {
    #[getter]
    fn complex(&self) -> Complex {
        Complex(self.0.complex().clone())
    }

    #[getter]
    fn facets(&self) -> Vec<Vec<usize>> {
        self.0.complex().facets().to_vec()
    }

    #[getter]
    fn vertex_weights(&self) -> BTreeMap<usize, BigUint> {
        self.0.vertex_weights().clone()
    }

    fn weight_of(&self, face: Vec<usize>) -> Option<BigUint> {
        self.0.weight_of(&face)
    }

    /// `(generators, degrees)` of the Stanley-Reisner ideal.
    fn sr_presentation(&self) -> (Vec<Vec<usize>>, Vec<BigUint>) {
        let p = self.0.sr_presentation();
        (p.generators, p.degrees)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("WeightedComplex({:?}, {:?})", self.0.complex().facets(), self.0.vertex_weights())
    }
}

/// `True`, `False`, or `None` when `d` is above the cap.
#[pyfunction]
#[pyo3(signature = (d, values, dp_cap = arith::DEFAULT_DP_CAP))]
fn is_representable(d: BigUint, values: Vec<BigUint>, dp_cap: u64) -> Option<bool> {
    match arith::is_representable(&d, &values, dp_cap) {
        Representability::Yes => Some(true),
        Representability::No => Some(false),
        Representability::Unknown => None,
    }
}

#[pyfunction]
#[pyo3(signature = (values, mu, dp_cap = arith::DEFAULT_DP_CAP))]
fn representable_degrees(values: Vec<BigUint>, mu: Vec<BigUint>, dp_cap: u64) -> PyResult<Vec<usize>> {
    let set = arith::representable_degrees(&values, &degrees(mu)?, dp_cap).map_err(err)?;
    Ok(set.into_iter().collect())
}

#[pyfunction]
fn is_wellformed(rho: Vec<BigUint>) -> PyResult<bool> {
    Ok(regularity::is_wellformed_wps(&weights(rho)?))
}

#[pyfunction]
fn is_linear_cone(rho: Vec<BigUint>, mu: Vec<BigUint>) -> PyResult<bool> {
    Ok(regularity::is_linear_cone(&weights(rho)?, &degrees(mu)?))
}

/// `(regular, witness)`; the witness is the least violating index set.
#[pyfunction]
#[pyo3(signature = (rho, mu, dp_cap = arith::DEFAULT_DP_CAP))]
fn is_strictly_regular(
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    dp_cap: u64,
) -> PyResult<(bool, Option<Vec<usize>>)> {
    let r = regularity::is_strictly_regular(&weights(rho)?, &degrees(mu)?, dp_cap).map_err(err)?;
    Ok((r.regular, r.witness))
}

#[pyfunction]
#[pyo3(signature = (rho, mu, dp_cap = arith::DEFAULT_DP_CAP))]
fn regularity_report<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    dp_cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = regularity::regularity_report(&weights(rho)?, &degrees(mu)?, dp_cap).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn singular_complex(rho: Vec<BigUint>) -> PyResult<WeightedComplex> {
    Ok(WeightedComplex(complex::singular_complex(&weights(rho)?)))
}

#[pyfunction]
#[pyo3(signature = (rho, d, dp_cap = arith::DEFAULT_DP_CAP))]
fn base_complex(rho: Vec<BigUint>, d: BigUint, dp_cap: u64) -> PyResult<WeightedComplex> {
    complex::base_complex(&weights(rho)?, &d, dp_cap)
        .map(WeightedComplex)
        .map_err(err)
}

#[pyfunction]
fn fano_index(rho: Vec<BigUint>, mu: Vec<BigUint>) -> PyResult<BigInt> {
    Ok(nef::fano_index(&weights(rho)?, &degrees(mu)?))
}

/// Parts `[I_0, I_1, ..., I_c]`, or `None` when no partition exists.
#[pyfunction]
#[pyo3(signature = (rho, mu, mode = "strong", node_budget = 10_000_000))]
fn find_nef_partition(
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    mode: &str,
    node_budget: u64,
) -> PyResult<Option<Vec<Vec<usize>>>> {
    let found = nef::find_nef_partition(&weights(rho)?, &degrees(mu)?, self::mode(mode)?, node_budget)
        .map_err(err)?;
    Ok(found.map(|p| p.parts))
}

#[pyfunction]
fn classify_partition<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    parts: Vec<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = nef::classify_partition(&weights(rho)?, &degrees(mu)?, &NefPartition { parts }).map_err(err)?;
    to_py(py, &c)
}

/// Raises `HypothesisError` with `(message, witness)` when a hypothesis fails.
#[pyfunction]
#[pyo3(signature = (rho, mu, dp_cap = arith::DEFAULT_DP_CAP, node_budget = 10_000_000))]
fn construct_strong_nef_partition<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    dp_cap: u64,
    node_budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s = nef::construct_strong_nef_partition(&weights(rho)?, &degrees(mu)?, &limits(dp_cap, node_budget))
        .map_err(err)?;
    to_py(py, &s)
}

/// `(family, None)` on success, `(None, conflict)` when infeasible.
#[pyfunction]
#[pyo3(signature = (rho, mu, restriction = false, dp_cap = arith::DEFAULT_DP_CAP, node_budget = 10_000_000))]
fn build_admissible_family<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    restriction: bool,
    dp_cap: u64,
    node_budget: u64,
) -> PyResult<(Option<Obj<'py>>, Option<Obj<'py>>)> {
    let compat = if restriction {
        Compatibility::Restriction
    } else {
        Compatibility::ImageContainment
    };
    let found = maps::build_family_with(&weights(rho)?, &degrees(mu)?, compat, &limits(dp_cap, node_budget))
        .map_err(err)?;
    Ok(match found {
        FamilySearch::Found(f) => (Some(to_py(py, &f)?), None),
        FamilySearch::Infeasible(c) => (None, Some(to_py(py, &c)?)),
    })
}

#[pyfunction]
#[pyo3(signature = (rho, mu, family, dp_cap = arith::DEFAULT_DP_CAP))]
fn verify_poset_map<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    family: &Bound<'py, PyAny>,
    dp_cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let fam: maps::AdmissibleFamily = from_py(family)?;
    let r = maps::verify_poset_map(&weights(rho)?, &degrees(mu)?, &fam, dp_cap).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (rho, mu, node_budget = 10_000_000))]
fn find_noncontracting_map<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    node_budget: u64,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let found = maps::find_noncontracting_map(&weights(rho)?, &degrees(mu)?, node_budget).map_err(err)?;
    found.map(|m| to_py(py, &m)).transpose()
}

#[pyfunction]
fn realize_weights<'py>(py: Python<'py>, c: &Complex) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &realize::realize_weights(&c.0).map_err(err)?)
}

#[pyfunction]
fn verify_realization(c: &Complex, rho: Vec<BigUint>) -> PyResult<bool> {
    realize::verify_realization(&c.0, &weights(rho)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l, n, m, t = None))]
fn contraction_instance<'py>(
    py: Python<'py>,
    l: usize,
    n: usize,
    m: usize,
    t: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = t.unwrap_or_else(|| realize::contraction_min_ones(l, n, m));
    to_py(py, &realize::contraction_instance(l, n, m, t).map_err(err)?)
}

#[pyfunction]
fn realize_map_instance<'py>(
    py: Python<'py>,
    c: &Complex,
    d: &Complex,
    assignment: BTreeMap<usize, usize>,
    pad: usize,
    ones: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &realize::realize_map_instance(&c.0, &d.0, &assignment, pad, ones).map_err(err)?)
}

/// Brute-force cross-check; the `divergences` list is empty on agreement.
#[pyfunction]
#[pyo3(signature = (rho, mu, dp_cap = arith::DEFAULT_DP_CAP, node_budget = 10_000_000))]
fn cross_check<'py>(
    py: Python<'py>,
    rho: Vec<BigUint>,
    mu: Vec<BigUint>,
    dp_cap: u64,
    node_budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = oracle::cross_check(&weights(rho)?, &degrees(mu)?, &limits(dp_cap, node_budget)).map_err(err)?;
    to_py(py, &r)
}

#[pymodule(name = "wciq")]
fn wciq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("WciqError", py.get_type::<WciqError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("ResourceError", py.get_type::<ResourceError>())?;
    m.add("HypothesisError", py.get_type::<HypothesisError>())?;
    m.add("ConsistencyError", py.get_type::<ConsistencyError>())?;
    m.add("DEFAULT_DP_CAP", arith::DEFAULT_DP_CAP)?;
    m.add_class::<Complex>()?;
    m.add_class::<WeightedComplex>()?;
    m.add_function(wrap_pyfunction!(is_representable, m)?)?;
    m.add_function(wrap_pyfunction!(representable_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(is_wellformed, m)?)?;
    m.add_function(wrap_pyfunction!(is_linear_cone, m)?)?;
    m.add_function(wrap_pyfunction!(is_strictly_regular, m)?)?;
    m.add_function(wrap_pyfunction!(regularity_report, m)?)?;
    m.add_function(wrap_pyfunction!(singular_complex, m)?)?;
    m.add_function(wrap_pyfunction!(base_complex, m)?)?;
    m.add_function(wrap_pyfunction!(fano_index, m)?)?;
    m.add_function(wrap_pyfunction!(find_nef_partition, m)?)?;
    m.add_function(wrap_pyfunction!(classify_partition, m)?)?;
    m.add_function(wrap_pyfunction!(construct_strong_nef_partition, m)?)?;
    m.add_function(wrap_pyfunction!(build_admissible_family, m)?)?;
    m.add_function(wrap_pyfunction!(verify_poset_map, m)?)?;
    m.add_function(wrap_pyfunction!(find_noncontracting_map, m)?)?;
    m.add_function(wrap_pyfunction!(realize_weights, m)?)?;
    m.add_function(wrap_pyfunction!(verify_realization, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_instance, m)?)?;
    m.add_function(wrap_pyfunction!(realize_map_instance, m)?)?;
    m.add_function(wrap_pyfunction!(cross_check, m)?)?;
    Ok(())
}
