//! Python bindings. Structured results cross the boundary as Python dicts built from JSON.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use schober_core::cellccc::{self, CellSheafComplex};
use schober_core::exactalg::RatMatrix;
use schober_core::fanskeleton::{self, SkeletonPoint};
use schober_core::hyper::{self, HyperplaneData, SphericalOptions};
use schober_core::lbcx::{self, LBComplexJson, DEFAULT_E_CAP};
use schober_core::rational::{parse_q, Q};
use schober_core::{cli, cohp, schober as sch};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn rationals(v: &[String]) -> PyResult<Vec<Q>> {
    v.iter().map(|s| parse_q(s).map_err(err)).collect()
}

fn matrix(rows: &[Vec<String>], ncols: usize) -> PyResult<RatMatrix> {
    let data = rows.iter().map(|r| rationals(r)).collect::<PyResult<Vec<_>>>()?;
    if data.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(RatMatrix::from_vec(rows.len(), ncols, data.into_iter().flatten().collect()))
}

/// Bounded complex of sums of line bundles on `P^m`.
#[pyclass(name = "LBComplex", frozen)]
struct PyLBComplex(lbcx::LBComplex);

#[pymethods]
impl PyLBComplex {
    #[staticmethod]
    fn line_bundle(m: usize, d: i64) -> Self {
        PyLBComplex(lbcx::LBComplex::line_bundle(m, d))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let j: LBComplexJson = serde_json::from_str(s).map_err(err)?;
        lbcx::LBComplex::from_json(&j).map(PyLBComplex).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn twist(&self, k: i64) -> Self {
        PyLBComplex(self.0.twist(k))
    }

    fn shift(&self, k: i64) -> Self {
        PyLBComplex(self.0.shift(k))
    }

    fn direct_sum(&self, other: &PyLBComplex) -> PyResult<Self> {
        self.0.direct_sum(&other.0).map(PyLBComplex).map_err(err)
    }

    fn tensor(&self, other: &PyLBComplex) -> PyResult<Self> {
        self.0.tensor(&other.0).map(PyLBComplex).map_err(err)
    }

    /// Hypercohomology dimensions of `self(twist)`.
    #[pyo3(signature = (twist = 0, cap = DEFAULT_E_CAP))]
    fn rgamma(&self, twist: i64, cap: u32) -> PyResult<BTreeMap<i64, usize>> {
        lbcx::rgamma_with_cap(&self.0, twist, cap).map(|r| r.dims).map_err(err)
    }

    fn is_zero(&self) -> PyResult<bool> {
        lbcx::is_zero_object(&self.0).map_err(err)
    }

    fn __eq__(&self, other: &PyLBComplex) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = self.0.summands().map(|(i, d)| format!("O({d})[{}]", -i)).collect();
        format!("LBComplex(P^{}: {})", self.0.m(), if terms.is_empty() { "0".into() } else { terms.join(" ⊕ ") })
    }
}

/// `Ext^i(a, b)` as `{i: dim}`.
#[pyfunction]
fn rhom_dims(a: &PyLBComplex, b: &PyLBComplex) -> PyResult<BTreeMap<i64, usize>> {
    lbcx::rhom_dims(&a.0, &b.0).map_err(err)
}

#[pyfunction]
fn h_dim(m: usize, i: usize, d: i64) -> usize {
    cohp::h_dim(m, i, d)
}

#[pyfunction]
fn cohp_table(py: Python<'_>, m: usize, dmin: i64, dmax: i64) -> PyResult<Py<PyAny>> {
    to_py(py, &cohp::table(m, dmin, dmax))
}

/// SF1–SF4 and the twist identifications for the hyperplane `x_1 + ⋯ + x_n = 0` in `P^{n−1}`.
#[pyfunction]
#[pyo3(signature = (n, cap = DEFAULT_E_CAP))]
fn check_spherical(py: Python<'_>, n: usize, cap: u32) -> PyResult<Py<PyAny>> {
    let h = HyperplaneData::standard(n).map_err(err)?;
    let opts = SphericalOptions { cap, ext_tables: true, witnesses: false };
    let r = py.detach(|| hyper::check_spherical_with(&h, &opts)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (n, cap = DEFAULT_E_CAP))]
fn compare_monad(py: Python<'_>, n: usize, cap: u32) -> PyResult<Py<PyAny>> {
    let h = HyperplaneData::standard(n).map_err(err)?;
    let reports = hyper::generators_x(n)
        .iter()
        .map(|g| hyper::compare_monad(&h, g, cap))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    to_py(py, &reports)
}

/// Disk datum `Φ ⇄ Ψ` with `p: Φ → Ψ` and `q: Ψ → Φ`, entries as rational strings.
#[pyclass(name = "PerverseDiskDatum", frozen)]
struct PyPerverse(sch::PerverseDiskDatum);

#[pymethods]
impl PyPerverse {
    #[new]
    fn new(p: Vec<Vec<String>>, q: Vec<Vec<String>>) -> PyResult<Self> {
        let phi = q.len();
        let psi = p.len();
        let p = matrix(&p, phi)?;
        let q = matrix(&q, psi)?;
        sch::PerverseDiskDatum::new(p, q).map(PyPerverse).map_err(err)
    }

    fn is_perverse(&self) -> bool {
        sch::check_perverse(&self.0).is_ok()
    }

    fn has_no_origin_sections(&self) -> bool {
        sch::has_no_origin_sections(&self.0)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }
}

/// Composes `A_τ` over the angles (in turns).
#[pyfunction]
fn ledger(py: Python<'_>, taus: Vec<String>) -> PyResult<Py<PyAny>> {
    let e = rationals(&taus)?
        .into_iter()
        .fold(sch::MonodromyLedgerEntry::unit(), |acc, t| sch::ledger_compose(&acc, &sch::MonodromyLedgerEntry::new(t)));
    let coherent = sch::ledger_to_coherent(&e).ok();
    to_py(py, &serde_json::json!({ "entry": e.to_json(), "coherent": coherent }))
}

/// Cellular sheaf complex on the circle.
#[pyclass(name = "CellSheaf", frozen)]
struct PyCellSheaf(CellSheafComplex);

#[pymethods]
impl PyCellSheaf {
    #[staticmethod]
    fn unit() -> Self {
        PyCellSheaf(CellSheafComplex::unit())
    }

    #[staticmethod]
    fn twist() -> Self {
        PyCellSheaf(CellSheafComplex::twist())
    }

    #[staticmethod]
    fn local_system(monodromy: &str) -> PyResult<Self> {
        let l = parse_q(monodromy).map_err(err)?;
        CellSheafComplex::local_system(&l).map(PyCellSheaf).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        CellSheafComplex::from_json(&serde_json::from_str(s).map_err(err)?).map(PyCellSheaf).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }

    fn convolve(&self, other: &PyCellSheaf) -> PyResult<Self> {
        cellccc::convolve(&self.0, &other.0).map(PyCellSheaf).map_err(err)
    }

    fn hom_dims(&self, other: &PyCellSheaf) -> PyResult<BTreeMap<i64, usize>> {
        cellccc::cell_hom_dims(&self.0, &other.0).map_err(err)
    }
}

#[pyfunction]
fn ccc_compare(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let r = py.detach(cellccc::ccc_compare).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn classify_point(py: Python<'_>, radii: Vec<String>, angles: Vec<String>, thetas: Vec<String>) -> PyResult<Py<PyAny>> {
    let p = SkeletonPoint::new(rationals(&radii)?, rationals(&angles)?).map_err(err)?;
    to_py(py, &fanskeleton::classify_point(&p, &rationals(&thetas)?))
}

#[pyfunction]
#[pyo3(signature = (n, tau, samples = 1000, seed = 0))]
fn verify_section_bijectivity(py: Python<'_>, n: usize, tau: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let t = parse_q(tau).map_err(err)?;
    let r = py.detach(|| fanskeleton::verify_section_bijectivity(n, &t, samples, seed)).map_err(err)?;
    to_py(py, &r)
}

/// Runs the command-line front end on `args` (without the program name); returns
/// `(exit code, report or None)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> PyResult<(i32, Py<PyAny>)> {
    let o = py.detach(|| cli::run(std::iter::once("schober".to_string()).chain(args)));
    let report = match &o.report {
        Some(r) => to_py(py, r)?,
        None => py.None(),
    };
    Ok((o.code, report))
}

#[pymodule]
fn schober(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function of the extension to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLBComplex>()?;
    m.add_class::<PyPerverse>()?;
    m.add_class::<PyCellSheaf>()?;
    m.add_function(wrap_pyfunction!(rhom_dims, m)?)?;
    m.add_function(wrap_pyfunction!(h_dim, m)?)?;
    m.add_function(wrap_pyfunction!(cohp_table, m)?)?;
    m.add_function(wrap_pyfunction!(check_spherical, m)?)?;
    m.add_function(wrap_pyfunction!(compare_monad, m)?)?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(ccc_compare, m)?)?;
    m.add_function(wrap_pyfunction!(classify_point, m)?)?;
    m.add_function(wrap_pyfunction!(verify_section_bijectivity, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
