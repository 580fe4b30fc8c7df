//! Python bindings: finite fields, the group computations, and the report
//! driver.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use k3lab::barhom::{
    c_cycle, homology_groups_with, torus_class, GroupTable, HomologySolver, SolvePolicy, TorusClassKind,
};
use k3lab::fields::FiniteField;
use k3lab::intlin::Caps;
use k3lab::milnor::{k2q_decompose, milnor_pres, parse_symbol, reciprocity_product, UnitModel};

fn py_err(e: k3lab::Error) -> PyErr {
    if e.is_resource_limit() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// A finite field F_q with elements addressed by their labels.
#[pyclass(name = "Field", module = "k3lab", frozen)]
struct PyField {
    inner: FiniteField,
}

#[pymethods]
impl PyField {
    /// `Field("q=9")` or `Field("p=3,d=2,poly=1,0,1")`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyField {
            inner: FiniteField::parse_spec(spec).map_err(py_err)?,
        })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.elements().map(|a| self.inner.label(a)).collect()
    }

    fn generator(&self) -> String {
        self.inner.label(self.inner.generator())
    }

    fn dlog(&self, a: &str) -> PyResult<u32> {
        let x = self.inner.parse_elem(a).map_err(py_err)?;
        self.inner.dlog(x).map_err(py_err)
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.label(f.mul(f.parse_elem(a).map_err(py_err)?, f.parse_elem(b).map_err(py_err)?)))
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.label(f.add(f.parse_elem(a).map_err(py_err)?, f.parse_elem(b).map_err(py_err)?)))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner)
    }
}

/// Classifications of P(F), B(F), the sigma-quotient and K2, plus E1-E3.
#[pyfunction]
fn bloch(field: &str) -> PyResult<Vec<(String, String)>> {
    let f = FiniteField::parse_spec(field).map_err(py_err)?;
    let r = k3lab::bloch::exact_seq_report(&f).map_err(py_err)?;
    Ok(vec![
        ("prebloch".into(), r.prebloch.to_string()),
        ("bloch".into(), r.bloch.to_string()),
        ("sigma".into(), r.sigma.to_string()),
        ("k2".into(), r.k2.to_string()),
        ("E1".into(), r.e1.to_string()),
        ("E2".into(), r.e2().to_string()),
        ("E3".into(), r.e3().to_string()),
    ])
}

/// K_n^M (or k_n^M with `mod2`) of a field spec, or of truncated Q when `s` is given.
#[pyfunction]
#[pyo3(signature = (field=None, n=2, mod2=false, s=None, bound=k3lab::milnor::DEFAULT_EXPONENT_BOUND))]
fn milnor_k(field: Option<&str>, n: usize, mod2: bool, s: Option<Vec<i64>>, bound: i64) -> PyResult<String> {
    let model = match (field, s) {
        (Some(spec), None) => UnitModel::Finite(FiniteField::parse_spec(spec).map_err(py_err)?),
        (None, Some(s)) => UnitModel::truncated_q(&s, bound).map_err(py_err)?,
        _ => return Err(PyValueError::new_err("give exactly one of field and s")),
    };
    let k = milnor_pres(&model, n, mod2).map_err(py_err)?;
    Ok(k.classify().map_err(py_err)?.to_string())
}

/// Nontrivial local symbols of {a, b} as (place, value), and the reciprocity product.
#[pyfunction]
#[pyo3(signature = (symbol, prime_bound=50))]
fn k2q(symbol: &str, prime_bound: u64) -> PyResult<(Vec<(String, i64)>, i32)> {
    let ab = parse_symbol(symbol).map_err(py_err)?;
    if ab.len() != 2 {
        return Err(PyValueError::new_err("symbol takes a,b"));
    }
    let vals = k2q_decompose(&ab[0], &ab[1], prime_bound).map_err(py_err)?;
    let nontrivial = vals.iter().filter(|v| !v.is_trivial()).map(|v| (v.place.to_string(), v.value)).collect();
    Ok((nontrivial, reciprocity_product(&vals)))
}

/// H_n of a product of cyclic groups given by their orders.
#[pyfunction]
fn homology(orders: Vec<u32>, degree: usize) -> PyResult<String> {
    let g = GroupTable::product_of_cyclic(&orders).map_err(py_err)?;
    Ok(homology_groups_with(&g, degree, &Caps::default()).map_err(py_err)?.to_string())
}

/// Whether c(g1,...,gn) in the product of cyclic groups bounds; returns the verdict string.
#[pyfunction]
fn c_cycle_bounds(orders: Vec<u32>, elements: Vec<u32>) -> PyResult<String> {
    let g = std::sync::Arc::new(GroupTable::product_of_cyclic(&orders).map_err(py_err)?);
    let c = c_cycle(&g, &elements).map_err(py_err)?;
    let mut s = HomologySolver::default();
    let v = s.is_boundary(c.chain(), &SolvePolicy::Exact).map_err(py_err)?;
    Ok(v.status.to_string())
}

/// Chain text of a named torus class (`k`, `s`, `psi`, `phi`, `iota`).
#[pyfunction]
fn torus_chain(kind: &str, field: &str, args: Vec<String>) -> PyResult<String> {
    let f = FiniteField::parse_spec(field).map_err(py_err)?;
    let kind: TorusClassKind = kind.parse().map_err(py_err)?;
    let elems = args.iter().map(|a| f.parse_elem(a)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
    Ok(torus_class(kind, &f, &elems).map_err(py_err)?.chain().to_text())
}

/// Runs a command-line invocation (without the program name) and returns
/// the JSON report.
#[pyfunction]
fn report(args: Vec<String>) -> PyResult<String> {
    let argv = std::iter::once("k3lab".to_string()).chain(args);
    Ok(k3lab::cli::report_for(argv).map_err(py_err)?.to_json())
}

#[pymodule]
#[pyo3(name = "k3lab")]
fn k3lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(bloch, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_k, m)?)?;
    m.add_function(wrap_pyfunction!(k2q, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(c_cycle_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(torus_chain, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add("__version__", k3lab::VERSION)?;
    m.add("NOTICE", k3lab::DEFINITIONAL_EXTENSION_NOTICE)?;
    Ok(())
}
