//! Python bindings for the core library: complexes, stratifications,
//! perversities, intersection cohomology, and the axiom checkers.
//!
//! Build the extension with `cargo build -p perverse-py`, then import the
//! produced cdylib as `perverse_py` (see `python/smoke_test.py`).

use perverse::axioms::{AxiomContext, SystemId};
use perverse::builtin;
use perverse::complex::{SimplicialComplex, Stratification};
use perverse::deligne::{build_deligne, DeligneOptions, LocalSystem};
use perverse::io::SigmaFile;
use perverse::linalg::Field;
use perverse::perversity::Perversity as CorePerversity;
use perverse::sheaf::CellSheafComplex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::BTreeMap;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_field(s: &str) -> PyResult<Field> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Q);
    }
    let rest = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix("fp:"))
        .or_else(|| t.strip_prefix('F'))
        .or_else(|| t.strip_prefix('f'));
    if let Some(num) = rest {
        let p: u64 = num
            .parse()
            .map_err(|_| value_err(format!("invalid field `{s}`")))?;
        return Field::prime(p).map_err(value_err);
    }
    Err(value_err(format!("invalid field `{s}` (expected Q, F<p>, or Fp:<p>)")))
}

/// Degree -> Betti dictionary, densely filled over `0..=dim`.
fn betti_dict<'py>(
    py: Python<'py>,
    map: &BTreeMap<i32, usize>,
    dim: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let hi = map.keys().next_back().map_or(0, |&d| d.max(0)).max(dim as i32);
    for d in 0..=hi {
        out.set_item(d, map.get(&d).copied().unwrap_or(0))?;
    }
    Ok(out)
}

/// Round-trip the axiom reports through the stdlib `json` module.
fn to_py_json<'py>(
    py: Python<'py>,
    value: &[perverse::axioms::AxiomReport],
) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A finite simplicial complex with named vertices.
#[pyclass(name = "Complex", frozen)]
struct PyComplex {
    inner: SimplicialComplex,
}

#[pymethods]
impl PyComplex {
    /// Build from maximal simplices, e.g. `Complex([["a","b","c"], ...])`.
    #[new]
    fn new(maximal: Vec<Vec<String>>) -> PyResult<Self> {
        let mut vertices: Vec<String> = maximal.iter().flatten().cloned().collect();
        vertices.sort();
        vertices.dedup();
        let inner = SimplicialComplex::from_maximal(vertices, &maximal).map_err(value_err)?;
        Ok(PyComplex { inner })
    }

    /// Boundary of the tetrahedron: a triangulated 2-sphere.
    #[staticmethod]
    fn sphere() -> Self {
        PyComplex { inner: builtin::sphere2() }
    }

    /// Boundary of the triangle: a circle.
    #[staticmethod]
    fn circle() -> Self {
        PyComplex { inner: builtin::circle() }
    }

    /// The 7-vertex triangulated torus.
    #[staticmethod]
    fn torus() -> Self {
        PyComplex { inner: builtin::torus7() }
    }

    /// Suspension of the 7-vertex torus with apexes `N` and `S`.
    #[staticmethod]
    fn suspended_torus() -> Self {
        PyComplex { inner: builtin::suspended_torus() }
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Names of all simplices, ordered by id.
    fn simplices(&self) -> Vec<String> {
        self.inner.ids().map(|id| self.inner.name_of(id)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Complex(dim={}, simplices={})", self.inner.dim(), self.inner.len())
    }
}

/// An assignment of codimension depths to simplices.
#[pyclass(name = "Stratification", frozen)]
struct PyStratification {
    inner: Stratification,
}

#[pymethods]
impl PyStratification {
    /// Build from a `{simplex_name: depth}` dictionary; omitted simplices
    /// get depth 0.  Names join vertices with commas, e.g. `"v0,v1"`.
    #[new]
    fn new(complex: &PyComplex, depth: BTreeMap<String, u32>) -> PyResult<Self> {
        let inner =
            Stratification::from_named_depths(&complex.inner, &depth).map_err(value_err)?;
        inner.validate(&complex.inner).map_err(value_err)?;
        Ok(PyStratification { inner })
    }

    /// Everything at depth zero: the unstratified space.
    #[staticmethod]
    fn trivial(complex: &PyComplex) -> Self {
        PyStratification { inner: Stratification::trivial(&complex.inner) }
    }

    /// The deepest stratification subject to a face-closed singular set,
    /// given as a list of simplices (lists of vertex names).
    #[staticmethod]
    fn for_sigma(complex: &PyComplex, simplices: Vec<Vec<String>>) -> PyResult<Self> {
        let sigma = SigmaFile { simplices }.into_sigma(&complex.inner).map_err(value_err)?;
        let inner =
            Stratification::default_for_sigma(&complex.inner, &sigma).map_err(value_err)?;
        Ok(PyStratification { inner })
    }

    /// Names of the singular simplices (depth >= 1).
    fn singular(&self, complex: &PyComplex) -> Vec<String> {
        self.inner
            .singular_set(&complex.inner)
            .into_iter()
            .map(|id| complex.inner.name_of(id))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Stratification(depths={:?})",
            self.inner.present_depths().into_iter().collect::<Vec<_>>()
        )
    }
}

/// A perversity function on codimensions `1..=n`.
#[pyclass(name = "Perversity", frozen)]
struct PyPerversity {
    inner: CorePerversity,
}

#[pymethods]
impl PyPerversity {
    /// Build from explicit values indexed by codimension 1..=n.
    #[new]
    fn new(values: Vec<i64>) -> PyResult<Self> {
        Ok(PyPerversity { inner: CorePerversity::new(values).map_err(value_err)? })
    }

    /// Named preset: "zero", "top", or "ultra", up to codimension `n`.
    #[staticmethod]
    fn preset(name: &str, n: usize) -> PyResult<Self> {
        Ok(PyPerversity { inner: CorePerversity::preset(name, n).map_err(value_err)? })
    }

    fn values(&self) -> Vec<i64> {
        self.inner.values().to_vec()
    }

    /// Value at any codimension, extended below 1 and above n.
    fn at(&self, k: i64) -> i64 {
        self.inner.at(k)
    }

    /// "traditional", "super", "sub", or "other".
    fn classify(&self) -> PyResult<String> {
        let v = serde_json::to_value(self.inner.classify()).map_err(value_err)?;
        Ok(v.as_str().unwrap_or_default().to_string())
    }

    /// The dual perversity `q(k) = k - 2 - p(k)`.
    fn dual(&self) -> Self {
        PyPerversity { inner: self.inner.dual() }
    }

    fn __repr__(&self) -> String {
        format!("Perversity({:?})", self.inner.values())
    }
}

/// Intersection cohomology Betti numbers as a `{degree: betti}` dict.
#[pyfunction]
#[pyo3(signature = (complex, strat, perversity, field = "Q", reduce = false))]
fn intersection_cohomology<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    strat: &PyStratification,
    perversity: &PyPerversity,
    field: &str,
    reduce: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let field = parse_field(field)?;
    let ih = perverse::deligne::intersection_cohomology(
        &complex.inner,
        &strat.inner,
        &perversity.inner,
        field,
        None,
        reduce,
    )
    .map_err(value_err)?;
    betti_dict(py, &ih, complex.inner.dim())
}

/// Ordinary cohomology of the complement of the singular set.
#[pyfunction]
#[pyo3(signature = (complex, strat, field = "Q"))]
fn complement_cohomology<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    strat: &PyStratification,
    field: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let field = parse_field(field)?;
    let h = perverse::deligne::complement_cohomology(&complex.inner, &strat.inner, field, None)
        .map_err(value_err)?;
    betti_dict(py, &h, complex.inner.dim())
}

/// Run axiom-system checkers on the Deligne sheaf (and optionally the
/// constant sheaf).  Returns `{sheaf_name: [report, ...]}` with the same
/// report shape as the CLI's JSON output.
#[pyfunction]
#[pyo3(signature = (complex, strat, perversity, systems = None, against_constant = false, field = "Q", reduce = false))]
#[allow(clippy::too_many_arguments)]
fn axiom_report<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    strat: &PyStratification,
    perversity: &PyPerversity,
    systems: Option<Vec<String>>,
    against_constant: bool,
    field: &str,
    reduce: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let field = parse_field(field)?;
    let ids: Vec<SystemId> = match systems {
        None => SystemId::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|s| {
                SystemId::parse(s).ok_or_else(|| value_err(format!("unknown axiom system `{s}`")))
            })
            .collect::<PyResult<_>>()?,
    };
    let coeffs = LocalSystem::identity(1);
    let opts = DeligneOptions { reduce, retain_stages: false };
    let build = build_deligne(&complex.inner, &strat.inner, &perversity.inner, field, None, opts)
        .map_err(value_err)?;

    let run = |sheaf: &CellSheafComplex| -> PyResult<Vec<perverse::axioms::AxiomReport>> {
        let ctx = AxiomContext::new(&complex.inner, sheaf);
        ids.iter()
            .map(|&id| {
                ctx.check(id, &strat.inner, &[], &perversity.inner, &coeffs).map_err(value_err)
            })
            .collect()
    };

    let out = PyDict::new(py);
    out.set_item("deligne", to_py_json(py, &run(&build.sheaf)?)?)?;
    if against_constant {
        let constant = CellSheafComplex::constant(&complex.inner, field, 1);
        out.set_item("constant", to_py_json(py, &run(&constant)?)?)?;
    }
    Ok(out)
}

#[pymodule]
fn perverse_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyStratification>()?;
    m.add_class::<PyPerversity>()?;
    m.add_function(wrap_pyfunction!(intersection_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(complement_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_report, m)?)?;
    Ok(())
}
