//! Python bindings for `catml`.
//!
//! Reports cross the boundary as JSON and come back as plain dicts.

use std::sync::Arc;

use clap::Parser;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use catml::adjmonad::builtin::{check_upath_laws, group_action_adjunction, group_action_monad, powerset_monad, Upath};
use catml::adjmonad::concrete::{FinGroup, GrphCat};
use catml::adjmonad::{beck_comparison, check_adjunction, check_monad_laws, identity_adjunction};
use catml::category::{Budget, Universe};
use catml::cli::{exit_code, run, Cli};
use catml::fincat::{self, check_category_laws, CategoryJson, FinCat, PathSpec};
use catml::finset::{self, FinSetCat, FinSetMap, FinSetObj};
use catml::foundations::{DiGraph, Edge, EquivRelation};
use catml::mlsys::{self, MLSystem, SystemJson};
use catml::presheaf::{graph_from_corpus, word2fun_pipeline, yoneda_embed};

create_exception!(catml, CatmlError, PyException);
create_exception!(catml, ResourceLimit, CatmlError);

fn err(e: catml::Error) -> PyErr {
    if e.is_resource_limit() {
        ResourceLimit::new_err(e.to_string())
    } else {
        CatmlError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(|e| CatmlError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn budget(max_candidates: Option<u64>) -> Budget {
    max_candidates.map_or_else(Budget::default, Budget::with_candidates)
}

fn paths(relations: Vec<((String, Vec<String>), (String, Vec<String>))>) -> Vec<(PathSpec, PathSpec)> {
    relations
        .into_iter()
        .map(|((s1, p1), (s2, p2))| (PathSpec { src: s1, edges: p1 }, PathSpec { src: s2, edges: p2 }))
        .collect()
}

fn blocks(b: Vec<Vec<String>>) -> PyResult<EquivRelation> {
    EquivRelation::from_blocks(b).map_err(err)
}

/// A finite directed multigraph.
#[pyclass(name = "Graph", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: DiGraph,
}

#[pymethods]
impl PyGraph {
    /// `edges` are `(id, src, dst)` triples.
    #[new]
    fn new(nodes: Vec<String>, edges: Vec<(String, String, String)>) -> PyResult<Self> {
        let edges = edges.into_iter().map(|(id, src, dst)| Edge { id, src, dst }).collect();
        Ok(PyGraph { inner: DiGraph::new(nodes, edges).map_err(err)? })
    }

    /// Word graph of a text corpus: one node per word, one edge per bigram.
    #[staticmethod]
    fn from_corpus(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: graph_from_corpus(text).map_err(err)? })
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.nodes().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String, String)> {
        self.inner.edges().iter().map(|e| (e.id.clone(), e.src.clone(), e.dst.clone())).collect()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn to_dot(&self, name: &str) -> String {
        self.inner.to_dot(name)
    }

    fn __repr__(&self) -> String {
        format!("Graph({} nodes, {} edges)", self.inner.nodes().len(), self.inner.edges().len())
    }
}

/// A finite category.
#[pyclass(name = "Category", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCategory {
    inner: Arc<FinCat>,
}

#[pymethods]
impl PyCategory {
    /// Path category of `graph`, enumerating paths up to `bound` edges.
    #[staticmethod]
    #[pyo3(signature = (graph, bound = 8))]
    fn free(graph: &PyGraph, bound: usize) -> PyResult<Self> {
        Ok(PyCategory { inner: Arc::new(fincat::free_category(&graph.inner, bound).map_err(err)?) })
    }

    /// Path category modulo relations `((src, [edges]), (src, [edges]))`.
    #[staticmethod]
    #[pyo3(signature = (graph, relations, bound = 8))]
    fn presented(
        graph: &PyGraph,
        relations: Vec<((String, Vec<String>), (String, Vec<String>))>,
        bound: usize,
    ) -> PyResult<Self> {
        Ok(PyCategory { inner: fincat::presented(&graph.inner, &paths(relations), bound).map_err(err)? })
    }

    /// From the JSON category format (explicit or presented).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let js: CategoryJson = serde_json::from_str(text).map_err(|e| CatmlError::new_err(e.to_string()))?;
        Ok(PyCategory { inner: js.build().map_err(err)? })
    }

    #[staticmethod]
    fn chain(n: usize) -> Self {
        PyCategory { inner: Arc::new(FinCat::chain(n)) }
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.objects().to_vec()
    }

    #[getter]
    fn morphisms(&self) -> Vec<String> {
        self.inner.morphism_ids().map(|f| self.inner.label(f).to_string()).collect()
    }

    /// `"exact"` or `"bound k"`.
    #[getter]
    fn certification(&self) -> String {
        match self.inner.certification() {
            fincat::Certification::Exact => "exact".into(),
            fincat::Certification::BoundCertified(k) => format!("bound {k}"),
        }
    }

    fn hom(&self, x: &str, y: &str) -> PyResult<Vec<String>> {
        self.inner.hom_by_name(x, y).map_err(err)
    }

    /// `g ∘ f` by label.
    fn compose(&self, g: &str, f: &str) -> PyResult<String> {
        let c = &self.inner;
        let h = c.compose(c.mor(g).map_err(err)?, c.mor(f).map_err(err)?).map_err(err)?;
        Ok(c.label(h).to_string())
    }

    fn check_laws<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &check_category_laws(&self.inner))
    }

    /// Yoneda embedding report: `|Nat(Ya, Yb)|` against `|hom(a, b)|` per pair.
    #[pyo3(signature = (max_candidates = None))]
    fn yoneda<'py>(&self, py: Python<'py>, max_candidates: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let (_, rep) = yoneda_embed(&self.inner, budget(max_candidates)).map_err(err)?;
        to_py(py, &rep)
    }

    #[pyo3(signature = (name = "C", identities = false))]
    fn to_dot(&self, name: &str, identities: bool) -> String {
        self.inner.to_dot(name, identities)
    }

    fn __repr__(&self) -> String {
        format!("Category({} objects, {} morphisms)", self.inner.num_objects(), self.inner.num_morphisms())
    }
}

/// An ML system: a carrier with a partial operation or a relation.
#[pyclass(name = "System", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySystem {
    inner: Arc<MLSystem>,
}

#[pymethods]
impl PySystem {
    #[staticmethod]
    fn relation(graph: &PyGraph) -> Self {
        PySystem { inner: Arc::new(MLSystem::relation(graph.inner.clone())) }
    }

    /// `table` lists `(a, b, a ∘ b)`.
    #[staticmethod]
    fn partial_op(carrier: Vec<String>, table: Vec<(String, String, String)>) -> PyResult<Self> {
        Ok(PySystem { inner: Arc::new(MLSystem::partial_op(&carrier, &table).map_err(err)?) })
    }

    #[getter]
    fn carrier(&self) -> Vec<String> {
        self.inner.carrier().to_vec()
    }

    #[getter]
    fn flavor(&self) -> &'static str {
        self.inner.flavor()
    }

    /// Whether the partition (a list of blocks) induces structure on its classes.
    fn compatible<'py>(&self, py: Python<'py>, partition: Vec<Vec<String>>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &mlsys::check_compatible(&self.inner, &blocks(partition)?).map_err(err)?)
    }

    /// `(S/ρ, {element: class})`.
    fn quotient(&self, partition: Vec<Vec<String>>) -> PyResult<(PySystem, std::collections::BTreeMap<String, String>)> {
        let q = mlsys::quotient_system(&self.inner, &blocks(partition)?).map_err(err)?;
        Ok((PySystem { inner: q.system }, q.q.element_map()))
    }

    /// The map `S/ρ -> S/σ` for `ρ ≤ σ`, with its uniqueness status.
    fn order_map<'py>(
        &self,
        py: Python<'py>,
        rho: Vec<Vec<String>>,
        sigma: Vec<Vec<String>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let om = mlsys::order_map(&self.inner, &blocks(rho)?, &blocks(sigma)?, Budget::default()).map_err(err)?;
        let out = serde_json::json!({
            "map": om.map.element_map(),
            "uniqueness": om.uniqueness,
            "passed": om.passed(),
        });
        to_py(py, &out)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&SystemJson::from(&*self.inner)).expect("system serializes")
    }

    fn __repr__(&self) -> String {
        format!("System({}, {} elements)", self.inner.flavor(), self.inner.carrier().len())
    }
}

/// Runs the path/quotient/Yoneda pipeline on a word graph and returns
/// `{(x, y): (|hom| before, |hom| after)}` plus the stage verdict.
#[pyfunction]
#[pyo3(signature = (graph, relations, bound = 8))]
fn pipeline<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    relations: Vec<((String, Vec<String>), (String, Vec<String>))>,
    bound: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let b = word2fun_pipeline(&graph.inner, &paths(relations), bound, None, Budget::default()).map_err(err)?;
    let mut homs = std::collections::BTreeMap::new();
    for x in b.path.objects() {
        for y in b.path.objects() {
            let (p, q, _) = b.hom_counts(x, y).map_err(err)?;
            if x != y && p > 0 {
                homs.insert(format!("{x},{y}"), (p, q));
            }
        }
    }
    let out = serde_json::json!({
        "passed": b.passed(),
        "isomorphism": b.quotient_is_iso(),
        "homs": homs,
        "yoneda": b.embed,
    });
    to_py(py, &out)
}

/// Pullback of `p: E -> B <- C: r` given as index tables over `range(base)`.
/// Returns the apex as `(e, c)` pairs.
#[pyfunction]
fn pullback(p: Vec<usize>, r: Vec<usize>, base: usize) -> PyResult<Vec<(usize, usize)>> {
    let b = FinSetObj::range(base);
    let pm = FinSetMap::new(FinSetObj::range(p.len()), b.clone(), p).map_err(err)?;
    let rm = FinSetMap::new(FinSetObj::range(r.len()), b, r).map_err(err)?;
    let pb = finset::pullback(&pm, &rm).map_err(err)?;
    Ok((0..pb.apex.len()).map(|i| (pb.pi1.apply(i), pb.pi2.apply(i))).collect())
}

fn set_universe(sizes: &[usize]) -> PyResult<Universe<FinSetCat>> {
    Universe::full(&FinSetCat, sizes.iter().map(|&n| FinSetObj::range(n)).collect(), Budget::default()).map_err(err)
}

/// Law report for a built-in monad: `"identity"`, `"powerset"`,
/// `"group-action"` (cyclic of `order`) on sets of the given sizes, or
/// `"upath"` on the given graphs.
#[pyfunction]
#[pyo3(signature = (name, sets = vec![0, 1, 2], order = 2, graphs = vec![], bound = 4))]
fn check_monad<'py>(
    py: Python<'py>,
    name: &str,
    sets: Vec<usize>,
    order: usize,
    graphs: Vec<PyGraph>,
    bound: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = match name {
        "identity" => check_monad_laws(&catml::adjmonad::Monad::identity(Arc::new(FinSetCat), set_universe(&sets)?)),
        "powerset" => check_monad_laws(&powerset_monad(set_universe(&sets)?, Budget::default())),
        "group-action" => {
            let g = Arc::new(FinGroup::cyclic(order).map_err(err)?);
            group_action_monad(g, set_universe(&sets)?).and_then(|m| check_monad_laws(&m))
        }
        "upath" => {
            let gs = graphs.into_iter().map(|g| Arc::new(g.inner)).collect();
            let u = Universe::full(&GrphCat, gs, Budget::default()).map_err(err)?;
            check_upath_laws(&Upath::new(bound), &u)
        }
        other => return Err(CatmlError::new_err(format!("unknown monad `{other}`"))),
    }
    .map_err(err)?;
    to_py(py, &report)
}

/// Triangle identities and the Beck comparison for the identity adjunction
/// or the free/forgetful adjunction of a cyclic group action.
#[pyfunction]
#[pyo3(signature = (name, sets = vec![0, 1, 2], order = 2))]
fn check_adjunction_beck<'py>(py: Python<'py>, name: &str, sets: Vec<usize>, order: usize) -> PyResult<Bound<'py, PyAny>> {
    let b = Budget::default();
    let (laws, beck) = match name {
        "identity" => {
            let a = identity_adjunction(Arc::new(FinSetCat), set_universe(&sets)?);
            (check_adjunction(&a).map_err(err)?, beck_comparison(&a, b).map_err(err)?.report)
        }
        "group-action" => {
            let g = Arc::new(FinGroup::cyclic(order).map_err(err)?);
            let a = group_action_adjunction(g, sets.iter().map(|&n| FinSetObj::range(n)).collect(), b).map_err(err)?;
            (check_adjunction(&a).map_err(err)?, beck_comparison(&a, b).map_err(err)?.report)
        }
        other => return Err(CatmlError::new_err(format!("unknown adjunction `{other}`"))),
    };
    to_py(py, &serde_json::json!({ "laws": laws, "beck": beck }))
}

/// Runs the command line with `args` (without the program name) and returns
/// `(exit code, output)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let cli = match Cli::try_parse_from(std::iter::once("catml".to_string()).chain(args)) {
        Ok(c) => c,
        Err(e) => return (2, e.to_string()),
    };
    let result = run(&cli);
    let text = match &result {
        Ok(o) => o.render(cli.json),
        Err(e) => format!("error: {e}\n"),
    };
    (exit_code(&result), text)
}

#[pymodule]
fn catml_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CatmlError", m.py().get_type::<CatmlError>())?;
    m.add("ResourceLimit", m.py().get_type::<ResourceLimit>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCategory>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(pullback, m)?)?;
    m.add_function(wrap_pyfunction!(check_monad, m)?)?;
    m.add_function(wrap_pyfunction!(check_adjunction_beck, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
