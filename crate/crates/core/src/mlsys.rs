//! ML systems in three flavors (partial operation, binary relation,
//! category), structure-preserving transformations between them, and the
//! quotient calculus: `Q_ρ`, order maps, factorization through a quotient and
//! induced maps between quotients.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{odometer, Budget};
use crate::error::{Error, Result};
use crate::fincat::{object_quotient, CategoryJson, ExplicitJson, FinCat, MorId};
use crate::foundations::{
    check_graph_hom, equiv_refines, format_value, poset_to_digraph, quotient_graph, DiGraph, EquivRelation, GraphHom,
    Poset,
};
use crate::functcat::{check_functor, enumerate_functors, Functor};
use crate::report::LawReport;

/// Largest carrier on which uniqueness of induced maps is confirmed by
/// exhaustive candidate search. Above it uniqueness rests on surjectivity of
/// `Q_ρ`.
pub const DESK_SCALE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// `(a, b) ↦ a ∘ b` where defined.
    PartialOp(BTreeMap<(String, String), String>),
    Relation(DiGraph),
    Category(Arc<FinCat>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MLSystem {
    carrier: Vec<String>,
    structure: Structure,
}

impl MLSystem {
    pub fn partial_op<S: AsRef<str>>(carrier: &[S], table: &[(S, S, S)]) -> Result<Self> {
        let carrier: Vec<String> = carrier.iter().map(|s| s.as_ref().to_string()).collect();
        let set: BTreeSet<&String> = carrier.iter().collect();
        if set.len() != carrier.len() {
            return Err(Error::invalid("duplicate element in carrier"));
        }
        let mut op = BTreeMap::new();
        for (a, b, c) in table {
            for x in [a, b, c] {
                if !set.contains(&x.as_ref().to_string()) {
                    return Err(Error::unknown("element", x.as_ref()));
                }
            }
            let key = (a.as_ref().to_string(), b.as_ref().to_string());
            if op.insert(key, c.as_ref().to_string()).is_some() {
                return Err(Error::invalid(format!("{} ∘ {} given twice", a.as_ref(), b.as_ref())));
            }
        }
        Ok(MLSystem { carrier, structure: Structure::PartialOp(op) })
    }

    pub fn relation(graph: DiGraph) -> Self {
        MLSystem { carrier: graph.nodes().to_vec(), structure: Structure::Relation(graph) }
    }

    pub fn category(cat: Arc<FinCat>) -> Self {
        MLSystem { carrier: cat.objects().to_vec(), structure: Structure::Category(cat) }
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn flavor(&self) -> &'static str {
        match self.structure {
            Structure::PartialOp(_) => "partial-op",
            Structure::Relation(_) => "relation",
            Structure::Category(_) => "category",
        }
    }

    pub fn op(&self, a: &str, b: &str) -> Option<&str> {
        match &self.structure {
            Structure::PartialOp(t) => t.get(&(a.to_string(), b.to_string())).map(|s| s.as_str()),
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<&DiGraph> {
        match &self.structure {
            Structure::Relation(g) => Some(g),
            _ => None,
        }
    }

    pub fn cat(&self) -> Option<&Arc<FinCat>> {
        match &self.structure {
            Structure::Category(c) => Some(c),
            _ => None,
        }
    }

    /// Whether `a R b` (relation flavor) or `hom(a, b)` is non-empty (category).
    pub fn related(&self, a: &str, b: &str) -> bool {
        match &self.structure {
            Structure::Relation(g) => g.out_edges(a).any(|e| e.dst == b),
            Structure::Category(c) => match (c.obj(a), c.obj(b)) {
                (Ok(x), Ok(y)) => !c.hom_enumerated(x, y).is_empty(),
                _ => false,
            },
            Structure::PartialOp(_) => false,
        }
    }

    fn has(&self, x: &str) -> bool {
        self.carrier.iter().any(|c| c == x)
    }
}

// ---- transformations ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransMap {
    /// Element map only: operation tables, or relations checked pairwise.
    Elements(BTreeMap<String, String>),
    /// Relation systems with an explicit edge assignment.
    Graph(GraphHom),
    Functor(Functor),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    pub source: Arc<MLSystem>,
    pub target: Arc<MLSystem>,
    pub map: TransMap,
}

impl Transformation {
    pub fn elements(source: &Arc<MLSystem>, target: &Arc<MLSystem>, pairs: &[(&str, &str)]) -> Self {
        Transformation {
            source: source.clone(),
            target: target.clone(),
            map: TransMap::Elements(pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
        }
    }

    pub fn identity(s: &Arc<MLSystem>) -> Self {
        let map = match &s.structure {
            Structure::PartialOp(_) => TransMap::Elements(s.carrier.iter().map(|x| (x.clone(), x.clone())).collect()),
            Structure::Relation(g) => TransMap::Graph(GraphHom::identity(g)),
            Structure::Category(c) => TransMap::Functor(Functor::identity(c)),
        };
        Transformation { source: s.clone(), target: s.clone(), map }
    }

    pub fn element(&self, x: &str) -> Option<String> {
        match &self.map {
            TransMap::Elements(m) => m.get(x).cloned(),
            TransMap::Graph(h) => h.nodes.get(x).cloned(),
            TransMap::Functor(f) => {
                let c = f.source();
                c.obj(x).ok().map(|o| f.target().obj_name(f.obj(o)).to_string())
            }
        }
    }

    pub fn element_map(&self) -> BTreeMap<String, String> {
        self.source.carrier.iter().filter_map(|x| Some((x.clone(), self.element(x)?))).collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Transformation) -> Result<Transformation> {
        if *self.target != *next.source {
            return Err(Error::invalid("transformations do not compose"));
        }
        let map = match (&self.map, &next.map) {
            (TransMap::Graph(a), TransMap::Graph(b)) => TransMap::Graph(GraphHom {
                nodes: a.nodes.iter().map(|(k, v)| (k.clone(), b.nodes[v].clone())).collect(),
                edges: a.edges.iter().map(|(k, v)| (k.clone(), b.edges[v].clone())).collect(),
            }),
            (TransMap::Functor(a), TransMap::Functor(b)) => TransMap::Functor(a.then(b)?),
            _ => {
                let m = self
                    .source
                    .carrier
                    .iter()
                    .map(|x| {
                        let y = self.element(x).ok_or_else(|| Error::NotTotal { missing: vec![x.clone()] })?;
                        let z = next.element(&y).ok_or_else(|| Error::NotTotal { missing: vec![y.clone()] })?;
                        Ok((x.clone(), z))
                    })
                    .collect::<Result<_>>()?;
                TransMap::Elements(m)
            }
        };
        Ok(Transformation { source: self.source.clone(), target: next.target.clone(), map })
    }

    /// Onto the target's elements and, where present, its edges or morphisms.
    pub fn is_surjective(&self) -> bool {
        let image: BTreeSet<String> = self.element_map().into_values().collect();
        let on_elements = self.target.carrier.iter().all(|x| image.contains(x));
        let on_arrows = match &self.map {
            TransMap::Elements(_) => true,
            TransMap::Graph(h) => {
                let img: BTreeSet<&String> = h.edges.values().collect();
                self.target.graph().is_none_or(|g| g.edges().iter().all(|e| img.contains(&e.id)))
            }
            TransMap::Functor(f) => {
                let img: BTreeSet<MorId> = f.morphism_map().iter().copied().collect();
                img.len() == f.target().num_morphisms()
            }
        };
        on_elements && on_arrows
    }

    /// Same maps on elements and on edges/morphisms.
    pub fn agrees_with(&self, other: &Transformation) -> bool {
        if self.element_map() != other.element_map() {
            return false;
        }
        match (&self.map, &other.map) {
            (TransMap::Graph(a), TransMap::Graph(b)) => a.edges == b.edges,
            (TransMap::Functor(a), TransMap::Functor(b)) => a.morphism_map() == b.morphism_map(),
            _ => true,
        }
    }
}

/// Flavor-dispatched preservation check.
pub fn check_transformation(t: &Transformation) -> Result<LawReport> {
    let (s, u) = (&t.source, &t.target);
    let mut r = LawReport::new(format!("{} transformation", s.flavor()));
    if s.flavor() != u.flavor() {
        return Err(Error::FlavorMismatch(format!("{} -> {}", s.flavor(), u.flavor())));
    }
    let missing: Vec<String> = s.carrier.iter().filter(|x| t.element(x).is_none()).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::NotTotal { missing });
    }
    if let Some(x) = s.carrier.iter().find(|x| !u.has(&t.element(x).unwrap())) {
        return Err(Error::invalid(format!("image of `{x}` is not in the target")));
    }
    match (&s.structure, &u.structure, &t.map) {
        (Structure::PartialOp(op), _, TransMap::Elements(m)) => {
            for ((a, b), c) in op {
                let (ta, tb, tc) = (&m[a], &m[b], &m[c]);
                let got = u.op(ta, tb);
                r.expect(got == Some(tc.as_str()), "operation", || format!("{a} ∘ {b}"), || match got {
                    Some(v) => format!("T({a}∘{b}) = {tc} but T({a})⋆T({b}) = {v}"),
                    None => format!("T({a})⋆T({b}) = {ta}⋆{tb} is undefined"),
                });
            }
        }
        (Structure::Relation(g), Structure::Relation(h), TransMap::Elements(m)) => {
            for e in g.edges() {
                let (a, b) = (&m[&e.src], &m[&e.dst]);
                r.expect(h.out_edges(a).any(|x| &x.dst == b), "relation", || e.id.clone(), || {
                    format!("{} R {} but not {a} R {b}", e.src, e.dst)
                });
            }
        }
        (Structure::Relation(g), Structure::Relation(h), TransMap::Graph(hom)) => {
            for v in check_graph_hom(hom, g, h)? {
                r.violate("relation", v.edge, v.detail);
            }
            r.checked += g.edges().len() as u64;
        }
        (Structure::Category(_), Structure::Category(_), TransMap::Functor(f)) => {
            r.absorb(check_functor(f));
        }
        _ => return Err(Error::FlavorMismatch("map kind does not fit the systems".into())),
    }
    Ok(r)
}

// ---- compatibility and quotients --------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compatibility {
    pub compatible: bool,
    pub witness: Option<String>,
}

/// Whether `rho` induces a structure on the classes.
///
/// * relation: always (the image relation);
/// * partial operation: `rho` is a congruence;
/// * category (`rho` on objects): identifying objects creates no composable
///   pair of non-identity morphisms that was not composable before, so the
///   quotient is the image of `Q_ρ`.
pub fn check_compatible(s: &MLSystem, rho: &EquivRelation) -> Result<Compatibility> {
    rho.require_carrier(&s.carrier)?;
    let ok = Compatibility { compatible: true, witness: None };
    let fail = |w: String| Ok(Compatibility { compatible: false, witness: Some(w) });
    match &s.structure {
        Structure::Relation(_) => Ok(ok),
        Structure::PartialOp(op) => {
            for ((a, b), c) in op {
                for ((a2, b2), c2) in op {
                    if rho.related(a, a2) && rho.related(b, b2) && !rho.related(c, c2) {
                        return fail(format!("{a} ∘ {b} = {c} but {a2} ∘ {b2} = {c2}"));
                    }
                }
            }
            Ok(ok)
        }
        Structure::Category(c) => {
            for f in c.morphism_ids() {
                if c.is_identity(f) {
                    continue;
                }
                for g in c.morphism_ids() {
                    if c.is_identity(g) {
                        continue;
                    }
                    let (y, y2) = (c.tgt(f), c.src(g));
                    if y != y2 && rho.related(c.obj_name(y), c.obj_name(y2)) {
                        return fail(format!(
                            "{} and {} become composable through {} ~ {}",
                            c.label(f),
                            c.label(g),
                            c.obj_name(y),
                            c.obj_name(y2)
                        ));
                    }
                }
            }
            Ok(ok)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub system: Arc<MLSystem>,
    pub q: Transformation,
}

/// `S/ρ` with the canonical `Q_ρ`. Relation quotients keep one edge per
/// related pair of classes (the image relation).
pub fn quotient_system(s: &Arc<MLSystem>, rho: &EquivRelation) -> Result<Quotient> {
    let compat = check_compatible(s, rho)?;
    if !compat.compatible {
        return Err(Error::Incompatible(compat.witness.unwrap_or_default()));
    }
    let class = |x: &str| rho.class_name(x).unwrap().to_string();
    let (system, map) = match &s.structure {
        Structure::Relation(g) => {
            let (qg, hom) = quotient_graph(g, rho, true)?;
            (MLSystem::relation(qg), TransMap::Graph(hom))
        }
        Structure::PartialOp(op) => {
            let mut table = BTreeMap::new();
            for ((a, b), c) in op {
                table.insert((class(a), class(b)), class(c));
            }
            let sys = MLSystem { carrier: rho.labels().to_vec(), structure: Structure::PartialOp(table) };
            (sys, TransMap::Elements(s.carrier.iter().map(|x| (x.clone(), class(x))).collect()))
        }
        Structure::Category(c) => {
            let (qc, f) = object_quotient(c, rho)?;
            (MLSystem::category(qc), TransMap::Functor(f))
        }
    };
    let system = Arc::new(system);
    Ok(Quotient { q: Transformation { source: s.clone(), target: system.clone(), map }, system })
}

// ---- induced maps -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Uniqueness {
    /// Exhaustive search found exactly one candidate among `candidates`.
    Verified { candidates: u64 },
    NotUnique { solutions: u64 },
    /// Carrier above [`DESK_SCALE`]; unique because `Q_ρ` is surjective.
    ByConstruction,
}

#[derive(Debug, Clone)]
pub struct Induced {
    pub map: Transformation,
    pub uniqueness: Uniqueness,
    /// Commutation, transformation laws and (where claimed) surjectivity.
    pub report: LawReport,
}

impl Induced {
    pub fn passed(&self) -> bool {
        self.report.passed() && !matches!(self.uniqueness, Uniqueness::NotUnique { .. })
    }
}

/// The unique `T_ρ` with `T_ρ ∘ Q_ρ = T`, given `T` constant on classes.
pub fn factor_through_quotient(t: &Transformation, rho: &EquivRelation, budget: Budget) -> Result<Induced> {
    let quo = quotient_system(&t.source, rho)?;
    factor_through(t, &quo, budget)
}

fn factor_through(t: &Transformation, quo: &Quotient, budget: Budget) -> Result<Induced> {
    let q = &quo.q;
    let separated = |a: &str, b: &str, what: &str| {
        Error::Incompatible(format!("T separates {what} `{a}` and `{b}`, which the quotient identifies"))
    };
    let mut elements: BTreeMap<String, (String, String)> = BTreeMap::new();
    for x in &t.source.carrier {
        let c = q.element(x).unwrap();
        let y = t.element(x).ok_or_else(|| Error::NotTotal { missing: vec![x.clone()] })?;
        match elements.get(&c) {
            Some((x0, y0)) if *y0 != y => return Err(separated(x0, x, "elements")),
            Some(_) => {}
            None => {
                elements.insert(c, (x.clone(), y));
            }
        }
    }
    let element_map: BTreeMap<String, String> = elements.into_iter().map(|(c, (_, y))| (c, y)).collect();
    let map = match (&t.map, &q.map) {
        (TransMap::Graph(th), TransMap::Graph(qh)) => {
            let mut edges: BTreeMap<String, (String, String)> = BTreeMap::new();
            for (e, ce) in &qh.edges {
                let te = th.edges.get(e).ok_or_else(|| Error::NotTotal { missing: vec![format!("edge {e}")] })?;
                match edges.get(ce) {
                    Some((e0, t0)) if t0 != te => return Err(separated(e0, e, "edges")),
                    Some(_) => {}
                    None => {
                        edges.insert(ce.clone(), (e.clone(), te.clone()));
                    }
                }
            }
            TransMap::Graph(GraphHom { nodes: element_map, edges: edges.into_iter().map(|(c, (_, y))| (c, y)).collect() })
        }
        (TransMap::Functor(tf), TransMap::Functor(qf)) => {
            let qc = quo.system.cat().unwrap();
            let mut morphisms: Vec<Option<(MorId, MorId)>> = vec![None; qc.num_morphisms()];
            for f in tf.source().morphism_ids() {
                let cls = qf.mor(f);
                match morphisms[cls.0] {
                    Some((f0, img)) if img != tf.mor(f) => {
                        let src = tf.source();
                        return Err(separated(src.label(f0), src.label(f), "morphisms"));
                    }
                    Some(_) => {}
                    None => morphisms[cls.0] = Some((f, tf.mor(f))),
                }
            }
            let objects = qc
                .object_ids()
                .map(|x| tf.target().obj(&element_map[qc.obj_name(x)]))
                .collect::<Result<Vec<_>>>()?;
            let morphisms = morphisms
                .into_iter()
                .map(|m| m.map(|(_, img)| img).ok_or_else(|| Error::invalid("quotient functor is not surjective")))
                .collect::<Result<Vec<_>>>()?;
            TransMap::Functor(Functor::new(qc.clone(), tf.target().clone(), objects, morphisms)?)
        }
        _ => TransMap::Elements(element_map),
    };
    let tr = Transformation { source: quo.system.clone(), target: t.target.clone(), map };
    let mut report = check_transformation(&tr)?;
    report.subject = "induced map".into();
    let back = q.then(&tr)?;
    report.expect(back.agrees_with(t), "factorization", || "T_ρ ∘ Q_ρ".into(), || "does not equal T".into());
    let uniqueness = uniqueness_of_factor(t, q, &tr, budget)?;
    Ok(Induced { map: tr, uniqueness, report })
}

/// Counts every transformation `V` with `V ∘ Q = T` by exhaustive search.
fn uniqueness_of_factor(t: &Transformation, q: &Transformation, found: &Transformation, budget: Budget) -> Result<Uniqueness> {
    if t.source.carrier.len() > DESK_SCALE {
        return Ok(Uniqueness::ByConstruction);
    }
    let (dom, cod) = (&q.target, &t.target);
    let mut candidates = 0u64;
    let mut solutions = 0u64;
    match &found.map {
        TransMap::Functor(_) => {
            let (qc, uc) = (dom.cat().unwrap(), cod.cat().unwrap());
            for v in enumerate_functors(qc, uc, budget)? {
                candidates += 1;
                let cand = Transformation { source: dom.clone(), target: cod.clone(), map: TransMap::Functor(v) };
                if q.then(&cand)?.agrees_with(t) {
                    solutions += 1;
                }
            }
        }
        _ => {
            let n = dom.carrier.len();
            let count = (cod.carrier.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            budget.check_count(|| "candidate element maps".into(), count)?;
            for pick in odometer(&vec![cod.carrier.len(); n]) {
                candidates += 1;
                let em: BTreeMap<String, String> =
                    dom.carrier.iter().zip(&pick).map(|(c, &i)| (c.clone(), cod.carrier[i].clone())).collect();
                let commutes = t.source.carrier.iter().all(|x| em[&q.element(x).unwrap()] == t.element(x).unwrap());
                if !commutes {
                    continue;
                }
                solutions += match &found.map {
                    TransMap::Graph(_) => edge_completions(t, q, &em)?,
                    _ => {
                        let cand = Transformation {
                            source: dom.clone(),
                            target: cod.clone(),
                            map: TransMap::Elements(em),
                        };
                        check_transformation(&cand)?.passed() as u64
                    }
                };
            }
        }
    }
    Ok(if solutions == 1 { Uniqueness::Verified { candidates } } else { Uniqueness::NotUnique { solutions } })
}

/// Number of edge assignments over a fixed element map `em` that are graph
/// homs and commute with `t` on edges.
fn edge_completions(t: &Transformation, q: &Transformation, em: &BTreeMap<String, String>) -> Result<u64> {
    let (TransMap::Graph(th), TransMap::Graph(qh)) = (&t.map, &q.map) else { return Ok(0) };
    let (qg, ug) = (q.target.graph().unwrap(), t.target.graph().unwrap());
    let mut total = 1u64;
    for e in qg.edges() {
        let pre: Vec<&String> = qh.edges.iter().filter(|(_, c)| **c == e.id).map(|(k, _)| k).collect();
        let n = ug
            .edges()
            .iter()
            .filter(|u| u.src == em[&e.src] && u.dst == em[&e.dst] && pre.iter().all(|p| th.edges[*p] == u.id))
            .count() as u64;
        total *= n;
    }
    Ok(total)
}

/// `(ρ ≤ σ)_*: S/ρ -> S/σ`, the unique map under `Q_ρ` to `Q_σ`.
pub fn order_map(s: &Arc<MLSystem>, rho: &EquivRelation, sigma: &EquivRelation, budget: Budget) -> Result<Induced> {
    if !equiv_refines(rho, sigma)? {
        let block = rho
            .blocks()
            .iter()
            .find(|b| b.iter().any(|x| !sigma.related(&b[0], x)))
            .expect("a split block");
        return Err(Error::invalid(format!("block {block:?} is split by the coarser partition")));
    }
    let qs = quotient_system(s, sigma)?;
    let qr = quotient_system(s, rho)?;
    let mut out = factor_through(&qs.q, &qr, budget)?;
    out.report.expect(out.map.is_surjective(), "surjective", || "order map".into(), || "not onto".into());
    Ok(out)
}

/// `T*: S/ρ -> U/σ` with `T* ∘ Q_ρ = Q_σ ∘ T`, given `T(ρ) ⊆ σ`.
pub fn induced_quotient_map(
    t: &Transformation,
    rho: &EquivRelation,
    sigma: &EquivRelation,
    budget: Budget,
) -> Result<Induced> {
    rho.require_carrier(&t.source.carrier)?;
    sigma.require_carrier(&t.target.carrier)?;
    for b in rho.blocks() {
        for x in b {
            let (ta, tx) = (t.element(&b[0]).unwrap_or_default(), t.element(x).unwrap_or_default());
            if !sigma.related(&ta, &tx) {
                return Err(Error::Incompatible(format!("{} ~ {x} but T maps them to {ta} and {tx}", b[0])));
            }
        }
    }
    let qs = quotient_system(&t.target, sigma)?;
    let qr = quotient_system(&t.source, rho)?;
    let around = t.then(&qs.q)?;
    let mut out = factor_through(&around, &qr, budget)?;
    if t.is_surjective() {
        out.report.expect(out.map.is_surjective(), "surjective", || "T*".into(), || "T is onto but T* is not".into());
    }
    Ok(out)
}

// ---- cluster and represent ---------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representative {
    Mean,
    Min,
    Max,
    /// Most frequent value; ties go to the smallest.
    Mode,
    /// Share of the whole carrier that falls in the block.
    Frequency,
    /// Explicit value per block label.
    Custom(BTreeMap<String, f64>),
}

impl Representative {
    fn of(&self, label: &str, block: &[f64], total: usize) -> Result<f64> {
        let sorted = || {
            let mut v = block.to_vec();
            v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
            v
        };
        Ok(match self {
            Representative::Mean => block.iter().sum::<f64>() / block.len() as f64,
            Representative::Min => sorted()[0],
            Representative::Max => *sorted().last().unwrap(),
            Representative::Mode => {
                let v = sorted();
                let mut best = (v[0], 0usize);
                let mut i = 0;
                while i < v.len() {
                    let j = v[i..].iter().take_while(|&&x| x == v[i]).count();
                    if j > best.1 {
                        best = (v[i], j);
                    }
                    i += j;
                }
                best.0
            }
            Representative::Frequency => block.len() as f64 / total as f64,
            Representative::Custom(m) => *m.get(label).ok_or_else(|| Error::unknown("block", label))?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Clustered {
    /// The value system: a chain of the representative values.
    pub codomain: Arc<MLSystem>,
    /// `S/ρ -> codomain`.
    pub represent: Transformation,
    /// `S -> S/ρ -> codomain`.
    pub composite: Transformation,
    /// Block label to representative value.
    pub values: BTreeMap<String, String>,
}

/// Clusters by `rho` and sends each block to a representative value inside
/// the chain of values that occur. Relation-flavor systems only; the
/// representative must be monotone along the induced relation.
pub fn cluster_and_represent(
    s: &Arc<MLSystem>,
    rho: &EquivRelation,
    values: &BTreeMap<String, f64>,
    rep: &Representative,
) -> Result<Clustered> {
    if s.graph().is_none() {
        return Err(Error::FlavorMismatch("cluster_and_represent needs a relation system".into()));
    }
    let missing: Vec<String> = s.carrier.iter().filter(|x| !values.contains_key(*x)).cloned().collect();
    if !missing.is_empty() && !matches!(rep, Representative::Frequency | Representative::Custom(_)) {
        return Err(Error::NotTotal { missing });
    }
    let quo = quotient_system(s, rho)?;
    let mut reps = BTreeMap::new();
    for (label, block) in rho.labels().iter().zip(rho.blocks()) {
        let vs: Vec<f64> = block.iter().map(|x| values.get(x).copied().unwrap_or(0.0)).collect();
        reps.insert(label.clone(), rep.of(label, &vs, s.carrier.len())?);
    }
    let chain = Poset::numeric_chain(&reps.values().copied().collect::<Vec<_>>());
    let codomain = Arc::new(MLSystem::relation(poset_to_digraph(&chain)?));
    let labels: BTreeMap<String, String> = reps.iter().map(|(k, v)| (k.clone(), format_value(*v))).collect();
    let represent = Transformation {
        source: quo.system.clone(),
        target: codomain.clone(),
        map: TransMap::Elements(labels.clone()),
    };
    let report = check_transformation(&represent)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Law(format!("representative breaks the order at {}: {}", v.at, v.detail)));
    }
    let composite = quo.q.then(&represent)?;
    Ok(Clustered { codomain, represent, composite, values: labels })
}

// ---- partial groupoids ---------------------------------------------------------

/// A carrier with a symmetric match predicate and a merge defined exactly on
/// matching pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGroupoid {
    carrier: Vec<String>,
    merge: BTreeMap<(usize, usize), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Merge {
    Merged(String),
    Undefined,
}

fn show_set(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
}

impl PartialGroupoid {
    /// Record sets: two entities match when they share a record and merge to
    /// their union. The carrier is closed under merging at construction.
    pub fn record_sets<S: AsRef<str>>(entities: &[Vec<S>]) -> Result<Self> {
        let mut sets: Vec<BTreeSet<String>> = Vec::new();
        for e in entities {
            let s: BTreeSet<String> = e.iter().map(|x| x.as_ref().to_string()).collect();
            if s.is_empty() {
                return Err(Error::invalid("an entity needs at least one record"));
            }
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        let mut i = 0;
        while i < sets.len() {
            for j in 0..=i {
                if !sets[i].is_disjoint(&sets[j]) {
                    let u: BTreeSet<String> = sets[i].union(&sets[j]).cloned().collect();
                    if !sets.contains(&u) {
                        sets.push(u);
                    }
                }
            }
            i += 1;
        }
        sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let mut merge = BTreeMap::new();
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if !a.is_disjoint(b) {
                    let u: BTreeSet<String> = a.union(b).cloned().collect();
                    merge.insert((i, j), sets.iter().position(|s| *s == u).expect("closed"));
                }
            }
        }
        Ok(PartialGroupoid { carrier: sets.iter().map(show_set).collect(), merge })
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    fn pos(&self, e: &str) -> Result<usize> {
        self.carrier.iter().position(|c| c == e).ok_or_else(|| Error::unknown("entity", e))
    }

    pub fn matches(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.merge.contains_key(&(self.pos(a)?, self.pos(b)?)))
    }

    /// As a partial-operation ML system.
    pub fn as_system(&self) -> MLSystem {
        let table = self
            .merge
            .iter()
            .map(|(&(a, b), &c)| ((self.carrier[a].clone(), self.carrier[b].clone()), self.carrier[c].clone()))
            .collect();
        MLSystem { carrier: self.carrier.clone(), structure: Structure::PartialOp(table) }
    }
}

/// `e1 ∘ e2`, or [`Merge::Undefined`] when they do not match.
pub fn merge_entities(p: &PartialGroupoid, e1: &str, e2: &str) -> Result<Merge> {
    Ok(match p.merge.get(&(p.pos(e1)?, p.pos(e2)?)) {
        Some(&k) => Merge::Merged(p.carrier[k].clone()),
        None => Merge::Undefined,
    })
}

/// Entity names for record-set groupoids, e.g. `{a,b}`.
pub fn entity<S: AsRef<str>>(records: &[S]) -> String {
    show_set(&records.iter().map(|r| r.as_ref().to_string()).collect())
}

// ---- JSON -------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "flavor", rename_all = "kebab-case")]
pub enum SystemJson {
    PartialOp { carrier: Vec<String>, table: Vec<(String, String, String)> },
    Relation { graph: DiGraph },
    Category { category: CategoryJson },
}

impl SystemJson {
    pub fn build(&self) -> Result<MLSystem> {
        match self {
            SystemJson::PartialOp { carrier, table } => MLSystem::partial_op(
                carrier,
                &table.iter().map(|(a, b, c)| (a.clone(), b.clone(), c.clone())).collect::<Vec<_>>(),
            ),
            SystemJson::Relation { graph } => Ok(MLSystem::relation(graph.clone())),
            SystemJson::Category { category } => Ok(MLSystem::category(category.build()?)),
        }
    }
}

impl From<&MLSystem> for SystemJson {
    fn from(s: &MLSystem) -> Self {
        match &s.structure {
            Structure::PartialOp(t) => SystemJson::PartialOp {
                carrier: s.carrier.clone(),
                table: t.iter().map(|((a, b), c)| (a.clone(), b.clone(), c.clone())).collect(),
            },
            Structure::Relation(g) => SystemJson::Relation { graph: g.clone() },
            Structure::Category(c) => SystemJson::Category { category: CategoryJson::Explicit(ExplicitJson::from(c.as_ref())) },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::free_category;

    fn fruit_graph() -> DiGraph {
        DiGraph::from_parts(
            &["I", "love", "GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"],
            &[
                ("(I,love)", "I", "love"),
                ("(love,GalaApple)", "love", "GalaApple"),
                ("(love,Honeycrisp)", "love", "Honeycrisp"),
                ("(love,SmithApple)", "love", "SmithApple"),
                ("(love,Plantain)", "love", "Plantain"),
                ("(love,RedBanana)", "love", "RedBanana"),
            ],
        )
        .unwrap()
    }

    fn rho1() -> EquivRelation {
        EquivRelation::labeled(vec![
            ("I".into(), vec!["I".into()]),
            ("love".into(), vec!["love".into()]),
            ("apples".into(), vec!["GalaApple".into(), "Honeycrisp".into(), "SmithApple".into()]),
            ("bananas".into(), vec!["Plantain".into(), "RedBanana".into()]),
        ])
        .unwrap()
    }

    fn rho2() -> EquivRelation {
        EquivRelation::labeled(vec![
            ("I".into(), vec!["I".into()]),
            ("love".into(), vec!["love".into()]),
            (
                "fruits".into(),
                ["GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"].map(String::from).to_vec(),
            ),
        ])
        .unwrap()
    }

    #[test]
    fn fruit_quotients() {
        let s = Arc::new(MLSystem::relation(fruit_graph()));
        let q2 = quotient_system(&s, &rho2()).unwrap();
        let g = q2.system.graph().unwrap();
        assert_eq!(g.nodes(), ["fruits", "I", "love"]);
        assert_eq!(g.edges().len(), 2);
        assert!(check_transformation(&q2.q).unwrap().passed());
        assert!(q2.q.is_surjective());

        let om = order_map(&s, &rho1(), &rho2(), Budget::default()).unwrap();
        assert!(om.passed(), "{:?}", om.report);
        assert!(matches!(om.uniqueness, Uniqueness::ByConstruction));
        let em = om.map.element_map();
        assert_eq!(em["apples"], "fruits");
        assert_eq!(em["bananas"], "fruits");
        assert_eq!(em["I"], "I");
        assert_eq!(em["love"], "love");
    }

    #[test]
    fn discrete_quotient_is_iso() {
        let s = Arc::new(MLSystem::relation(fruit_graph()));
        let q = quotient_system(&s, &EquivRelation::discrete(s.carrier())).unwrap();
        let (a, b) = (q.system.graph().unwrap(), s.graph().unwrap());
        let sorted = |g: &DiGraph| g.nodes().iter().cloned().collect::<BTreeSet<_>>();
        assert_eq!(sorted(a), sorted(b));
        assert_eq!(a.edges(), b.edges());
    }

    fn transactions() -> (Arc<MLSystem>, BTreeMap<String, f64>) {
        let g = DiGraph::from_parts(
            &["t1", "t2", "t3"],
            &[("t1<t3", "t1", "t3"), ("t2<t3", "t2", "t3"), ("t1~t2", "t1", "t2"), ("t2~t1", "t2", "t1")],
        )
        .unwrap();
        let v = [("t1", 10.0), ("t2", 20.0), ("t3", 30.0)].map(|(k, v)| (k.to_string(), v)).into_iter().collect();
        (Arc::new(MLSystem::relation(g)), v)
    }

    fn months() -> EquivRelation {
        EquivRelation::labeled(vec![("Jan".into(), vec!["t1".into(), "t2".into()]), ("Feb".into(), vec!["t3".into()])])
            .unwrap()
    }

    #[test]
    fn monthly_means() {
        let (s, v) = transactions();
        let c = cluster_and_represent(&s, &months(), &v, &Representative::Mean).unwrap();
        assert_eq!(c.values["Jan"], "15");
        assert_eq!(c.values["Feb"], "30");
        assert!(check_transformation(&c.composite).unwrap().passed());
        // a decreasing choice breaks the order
        let bad = Representative::Custom([("Jan".to_string(), 5.0), ("Feb".to_string(), 1.0)].into_iter().collect());
        assert!(matches!(cluster_and_represent(&s, &months(), &v, &bad), Err(Error::Law(_))));
    }

    #[test]
    fn coin_frequencies() {
        let g = DiGraph::from_parts(&["f1", "f2", "f3", "f4"], &[]).unwrap();
        let s = Arc::new(MLSystem::relation(g));
        let rho = EquivRelation::labeled(vec![
            ("head".into(), vec!["f1".into(), "f3".into(), "f4".into()]),
            ("tail".into(), vec!["f2".into()]),
        ])
        .unwrap();
        let c = cluster_and_represent(&s, &rho, &BTreeMap::new(), &Representative::Frequency).unwrap();
        assert_eq!(c.values["head"], "0.75");
        assert_eq!(c.values["tail"], "0.25");
    }

    #[test]
    fn partial_op_congruence() {
        // a∘a = b, c∘c = c; a ~ c splits the results b and c
        let s = MLSystem::partial_op(&["a", "b", "c"], &[("a", "a", "b"), ("c", "c", "c")]).unwrap();
        let rho = EquivRelation::from_blocks(vec![vec!["a".into(), "c".into()], vec!["b".into()]]).unwrap();
        let r = check_compatible(&s, &rho).unwrap();
        assert!(!r.compatible);
        assert!(r.witness.unwrap().contains("a ∘ a = b"));
        assert!(check_compatible(&s, &EquivRelation::discrete(s.carrier())).unwrap().compatible);
    }

    #[test]
    fn factor_and_separation() {
        let g = crate::fincat::tests::w1();
        let s = Arc::new(MLSystem::relation(g.clone()));
        let meaning = EquivRelation::from_blocks(vec![
            vec!["I".into()],
            vec!["like".into(), "love".into()],
            vec!["eat".into()],
            vec!["apples".into()],
        ])
        .unwrap();
        // sentiment: I -> neutral, like/love -> positive, eat -> neutral, apples -> neutral
        let sg = DiGraph::from_parts(
            &["neutral", "positive"],
            &[("nn", "neutral", "neutral"), ("np", "neutral", "positive"), ("pn", "positive", "neutral")],
        )
        .unwrap();
        let u = Arc::new(MLSystem::relation(sg));
        let t = Transformation::elements(
            &s,
            &u,
            &[("I", "neutral"), ("love", "positive"), ("like", "positive"), ("eat", "neutral"), ("apples", "neutral")],
        );
        assert!(check_transformation(&t).unwrap().passed());
        let f = factor_through_quotient(&t, &meaning, Budget::default()).unwrap();
        assert!(f.passed(), "{:?}", f.report);
        assert!(matches!(f.uniqueness, Uniqueness::Verified { .. }));

        let t2 = Transformation::elements(
            &s,
            &u,
            &[("I", "neutral"), ("love", "positive"), ("like", "neutral"), ("eat", "neutral"), ("apples", "neutral")],
        );
        assert!(matches!(factor_through_quotient(&t2, &meaning, Budget::default()), Err(Error::Incompatible(_))));
        // Q itself factors as the identity
        let q = quotient_system(&s, &meaning).unwrap();
        let f = factor_through_quotient(&q.q, &meaning, Budget::default()).unwrap();
        assert!(f.map.agrees_with(&Transformation::identity(&q.system)));
    }

    #[test]
    fn identity_check_and_bad_edge() {
        let g = crate::fincat::tests::w1();
        let s = Arc::new(MLSystem::relation(g));
        assert!(check_transformation(&Transformation::identity(&s)).unwrap().passed());
        let t = Transformation::elements(
            &s,
            &s,
            &[("I", "love"), ("love", "I"), ("eat", "eat"), ("like", "like"), ("apples", "apples")],
        );
        let r = check_transformation(&t).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn category_flavor() {
        // a -> b, c -> d; identifying b and c creates a new composite
        let g = DiGraph::from_parts(&["a", "b", "c", "d"], &[("f", "a", "b"), ("g", "c", "d")]).unwrap();
        let s = Arc::new(MLSystem::category(Arc::new(free_category(&g, 2).unwrap())));
        let bc = EquivRelation::from_blocks(vec![vec!["a".into()], vec!["b".into(), "c".into()], vec!["d".into()]]).unwrap();
        assert!(!check_compatible(&s, &bc).unwrap().compatible);
        let bd = EquivRelation::from_blocks(vec![vec!["a".into()], vec!["b".into(), "d".into()], vec!["c".into()]]).unwrap();
        let q = quotient_system(&s, &bd).unwrap();
        assert!(check_transformation(&q.q).unwrap().passed());
        assert!(q.q.is_surjective());
        let coarse = EquivRelation::from_blocks(vec![vec!["a".into(), "c".into()], vec!["b".into(), "d".into()]]).unwrap();
        let om = order_map(&s, &bd, &coarse, Budget::default()).unwrap();
        assert!(om.passed(), "{:?}", om.report);
        assert!(matches!(om.uniqueness, Uniqueness::Verified { .. }));
    }

    #[test]
    fn record_set_merges() {
        let p = PartialGroupoid::record_sets(&[vec!["a", "b"], vec!["b", "c"], vec!["d"]]).unwrap();
        let ab = entity(&["a", "b"]);
        assert_eq!(merge_entities(&p, &ab, &entity(&["b", "c"])).unwrap(), Merge::Merged(entity(&["a", "b", "c"])));
        assert_eq!(merge_entities(&p, &ab, &ab).unwrap(), Merge::Merged(ab.clone()));
        assert_eq!(merge_entities(&p, &ab, &entity(&["d"])).unwrap(), Merge::Undefined);
    }

    #[test]
    fn system_json_roundtrip() {
        let s = MLSystem::partial_op(&["a", "b"], &[("a", "a", "b")]).unwrap();
        let js = serde_json::to_string(&SystemJson::from(&s)).unwrap();
        let back: SystemJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.build().unwrap(), s);
    }
}
