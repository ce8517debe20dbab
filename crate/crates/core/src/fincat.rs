//! Finite categories: explicit composition tables, free (path) categories on
//! graphs, and quotients by congruences generated from parallel pairs.
//!
//! Path categories on cyclic graphs are truncated at a length bound. Such a
//! category is *bound-certified*: composites past the bound are undefined and
//! any hom-set that has paths beyond the bound refuses enumeration with
//! [`Error::Bound`] instead of returning a silently truncated answer.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{Budget, Category};
use crate::error::{Error, Result};
use crate::foundations::{dot_id, quotient_graph, DiGraph, EquivRelation, UnionFind};
use crate::functcat::Functor;
use crate::report::LawReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Exact,
    BoundCertified(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphismInfo {
    pub label: String,
    pub dom: ObjId,
    pub cod: ObjId,
    /// Generator edge ids of the normal-form path, for path-presented categories.
    pub path: Option<Vec<String>>,
}

/// A path in a graph: a start node and a sequence of composable edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathSpec {
    pub src: String,
    pub edges: Vec<String>,
}

impl PathSpec {
    pub fn new(src: impl Into<String>, edges: &[&str]) -> Self {
        PathSpec { src: src.into(), edges: edges.iter().map(|e| e.to_string()).collect() }
    }
}

/// Generators and relations a category was presented by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub graph: DiGraph,
    pub relations: Vec<(PathSpec, PathSpec)>,
    pub bound: usize,
}

#[derive(Debug, Clone)]
pub struct FinCat {
    objects: Vec<String>,
    obj_index: BTreeMap<String, ObjId>,
    morphisms: Vec<MorphismInfo>,
    mor_index: BTreeMap<String, MorId>,
    identities: Vec<MorId>,
    comp: HashMap<(MorId, MorId), MorId>,
    homs: Vec<Vec<MorId>>,
    certification: Certification,
    incomplete: BTreeSet<(ObjId, ObjId)>,
    presentation: Option<Presentation>,
    /// Every enumerated generator path and the morphism it denotes.
    paths: HashMap<(ObjId, Vec<String>), MorId>,
}

impl PartialEq for FinCat {
    fn eq(&self, o: &Self) -> bool {
        self.objects == o.objects
            && self.morphisms == o.morphisms
            && self.identities == o.identities
            && self.comp == o.comp
            && self.certification == o.certification
            && self.incomplete == o.incomplete
            && self.presentation == o.presentation
    }
}

impl Eq for FinCat {}

impl Hash for FinCat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.objects.hash(state);
        self.morphisms.hash(state);
        self.identities.hash(state);
        self.certification.hash(state);
    }
}

struct Parts {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<MorId>,
    comp: HashMap<(MorId, MorId), MorId>,
    certification: Certification,
    incomplete: BTreeSet<(ObjId, ObjId)>,
    presentation: Option<Presentation>,
    paths: HashMap<(ObjId, Vec<String>), MorId>,
}

impl FinCat {
    fn assemble(p: Parts) -> Result<Self> {
        let mut obj_index = BTreeMap::new();
        for (i, o) in p.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), ObjId(i)).is_some() {
                return Err(Error::invalid(format!("duplicate object `{o}`")));
            }
        }
        let mut mor_index = BTreeMap::new();
        let n = p.objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for (i, m) in p.morphisms.iter().enumerate() {
            if mor_index.insert(m.label.clone(), MorId(i)).is_some() {
                return Err(Error::invalid(format!("duplicate morphism `{}`", m.label)));
            }
            if m.dom.0 >= n || m.cod.0 >= n {
                return Err(Error::invalid(format!("morphism `{}` has an unknown endpoint", m.label)));
            }
            homs[m.dom.0 * n + m.cod.0].push(MorId(i));
        }
        if p.identities.len() != n {
            return Err(Error::invalid("every object needs exactly one identity"));
        }
        for (x, id) in p.identities.iter().enumerate() {
            let m = p.morphisms.get(id.0).ok_or_else(|| Error::invalid("identity out of range"))?;
            if m.dom.0 != x || m.cod.0 != x {
                return Err(Error::invalid(format!("identity `{}` is not an endomorphism of `{}`", m.label, p.objects[x])));
            }
        }
        for (&(g, f), &h) in &p.comp {
            let (mg, mf, mh) = (&p.morphisms[g.0], &p.morphisms[f.0], &p.morphisms[h.0]);
            if mf.cod != mg.dom || mh.dom != mf.dom || mh.cod != mg.cod {
                return Err(Error::invalid(format!(
                    "composite {} ∘ {} = {} has mismatched endpoints",
                    mg.label, mf.label, mh.label
                )));
            }
        }
        if p.certification == Certification::Exact {
            for (fi, f) in p.morphisms.iter().enumerate() {
                for (gi, g) in p.morphisms.iter().enumerate() {
                    if f.cod == g.dom && !p.comp.contains_key(&(MorId(gi), MorId(fi))) {
                        return Err(Error::invalid(format!("missing composite {} ∘ {}", g.label, f.label)));
                    }
                }
            }
        }
        Ok(FinCat {
            objects: p.objects,
            obj_index,
            morphisms: p.morphisms,
            mor_index,
            identities: p.identities,
            comp: p.comp,
            homs,
            certification: p.certification,
            incomplete: p.incomplete,
            presentation: p.presentation,
            paths: p.paths,
        })
    }

    /// An explicit category from labels. `composition` lists `(g, f, g∘f)`.
    ///
    /// Structure (endpoints, totality of composition) is validated here;
    /// identity and associativity laws are left to [`check_category_laws`].
    pub fn explicit(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        composition: &[(&str, &str, &str)],
    ) -> Result<Self> {
        ExplicitJson {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: morphisms
                .iter()
                .map(|(id, d, c)| MorJson { id: id.to_string(), dom: d.to_string(), cod: c.to_string() })
                .collect(),
            identities: identities.iter().map(|(o, m)| (o.to_string(), m.to_string())).collect(),
            composition: composition
                .iter()
                .map(|(g, f, gf)| CompJson { g: g.to_string(), f: f.to_string(), gf: gf.to_string() })
                .collect(),
            bound: None,
            incomplete: vec![],
        }
        .build()
    }

    /// One object, its identity.
    pub fn terminal() -> Self {
        FinCat::explicit(&["*"], &[("1_*", "*", "*")], &[("*", "1_*")], &[("1_*", "1_*", "1_*")])
            .expect("terminal category")
    }

    /// Objects only, identities only.
    pub fn discrete(names: &[&str]) -> Result<Self> {
        let g = DiGraph::from_parts(names, &[])?;
        free_category(&g, 1)
    }

    /// The poset as a thin category: one morphism `a<=b` per related pair.
    pub fn from_poset(p: &crate::foundations::Poset) -> Result<Self> {
        p.validate()?;
        let n = p.carrier.len();
        let pos = |x: &str| p.carrier.iter().position(|c| c == x).unwrap();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for a in &p.carrier {
            for b in &p.carrier {
                if p.le(a, b) {
                    index.insert((pos(a), pos(b)), MorId(morphisms.len()));
                    morphisms.push(MorphismInfo {
                        label: format!("{a}<={b}"),
                        dom: ObjId(pos(a)),
                        cod: ObjId(pos(b)),
                        path: None,
                    });
                }
            }
        }
        let identities = (0..n).map(|i| index[&(i, i)]).collect();
        let mut comp = HashMap::new();
        for (&(a, b), &f) in &index {
            for c in 0..n {
                if let Some(&g) = index.get(&(b, c)) {
                    comp.insert((g, f), index[&(a, c)]);
                }
            }
        }
        FinCat::assemble(Parts {
            objects: p.carrier.clone(),
            morphisms,
            identities,
            comp,
            certification: Certification::Exact,
            incomplete: BTreeSet::new(),
            presentation: None,
            paths: HashMap::new(),
        })
    }

    /// The chain `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
        let p = crate::foundations::Poset::from_covers(&names, &covers).expect("chain poset");
        FinCat::from_poset(&p).expect("chain category")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn obj(&self, name: &str) -> Result<ObjId> {
        self.obj_index.get(name).copied().ok_or_else(|| Error::unknown("object", name))
    }

    pub fn mor(&self, label: &str) -> Result<MorId> {
        self.mor_index.get(label).copied().ok_or_else(|| Error::unknown("morphism", label))
    }

    pub fn info(&self, f: MorId) -> &MorphismInfo {
        &self.morphisms[f.0]
    }

    pub fn label(&self, f: MorId) -> &str {
        &self.morphisms[f.0].label
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].dom
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].cod
    }

    pub fn id(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.certification != Certification::Exact
    }

    /// `g ∘ f`, or `None` when the pair is composable but the composite lies
    /// past the truncation bound. Non-composable pairs are an error.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Result<Option<MorId>> {
        if self.tgt(f) != self.src(g) {
            return Err(Error::NotComposable(format!("{} ∘ {}", self.label(g), self.label(f))));
        }
        Ok(self.comp.get(&(g, f)).copied())
    }

    pub fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        self.try_compose(g, f)?.ok_or_else(|| Error::Bound {
            what: format!("composite {} ∘ {}", self.label(g), self.label(f)),
            bound: self.bound(),
        })
    }

    fn bound(&self) -> usize {
        match self.certification {
            Certification::BoundCertified(k) => k,
            Certification::Exact => usize::MAX,
        }
    }

    /// The hom-set in canonical order; errors when it is known to extend past
    /// the truncation bound.
    pub fn hom_set(&self, x: ObjId, y: ObjId) -> Result<&[MorId]> {
        if self.incomplete.contains(&(x, y)) {
            return Err(Error::Bound {
                what: format!("hom({}, {})", self.obj_name(x), self.obj_name(y)),
                bound: self.bound(),
            });
        }
        Ok(self.hom_enumerated(x, y))
    }

    /// The enumerated part of a hom-set, without the completeness check.
    pub fn hom_enumerated(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.homs[x.0 * self.objects.len() + y.0]
    }

    pub fn hom_by_name(&self, x: &str, y: &str) -> Result<Vec<String>> {
        let h = self.hom_set(self.obj(x)?, self.obj(y)?)?;
        Ok(h.iter().map(|&m| self.label(m).to_string()).collect())
    }

    /// Looks up the morphism of a path in a path-presented category.
    pub fn mor_by_path(&self, p: &PathSpec) -> Result<MorId> {
        let pres = self.presentation.as_ref().ok_or_else(|| Error::invalid("category is not path-presented"))?;
        let src = self.obj(&p.src)?;
        let mut at = p.src.clone();
        for e in &p.edges {
            let edge = pres.graph.edge(e).ok_or_else(|| Error::unknown("edge", e.clone()))?;
            if edge.src != at {
                return Err(Error::invalid(format!("path breaks at edge `{e}`")));
            }
            at = edge.dst.clone();
        }
        if let Some(&m) = self.paths.get(&(src, p.edges.clone())) {
            return Ok(m);
        }
        if self.certification == Certification::Exact && !p.edges.is_empty() {
            // compose edge by edge
            let mut at = self.id(src);
            for e in &p.edges {
                let edge = &pres.graph.edge(e).unwrap().src;
                at = self.compose(self.paths[&(self.obj(edge)?, vec![e.clone()])], at)?;
            }
            return Ok(at);
        }
        if p.edges.len() > pres.bound {
            return Err(Error::Bound { what: format!("path {}", path_label(&p.src, &p.edges)), bound: pres.bound });
        }
        Err(Error::invalid(format!("path {} is not enumerated", path_label(&p.src, &p.edges))))
    }

    /// Every composable pair `(g, f)` with its composite, in canonical order.
    pub fn composites(&self) -> Vec<((MorId, MorId), MorId)> {
        let mut v: Vec<_> = self.comp.iter().map(|(&k, &h)| (k, h)).collect();
        v.sort();
        v
    }

    pub fn to_dot(&self, name: &str, with_identities: bool) -> String {
        let mut out = format!("digraph {} {{\n", dot_id(name));
        for o in &self.objects {
            out.push_str(&format!("  {};\n", dot_id(o)));
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            if !with_identities && self.is_identity(MorId(i)) {
                continue;
            }
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                dot_id(&self.objects[m.dom.0]),
                dot_id(&self.objects[m.cod.0]),
                dot_id(&m.label)
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Builds a category from parts computed elsewhere in the crate.
    pub(crate) fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<MorId>,
        comp: HashMap<(MorId, MorId), MorId>,
        certification: Certification,
    ) -> Result<Self> {
        FinCat::assemble(Parts {
            objects,
            morphisms,
            identities,
            comp,
            certification,
            incomplete: BTreeSet::new(),
            presentation: None,
            paths: HashMap::new(),
        })
    }
}

impl Category for FinCat {
    type Obj = ObjId;
    type Mor = MorId;

    fn dom(&self, f: &MorId) -> ObjId {
        self.src(*f)
    }

    fn cod(&self, f: &MorId) -> ObjId {
        self.tgt(*f)
    }

    fn identity(&self, x: &ObjId) -> MorId {
        self.id(*x)
    }

    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        FinCat::compose(self, *g, *f)
    }

    fn hom(&self, x: &ObjId, y: &ObjId, _budget: Budget) -> Result<Vec<MorId>> {
        Ok(self.hom_set(*x, *y)?.to_vec())
    }

    fn show_obj(&self, x: &ObjId) -> String {
        self.obj_name(*x).to_string()
    }

    fn show_mor(&self, f: &MorId) -> String {
        self.label(*f).to_string()
    }
}

pub fn path_label(src: &str, edges: &[String]) -> String {
    if edges.is_empty() {
        format!("1_{src}")
    } else {
        format!("[{}]", edges.join(","))
    }
}

/// The free category on `g`: all paths of length at most `bound`, with empty
/// paths as identities and concatenation as composition.
///
/// The result is exact when every path of `g` fits in the bound (always the
/// case for acyclic graphs with a large enough bound), otherwise it is
/// bound-certified and the affected hom-sets refuse enumeration.
pub fn free_category(g: &DiGraph, bound: usize) -> Result<FinCat> {
    if bound < 1 {
        return Err(Error::invalid("bound must be at least 1"));
    }
    let n = g.nodes().len();
    let edge_pos: HashMap<&str, usize> = g.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
    let node = |name: &str| g.node_pos(name).unwrap();

    // paths as (src, edge indices)
    let mut paths: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![])).collect();
    let mut frontier: Vec<(usize, Vec<usize>)> = paths.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for (s, p) in &frontier {
            let at = match p.last() {
                Some(&e) => node(&g.edges()[e].dst),
                None => *s,
            };
            for e in g.out_edges(&g.nodes()[at]) {
                let mut q = p.clone();
                q.push(edge_pos[e.id.as_str()]);
                next.push((*s, q));
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }

    // pairs joined by a path longer than the bound
    let mut incomplete = BTreeSet::new();
    let mut longer: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (s, p) in &frontier {
        let at = node(&g.edges()[*p.last().unwrap()].dst);
        for e in g.out_edges(&g.nodes()[at]) {
            longer.insert((*s, node(&e.dst)));
        }
    }
    if !longer.is_empty() {
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in g.edges() {
            reach[node(&e.src)][node(&e.dst)] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        for &(x, w) in &longer {
            for (y, &r) in reach[w].iter().enumerate() {
                if r {
                    incomplete.insert((ObjId(x), ObjId(y)));
                }
            }
        }
    }

    let key = |(s, p): &(usize, Vec<usize>)| -> (usize, Vec<String>, usize) {
        (p.len(), p.iter().map(|&e| g.edges()[e].id.clone()).collect(), *s)
    };
    paths.sort_by_key(key);
    let mut lookup: HashMap<(usize, Vec<usize>), MorId> = HashMap::new();
    let mut morphisms = Vec::with_capacity(paths.len());
    let mut identities = vec![MorId(0); n];
    for (i, (s, p)) in paths.iter().enumerate() {
        let ids: Vec<String> = p.iter().map(|&e| g.edges()[e].id.clone()).collect();
        let cod = p.last().map(|&e| node(&g.edges()[e].dst)).unwrap_or(*s);
        if p.is_empty() {
            identities[*s] = MorId(i);
        }
        morphisms.push(MorphismInfo {
            label: path_label(&g.nodes()[*s], &ids),
            dom: ObjId(*s),
            cod: ObjId(cod),
            path: Some(ids),
        });
        lookup.insert((*s, p.clone()), MorId(i));
    }
    let mut comp = HashMap::new();
    for (fi, (fs, fp)) in paths.iter().enumerate() {
        let f_cod = morphisms[fi].cod;
        for (gi, (gs, gp)) in paths.iter().enumerate() {
            if *gs != f_cod.0 || fp.len() + gp.len() > bound {
                continue;
            }
            let mut q = fp.clone();
            q.extend(gp);
            comp.insert((MorId(gi), MorId(fi)), lookup[&(*fs, q)]);
        }
    }
    let certification = if incomplete.is_empty() && longer.is_empty() {
        Certification::Exact
    } else {
        Certification::BoundCertified(bound)
    };
    FinCat::assemble(Parts {
        objects: g.nodes().to_vec(),
        morphisms,
        identities,
        comp,
        certification,
        incomplete,
        presentation: Some(Presentation { graph: g.clone(), relations: vec![], bound }),
        paths: lookup
            .into_iter()
            .map(|((s, p), m)| ((ObjId(s), p.iter().map(|&e| g.edges()[e].id.clone()).collect()), m))
            .collect(),
    })
}

/// Quotient of `c` by the congruence generated by `gens`, with the canonical
/// functor `Q`.
///
/// Closure is computed by saturating "equal classes compose to equal
/// classes" over the enumerated composition table; each class is represented
/// by its least morphism, which for path categories is the shortest,
/// lexicographically least path.
pub fn quotient_category(c: &Arc<FinCat>, gens: &[(MorId, MorId)]) -> Result<(Arc<FinCat>, Functor)> {
    for &(f, g) in gens {
        if c.src(f) != c.src(g) || c.tgt(f) != c.tgt(g) {
            return Err(Error::invalid(format!(
                "generator ({}, {}) is not a parallel pair",
                c.label(f),
                c.label(g)
            )));
        }
    }
    let n = c.num_morphisms();
    let mut uf = UnionFind::new(n);
    for &(f, g) in gens {
        uf.union(f.0, g.0);
    }
    let table = c.composites();
    loop {
        let mut changed = false;
        let mut sig: HashMap<(usize, usize), usize> = HashMap::new();
        for &((g, f), h) in &table {
            let key = (uf.find(g.0), uf.find(f.0));
            match sig.get(&key) {
                Some(&h0) => changed |= uf.union(h0, h.0),
                None => {
                    sig.insert(key, h.0);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut class_of = vec![MorId(0); n];
    let mut morphisms = Vec::new();
    let mut root_to_class: HashMap<usize, MorId> = HashMap::new();
    for (i, slot) in class_of.iter_mut().enumerate() {
        let r = uf.find(i);
        let cls = *root_to_class.entry(r).or_insert_with(|| {
            // roots are the least members, so classes appear in canonical order
            morphisms.push(c.morphisms[r].clone());
            MorId(morphisms.len() - 1)
        });
        *slot = cls;
    }
    let identities = c.identities.iter().map(|id| class_of[id.0]).collect();
    let mut comp = HashMap::new();
    for &((g, f), h) in &table {
        comp.insert((class_of[g.0], class_of[f.0]), class_of[h.0]);
    }
    let presentation = c.presentation.as_ref().map(|p| {
        let mut p = p.clone();
        for &(f, g) in gens {
            if let (Some(pf), Some(pg)) = (&c.info(f).path, &c.info(g).path) {
                let src = c.obj_name(c.src(f)).to_string();
                p.relations.push((
                    PathSpec { src: src.clone(), edges: pf.clone() },
                    PathSpec { src, edges: pg.clone() },
                ));
            }
        }
        p
    });
    let paths: HashMap<(ObjId, Vec<String>), MorId> = c.paths.iter().map(|(k, m)| (k.clone(), class_of[m.0])).collect();
    let (mut certification, mut incomplete) = (c.certification, c.incomplete.clone());
    if certification != Certification::Exact {
        if let Some(full) = presentation.as_ref().and_then(|p| close_classes(p, &morphisms, &paths)) {
            comp = full;
            certification = Certification::Exact;
            incomplete.clear();
        }
    }
    let q = Arc::new(FinCat::assemble(Parts {
        objects: c.objects.clone(),
        morphisms,
        identities,
        comp,
        certification,
        incomplete,
        presentation,
        paths,
    })?);
    let functor = Functor::new(c.clone(), q.clone(), c.object_ids().collect(), class_of)?;
    Ok((q, functor))
}

/// Completes the composition table of a truncated quotient when its classes
/// are closed under every generating edge and the relations hold for the
/// resulting action. The classes are then exactly the morphisms of the
/// presented category, however long its paths.
fn close_classes(
    pres: &Presentation,
    classes: &[MorphismInfo],
    paths: &HashMap<(ObjId, Vec<String>), MorId>,
) -> Option<HashMap<(MorId, MorId), MorId>> {
    let g = &pres.graph;
    let node = |n: &str| ObjId(g.node_pos(n).unwrap());
    let mut act: HashMap<(MorId, &str), MorId> = HashMap::new();
    for ((s, p), &k) in paths {
        for e in g.out_edges(&g.nodes()[classes[k.0].cod.0]) {
            let mut longer = p.clone();
            longer.push(e.id.clone());
            if let Some(&k2) = paths.get(&(*s, longer)) {
                act.insert((k, e.id.as_str()), k2);
            }
        }
    }
    for (i, m) in classes.iter().enumerate() {
        if g.out_edges(&g.nodes()[m.cod.0]).any(|e| !act.contains_key(&(MorId(i), e.id.as_str()))) {
            return None;
        }
    }
    let walk = |k: MorId, edges: &[String]| edges.iter().try_fold(k, |k, e| act.get(&(k, e.as_str())).copied());
    for (i, m) in classes.iter().enumerate() {
        for (a, b) in &pres.relations {
            if node(&a.src) == m.cod && walk(MorId(i), &a.edges)? != walk(MorId(i), &b.edges)? {
                return None;
            }
        }
    }
    let mut comp = HashMap::new();
    for (fi, f) in classes.iter().enumerate() {
        for (gi, gm) in classes.iter().enumerate() {
            if gm.dom == f.cod {
                comp.insert((MorId(gi), MorId(fi)), walk(MorId(fi), gm.path.as_ref()?)?);
            }
        }
    }
    Some(comp)
}

/// Quotient by relations between paths of a path-presented category.
pub fn quotient_by_paths(c: &Arc<FinCat>, relations: &[(PathSpec, PathSpec)]) -> Result<(Arc<FinCat>, Functor)> {
    let gens = relations
        .iter()
        .map(|(a, b)| Ok((c.mor_by_path(a)?, c.mor_by_path(b)?)))
        .collect::<Result<Vec<_>>>()?;
    quotient_category(c, &gens)
}

/// Quotient of a path-presented category by a partition of its objects: the
/// presenting graph is quotiented (parallel edges kept), paths are
/// re-enumerated at the same bound and the relations are carried across.
///
/// The returned functor sends each morphism to its image path. It need not be
/// full: identifying objects can create new composable pairs.
pub fn object_quotient(c: &Arc<FinCat>, rho: &EquivRelation) -> Result<(Arc<FinCat>, Functor)> {
    let pres = c.presentation.as_ref().ok_or_else(|| Error::invalid("object quotients need a path-presented category"))?;
    let (qg, hom) = quotient_graph(&pres.graph, rho, false)?;
    let moved = |p: &PathSpec| PathSpec { src: hom.nodes[&p.src].clone(), edges: p.edges.clone() };
    let relations: Vec<_> = pres.relations.iter().map(|(a, b)| (moved(a), moved(b))).collect();
    let q = presented(&qg, &relations, pres.bound)?;
    let objects = c.object_ids().map(|x| q.obj(&hom.nodes[c.obj_name(x)])).collect::<Result<Vec<_>>>()?;
    let morphisms = c
        .morphism_ids()
        .map(|f| {
            let path = c.info(f).path.clone().unwrap_or_default();
            q.mor_by_path(&PathSpec { src: hom.nodes[c.obj_name(c.src(f))].clone(), edges: path })
        })
        .collect::<Result<Vec<_>>>()?;
    let functor = Functor::new(c.clone(), q.clone(), objects, morphisms)?;
    Ok((q, functor))
}

/// Free category on `graph` modulo `relations`.
pub fn presented(graph: &DiGraph, relations: &[(PathSpec, PathSpec)], bound: usize) -> Result<Arc<FinCat>> {
    let free = Arc::new(free_category(graph, bound)?);
    Ok(quotient_by_paths(&free, relations)?.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiMono {
    pub epic: bool,
    pub monic: bool,
    /// Distinct `c1, c2` with `c1 ∘ f = c2 ∘ f`.
    pub epi_witness: Option<(String, String)>,
    /// Distinct `c1, c2` with `f ∘ c1 = f ∘ c2`.
    pub mono_witness: Option<(String, String)>,
}

/// Literal epi/mono tests by exhaustive search over parallel cofactors.
pub fn epi_mono_status(c: &FinCat, f: MorId) -> Result<EpiMono> {
    let (a, b) = (c.src(f), c.tgt(f));
    let mut epi_witness = None;
    'epi: for z in c.object_ids() {
        let hom = c.hom_set(b, z)?;
        for (i, &c1) in hom.iter().enumerate() {
            for &c2 in &hom[i + 1..] {
                if c.compose(c1, f)? == c.compose(c2, f)? {
                    epi_witness = Some((c.label(c1).to_string(), c.label(c2).to_string()));
                    break 'epi;
                }
            }
        }
    }
    let mut mono_witness = None;
    'mono: for z in c.object_ids() {
        let hom = c.hom_set(z, a)?;
        for (i, &c1) in hom.iter().enumerate() {
            for &c2 in &hom[i + 1..] {
                if c.compose(f, c1)? == c.compose(f, c2)? {
                    mono_witness = Some((c.label(c1).to_string(), c.label(c2).to_string()));
                    break 'mono;
                }
            }
        }
    }
    Ok(EpiMono { epic: epi_witness.is_none(), monic: mono_witness.is_none(), epi_witness, mono_witness })
}

/// Identity and associativity over the whole table. In a truncated category
/// only triples whose composites are all defined are checked.
pub fn check_category_laws(c: &FinCat) -> LawReport {
    let mut r = LawReport::new("category laws");
    for f in c.morphism_ids() {
        let (x, y) = (c.src(f), c.tgt(f));
        for (law, side) in [("left identity", c.try_compose(c.id(y), f)), ("right identity", c.try_compose(f, c.id(x)))] {
            match side {
                Ok(Some(h)) => {
                    r.expect(h == f, law, || c.label(f).to_string(), || format!("got {}", c.label(h)));
                }
                _ => r.violate(law, c.label(f), "identity composite undefined"),
            }
        }
    }
    let comps = c.composites();
    let mut after: HashMap<MorId, Vec<(MorId, MorId)>> = HashMap::new();
    for &((g, f), gf) in &comps {
        after.entry(f).or_default().push((g, gf));
    }
    for &((g, f), gf) in &comps {
        let Some(hs) = after.get(&g) else { continue };
        for &(h, hg) in hs {
            let lhs = c.try_compose(h, gf).ok().flatten();
            let rhs = c.try_compose(hg, f).ok().flatten();
            if let (Some(l), Some(rr)) = (lhs, rhs) {
                r.expect(
                    l == rr,
                    "associativity",
                    || format!("({}, {}, {})", c.label(h), c.label(g), c.label(f)),
                    || format!("h(gf) = {} but (hg)f = {}", c.label(l), c.label(rr)),
                );
            }
        }
    }
    r
}

/// Underlying graph: every morphism becomes an edge labelled by the morphism.
pub fn forget_to_graph(c: &FinCat, drop_identities: bool) -> DiGraph {
    let mut g = DiGraph::default();
    for o in c.objects() {
        g.add_node(o.clone()).expect("unique objects");
    }
    for f in c.morphism_ids() {
        if drop_identities && c.is_identity(f) {
            continue;
        }
        g.add_edge(c.label(f), c.obj_name(c.src(f)), c.obj_name(c.tgt(f))).expect("unique labels");
    }
    g
}

/// Materialized copy of a finite part of any category.
pub struct Materialized<C: Category> {
    pub category: Arc<FinCat>,
    pub objects: Vec<C::Obj>,
    pub morphisms: Vec<C::Mor>,
}

impl<C: Category> Materialized<C> {
    pub fn obj_id(&self, x: &C::Obj) -> Option<ObjId> {
        self.objects.iter().position(|o| o == x).map(ObjId)
    }

    pub fn mor_id(&self, f: &C::Mor) -> Option<MorId> {
        self.morphisms.iter().position(|m| m == f).map(MorId)
    }
}

/// The full subcategory of `cat` on `objects`, as an explicit table.
pub fn materialize<C: Category>(cat: &C, objects: Vec<C::Obj>, budget: Budget) -> Result<Materialized<C>> {
    let mut names = Vec::new();
    let mut used = BTreeSet::new();
    for o in &objects {
        names.push(unique_name(cat.show_obj(o), &mut used));
    }
    let mut morphisms: Vec<C::Mor> = Vec::new();
    let mut infos = Vec::new();
    let mut index: HashMap<C::Mor, MorId> = HashMap::new();
    let mut mor_names = BTreeSet::new();
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            for m in cat.hom(x, y, budget)? {
                index.insert(m.clone(), MorId(morphisms.len()));
                infos.push(MorphismInfo {
                    label: unique_name(cat.show_mor(&m), &mut mor_names),
                    dom: ObjId(i),
                    cod: ObjId(j),
                    path: None,
                });
                morphisms.push(m);
            }
            budget.check_count(|| "materialized morphisms".into(), morphisms.len() as u128)?;
        }
    }
    let identities = objects
        .iter()
        .map(|x| {
            index
                .get(&cat.identity(x))
                .copied()
                .ok_or_else(|| Error::invalid("identity missing from hom enumeration"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut comp = HashMap::new();
    for (fi, f) in morphisms.iter().enumerate() {
        for (gi, g) in morphisms.iter().enumerate() {
            if infos[fi].cod != infos[gi].dom {
                continue;
            }
            let h = cat.compose(g, f)?;
            let hid = index.get(&h).copied().ok_or_else(|| Error::invalid("composite outside hom enumeration"))?;
            comp.insert((MorId(gi), MorId(fi)), hid);
        }
    }
    let category = Arc::new(FinCat::from_tables(names, infos, identities, comp, Certification::Exact)?);
    Ok(Materialized { category, objects, morphisms })
}

fn unique_name(base: String, used: &mut BTreeSet<String>) -> String {
    let mut name = base.clone();
    let mut k = 1;
    while !used.insert(name.clone()) {
        k += 1;
        name = format!("{base}#{k}");
    }
    name
}

// ---- JSON interchange -------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorJson {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompJson {
    pub g: String,
    pub f: String,
    pub gf: String,
}

/// Explicit form: every morphism and the full composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorJson>,
    pub identities: Vec<(String, String)>,
    pub composition: Vec<CompJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub incomplete: Vec<(String, String)>,
}

/// Path form written as either a non-empty list of edge ids or an explicit
/// `{"src", "edges"}` object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathJson {
    Edges(Vec<String>),
    Spec(PathSpec),
}

impl PathJson {
    pub fn resolve(&self, g: &DiGraph) -> Result<PathSpec> {
        match self {
            PathJson::Spec(p) => Ok(p.clone()),
            PathJson::Edges(es) => {
                let first = es.first().ok_or_else(|| Error::invalid("empty path needs {\"src\", \"edges\"} form"))?;
                let e = g.edge(first).ok_or_else(|| Error::unknown("edge", first.clone()))?;
                Ok(PathSpec { src: e.src.clone(), edges: es.clone() })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedJson {
    pub graph: DiGraph,
    #[serde(default)]
    pub relations: Vec<(PathJson, PathJson)>,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryJson {
    Presented(PresentedJson),
    Explicit(ExplicitJson),
}

impl CategoryJson {
    pub fn build(&self) -> Result<Arc<FinCat>> {
        match self {
            CategoryJson::Explicit(e) => Ok(Arc::new(e.build()?)),
            CategoryJson::Presented(p) => {
                let rels = p
                    .relations
                    .iter()
                    .map(|(a, b)| Ok((a.resolve(&p.graph)?, b.resolve(&p.graph)?)))
                    .collect::<Result<Vec<_>>>()?;
                presented(&p.graph, &rels, p.bound)
            }
        }
    }
}

impl ExplicitJson {
    pub fn build(&self) -> Result<FinCat> {
        let pos: HashMap<&str, usize> = self.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let obj = |o: &str| pos.get(o).copied().map(ObjId).ok_or_else(|| Error::unknown("object", o));
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Ok(MorphismInfo { label: m.id.clone(), dom: obj(&m.dom)?, cod: obj(&m.cod)?, path: None }))
            .collect::<Result<Vec<_>>>()?;
        let mpos: HashMap<&str, usize> = self.morphisms.iter().enumerate().map(|(i, m)| (m.id.as_str(), i)).collect();
        let mor = |m: &str| mpos.get(m).copied().map(MorId).ok_or_else(|| Error::unknown("morphism", m));
        let mut identities = vec![None; self.objects.len()];
        for (o, m) in &self.identities {
            let slot = &mut identities[obj(o)?.0];
            if slot.is_some() {
                return Err(Error::invalid(format!("object `{o}` has two identities")));
            }
            *slot = Some(mor(m)?);
        }
        let identities = identities
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::invalid(format!("object `{}` has no identity", self.objects[i]))))
            .collect::<Result<Vec<_>>>()?;
        let mut comp = HashMap::new();
        for c in &self.composition {
            if comp.insert((mor(&c.g)?, mor(&c.f)?), mor(&c.gf)?).is_some() {
                return Err(Error::invalid(format!("composite {} ∘ {} given twice", c.g, c.f)));
            }
        }
        let incomplete = self
            .incomplete
            .iter()
            .map(|(a, b)| Ok((obj(a)?, obj(b)?)))
            .collect::<Result<BTreeSet<_>>>()?;
        FinCat::assemble(Parts {
            objects: self.objects.clone(),
            morphisms,
            identities,
            comp,
            certification: self.bound.map_or(Certification::Exact, Certification::BoundCertified),
            incomplete,
            presentation: None,
            paths: HashMap::new(),
        })
    }
}

impl From<&FinCat> for ExplicitJson {
    fn from(c: &FinCat) -> Self {
        ExplicitJson {
            objects: c.objects.clone(),
            morphisms: c
                .morphisms
                .iter()
                .map(|m| MorJson { id: m.label.clone(), dom: c.objects[m.dom.0].clone(), cod: c.objects[m.cod.0].clone() })
                .collect(),
            identities: c
                .identities
                .iter()
                .enumerate()
                .map(|(i, m)| (c.objects[i].clone(), c.label(*m).to_string()))
                .collect(),
            composition: c
                .composites()
                .into_iter()
                .map(|((g, f), h)| CompJson { g: c.label(g).into(), f: c.label(f).into(), gf: c.label(h).into() })
                .collect(),
            bound: match c.certification {
                Certification::Exact => None,
                Certification::BoundCertified(k) => Some(k),
            },
            incomplete: c
                .incomplete
                .iter()
                .map(|(a, b)| (c.objects[a.0].clone(), c.objects[b.0].clone()))
                .collect(),
        }
    }
}
