//! Finite sets and functions, limits and colimits of finite diagrams, and
//! exhaustive universal-property checks.
//!
//! Limits are built as the set of compatible tuples inside the product of the
//! diagram's objects; colimits as the coproduct modulo the equivalence
//! generated by the diagram's maps.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::category::{odometer, Budget, Category};
use crate::error::{Error, Result};
use crate::foundations::{DiGraph, UnionFind};
use crate::report::LawReport;

/// A finite set of labelled elements. Element order is part of the value and
/// fixes every enumeration order downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetObj(Arc<IndexSet<String>>);

impl Hash for FinSetObj {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_usize(self.0.len());
        for e in self.0.iter() {
            e.hash(state);
        }
    }
}

impl FinSetObj {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut set = IndexSet::new();
        for e in elements {
            let e = e.into();
            if !set.insert(e.clone()) {
                return Err(Error::invalid(format!("duplicate element `{e}`")));
            }
        }
        Ok(FinSetObj(Arc::new(set)))
    }

    pub fn of(elements: &[&str]) -> Self {
        FinSetObj::new(elements.iter().copied()).expect("distinct elements")
    }

    pub fn empty() -> Self {
        FinSetObj(Arc::new(IndexSet::new()))
    }

    /// Elements `0..n` named by their index.
    pub fn range(n: usize) -> Self {
        FinSetObj::new((0..n).map(|i| i.to_string())).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn pos(&self, x: &str) -> Option<usize> {
        self.0.get_index_of(x)
    }

    pub fn require(&self, x: &str) -> Result<usize> {
        self.pos(x).ok_or_else(|| Error::unknown("element", x))
    }

    pub fn to_vec(&self) -> Vec<String> {
        self.0.iter().cloned().collect()
    }
}

impl std::fmt::Display for FinSetObj {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.to_vec().join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSetMap {
    pub dom: FinSetObj,
    pub cod: FinSetObj,
    table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(dom: FinSetObj, cod: FinSetObj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::NotTotal { missing: dom.elements().skip(table.len()).cloned().collect() });
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::invalid(format!("image index {bad} outside codomain {cod}")));
        }
        Ok(FinSetMap { dom, cod, table })
    }

    pub fn from_pairs(dom: &FinSetObj, cod: &FinSetObj, pairs: &[(&str, &str)]) -> Result<Self> {
        let m: BTreeMap<String, String> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        FinSetMap::from_table(dom, cod, &m)
    }

    pub fn from_table(dom: &FinSetObj, cod: &FinSetObj, m: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = m.keys().find(|k| dom.pos(k).is_none()) {
            return Err(Error::unknown("element", k.clone()));
        }
        let missing: Vec<String> = dom.elements().filter(|x| !m.contains_key(*x)).cloned().collect();
        if !missing.is_empty() {
            return Err(Error::NotTotal { missing });
        }
        let table = dom.elements().map(|x| cod.require(&m[x])).collect::<Result<Vec<_>>>()?;
        FinSetMap::new(dom.clone(), cod.clone(), table)
    }

    pub fn from_fn(dom: &FinSetObj, cod: &FinSetObj, f: impl Fn(&str) -> String) -> Result<Self> {
        let table = dom.elements().map(|x| cod.require(&f(x))).collect::<Result<Vec<_>>>()?;
        FinSetMap::new(dom.clone(), cod.clone(), table)
    }

    pub fn identity(x: &FinSetObj) -> Self {
        FinSetMap { dom: x.clone(), cod: x.clone(), table: (0..x.len()).collect() }
    }

    pub fn constant(dom: &FinSetObj, cod: &FinSetObj, j: usize) -> Self {
        FinSetMap { dom: dom.clone(), cod: cod.clone(), table: vec![j; dom.len()] }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_label(&self, x: &str) -> Result<&str> {
        Ok(self.cod.label(self.table[self.dom.require(x)?]))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinSetMap) -> Result<FinSetMap> {
        if f.cod != self.dom {
            return Err(Error::NotComposable(format!("{} after {}", self.show(), f.show())));
        }
        Ok(FinSetMap { dom: f.dom.clone(), cod: self.cod.clone(), table: f.table.iter().map(|&i| self.table[i]).collect() })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &j in &self.table {
            seen[j] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn show(&self) -> String {
        let pairs: Vec<String> =
            self.table.iter().enumerate().map(|(i, &j)| format!("{}:{}", self.dom.label(i), self.cod.label(j))).collect();
        format!("{{{}}}", pairs.join(","))
    }

    pub fn to_table(&self) -> BTreeMap<String, String> {
        self.table.iter().enumerate().map(|(i, &j)| (self.dom.label(i).to_string(), self.cod.label(j).to_string())).collect()
    }
}

/// Every map `dom -> cod`, lexicographic in the image of each element.
pub fn all_maps(dom: &FinSetObj, cod: &FinSetObj, budget: Budget) -> Result<Vec<FinSetMap>> {
    let count = (cod.len() as u128).checked_pow(dom.len() as u32).unwrap_or(u128::MAX);
    budget.check_count(|| format!("maps {dom} -> {cod}"), count)?;
    Ok(odometer(&vec![cod.len(); dom.len()])
        .map(|t| FinSetMap { dom: dom.clone(), cod: cod.clone(), table: t })
        .collect())
}

/// The category of finite sets, with hom-sets enumerated on demand.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSetCat;

impl Category for FinSetCat {
    type Obj = FinSetObj;
    type Mor = FinSetMap;

    fn dom(&self, f: &FinSetMap) -> FinSetObj {
        f.dom.clone()
    }

    fn cod(&self, f: &FinSetMap) -> FinSetObj {
        f.cod.clone()
    }

    fn identity(&self, x: &FinSetObj) -> FinSetMap {
        FinSetMap::identity(x)
    }

    fn compose(&self, g: &FinSetMap, f: &FinSetMap) -> Result<FinSetMap> {
        g.after(f)
    }

    fn hom(&self, x: &FinSetObj, y: &FinSetObj, budget: Budget) -> Result<Vec<FinSetMap>> {
        all_maps(x, y, budget)
    }

    fn show_obj(&self, x: &FinSetObj) -> String {
        x.to_string()
    }

    fn show_mor(&self, f: &FinSetMap) -> String {
        f.show()
    }
}

/// A diagram of finite sets indexed by a graph: one set per node, one map per
/// edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub shape: DiGraph,
    pub objects: Vec<FinSetObj>,
    pub maps: Vec<FinSetMap>,
}

impl Diagram {
    pub fn new(shape: DiGraph, objects: Vec<FinSetObj>, maps: Vec<FinSetMap>) -> Result<Self> {
        if objects.len() != shape.nodes().len() || maps.len() != shape.edges().len() {
            return Err(Error::invalid("diagram needs one set per node and one map per edge"));
        }
        for (e, m) in shape.edges().iter().zip(&maps) {
            let (s, t) = (shape.node_pos(&e.src).unwrap(), shape.node_pos(&e.dst).unwrap());
            if m.dom != objects[s] || m.cod != objects[t] {
                return Err(Error::CarrierMismatch(format!("map on edge `{}` does not match its endpoints", e.id)));
            }
        }
        Ok(Diagram { shape, objects, maps })
    }

    pub fn empty() -> Self {
        Diagram { shape: DiGraph::default(), objects: vec![], maps: vec![] }
    }

    pub fn discrete(objects: &[(&str, FinSetObj)]) -> Result<Self> {
        let names: Vec<&str> = objects.iter().map(|(n, _)| *n).collect();
        Diagram::new(DiGraph::from_parts(&names, &[])?, objects.iter().map(|(_, o)| o.clone()).collect(), vec![])
    }

    /// `f, g: A ⇉ B`.
    pub fn parallel(f: &FinSetMap, g: &FinSetMap) -> Result<Self> {
        let shape = DiGraph::from_parts(&["A", "B"], &[("f", "A", "B"), ("g", "A", "B")])?;
        Diagram::new(shape, vec![f.dom.clone(), f.cod.clone()], vec![f.clone(), g.clone()])
    }

    /// `p: E -> B <- C: r`.
    pub fn cospan(p: &FinSetMap, r: &FinSetMap) -> Result<Self> {
        let shape = DiGraph::from_parts(&["E", "B", "C"], &[("p", "E", "B"), ("r", "C", "B")])?;
        Diagram::new(shape, vec![p.dom.clone(), p.cod.clone(), r.dom.clone()], vec![p.clone(), r.clone()])
    }

    /// `f: B <- A -> C: g`.
    pub fn span(f: &FinSetMap, g: &FinSetMap) -> Result<Self> {
        let shape = DiGraph::from_parts(&["A", "B", "C"], &[("f", "A", "B"), ("g", "A", "C")])?;
        Diagram::new(shape, vec![f.dom.clone(), f.cod.clone(), g.cod.clone()], vec![f.clone(), g.clone()])
    }

    fn endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.shape.edges()[e];
        (self.shape.node_pos(&edge.src).unwrap(), self.shape.node_pos(&edge.dst).unwrap())
    }

    /// Nodes whose components determine a compatible tuple: sources first,
    /// then the least node of any part unreachable from them.
    fn roots(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut indeg = vec![0; n];
        for e in 0..self.maps.len() {
            indeg[self.endpoints(e).1] += 1;
        }
        let mut roots: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut reached = vec![false; n];
        loop {
            let mut stack = roots.clone();
            while let Some(v) = stack.pop() {
                if std::mem::replace(&mut reached[v], true) {
                    continue;
                }
                for e in 0..self.maps.len() {
                    let (s, t) = self.endpoints(e);
                    if s == v && !reached[t] {
                        stack.push(t);
                    }
                }
            }
            match (0..n).find(|&v| !reached[v]) {
                Some(v) => roots.push(v),
                None => break,
            }
        }
        roots.sort();
        roots
    }

    /// Tuples of the product compatible with every map, in lexicographic order.
    fn compatible_tuples(&self, budget: Budget) -> Result<Vec<Vec<usize>>> {
        let sizes: Vec<usize> = self.objects.iter().map(|o| o.len()).collect();
        let total = sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s as u128)).unwrap_or(u128::MAX);
        budget.check_count(|| "product tuples".into(), total)?;
        Ok(odometer(&sizes)
            .filter(|t| {
                (0..self.maps.len()).all(|e| {
                    let (s, d) = self.endpoints(e);
                    self.maps[e].apply(t[s]) == t[d]
                })
            })
            .collect())
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            shape: self.shape.clone(),
            objects: self.shape.nodes().iter().cloned().zip(self.objects.iter().map(|o| o.to_vec())).collect(),
            maps: self.shape.edges().iter().map(|e| e.id.clone()).zip(self.maps.iter().map(|m| m.to_table())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub shape: DiGraph,
    pub objects: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl DiagramJson {
    pub fn build(&self) -> Result<Diagram> {
        let objects = self
            .shape
            .nodes()
            .iter()
            .map(|n| {
                let elems = self.objects.get(n).ok_or_else(|| Error::NotTotal { missing: vec![format!("object {n}")] })?;
                FinSetObj::new(elems.iter().cloned())
            })
            .collect::<Result<Vec<_>>>()?;
        let maps = self
            .shape
            .edges()
            .iter()
            .map(|e| {
                let t = self.maps.get(&e.id).ok_or_else(|| Error::NotTotal { missing: vec![format!("map {}", e.id)] })?;
                let (s, d) = (self.shape.node_pos(&e.src).unwrap(), self.shape.node_pos(&e.dst).unwrap());
                FinSetMap::from_table(&objects[s], &objects[d], t)
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(self.shape.clone(), objects, maps)
    }
}

/// Apex with one leg per diagram node: into the nodes for a cone, out of them
/// for a cocone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: FinSetObj,
    pub legs: Vec<FinSetMap>,
}

impl Cone {
    pub fn to_json(&self, d: &Diagram) -> ConeJson {
        ConeJson {
            apex: self.apex.to_vec(),
            legs: d.shape.nodes().iter().cloned().zip(self.legs.iter().map(|l| l.to_table())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub apex: Vec<String>,
    pub legs: BTreeMap<String, BTreeMap<String, String>>,
}

fn tuple_label(parts: &[&str]) -> String {
    match parts {
        [one] => one.to_string(),
        _ => format!("({})", parts.join(",")),
    }
}

/// Limit as compatible tuples in the product; each element is named by its
/// components at the root nodes.
pub fn limit(d: &Diagram, budget: Budget) -> Result<Cone> {
    let tuples = d.compatible_tuples(budget)?;
    let roots = d.roots();
    let labels: Vec<String> = tuples
        .iter()
        .map(|t| tuple_label(&roots.iter().map(|&v| d.objects[v].label(t[v])).collect::<Vec<_>>()))
        .collect();
    let apex = FinSetObj::new(labels)?;
    let legs = (0..d.objects.len())
        .map(|v| FinSetMap::new(apex.clone(), d.objects[v].clone(), tuples.iter().map(|t| t[v]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cone { apex, legs })
}

/// Colimit as the coproduct modulo the generated equivalence; each class is
/// named by its first member `(node,element)`.
pub fn colimit(d: &Diagram, budget: Budget) -> Result<Cone> {
    let mut offsets = Vec::with_capacity(d.objects.len());
    let mut total = 0usize;
    for o in &d.objects {
        offsets.push(total);
        total += o.len();
    }
    budget.check_size(|| "coproduct".into(), total as u128)?;
    let mut uf = UnionFind::new(total);
    for (e, m) in d.maps.iter().enumerate() {
        let (s, t) = d.endpoints(e);
        for (i, &j) in m.table().iter().enumerate() {
            uf.union(offsets[s] + i, offsets[t] + j);
        }
    }
    let nodes = d.shape.nodes();
    let mut class_index = BTreeMap::new();
    let mut labels = Vec::new();
    let mut class_of = vec![0; total];
    for (v, o) in d.objects.iter().enumerate() {
        for i in 0..o.len() {
            let root = uf.find(offsets[v] + i);
            let next = class_index.len();
            let c = *class_index.entry(root).or_insert(next);
            if c == labels.len() {
                labels.push(format!("({},{})", nodes[v], o.label(i)));
            }
            class_of[offsets[v] + i] = c;
        }
    }
    let apex = FinSetObj::new(labels)?;
    let legs = d
        .objects
        .iter()
        .enumerate()
        .map(|(v, o)| FinSetMap::new(o.clone(), apex.clone(), (0..o.len()).map(|i| class_of[offsets[v] + i]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cone { apex, legs })
}

/// Largest competing apex used by the verifiers. A cone over a `k`-element
/// apex is a `k`-tuple of cones over a point, so sizes 0, 1 and 2 already
/// detect both a missing and a non-unique mediator.
pub const TEST_APEX_MAX: usize = 2;

fn test_apex(k: usize) -> FinSetObj {
    FinSetObj::new((0..k).map(|i| format!("w{i}"))).expect("distinct")
}

fn cone_commutes(d: &Diagram, c: &Cone, r: &mut LawReport, outgoing: bool) -> bool {
    let mut ok = true;
    if c.legs.len() != d.objects.len() {
        r.violate("commutes", "legs", "one leg per node required");
        return false;
    }
    for (e, m) in d.maps.iter().enumerate() {
        let (s, t) = d.endpoints(e);
        let id = &d.shape.edges()[e].id;
        // cone: D(e) ∘ leg_s = leg_t; cocone: leg_t ∘ D(e) = leg_s
        let holds = if outgoing {
            c.legs[t].after(m).map(|x| x == c.legs[s])
        } else {
            m.after(&c.legs[s]).map(|x| x == c.legs[t])
        };
        ok &= r.expect(holds == Ok(true), "commutes", || id.clone(), || "leg square fails".into());
    }
    ok
}

/// Checks that `c` commutes and that every cone over a test apex factors
/// through it by exactly one map.
pub fn verify_limit_cone(d: &Diagram, c: &Cone, budget: Budget) -> Result<LawReport> {
    let mut r = LawReport::new("limit cone");
    if !cone_commutes(d, c, &mut r, false) {
        return Ok(r);
    }
    let points = d.compatible_tuples(budget)?;
    for k in 0..=TEST_APEX_MAX {
        let w = test_apex(k);
        let mediators = all_maps(&w, &c.apex, budget)?;
        for choice in odometer(&vec![points.len(); k]) {
            // competing cone: element i of W goes to tuple points[choice[i]]
            let competing: Vec<Vec<usize>> =
                (0..d.objects.len()).map(|v| choice.iter().map(|&p| points[p][v]).collect()).collect();
            let count = mediators
                .iter()
                .filter(|u| (0..d.objects.len()).all(|v| u.table().iter().map(|&a| c.legs[v].apply(a)).eq(competing[v].iter().copied())))
                .count();
            mediator_verdict(&mut r, count, || format!("apex of size {k}, tuples {choice:?}"));
        }
    }
    Ok(r)
}

/// Dual of [`verify_limit_cone`] for cocones.
pub fn verify_colimit_cocone(d: &Diagram, c: &Cone, budget: Budget) -> Result<LawReport> {
    let mut r = LawReport::new("colimit cocone");
    if !cone_commutes(d, c, &mut r, true) {
        return Ok(r);
    }
    let sizes: Vec<usize> = d.objects.iter().map(|o| o.len()).collect();
    let total: usize = sizes.iter().sum();
    for k in 0..=TEST_APEX_MAX {
        let w = test_apex(k);
        let count = (k as u128).checked_pow(total as u32).unwrap_or(u128::MAX);
        budget.check_count(|| "competing cocones".into(), count)?;
        let mediators = all_maps(&c.apex, &w, budget)?;
        // a competing cocone is a map from the coproduct to W respecting D
        for flat in odometer(&vec![k; total]) {
            let mut legs = Vec::with_capacity(sizes.len());
            let mut at = 0;
            for (v, &s) in sizes.iter().enumerate() {
                legs.push(FinSetMap::new(d.objects[v].clone(), w.clone(), flat[at..at + s].to_vec())?);
                at += s;
            }
            let compatible = d.maps.iter().enumerate().all(|(e, m)| {
                let (s, t) = d.endpoints(e);
                legs[t].after(m).map(|x| x == legs[s]).unwrap_or(false)
            });
            if !compatible {
                continue;
            }
            let count = mediators
                .iter()
                .filter(|u| legs.iter().zip(&c.legs).all(|(psi, leg)| u.after(leg).map(|x| &x == psi).unwrap_or(false)))
                .count();
            mediator_verdict(&mut r, count, || format!("apex of size {k}, legs {flat:?}"));
        }
    }
    Ok(r)
}

fn mediator_verdict(r: &mut LawReport, count: usize, at: impl Fn() -> String) {
    r.expect(count >= 1, "mediator exists", &at, || "no mediating map".into());
    if count >= 1 {
        r.expect(count == 1, "mediator unique", &at, || format!("{count} mediating maps"));
    }
}

/// A pullback square `P -> E`, `P -> C` over `p: E -> B <- C: r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub p: FinSetMap,
    pub r: FinSetMap,
    pub apex: FinSetObj,
    pub pi1: FinSetMap,
    pub pi2: FinSetMap,
}

/// `{(e,c) | p(e) = r(c)}` with its projections.
pub fn pullback(p: &FinSetMap, r: &FinSetMap) -> Result<Pullback> {
    if p.cod != r.cod {
        return Err(Error::CarrierMismatch(format!("codomains {} and {} differ", p.cod, r.cod)));
    }
    let d = Diagram::cospan(p, r)?;
    let mut cone = limit_unbounded(&d)?;
    let pi2 = cone.legs.pop().unwrap();
    cone.legs.pop();
    let pi1 = cone.legs.pop().unwrap();
    // single-root labels would drop the pair form; keep "(e,c)" always
    let labels: Vec<String> =
        (0..cone.apex.len()).map(|i| format!("({},{})", p.dom.label(pi1.apply(i)), r.dom.label(pi2.apply(i)))).collect();
    let apex = FinSetObj::new(labels)?;
    let pi1 = FinSetMap::new(apex.clone(), pi1.cod, pi1.table)?;
    let pi2 = FinSetMap::new(apex.clone(), pi2.cod, pi2.table)?;
    Ok(Pullback { p: p.clone(), r: r.clone(), apex, pi1, pi2 })
}

fn limit_unbounded(d: &Diagram) -> Result<Cone> {
    limit(d, Budget { max_candidates: u64::MAX, max_elements: usize::MAX })
}

impl Pullback {
    pub fn diagram(&self) -> Result<Diagram> {
        Diagram::cospan(&self.p, &self.r)
    }

    pub fn cone(&self) -> Result<Cone> {
        Ok(Cone { apex: self.apex.clone(), legs: vec![self.pi1.clone(), self.p.after(&self.pi1)?, self.pi2.clone()] })
    }

    /// The unique `u: W -> P` with `pi1 u = s` and `pi2 u = t`.
    pub fn mediator(&self, s: &FinSetMap, t: &FinSetMap) -> Result<FinSetMap> {
        if s.dom != t.dom || s.cod != self.p.dom || t.cod != self.r.dom {
            return Err(Error::CarrierMismatch("mediator legs do not match the cospan".into()));
        }
        let table = (0..s.dom.len())
            .map(|w| {
                let (e, c) = (s.apply(w), t.apply(w));
                if self.p.apply(e) != self.r.apply(c) {
                    return Err(Error::invalid(format!("legs disagree over the base at `{}`", s.dom.label(w))));
                }
                Ok((0..self.apex.len()).find(|&i| self.pi1.apply(i) == e && self.pi2.apply(i) == c).unwrap())
            })
            .collect::<Result<Vec<_>>>()?;
        FinSetMap::new(s.dom.clone(), self.apex.clone(), table)
    }
}
