//! Concrete categories used by the built-in adjunctions: graphs, finite
//! categories, and finite G-sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{odometer, Budget, Category};
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::finset::{all_maps, FinSetMap, FinSetObj};
use crate::foundations::{DiGraph, GraphHom};
use crate::functcat::{enumerate_functors, Functor};

/// A graph homomorphism together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMor {
    pub dom: Arc<DiGraph>,
    pub cod: Arc<DiGraph>,
    pub hom: GraphHom,
}

impl GraphMor {
    pub fn new(dom: &Arc<DiGraph>, cod: &Arc<DiGraph>, hom: GraphHom) -> Result<Self> {
        let bad = crate::foundations::check_graph_hom(&hom, dom, cod)?;
        if let Some(v) = bad.first() {
            return Err(Error::invalid(format!("not a graph map at {}: {}", v.edge, v.detail)));
        }
        Ok(GraphMor { dom: dom.clone(), cod: cod.clone(), hom })
    }
}

/// Finite directed multigraphs and their homomorphisms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GrphCat;

impl Category for GrphCat {
    type Obj = Arc<DiGraph>;
    type Mor = GraphMor;

    fn dom(&self, f: &GraphMor) -> Arc<DiGraph> {
        f.dom.clone()
    }

    fn cod(&self, f: &GraphMor) -> Arc<DiGraph> {
        f.cod.clone()
    }

    fn identity(&self, x: &Arc<DiGraph>) -> GraphMor {
        GraphMor { dom: x.clone(), cod: x.clone(), hom: GraphHom::identity(x) }
    }

    fn compose(&self, g: &GraphMor, f: &GraphMor) -> Result<GraphMor> {
        if f.cod != g.dom {
            return Err(Error::NotComposable("graph maps".into()));
        }
        let hom = GraphHom {
            nodes: f.hom.nodes.iter().map(|(k, v)| (k.clone(), g.hom.nodes[v].clone())).collect(),
            edges: f.hom.edges.iter().map(|(k, v)| (k.clone(), g.hom.edges[v].clone())).collect(),
        };
        Ok(GraphMor { dom: f.dom.clone(), cod: g.cod.clone(), hom })
    }

    fn hom(&self, x: &Arc<DiGraph>, y: &Arc<DiGraph>, budget: Budget) -> Result<Vec<GraphMor>> {
        let (xn, yn) = (x.nodes(), y.nodes());
        let count = (yn.len() as u128).checked_pow(xn.len() as u32).unwrap_or(u128::MAX);
        budget.check_count(|| "graph node maps".into(), count)?;
        let mut out = Vec::new();
        for pick in odometer(&vec![yn.len(); xn.len()]) {
            let nodes: BTreeMap<String, String> =
                xn.iter().zip(&pick).map(|(a, &i)| (a.clone(), yn[i].clone())).collect();
            let options: Vec<Vec<&String>> = x
                .edges()
                .iter()
                .map(|e| {
                    y.edges().iter().filter(|u| u.src == nodes[&e.src] && u.dst == nodes[&e.dst]).map(|u| &u.id).collect()
                })
                .collect();
            for choice in odometer(&options.iter().map(Vec::len).collect::<Vec<_>>()) {
                let edges = x.edges().iter().zip(&choice).zip(&options).map(|((e, &k), o)| (e.id.clone(), o[k].clone()));
                out.push(GraphMor { dom: x.clone(), cod: y.clone(), hom: GraphHom { nodes: nodes.clone(), edges: edges.collect() } });
                budget.check_count(|| "graph maps".into(), out.len() as u128)?;
            }
        }
        Ok(out)
    }

    fn show_obj(&self, x: &Arc<DiGraph>) -> String {
        let edges: Vec<String> = x.edges().iter().map(|e| format!("{}:{}->{}", e.id, e.src, e.dst)).collect();
        format!("<{}|{}>", x.nodes().join(","), edges.join(","))
    }

    fn show_mor(&self, f: &GraphMor) -> String {
        let nodes: Vec<String> = f.hom.nodes.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        let edges: Vec<String> = f.hom.edges.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        format!("{{{}|{}}}", nodes.join(","), edges.join(","))
    }
}

/// Finite categories and functors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CatCat;

impl Category for CatCat {
    type Obj = Arc<FinCat>;
    type Mor = Functor;

    fn dom(&self, f: &Functor) -> Arc<FinCat> {
        f.source().clone()
    }

    fn cod(&self, f: &Functor) -> Arc<FinCat> {
        f.target().clone()
    }

    fn identity(&self, x: &Arc<FinCat>) -> Functor {
        Functor::identity(x)
    }

    fn compose(&self, g: &Functor, f: &Functor) -> Result<Functor> {
        f.then(g)
    }

    fn hom(&self, x: &Arc<FinCat>, y: &Arc<FinCat>, budget: Budget) -> Result<Vec<Functor>> {
        enumerate_functors(x, y, budget)
    }

    fn show_obj(&self, x: &Arc<FinCat>) -> String {
        format!("<{}|{}>", x.objects().join(","), x.num_morphisms())
    }

    fn show_mor(&self, f: &Functor) -> String {
        let (s, t) = (f.source(), f.target());
        let objs: Vec<String> = s.object_ids().map(|o| format!("{}:{}", s.obj_name(o), t.obj_name(f.obj(o)))).collect();
        let mors: Vec<String> = s
            .morphism_ids()
            .filter(|&m| !s.is_identity(m))
            .map(|m| format!("{}:{}", s.label(m), t.label(f.mor(m))))
            .collect();
        format!("{{{}|{}}}", objs.join(","), mors.join(","))
    }
}

/// A finite group by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinGroup {
    pub elements: FinSetObj,
    /// `mul[g][h] = gh`.
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
}

impl FinGroup {
    /// `Z/n` with elements `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("the trivial group has one element"));
        }
        let mul = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Ok(FinGroup { elements: FinSetObj::range(n), mul, unit: 0 })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::invalid("multiplication table has the wrong shape"));
        }
        for g in 0..n {
            if self.mul[self.unit][g] != g || self.mul[g][self.unit] != g {
                return Err(Error::invalid("unit law fails"));
            }
            if !(0..n).any(|h| self.mul[g][h] == self.unit) {
                return Err(Error::invalid(format!("{} has no inverse", self.elements.label(g))));
            }
            for h in 0..n {
                for k in 0..n {
                    if self.mul[self.mul[g][h]][k] != self.mul[g][self.mul[h][k]] {
                        return Err(Error::invalid("multiplication is not associative"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite set with a left action `act[g][x] = g·x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GSet {
    pub group: Arc<FinGroup>,
    pub set: FinSetObj,
    pub act: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: &Arc<FinGroup>, set: FinSetObj, act: Vec<Vec<usize>>) -> Result<Self> {
        let (n, m) = (group.order(), set.len());
        if act.len() != n || act.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(Error::invalid("action table has the wrong shape"));
        }
        for x in 0..m {
            if act[group.unit][x] != x {
                return Err(Error::Law(format!("unit does not fix `{}`", set.label(x))));
            }
            for g in 0..n {
                for h in 0..n {
                    if act[group.mul[g][h]][x] != act[g][act[h][x]] {
                        return Err(Error::Law(format!("(gh)·x != g·(h·x) at `{}`", set.label(x))));
                    }
                }
            }
        }
        Ok(GSet { group: group.clone(), set, act })
    }

    /// `G × X` with `g·(h,x) = (gh,x)`; elements are `"(h,x)"` at index
    /// `h·|X| + x`.
    pub fn free(group: &Arc<FinGroup>, x: &FinSetObj) -> Result<Self> {
        let set = product_set(&group.elements, x)?;
        let m = x.len();
        let act = (0..group.order())
            .map(|g| (0..set.len()).map(|i| group.mul[g][i / m.max(1)] * m + i % m.max(1)).collect())
            .collect();
        Ok(GSet { group: group.clone(), set, act })
    }
}

/// `{(a,b)}` in row-major order.
pub fn product_set(a: &FinSetObj, b: &FinSetObj) -> Result<FinSetObj> {
    FinSetObj::new(a.elements().flat_map(|x| b.elements().map(move |y| format!("({x},{y})"))))
}

/// Every action of `group` on `set`, in lexicographic order of the tables.
pub fn all_actions(group: &Arc<FinGroup>, set: &FinSetObj, budget: Budget) -> Result<Vec<GSet>> {
    let (n, m) = (group.order(), set.len());
    let perms = all_maps(set, set, budget)?;
    let perms: Vec<&FinSetMap> = perms.iter().filter(|p| p.is_injective()).collect();
    let count = (perms.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    budget.check_count(|| "action tables".into(), count)?;
    let mut out = Vec::new();
    for pick in odometer(&vec![perms.len(); n]) {
        let act: Vec<Vec<usize>> = pick.iter().map(|&i| perms[i].table().to_vec()).collect();
        if act.len() == n && act.iter().all(|r| r.len() == m) {
            if let Ok(s) = GSet::new(group, set.clone(), act) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equivariant {
    pub dom: GSet,
    pub cod: GSet,
    pub map: FinSetMap,
}

/// Finite G-sets and equivariant maps for a fixed group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSetCat {
    pub group: Arc<FinGroup>,
}

impl Category for GSetCat {
    type Obj = GSet;
    type Mor = Equivariant;

    fn dom(&self, f: &Equivariant) -> GSet {
        f.dom.clone()
    }

    fn cod(&self, f: &Equivariant) -> GSet {
        f.cod.clone()
    }

    fn identity(&self, x: &GSet) -> Equivariant {
        Equivariant { dom: x.clone(), cod: x.clone(), map: FinSetMap::identity(&x.set) }
    }

    fn compose(&self, g: &Equivariant, f: &Equivariant) -> Result<Equivariant> {
        if f.cod != g.dom {
            return Err(Error::NotComposable("equivariant maps".into()));
        }
        Ok(Equivariant { dom: f.dom.clone(), cod: g.cod.clone(), map: g.map.after(&f.map)? })
    }

    fn hom(&self, x: &GSet, y: &GSet, budget: Budget) -> Result<Vec<Equivariant>> {
        let n = self.group.order();
        Ok(all_maps(&x.set, &y.set, budget)?
            .into_iter()
            .filter(|f| (0..n).all(|g| (0..x.set.len()).all(|i| f.apply(x.act[g][i]) == y.act[g][f.apply(i)])))
            .map(|map| Equivariant { dom: x.clone(), cod: y.clone(), map })
            .collect())
    }

    fn show_obj(&self, x: &GSet) -> String {
        let gens: Vec<String> = (0..x.group.order())
            .filter(|&g| g != x.group.unit)
            .map(|g| {
                let t: Vec<&str> = x.act[g].iter().map(|&i| x.set.label(i)).collect();
                format!("{}:[{}]", x.group.elements.label(g), t.join(","))
            })
            .collect();
        format!("{}<{}>", x.set, gens.join(";"))
    }

    fn show_mor(&self, f: &Equivariant) -> String {
        f.map.show()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::free_category;

    #[test]
    fn graph_homs_counted() {
        // maps from a single edge into a 2-cycle: choose the source node, then the edge is forced
        let e = Arc::new(DiGraph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap());
        let c2 = Arc::new(DiGraph::from_parts(&["x", "y"], &[("f", "x", "y"), ("g", "y", "x")]).unwrap());
        assert_eq!(GrphCat.hom(&e, &c2, Budget::default()).unwrap().len(), 2);
        // into a single loop: one map
        let l = Arc::new(DiGraph::from_parts(&["x"], &[("l", "x", "x")]).unwrap());
        assert_eq!(GrphCat.hom(&e, &l, Budget::default()).unwrap().len(), 1);
        assert!(GrphCat.hom(&l, &e, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn functors_as_morphisms() {
        let c = Arc::new(FinCat::chain(2));
        let homs = CatCat.hom(&c, &c, Budget::default()).unwrap();
        assert_eq!(homs.len(), 3);
        let p = Arc::new(free_category(&DiGraph::from_parts(&["a"], &[]).unwrap(), 1).unwrap());
        assert_eq!(CatCat.hom(&p, &c, Budget::default()).unwrap().len(), 2);
    }

    #[test]
    fn z2_actions_are_involutions() {
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        g.validate().unwrap();
        for (n, expect) in [(0, 1), (1, 1), (2, 2), (3, 4)] {
            assert_eq!(all_actions(&g, &FinSetObj::range(n), Budget::default()).unwrap().len(), expect);
        }
        let free = GSet::free(&g, &FinSetObj::of(&["x"])).unwrap();
        assert_eq!(free.set.to_vec(), ["(0,x)", "(1,x)"]);
        assert_eq!(free.act[1], [1, 0]);
        assert!(GSet::new(&g, free.set.clone(), free.act.clone()).is_ok());
    }
}
