//! Built-in monads and adjunctions: covariant powerset, free G-sets, and
//! free category ⊣ underlying graph with its monad of paths.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::concrete::{product_set, Equivariant, FinGroup, GSet, GSetCat, GraphMor, GrphCat, CatCat};
use super::{sampled, Adjunction, Monad, Sampler};
use crate::category::{check_functor_on, Budget, Category, FunctorFn, NatFn, Universe};
use crate::error::{Error, Result};
use crate::fincat::{forget_to_graph, free_category, Certification, FinCat, PathSpec};
use crate::finset::{FinSetCat, FinSetMap, FinSetObj};
use crate::foundations::{DiGraph, GraphHom};
use crate::functcat::Functor;
use crate::presheaf::path_functor;
use crate::report::{Coverage, LawReport};

pub const ASSOC_SAMPLES: u64 = 4096;
pub const ASSOC_SEED: u64 = 0x5eed_0001;

fn subset_label(x: &FinSetObj, mask: usize) -> String {
    let items: Vec<&str> = (0..x.len()).filter(|i| mask >> i & 1 == 1).map(|i| x.label(i)).collect();
    format!("{{{}}}", items.join(","))
}

/// `P(X)`: subset with bitmask `m` sits at index `m`.
pub fn powerset(x: &FinSetObj, budget: Budget) -> Result<FinSetObj> {
    let n = x.len();
    let size = if n >= 64 { u128::MAX } else { 1u128 << n };
    budget.check_size(|| format!("powerset of a {n}-element set"), size)?;
    FinSetObj::new((0..1usize << n).map(|m| subset_label(x, m)))
}

/// Direct image `P(f)`.
pub fn powerset_map(f: &FinSetMap, budget: Budget) -> Result<FinSetMap> {
    let (px, py) = (powerset(&f.dom, budget)?, powerset(&f.cod, budget)?);
    let table = (0..px.len())
        .map(|m| (0..f.dom.len()).filter(|i| m >> i & 1 == 1).fold(0usize, |acc, i| acc | 1 << f.apply(i)))
        .collect();
    FinSetMap::new(px, py, table)
}

/// Union `PPX -> PX`; an element of `PPX` is a bitmask over `PX` indices,
/// which are themselves bitmasks over `X`.
fn union_mult(x: &FinSetObj, budget: Budget) -> Result<FinSetMap> {
    let px = powerset(x, budget)?;
    let ppx = powerset(&px, budget)?;
    let table = (0..ppx.len()).map(|mm| (0..px.len()).filter(|u| mm >> u & 1 == 1).fold(0, |acc, u| acc | u)).collect();
    FinSetMap::new(ppx, px, table)
}

/// Intersection `PPX -> PX`, the empty family going to `X`. With singleton
/// unit and direct image this is not a monad.
pub fn intersection_mult(x: &FinSetObj, budget: Budget) -> Result<FinSetMap> {
    let px = powerset(x, budget)?;
    let ppx = powerset(&px, budget)?;
    let full = px.len() - 1;
    let table =
        (0..ppx.len()).map(|mm| (0..px.len()).filter(|u| mm >> u & 1 == 1).fold(full, |acc, u| acc & u)).collect();
    FinSetMap::new(ppx, px, table)
}

/// The covariant powerset monad on finite sets: direct image, singletons,
/// union. When `T³X` exceeds the budget associativity at `X` is sampled.
pub fn powerset_monad(universe: Universe<FinSetCat>, budget: Budget) -> Monad<FinSetCat> {
    let mult: NatFn<FinSetCat, FinSetCat> = NatFn::new("∪", move |x: &FinSetObj| union_mult(x, budget));
    let m2 = mult.clone();
    let sampler: Sampler<FinSetCat> = Arc::new(move |x: &FinSetObj, r: &mut LawReport| {
        let mu = m2.at(x)?;
        let ppx_len = mu.dom.len();
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED ^ x.len() as u64);
        for _ in 0..ASSOC_SAMPLES {
            // a random element of PPPX, as a list of PPX indices
            let k = rng.gen_range(0..=6);
            let s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..ppx_len)).collect();
            let image = s.iter().fold(0usize, |acc, &u| acc | 1 << mu.apply(u));
            let union = s.iter().fold(0usize, |acc, &u| acc | u);
            let (lhs, rhs) = (mu.apply(image), mu.apply(union));
            r.expect(lhs == rhs, "associativity", || format!("{x} at {s:?}"), || {
                format!("μ∘Tμ gives {} but μ∘μT gives {}", mu.cod.label(lhs), mu.cod.label(rhs))
            });
        }
        sampled(r, ASSOC_SAMPLES, ASSOC_SEED);
        Ok(())
    });
    Monad {
        name: "powerset".into(),
        c: Arc::new(FinSetCat),
        endo: FunctorFn::new("P", move |x: &FinSetObj| powerset(x, budget), move |f: &FinSetMap| powerset_map(f, budget)),
        unit: NatFn::new("{-}", move |x: &FinSetObj| {
            FinSetMap::new(x.clone(), powerset(x, budget)?, (0..x.len()).map(|i| 1 << i).collect())
        }),
        mult,
        universe,
        sampler: Some(sampler),
    }
}

/// `id × f: G×X -> G×Y`.
fn times_group(group: &FinGroup, f: &FinSetMap) -> Result<FinSetMap> {
    let (m, n) = (f.dom.len(), f.cod.len());
    let dom = product_set(&group.elements, &f.dom)?;
    let cod = product_set(&group.elements, &f.cod)?;
    let table = (0..dom.len()).map(|i| (i / m) * n + f.apply(i % m)).collect();
    FinSetMap::new(dom, cod, table)
}

fn insert_unit(group: &FinGroup, x: &FinSetObj) -> Result<FinSetMap> {
    let cod = product_set(&group.elements, x)?;
    FinSetMap::new(x.clone(), cod, (0..x.len()).map(|i| group.unit * x.len() + i).collect())
}

/// Free G-set ⊣ underlying set. `η_X(x) = (1,x)`, `ε_A(g,a) = g·a`. The
/// universes are the given sets and every action on each of them.
pub fn group_action_adjunction(
    group: Arc<FinGroup>,
    sets: Vec<FinSetObj>,
    budget: Budget,
) -> Result<Adjunction<FinSetCat, GSetCat>> {
    group.validate()?;
    let mut actions = Vec::new();
    for s in &sets {
        actions.extend(super::concrete::all_actions(&group, s, budget)?);
    }
    let d = Arc::new(GSetCat { group: group.clone() });
    let universe_c = Universe::full(&FinSetCat, sets, budget)?;
    let universe_d = Universe::full(&*d, actions, budget)?;
    let (g1, g2, g3, g4) = (group.clone(), group.clone(), group.clone(), group.clone());
    let left = FunctorFn::new(
        "G×-",
        move |x: &FinSetObj| GSet::free(&g1, x),
        move |f: &FinSetMap| {
            Ok(Equivariant { dom: GSet::free(&g2, &f.dom)?, cod: GSet::free(&g2, &f.cod)?, map: times_group(&g2, f)? })
        },
    );
    let right = FunctorFn::new("U", |a: &GSet| Ok(a.set.clone()), |f: &Equivariant| Ok(f.map.clone()));
    Ok(Adjunction {
        name: format!("free {}-set", group.order()),
        c: Arc::new(FinSetCat),
        d,
        left,
        right,
        unit: NatFn::new("η", move |x: &FinSetObj| insert_unit(&g3, x)),
        counit: NatFn::new("ε", move |a: &GSet| {
            let free = GSet::free(&g4, &a.set)?;
            let m = a.set.len();
            let table = (0..free.set.len()).map(|i| a.act[i / m][i % m]).collect();
            Ok(Equivariant { dom: free.clone(), cod: a.clone(), map: FinSetMap::new(free.set, a.set.clone(), table)? })
        }),
        universe_c,
        universe_d,
    })
}

/// `T X = G × X` built directly: `η(x) = (1,x)`, `μ(g,(h,x)) = (gh,x)`.
pub fn group_action_monad(group: Arc<FinGroup>, universe: Universe<FinSetCat>) -> Result<Monad<FinSetCat>> {
    group.validate()?;
    let (g1, g2, g3, g4) = (group.clone(), group.clone(), group.clone(), group);
    Ok(Monad {
        name: format!("{}×-", g1.order()),
        c: Arc::new(FinSetCat),
        endo: FunctorFn::new(
            "G×-",
            move |x: &FinSetObj| product_set(&g1.elements, x),
            move |f: &FinSetMap| times_group(&g2, f),
        ),
        unit: NatFn::new("η", move |x: &FinSetObj| insert_unit(&g3, x)),
        mult: NatFn::new("μ", move |x: &FinSetObj| {
            let tx = product_set(&g4.elements, x)?;
            let ttx = product_set(&g4.elements, &tx)?;
            let (m, tm) = (x.len(), tx.len());
            let table = (0..ttx.len()).map(|i| g4.mul[i / tm][(i % tm) / m] * m + i % m).collect();
            FinSetMap::new(ttx, tx, table)
        }),
        universe,
        sampler: None,
    })
}

/// Free categories keyed by graph, so that `F` returns the same `Arc` for
/// equal graphs and functor equality stays cheap.
#[derive(Clone)]
struct FreeCache {
    bound: usize,
    cats: Arc<Mutex<HashMap<DiGraph, Arc<FinCat>>>>,
}

impl FreeCache {
    fn new(bound: usize) -> Self {
        FreeCache { bound, cats: Arc::new(Mutex::new(HashMap::new())) }
    }

    fn get(&self, g: &DiGraph) -> Result<Arc<FinCat>> {
        if let Some(c) = self.cats.lock().expect("cache lock").get(g) {
            return Ok(c.clone());
        }
        let c = Arc::new(free_category(g, self.bound)?);
        Ok(self.cats.lock().expect("cache lock").entry(g.clone()).or_insert(c).clone())
    }
}

fn underlying(c: &FinCat) -> Arc<DiGraph> {
    Arc::new(forget_to_graph(c, false))
}

/// `U φ`: objects by name, morphisms by label.
fn underlying_map(f: &Functor) -> GraphMor {
    let (s, t) = (f.source(), f.target());
    let nodes = s.object_ids().map(|o| (s.obj_name(o).to_string(), t.obj_name(f.obj(o)).to_string())).collect();
    let edges = s.morphism_ids().map(|m| (s.label(m).to_string(), t.label(f.mor(m)).to_string())).collect();
    GraphMor { dom: underlying(s), cod: underlying(t), hom: GraphHom { nodes, edges } }
}

/// `η_X: X -> U Path_k X`, each edge to its one-edge path.
fn path_unit(x: &Arc<DiGraph>, px: &FinCat) -> Result<GraphMor> {
    let nodes = x.nodes().iter().map(|n| (n.clone(), n.clone())).collect();
    let mut edges = BTreeMap::new();
    for e in x.edges() {
        let m = px.mor_by_path(&PathSpec { src: e.src.clone(), edges: vec![e.id.clone()] })?;
        edges.insert(e.id.clone(), px.label(m).to_string());
    }
    Ok(GraphMor { dom: x.clone(), cod: underlying(px), hom: GraphHom { nodes, edges } })
}

/// `ε_C: Path_k(U C) -> C`, composing paths in `C`.
fn path_counit(fuc: &Arc<FinCat>, c: &Arc<FinCat>) -> Result<Functor> {
    let objects = fuc.object_ids().map(|o| c.obj(fuc.obj_name(o))).collect::<Result<Vec<_>>>()?;
    let mut morphisms = Vec::new();
    for m in fuc.morphism_ids() {
        let path = fuc.info(m).path.as_deref().unwrap_or_default();
        let mut acc = c.id(objects[fuc.src(m).0]);
        for label in path {
            acc = c.compose(c.mor(label)?, acc)?;
        }
        morphisms.push(acc);
    }
    Functor::new(fuc.clone(), c.clone(), objects, morphisms)
}

/// `Path_k ⊣ U` between graphs and finite categories, with paths of length
/// at most `bound`. The universe graphs should be acyclic with paths no
/// longer than `bound`, so that `Path_k` is exactly the free category.
pub fn path_forget(
    bound: usize,
    graphs: Vec<DiGraph>,
    cats: Vec<Arc<FinCat>>,
    budget: Budget,
) -> Result<Adjunction<GrphCat, CatCat>> {
    let cache = FreeCache::new(bound);
    let graphs: Vec<Arc<DiGraph>> = graphs.into_iter().map(Arc::new).collect();
    let universe_c = Universe::full(&GrphCat, graphs, budget)?;
    let universe_d = Universe::full(&CatCat, cats, budget)?;
    let (k1, k2, k3, k4) = (cache.clone(), cache.clone(), cache.clone(), cache);
    let left = FunctorFn::new(
        "Path",
        move |x: &Arc<DiGraph>| k1.get(x),
        move |f: &GraphMor| path_functor(&k2.get(&f.dom)?, &k2.get(&f.cod)?, &f.hom),
    );
    let right = FunctorFn::new("U", |c: &Arc<FinCat>| Ok(underlying(c)), |f: &Functor| Ok(underlying_map(f)));
    Ok(Adjunction {
        name: format!("Path_{bound} ⊣ U"),
        c: Arc::new(GrphCat),
        d: Arc::new(CatCat),
        left,
        right,
        unit: NatFn::new("η", move |x: &Arc<DiGraph>| path_unit(x, &*k3.get(x)?)),
        counit: NatFn::new("ε", move |c: &Arc<FinCat>| path_counit(&k4.get(&underlying(c))?, c)),
        universe_c,
        universe_d,
    })
}

/// The monad of paths `T G = U(Path_k G)` on graphs, identities kept as
/// loops. `T²G` and `T³G` are infinite for every nonempty `G`, so they are
/// cut at `bound` and the laws are checked elementwise by
/// [`check_upath_laws`].
#[derive(Clone)]
pub struct Upath {
    pub bound: usize,
    cache: FreeCache,
}

impl Upath {
    pub fn new(bound: usize) -> Self {
        Upath { bound, cache: FreeCache::new(bound) }
    }

    fn paths(&self, g: &DiGraph) -> Result<Arc<FinCat>> {
        self.cache.get(g)
    }

    pub fn apply(&self, g: &DiGraph) -> Result<Arc<DiGraph>> {
        Ok(underlying(&*self.paths(g)?))
    }

    /// `T f`: a path maps to the path of images.
    pub fn map(&self, f: &GraphMor) -> Result<GraphMor> {
        Ok(underlying_map(&path_functor(&self.paths(&f.dom)?, &self.paths(&f.cod)?, &f.hom)?))
    }

    pub fn unit(&self, g: &Arc<DiGraph>) -> Result<GraphMor> {
        path_unit(g, &*self.paths(g)?)
    }

    /// Concatenates a path of `T G` edges into one path of `G`, as a `T G`
    /// edge label.
    fn flatten(&self, g: &DiGraph, src: &str, tg_edges: &[String]) -> Result<String> {
        let p1 = self.paths(g)?;
        let mut edges = Vec::new();
        for label in tg_edges {
            edges.extend(p1.info(p1.mor(label)?).path.clone().unwrap_or_default());
        }
        let m = p1.mor_by_path(&PathSpec { src: src.to_string(), edges })?;
        Ok(p1.label(m).to_string())
    }

    /// `μ_G: T T G -> T G`. Total: a path of at most `bound` paths of `G`
    /// concatenates to a path of `G`, which fits whenever `Path_k G` is exact.
    pub fn mult(&self, g: &Arc<DiGraph>) -> Result<GraphMor> {
        let tg = self.apply(g)?;
        let p2 = self.paths(&tg)?;
        let nodes = g.nodes().iter().map(|n| (n.clone(), n.clone())).collect();
        let mut edges = BTreeMap::new();
        for m in p2.morphism_ids() {
            let src = p2.obj_name(p2.src(m));
            let path = p2.info(m).path.clone().unwrap_or_default();
            edges.insert(p2.label(m).to_string(), self.flatten(g, src, &path)?);
        }
        Ok(GraphMor { dom: underlying(&p2), cod: tg, hom: GraphHom { nodes, edges } })
    }

    /// As a [`Monad`] value, for comparison with the monad of [`path_forget`].
    pub fn as_monad(&self, universe: Universe<GrphCat>) -> Monad<GrphCat> {
        let (u1, u2, u3, u4) = (self.clone(), self.clone(), self.clone(), self.clone());
        Monad {
            name: format!("upath_{}", self.bound),
            c: Arc::new(GrphCat),
            endo: FunctorFn::new("T", move |g: &Arc<DiGraph>| u1.apply(g), move |f: &GraphMor| u2.map(f)),
            unit: NatFn::new("η", move |g: &Arc<DiGraph>| u3.unit(g)),
            mult: NatFn::new("μ", move |g: &Arc<DiGraph>| u4.mult(g)),
            universe,
            sampler: None,
        }
    }
}

/// Monad laws for [`Upath`] on `universe`. Functoriality, naturality and
/// the unit laws compare total graph maps; associativity is checked edge by
/// edge on the truncated `T³G`, with `μ_{TG}` evaluated pointwise (it
/// concatenates, so its value may lie beyond the bound even where `μ_G` of
/// it does not).
pub fn check_upath_laws(u: &Upath, universe: &Universe<GrphCat>) -> Result<LawReport> {
    let mut r = LawReport::new(format!("monad upath_{}", u.bound));
    for g in &universe.objects {
        if u.paths(g)?.certification() != Certification::Exact {
            return Err(Error::Bound {
                what: format!("graph {} has paths longer than the bound", GrphCat.show_obj(g)),
                bound: u.bound,
            });
        }
    }
    let m = u.as_monad(universe.clone());
    r.absorb(check_functor_on(&GrphCat, &GrphCat, &m.endo, universe));
    for f in &universe.morphisms {
        let at = || GrphCat.show_mor(f);
        let lhs = GrphCat.compose(&u.map(f)?, &u.unit(&f.dom)?)?;
        let rhs = GrphCat.compose(&u.unit(&f.cod)?, f)?;
        r.expect(lhs == rhs, "naturality of η", at, || "Tf∘η != η∘f".into());
        let lhs = GrphCat.compose(&u.mult(&f.cod)?, &u.map(&u.map(f)?)?)?;
        let rhs = GrphCat.compose(&u.map(f)?, &u.mult(&f.dom)?)?;
        r.expect(lhs == rhs, "naturality of μ", at, || "μ∘TTf != Tf∘μ".into());
    }
    for g in &universe.objects {
        let show = GrphCat.show_obj(g);
        let tg = u.apply(g)?;
        let mu = u.mult(g)?;
        let id = GrphCat.identity(&tg);
        let left = GrphCat.compose(&mu, &u.unit(&tg)?)?;
        let right = GrphCat.compose(&mu, &u.map(&u.unit(g)?)?)?;
        r.expect(left == id, "unit", || format!("μ∘ηT at {show}"), || "not the identity".into());
        r.expect(right == id, "unit", || format!("μ∘Tη at {show}"), || "not the identity".into());

        let lhs = GrphCat.compose(&mu, &u.map(&mu)?)?;
        let ttg = u.apply(&tg)?;
        let p2 = u.paths(&tg)?;
        let p3 = u.paths(&ttg)?;
        for w in p3.morphism_ids() {
            let src = p3.obj_name(p3.src(w));
            let mut tg_edges = Vec::new();
            for label in p3.info(w).path.as_deref().unwrap_or_default() {
                tg_edges.extend(p2.info(p2.mor(label)?).path.clone().unwrap_or_default());
            }
            let rhs = u.flatten(g, src, &tg_edges)?;
            let got = &lhs.hom.edges[p3.label(w)];
            r.expect(*got == rhs, "associativity", || format!("{} in {show}", p3.label(w)), || {
                format!("μ∘Tμ gives {got} but μ∘μT gives {rhs}")
            });
        }
    }
    r.coverage = Coverage::Truncated { bound: u.bound };
    Ok(r)
}
