//! Finite presheaves on explicit categories, representables, the Yoneda
//! lemma and embedding, pointwise limits, and the word-graph pipeline
//! `graph -> path category -> quotient -> presheaves`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{Budget, Category};
use crate::error::{Error, Result};
use crate::fincat::{check_category_laws, free_category, quotient_by_paths, FinCat, MorId, ObjId, PathSpec};
use crate::finset::{all_maps, limit, verify_limit_cone, Diagram, FinSetMap, FinSetObj};
use crate::foundations::{check_graph_hom, DiGraph, GraphHom};
use crate::functcat::{check_functor, same_cat, Functor};
use crate::report::LawReport;

/// `S: C^op -> FinSet`. `actions[f]` for `f: X -> Y` is `S(Y) -> S(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FinCat>,
    values: Vec<FinSetObj>,
    actions: Vec<FinSetMap>,
}

impl Presheaf {
    pub fn new(base: Arc<FinCat>, values: Vec<FinSetObj>, actions: Vec<FinSetMap>) -> Result<Self> {
        if values.len() != base.num_objects() || actions.len() != base.num_morphisms() {
            return Err(Error::NotTotal { missing: vec!["presheaf values or actions".into()] });
        }
        for f in base.morphism_ids() {
            let a = &actions[f.0];
            if a.dom != values[base.tgt(f).0] || a.cod != values[base.src(f).0] {
                return Err(Error::CarrierMismatch(format!("action of {} has wrong endpoints", base.label(f))));
            }
        }
        Ok(Presheaf { base, values, actions })
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn value(&self, x: ObjId) -> &FinSetObj {
        &self.values[x.0]
    }

    pub fn action(&self, f: MorId) -> &FinSetMap {
        &self.actions[f.0]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.values.iter().map(|v| v.len()).collect()
    }

    pub fn to_json(&self) -> PresheafJson {
        let c = &self.base;
        PresheafJson {
            values: c.object_ids().map(|x| (c.obj_name(x).to_string(), self.value(x).to_vec())).collect(),
            actions: c.morphism_ids().map(|f| (c.label(f).to_string(), self.action(f).to_table())).collect(),
        }
    }

    pub fn from_json(base: &Arc<FinCat>, js: &PresheafJson) -> Result<Self> {
        let values = base
            .object_ids()
            .map(|x| {
                let v = js.values.get(base.obj_name(x)).ok_or_else(|| Error::NotTotal {
                    missing: vec![format!("value at {}", base.obj_name(x))],
                })?;
                FinSetObj::new(v.iter().cloned())
            })
            .collect::<Result<Vec<_>>>()?;
        let actions = base
            .morphism_ids()
            .map(|f| {
                let (dv, cv) = (&values[base.tgt(f).0], &values[base.src(f).0]);
                match js.actions.get(base.label(f)) {
                    Some(t) => FinSetMap::from_table(dv, cv, t),
                    None if base.is_identity(f) => Ok(FinSetMap::identity(dv)),
                    None => Err(Error::NotTotal { missing: vec![format!("action of {}", base.label(f))] }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Presheaf::new(base.clone(), values, actions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub values: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

/// `S(1_X) = 1` and `S(g∘f) = S(f)∘S(g)` over every defined composite.
pub fn check_presheaf(s: &Presheaf) -> LawReport {
    let c = &s.base;
    let mut r = LawReport::new("presheaf laws");
    for x in c.object_ids() {
        let ok = *s.action(c.id(x)) == FinSetMap::identity(s.value(x));
        r.expect(ok, "identity", || c.obj_name(x).to_string(), || "S(1_X) is not the identity".into());
    }
    for ((g, f), gf) in c.composites() {
        let rhs = s.action(f).after(s.action(g));
        r.expect(rhs.as_ref() == Ok(s.action(gf)), "composition", || format!("{} ∘ {}", c.label(g), c.label(f)), || {
            "S(g∘f) != S(f)∘S(g)".into()
        });
    }
    r
}

/// `hom(-, m)`, elements named by morphism labels.
pub fn representable(c: &Arc<FinCat>, m: ObjId) -> Result<Presheaf> {
    let homs = c.object_ids().map(|x| c.hom_set(x, m).map(|h| h.to_vec())).collect::<Result<Vec<_>>>()?;
    let values = homs
        .iter()
        .map(|h| FinSetObj::new(h.iter().map(|&g| c.label(g).to_string())))
        .collect::<Result<Vec<_>>>()?;
    let actions = c
        .morphism_ids()
        .map(|f| {
            let (x, y) = (c.src(f), c.tgt(f));
            let table = homs[y.0]
                .iter()
                .map(|&g| {
                    let gf = c.compose(g, f)?;
                    Ok(homs[x.0].iter().position(|&h| h == gf).expect("composite lies in the hom-set"))
                })
                .collect::<Result<Vec<_>>>()?;
            FinSetMap::new(values[y.0].clone(), values[x.0].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    Presheaf::new(c.clone(), values, actions)
}

/// The presheaf with a single point everywhere.
pub fn terminal_presheaf(c: &Arc<FinCat>) -> Presheaf {
    let pt = FinSetObj::of(&["*"]);
    Presheaf {
        base: c.clone(),
        values: vec![pt.clone(); c.num_objects()],
        actions: vec![FinSetMap::identity(&pt); c.num_morphisms()],
    }
}

/// A natural transformation of presheaves, one component per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PshNat {
    pub components: Vec<FinSetMap>,
}

impl PshNat {
    pub fn identity(s: &Presheaf) -> Self {
        PshNat { components: s.values.iter().map(FinSetMap::identity).collect() }
    }

    pub fn then(&self, next: &PshNat) -> Result<PshNat> {
        let components = self.components.iter().zip(&next.components).map(|(a, b)| b.after(a)).collect::<Result<_>>()?;
        Ok(PshNat { components })
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|m| m.is_injective() && m.is_surjective())
    }
}

/// Naturality of `alpha: s1 => s2`: `α_X ∘ S1(f) = S2(f) ∘ α_Y` for `f: X -> Y`.
pub fn check_psh_natural(s1: &Presheaf, s2: &Presheaf, alpha: &PshNat) -> LawReport {
    let c = &s1.base;
    let mut r = LawReport::new("presheaf naturality");
    for f in c.morphism_ids() {
        let (x, y) = (c.src(f), c.tgt(f));
        let lhs = alpha.components[x.0].after(s1.action(f));
        let rhs = s2.action(f).after(&alpha.components[y.0]);
        r.expect(lhs.is_ok() && lhs == rhs, "naturality", || c.label(f).to_string(), || "square fails".into());
    }
    r
}

/// Every natural family `s1 => s2`, lexicographic in the component tables.
pub fn nat_transfs(s1: &Presheaf, s2: &Presheaf, budget: Budget) -> Result<Vec<PshNat>> {
    if !same_cat(&s1.base, &s2.base) {
        return Err(Error::invalid("presheaves over different categories"));
    }
    let c = &s1.base;
    let n = c.num_objects();
    let choices = (0..n).map(|x| all_maps(&s1.values[x], &s2.values[x], budget)).collect::<Result<Vec<_>>>()?;
    let mut due: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for f in c.morphism_ids() {
        due[c.src(f).0.max(c.tgt(f).0)].push(f);
    }
    let square = |comps: &[&FinSetMap], f: MorId| {
        let (x, y) = (c.src(f).0, c.tgt(f).0);
        let lhs = comps[x].after(s1.action(f));
        let rhs = s2.action(f).after(comps[y]);
        lhs.is_ok() && lhs == rhs
    };
    let mut out = Vec::new();
    let mut examined = 0u64;
    let mut picked: Vec<&FinSetMap> = Vec::with_capacity(n);
    fn go<'a>(
        depth: usize,
        choices: &'a [Vec<FinSetMap>],
        due: &[Vec<MorId>],
        square: &dyn Fn(&[&FinSetMap], MorId) -> bool,
        picked: &mut Vec<&'a FinSetMap>,
        out: &mut Vec<PshNat>,
        examined: &mut u64,
        budget: Budget,
    ) -> Result<()> {
        if depth == choices.len() {
            out.push(PshNat { components: picked.iter().map(|m| (*m).clone()).collect() });
            return Ok(());
        }
        for m in &choices[depth] {
            *examined += 1;
            budget.check_count(|| "natural family candidates".into(), *examined as u128)?;
            picked.push(m);
            if due[depth].iter().all(|&f| square(picked, f)) {
                go(depth + 1, choices, due, square, picked, out, examined, budget)?;
            }
            picked.pop();
        }
        Ok(())
    }
    go(0, &choices, &due, &square, &mut picked, &mut out, &mut examined, budget)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YonedaCheck {
    pub object: String,
    pub nat_count: usize,
    pub value_count: usize,
    /// `α ↦ α_X(1_X)`, in the order of [`nat_transfs`].
    pub bijection: Vec<String>,
    pub injective: bool,
    pub surjective: bool,
    /// The inverse `s ↦ (f ↦ S(f)(s))` lands on natural families and inverts.
    pub inverse_ok: bool,
}

impl YonedaCheck {
    pub fn passed(&self) -> bool {
        self.injective && self.surjective && self.inverse_ok
    }
}

/// The bijection `Nat(hom(-, x), s) ≅ s(x)`, built and checked both ways.
pub fn yoneda_check(c: &Arc<FinCat>, x: ObjId, s: &Presheaf, budget: Budget) -> Result<YonedaCheck> {
    let hx = representable(c, x)?;
    let nats = nat_transfs(&hx, s, budget)?;
    let id_pos = c.hom_set(x, x)?.iter().position(|&m| m == c.id(x)).expect("identity in its hom-set");
    let images: Vec<usize> = nats.iter().map(|a| a.components[x.0].apply(id_pos)).collect();
    let mut seen = vec![0usize; s.value(x).len()];
    for &i in &images {
        seen[i] += 1;
    }
    let injective = seen.iter().all(|&k| k <= 1);
    let surjective = seen.iter().all(|&k| k >= 1);
    let mut inverse_ok = true;
    for e in 0..s.value(x).len() {
        let components = c
            .object_ids()
            .map(|y| {
                let hom = c.hom_set(y, x)?;
                FinSetMap::new(hx.value(y).clone(), s.value(y).clone(), hom.iter().map(|&f| s.action(f).apply(e)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let alpha = PshNat { components };
        inverse_ok &= check_psh_natural(&hx, s, &alpha).passed()
            && alpha.components[x.0].apply(id_pos) == e
            && nats.contains(&alpha);
    }
    Ok(YonedaCheck {
        object: c.obj_name(x).to_string(),
        nat_count: nats.len(),
        value_count: s.value(x).len(),
        bijection: images.iter().map(|&i| s.value(x).label(i).to_string()).collect(),
        injective,
        surjective,
        inverse_ok,
    })
}

/// `Y(f)` for `f: a -> b`: postcomposition `hom(-, a) => hom(-, b)`.
pub fn yoneda_on_morphism(c: &Arc<FinCat>, ya: &Presheaf, yb: &Presheaf, f: MorId) -> Result<PshNat> {
    let (a, b) = (c.src(f), c.tgt(f));
    let components = c
        .object_ids()
        .map(|x| {
            let (ha, hb) = (c.hom_set(x, a)?, c.hom_set(x, b)?);
            let table = ha
                .iter()
                .map(|&g| {
                    let fg = c.compose(f, g)?;
                    Ok(hb.iter().position(|&h| h == fg).expect("composite lies in the hom-set"))
                })
                .collect::<Result<Vec<_>>>()?;
            FinSetMap::new(ya.value(x).clone(), yb.value(x).clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PshNat { components })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub a: String,
    pub b: String,
    pub hom: usize,
    pub nat: usize,
    /// `f ↦ Y(f)` hits distinct families.
    pub injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YonedaEmbedReport {
    pub pairs: Vec<PairCount>,
    pub faithful: bool,
    pub full: bool,
    /// `Y` preserves identities and composites.
    pub functorial: bool,
    /// `a ≅ b` iff `Y a ≅ Y b`, for every pair.
    pub reflects_isos: bool,
}

impl YonedaEmbedReport {
    pub fn passed(&self) -> bool {
        self.faithful && self.full && self.functorial && self.reflects_isos
    }
}

pub fn yoneda_embed(c: &Arc<FinCat>, budget: Budget) -> Result<(Vec<Presheaf>, YonedaEmbedReport)> {
    let ys = c.object_ids().map(|x| representable(c, x)).collect::<Result<Vec<_>>>()?;
    let mut images: Vec<Option<PshNat>> = vec![None; c.num_morphisms()];
    let mut pairs = Vec::new();
    let (mut faithful, mut full, mut reflects_isos) = (true, true, true);
    for a in c.object_ids() {
        for b in c.object_ids() {
            let nats = nat_transfs(&ys[a.0], &ys[b.0], budget)?;
            let hom = c.hom_set(a, b)?;
            let mut hit = vec![false; nats.len()];
            let mut injective = true;
            for &f in hom {
                let yf = yoneda_on_morphism(c, &ys[a.0], &ys[b.0], f)?;
                match nats.iter().position(|n| *n == yf) {
                    Some(i) => injective &= !std::mem::replace(&mut hit[i], true),
                    None => injective = false,
                }
                images[f.0] = Some(yf);
            }
            faithful &= injective;
            full &= hit.iter().all(|&h| h);
            let iso_in_c = hom.iter().any(|f| c.is_iso(f, budget).ok().flatten().is_some());
            let iso_of_psh = nats.iter().any(|n| n.is_iso());
            reflects_isos &= iso_in_c == iso_of_psh;
            pairs.push(PairCount {
                a: c.obj_name(a).to_string(),
                b: c.obj_name(b).to_string(),
                hom: hom.len(),
                nat: nats.len(),
                injective,
            });
        }
    }
    let mut functorial = true;
    for x in c.object_ids() {
        functorial &= images[c.id(x).0].as_ref() == Some(&PshNat::identity(&ys[x.0]));
    }
    for ((g, f), gf) in c.composites() {
        let (Some(yf), Some(yg), Some(ygf)) = (&images[f.0], &images[g.0], &images[gf.0]) else { continue };
        functorial &= yf.then(yg).ok().as_ref() == Some(ygf);
    }
    Ok((ys, YonedaEmbedReport { pairs, faithful, full, functorial, reflects_isos }))
}

/// A graph-shaped diagram of presheaves over one base.
#[derive(Debug, Clone)]
pub struct PresheafDiagram {
    pub shape: DiGraph,
    pub objects: Vec<Presheaf>,
    pub maps: Vec<PshNat>,
}

/// The limit computed object by object, with its legs and the per-object cone
/// verification.
#[derive(Debug, Clone)]
pub struct PointwiseLimit {
    pub apex: Presheaf,
    pub legs: Vec<PshNat>,
    pub report: LawReport,
}

pub fn presheaf_pointwise_limit(d: &PresheafDiagram, budget: Budget) -> Result<PointwiseLimit> {
    let base = match d.objects.first() {
        Some(p) => p.base.clone(),
        None => return Err(Error::invalid("pointwise limits need at least one presheaf to fix the base")),
    };
    if d.objects.iter().any(|p| !same_cat(&p.base, &base)) {
        return Err(Error::invalid("presheaves over different categories"));
    }
    if d.objects.len() != d.shape.nodes().len() || d.maps.len() != d.shape.edges().len() {
        return Err(Error::invalid("diagram needs one presheaf per node and one map per edge"));
    }
    let mut report = LawReport::new("pointwise limit");
    let at = |x: ObjId| {
        Diagram::new(
            d.shape.clone(),
            d.objects.iter().map(|p| p.value(x).clone()).collect(),
            d.maps.iter().map(|m| m.components[x.0].clone()).collect(),
        )
    };
    let mut diagrams = Vec::new();
    let mut cones = Vec::new();
    for x in base.object_ids() {
        let dx = at(x)?;
        let cone = limit(&dx, budget)?;
        let mut r = verify_limit_cone(&dx, &cone, budget)?;
        r.subject = format!("limit at {}", base.obj_name(x));
        report.absorb(r);
        diagrams.push(dx);
        cones.push(cone);
    }
    let values: Vec<FinSetObj> = cones.iter().map(|c| c.apex.clone()).collect();
    let actions = base
        .morphism_ids()
        .map(|f| {
            let (x, y) = (base.src(f).0, base.tgt(f).0);
            let table = (0..values[y].len())
                .map(|t| {
                    let image: Vec<usize> =
                        d.objects.iter().enumerate().map(|(v, p)| p.action(f).apply(cones[y].legs[v].apply(t))).collect();
                    (0..values[x].len())
                        .find(|&s| cones[x].legs.iter().enumerate().all(|(v, l)| l.apply(s) == image[v]))
                        .ok_or_else(|| Error::invalid("pointwise action leaves the limit"))
                })
                .collect::<Result<Vec<_>>>()?;
            FinSetMap::new(values[y].clone(), values[x].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    let apex = Presheaf::new(base.clone(), values, actions)?;
    report.absorb(check_presheaf(&apex));
    let legs: Vec<PshNat> = (0..d.objects.len())
        .map(|v| PshNat { components: cones.iter().map(|c| c.legs[v].clone()).collect() })
        .collect();
    for (v, leg) in legs.iter().enumerate() {
        report.absorb(check_psh_natural(&apex, &d.objects[v], leg));
    }
    Ok(PointwiseLimit { apex, legs, report })
}

// ---- corpus ingestion and the pipeline -----------------------------------

/// Word graph of a corpus: lowercase, split sentences on `.`, `!`, `?`,
/// whitespace tokens, one edge `(a,b)` per distinct consecutive pair.
pub fn graph_from_corpus(text: &str) -> Result<DiGraph> {
    let lower = text.to_lowercase();
    let mut g = DiGraph::default();
    for sentence in lower.split(['.', '!', '?']) {
        let words: Vec<&str> = sentence.split_whitespace().collect();
        for w in &words {
            if !g.has_node(w) {
                g.add_node(*w)?;
            }
        }
        for pair in words.windows(2) {
            let id = format!("({},{})", pair[0], pair[1]);
            if g.edge(&id).is_none() {
                g.add_edge(id, pair[0], pair[1])?;
            }
        }
    }
    if g.nodes().is_empty() {
        return Err(Error::invalid("corpus has no words"));
    }
    Ok(g)
}

/// A second word graph with a graph map into it, for the pipeline square.
#[derive(Debug, Clone)]
pub struct PipelineTarget {
    pub graph: DiGraph,
    pub relations: Vec<(PathSpec, PathSpec)>,
    pub map: GraphHom,
}

#[derive(Debug, Clone)]
pub struct PipelineBundle {
    pub path: Arc<FinCat>,
    pub quotient: Arc<FinCat>,
    pub q: Functor,
    pub yoneda: Vec<Presheaf>,
    pub embed: YonedaEmbedReport,
    pub stages: Vec<LawReport>,
    pub square: Option<LawReport>,
}

impl PipelineBundle {
    pub fn passed(&self) -> bool {
        self.embed.passed()
            && self.stages.iter().all(|r| r.passed())
            && self.square.as_ref().is_none_or(|r| r.passed())
    }

    /// `(|hom| in the path category, |hom| in the quotient, |Y(y)(x)|)`.
    pub fn hom_counts(&self, x: &str, y: &str) -> Result<(usize, usize, usize)> {
        let (px, py) = (self.path.obj(x)?, self.path.obj(y)?);
        let (qx, qy) = (self.quotient.obj(x)?, self.quotient.obj(y)?);
        Ok((
            self.path.hom_set(px, py)?.len(),
            self.quotient.hom_set(qx, qy)?.len(),
            self.yoneda[qy.0].value(qx).len(),
        ))
    }

    pub fn quotient_is_iso(&self) -> bool {
        self.path.num_morphisms() == self.quotient.num_morphisms()
    }
}

/// Functor `Path(g) -> Path(h)` induced by a graph map, edge by edge.
pub fn path_functor(pg: &Arc<FinCat>, ph: &Arc<FinCat>, m: &GraphHom) -> Result<Functor> {
    let objects = pg.object_ids().map(|x| ph.obj(&m.nodes[pg.obj_name(x)])).collect::<Result<Vec<_>>>()?;
    let morphisms = pg
        .morphism_ids()
        .map(|f| {
            let path = pg.info(f).path.clone().ok_or_else(|| Error::invalid("not a path category"))?;
            let edges = path.iter().map(|e| m.edges[e].clone()).collect();
            ph.mor_by_path(&PathSpec { src: m.nodes[pg.obj_name(pg.src(f))].clone(), edges })
        })
        .collect::<Result<Vec<_>>>()?;
    Functor::new(pg.clone(), ph.clone(), objects, morphisms)
}

/// Runs every stage and verifies each: laws of both categories, functoriality
/// of `Q`, and the Yoneda embedding of the quotient. With a target graph the
/// square `Q' ∘ Path(m) = m̃ ∘ Q` is built and checked too.
pub fn word2fun_pipeline(
    graph: &DiGraph,
    relations: &[(PathSpec, PathSpec)],
    bound: usize,
    target: Option<&PipelineTarget>,
    budget: Budget,
) -> Result<PipelineBundle> {
    let path = Arc::new(free_category(graph, bound).map_err(|e| e.context("path stage"))?);
    let (quotient, q) = quotient_by_paths(&path, relations).map_err(|e| e.context("quotient stage"))?;
    let (yoneda, embed) = yoneda_embed(&quotient, budget).map_err(|e| e.context("yoneda stage"))?;
    let mut stages = vec![check_category_laws(&path), check_category_laws(&quotient), check_functor(&q)];
    stages[0].subject = "path category".into();
    stages[1].subject = "quotient category".into();
    stages[2].subject = "quotient functor".into();
    let square = match target {
        None => None,
        Some(t) => Some(pipeline_square(&path, &q, t, bound).map_err(|e| e.context("square stage"))?),
    };
    Ok(PipelineBundle { path, quotient, q, yoneda, embed, stages, square })
}

fn pipeline_square(path: &Arc<FinCat>, q: &Functor, t: &PipelineTarget, bound: usize) -> Result<LawReport> {
    let mut r = LawReport::new("pipeline square");
    let violations = check_graph_hom(&t.map, &path.presentation().expect("path category").graph, &t.graph)?;
    for v in violations {
        r.violate("graph map", v.edge, v.detail);
    }
    if !r.passed() {
        return Ok(r);
    }
    let path2 = Arc::new(free_category(&t.graph, bound)?);
    let (quot2, q2) = quotient_by_paths(&path2, &t.relations)?;
    let pm = path_functor(path, &path2, &t.map)?;
    let top = pm.then(&q2)?;
    // the induced map on classes: well defined iff `top` is constant on classes
    let quot = q.target();
    let mut induced: Vec<Option<MorId>> = vec![None; quot.num_morphisms()];
    for f in path.morphism_ids() {
        let cls = q.mor(f);
        let img = top.mor(f);
        match induced[cls.0] {
            None => induced[cls.0] = Some(img),
            Some(prev) => {
                r.expect(prev == img, "descends to quotient", || path.label(f).to_string(), || {
                    format!("class of {} has images {} and {}", quot.label(cls), quot2.label(prev), quot2.label(img))
                });
            }
        }
    }
    if !r.passed() {
        return Ok(r);
    }
    let objects = quot.object_ids().map(|x| top.obj(x)).collect();
    let morphisms = induced.into_iter().map(|m| m.expect("Q is surjective")).collect();
    let mt = Functor::new(quot.clone(), quot2.clone(), objects, morphisms)?;
    r.absorb(check_functor(&mt));
    let around = q.then(&mt)?;
    for f in path.morphism_ids() {
        r.expect(around.mor(f) == top.mor(f), "square commutes", || path.label(f).to_string(), || "paths disagree".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::tests::w1;

    fn chain2() -> Arc<FinCat> {
        Arc::new(FinCat::chain(2))
    }

    #[test]
    fn representables_on_chain() {
        let c = chain2();
        assert_eq!(representable(&c, ObjId(1)).unwrap().sizes(), vec![1, 1]);
        assert_eq!(representable(&c, ObjId(0)).unwrap().sizes(), vec![1, 0]);
        let t = Arc::new(FinCat::terminal());
        assert_eq!(representable(&t, ObjId(0)).unwrap().sizes(), vec![1]);
        for x in c.object_ids() {
            assert!(check_presheaf(&representable(&c, x).unwrap()).passed());
        }
    }

    #[test]
    fn nat_counts_on_chain() {
        let c = chain2();
        let (y0, y1) = (representable(&c, ObjId(0)).unwrap(), representable(&c, ObjId(1)).unwrap());
        let b = Budget::default();
        assert_eq!(nat_transfs(&y0, &y1, b).unwrap().len(), 1);
        assert!(nat_transfs(&y1, &y0, b).unwrap().is_empty());
        assert!(nat_transfs(&y1, &y1, b).unwrap().contains(&PshNat::identity(&y1)));
    }

    #[test]
    fn yoneda_on_itself() {
        let c = chain2();
        let y = representable(&c, ObjId(1)).unwrap();
        let chk = yoneda_check(&c, ObjId(1), &y, Budget::default()).unwrap();
        assert!(chk.passed());
        assert_eq!(chk.bijection, vec!["1<=1"]);
    }

    #[test]
    fn embedding_of_chain_and_discrete() {
        let c = chain2();
        let (_, rep) = yoneda_embed(&c, Budget::default()).unwrap();
        assert!(rep.passed());
        let nats: Vec<usize> = rep.pairs.iter().map(|p| p.nat).collect();
        assert_eq!(nats, vec![1, 1, 0, 1]);

        let d = Arc::new(FinCat::discrete(&["A", "B"]).unwrap());
        let (ys, rep) = yoneda_embed(&d, Budget::default()).unwrap();
        assert!(rep.passed());
        assert!(nat_transfs(&ys[0], &ys[1], Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn pointwise_product() {
        let c = chain2();
        let (y0, y1) = (representable(&c, ObjId(0)).unwrap(), representable(&c, ObjId(1)).unwrap());
        let d = PresheafDiagram {
            shape: DiGraph::from_parts(&["a", "b"], &[]).unwrap(),
            objects: vec![y0, y1],
            maps: vec![],
        };
        let l = presheaf_pointwise_limit(&d, Budget::default()).unwrap();
        assert_eq!(l.apex.sizes(), vec![1, 0]);
        assert!(l.report.passed());
    }

    #[test]
    fn corpus_rebuilds_w1() {
        let g = graph_from_corpus("i love apples . i eat apples . i like apples .").unwrap();
        assert_eq!((g.nodes().len(), g.edges().len()), (5, 6));
        let w = w1();
        let rename = |s: &str| if s == "i" { "I".to_string() } else { s.to_string() };
        let mut got: Vec<(String, String)> = g.edges().iter().map(|e| (rename(&e.src), rename(&e.dst))).collect();
        let mut want: Vec<(String, String)> = w.edges().iter().map(|e| (e.src.clone(), e.dst.clone())).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert!(graph_from_corpus(" \n ").is_err());
    }

    #[test]
    fn pipeline_on_w1() {
        let rel = (
            PathSpec::new("I", &["(I,like)", "(like,apples)"]),
            PathSpec::new("I", &["(I,love)", "(love,apples)"]),
        );
        let b = word2fun_pipeline(&w1(), &[rel], 2, None, Budget::default()).unwrap();
        assert!(b.passed());
        assert_eq!(b.hom_counts("I", "apples").unwrap(), (3, 2, 2));
        let e = word2fun_pipeline(&w1(), &[], 2, None, Budget::default()).unwrap();
        assert!(e.quotient_is_iso());
    }

    #[test]
    fn pipeline_square_on_merge() {
        // send like and love to one word; the quotient relation maps to a
        // trivial one and the square commutes
        let g2 = DiGraph::from_parts(
            &["I", "feel", "eat", "apples"],
            &[("a", "I", "feel"), ("b", "I", "eat"), ("c", "feel", "apples"), ("d", "eat", "apples")],
        )
        .unwrap();
        let mut m = GraphHom::default();
        for (x, y) in [("I", "I"), ("love", "feel"), ("like", "feel"), ("eat", "eat"), ("apples", "apples")] {
            m.nodes.insert(x.into(), y.into());
        }
        for (x, y) in [
            ("(I,love)", "a"),
            ("(I,like)", "a"),
            ("(I,eat)", "b"),
            ("(love,apples)", "c"),
            ("(like,apples)", "c"),
            ("(eat,apples)", "d"),
        ] {
            m.edges.insert(x.into(), y.into());
        }
        let rel = (
            PathSpec::new("I", &["(I,like)", "(like,apples)"]),
            PathSpec::new("I", &["(I,love)", "(love,apples)"]),
        );
        let t = PipelineTarget { graph: g2, relations: vec![], map: m };
        let b = word2fun_pipeline(&w1(), &[rel.clone()], 2, Some(&t), Budget::default()).unwrap();
        assert!(b.square.as_ref().unwrap().passed(), "{:?}", b.square);

        // a target that separates like from love cannot receive the quotient
        let t2 = PipelineTarget { graph: w1(), relations: vec![], map: GraphHom::identity(&w1()) };
        let b = word2fun_pipeline(&w1(), &[rel], 2, Some(&t2), Budget::default()).unwrap();
        assert!(!b.square.unwrap().passed());
    }
}
