//! Functors and natural transformations between explicit finite categories,
//! functor categories, and the preorder "there is a transformation F ⇒ G".

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::Budget;
use crate::error::{Error, Result};
use crate::fincat::{Certification, FinCat, MorId, MorphismInfo, ObjId};
use crate::report::LawReport;

#[derive(Debug, Clone)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl PartialEq for Functor {
    fn eq(&self, o: &Self) -> bool {
        self.objects == o.objects
            && self.morphisms == o.morphisms
            && (Arc::ptr_eq(&self.source, &o.source) || self.source == o.source)
            && (Arc::ptr_eq(&self.target, &o.target) || self.target == o.target)
    }
}

impl Eq for Functor {}

impl Hash for Functor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.objects.hash(state);
        self.morphisms.hash(state);
    }
}

impl Functor {
    /// Checks sizes and that each morphism image has the mapped endpoints.
    /// The functor laws are left to [`check_functor`].
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, objects: Vec<ObjId>, morphisms: Vec<MorId>) -> Result<Self> {
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return Err(Error::NotTotal { missing: vec!["object or morphism images".into()] });
        }
        if objects.iter().any(|o| o.0 >= target.num_objects()) || morphisms.iter().any(|m| m.0 >= target.num_morphisms()) {
            return Err(Error::invalid("functor image outside the target"));
        }
        for f in source.morphism_ids() {
            let m = morphisms[f.0];
            if target.src(m) != objects[source.src(f).0] || target.tgt(m) != objects[source.tgt(f).0] {
                return Err(Error::invalid(format!(
                    "image of {} is {} with wrong endpoints",
                    source.label(f),
                    target.label(m)
                )));
            }
        }
        Ok(Functor { source, target, objects, morphisms })
    }

    pub fn identity(c: &Arc<FinCat>) -> Self {
        Functor {
            source: c.clone(),
            target: c.clone(),
            objects: c.object_ids().collect(),
            morphisms: c.morphism_ids().collect(),
        }
    }

    /// Constant functor at object `d`.
    pub fn constant(source: &Arc<FinCat>, target: &Arc<FinCat>, d: ObjId) -> Self {
        Functor {
            source: source.clone(),
            target: target.clone(),
            objects: vec![d; source.num_objects()],
            morphisms: vec![target.id(d); source.num_morphisms()],
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.objects[x.0]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.morphisms[f.0]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Functor) -> Result<Functor> {
        if !same_cat(&self.target, &next.source) {
            return Err(Error::invalid("functors do not compose"));
        }
        Ok(Functor {
            source: self.source.clone(),
            target: next.target.clone(),
            objects: self.objects.iter().map(|&o| next.obj(o)).collect(),
            morphisms: self.morphisms.iter().map(|&m| next.mor(m)).collect(),
        })
    }

    /// Same maps with a new (equal) mutation of one morphism image; used to
    /// build deliberately broken functors in tests and the CLI.
    pub fn with_morphism(&self, f: MorId, image: MorId) -> Result<Functor> {
        let mut morphisms = self.morphisms.clone();
        morphisms[f.0] = image;
        Functor::new(self.source.clone(), self.target.clone(), self.objects.clone(), morphisms)
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = self.objects.clone();
        seen.sort();
        seen.dedup();
        seen.len() == self.objects.len()
    }

    pub fn to_json(&self) -> FunctorJson {
        FunctorJson {
            objects: self
                .source
                .object_ids()
                .map(|x| (self.source.obj_name(x).to_string(), self.target.obj_name(self.obj(x)).to_string()))
                .collect(),
            morphisms: self
                .source
                .morphism_ids()
                .map(|f| (self.source.label(f).to_string(), self.target.label(self.mor(f)).to_string()))
                .collect(),
        }
    }

    pub fn from_json(source: &Arc<FinCat>, target: &Arc<FinCat>, js: &FunctorJson) -> Result<Self> {
        let objmap: HashMap<&str, &str> = js.objects.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let mormap: HashMap<&str, &str> = js.morphisms.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let mut missing = Vec::new();
        let mut objects = Vec::new();
        for x in source.object_ids() {
            match objmap.get(source.obj_name(x)) {
                Some(y) => objects.push(target.obj(y)?),
                None => missing.push(format!("object {}", source.obj_name(x))),
            }
        }
        let mut morphisms = Vec::new();
        for f in source.morphism_ids() {
            match mormap.get(source.label(f)) {
                Some(g) => morphisms.push(target.mor(g)?),
                None if source.is_identity(f) && objects.len() == source.num_objects() => {
                    morphisms.push(target.id(objects[source.src(f).0]))
                }
                None => missing.push(format!("morphism {}", source.label(f))),
            }
        }
        if !missing.is_empty() {
            return Err(Error::NotTotal { missing });
        }
        Functor::new(source.clone(), target.clone(), objects, morphisms)
    }
}

/// Functor tables keyed by labels. Identity images may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorJson {
    pub objects: Vec<(String, String)>,
    #[serde(default)]
    pub morphisms: Vec<(String, String)>,
}

pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Identity and composition preservation over every identity and every
/// defined composite of the source.
pub fn check_functor(f: &Functor) -> LawReport {
    let (c, d) = (&f.source, &f.target);
    let mut r = LawReport::new("functor laws");
    for x in c.object_ids() {
        let got = f.mor(c.id(x));
        let want = d.id(f.obj(x));
        r.expect(got == want, "identity", || c.obj_name(x).to_string(), || {
            format!("F(1) = {} but 1_F = {}", d.label(got), d.label(want))
        });
    }
    for ((g, h), gh) in c.composites() {
        let lhs = f.mor(gh);
        match d.try_compose(f.mor(g), f.mor(h)) {
            Ok(Some(rhs)) => {
                r.expect(lhs == rhs, "composition", || format!("{} ∘ {}", c.label(g), c.label(h)), || {
                    format!("F(g∘f) = {} but F(g)∘F(f) = {}", d.label(lhs), d.label(rhs))
                });
            }
            _ => r.violate(
                "composition",
                format!("{} ∘ {}", c.label(g), c.label(h)),
                "image composite undefined",
            ),
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTrans {
    source: Functor,
    target: Functor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, components: Vec<MorId>) -> Result<Self> {
        if !same_cat(&source.source, &target.source) || !same_cat(&source.target, &target.target) {
            return Err(Error::invalid("transformation between non-parallel functors"));
        }
        if components.len() != source.source.num_objects() {
            return Err(Error::NotTotal { missing: vec!["components".into()] });
        }
        Ok(NatTrans { source, target, components })
    }

    pub fn identity(f: &Functor) -> Self {
        let d = &f.target;
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f.objects.iter().map(|&o| d.id(o)).collect(),
        }
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn at(&self, x: ObjId) -> MorId {
        self.components[x.0]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// Vertical composite `next · self`.
    pub fn then(&self, next: &NatTrans) -> Result<NatTrans> {
        if self.target != next.source {
            return Err(Error::invalid("transformations do not compose"));
        }
        let d = &self.source.target;
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(&a, &b)| d.compose(b, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans { source: self.source.clone(), target: next.target.clone(), components })
    }

    pub fn labels(&self) -> Vec<String> {
        let (c, d) = (&self.source.source, &self.source.target);
        c.object_ids().map(|x| format!("{}: {}", c.obj_name(x), d.label(self.at(x)))).collect()
    }
}

/// Component endpoints and every naturality square `G(f)∘α_X = α_Y∘F(f)`.
pub fn check_natural(alpha: &NatTrans) -> LawReport {
    let (f, g) = (&alpha.source, &alpha.target);
    let (c, d) = (&f.source, &f.target);
    let mut r = LawReport::new("naturality");
    for x in c.object_ids() {
        let a = alpha.at(x);
        r.expect(d.src(a) == f.obj(x) && d.tgt(a) == g.obj(x), "component", || c.obj_name(x).to_string(), || {
            format!("{} is not {} -> {}", d.label(a), d.obj_name(f.obj(x)), d.obj_name(g.obj(x)))
        });
    }
    if !r.passed() {
        return r;
    }
    for m in c.morphism_ids() {
        let (x, y) = (c.src(m), c.tgt(m));
        let lhs = d.try_compose(g.mor(m), alpha.at(x));
        let rhs = d.try_compose(alpha.at(y), f.mor(m));
        match (lhs, rhs) {
            (Ok(Some(l)), Ok(Some(rr))) => {
                r.expect(l == rr, "naturality", || c.label(m).to_string(), || {
                    format!("G(f)∘α_X = {} but α_Y∘F(f) = {}", d.label(l), d.label(rr))
                });
            }
            _ => r.violate("naturality", c.label(m), "square composite undefined"),
        }
    }
    r
}

/// All functors `c -> d`, lexicographic over object maps then morphism maps.
pub fn enumerate_functors(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: Budget) -> Result<Vec<Functor>> {
    // composites (g, f) = h grouped by the largest id among the three, so each
    // constraint is checked as soon as all its parts are assigned
    let mut due: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); c.num_morphisms()];
    for ((g, f), h) in c.composites() {
        let last = g.max(f).max(h);
        due[last.0].push((g, f, h));
    }
    let mut out = Vec::new();
    let mut examined: u64 = 0;
    let nd = d.num_objects();
    let sizes = vec![nd; c.num_objects()];
    for objects in crate::category::odometer(&sizes) {
        let objects: Vec<ObjId> = objects.into_iter().map(ObjId).collect();
        let mut choices = Vec::with_capacity(c.num_morphisms());
        for f in c.morphism_ids() {
            let (a, b) = (objects[c.src(f).0], objects[c.tgt(f).0]);
            if c.is_identity(f) {
                choices.push(vec![d.id(a)]);
            } else {
                choices.push(d.hom_set(a, b)?.to_vec());
            }
        }
        let mut assigned = vec![MorId(0); c.num_morphisms()];
        search(0, &choices, &due, d, &mut assigned, &mut examined, budget, &mut |m| {
            out.push(Functor { source: c.clone(), target: d.clone(), objects: objects.clone(), morphisms: m.to_vec() });
        })?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    i: usize,
    choices: &[Vec<MorId>],
    due: &[Vec<(MorId, MorId, MorId)>],
    d: &FinCat,
    assigned: &mut Vec<MorId>,
    examined: &mut u64,
    budget: Budget,
    emit: &mut dyn FnMut(&[MorId]),
) -> Result<()> {
    if i == choices.len() {
        emit(assigned);
        return Ok(());
    }
    for &m in &choices[i] {
        *examined += 1;
        budget.check_count(|| "functor candidates".into(), *examined as u128)?;
        assigned[i] = m;
        let ok = due[i].iter().all(|&(g, f, h)| {
            matches!(d.try_compose(assigned[g.0], assigned[f.0]), Ok(Some(x)) if x == assigned[h.0])
        });
        if ok {
            search(i + 1, choices, due, d, assigned, examined, budget, emit)?;
        }
    }
    Ok(())
}

/// All natural transformations `f ⇒ g`, lexicographic in component ids.
pub fn enumerate_transformations(f: &Functor, g: &Functor, budget: Budget) -> Result<Vec<NatTrans>> {
    let mut out = Vec::new();
    each_transformation(f, g, budget, &mut |t| {
        out.push(t);
        true
    })?;
    Ok(out)
}

/// Calls `visit` on each natural family in order until it returns false.
fn each_transformation(f: &Functor, g: &Functor, budget: Budget, visit: &mut dyn FnMut(NatTrans) -> bool) -> Result<()> {
    if !same_cat(&f.source, &g.source) || !same_cat(&f.target, &g.target) {
        return Err(Error::invalid("transformation between non-parallel functors"));
    }
    let (c, d) = (&f.source, &f.target);
    let n = c.num_objects();
    let choices = (0..n)
        .map(|x| d.hom_set(f.objects[x], g.objects[x]).map(|h| h.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    // squares are checked once both endpoints have components
    let mut due: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for m in c.morphism_ids() {
        due[c.src(m).0.max(c.tgt(m).0)].push(m);
    }
    let square = |comps: &[MorId], m: MorId| {
        let (x, y) = (c.src(m).0, c.tgt(m).0);
        let lhs = d.try_compose(g.mor(m), comps[x]);
        let rhs = d.try_compose(comps[y], f.mor(m));
        matches!((lhs, rhs), (Ok(Some(a)), Ok(Some(b))) if a == b)
    };
    let mut comps = vec![MorId(0); n];
    let mut examined = 0u64;
    let mut stack = vec![0usize; n + 1];
    let mut depth = 0usize;
    // iterative backtracking so `visit` can stop the search early
    loop {
        if depth == n {
            let t = NatTrans { source: f.clone(), target: g.clone(), components: comps.clone() };
            if !visit(t) {
                return Ok(());
            }
            if n == 0 {
                return Ok(());
            }
            depth -= 1;
            continue;
        }
        let k = stack[depth];
        if k >= choices[depth].len() {
            stack[depth] = 0;
            if depth == 0 {
                return Ok(());
            }
            depth -= 1;
            continue;
        }
        stack[depth] += 1;
        examined += 1;
        budget.check_count(|| "transformation candidates".into(), examined as u128)?;
        comps[depth] = choices[depth][k];
        if due[depth].iter().all(|&m| square(&comps, m)) {
            depth += 1;
        }
    }
}

/// First natural family `t1 ⇒ t2` in component order, if any.
pub fn transf_leq(t1: &Functor, t2: &Functor, budget: Budget) -> Result<Option<NatTrans>> {
    let mut found = None;
    each_transformation(t1, t2, budget, &mut |t| {
        found = Some(t);
        false
    })?;
    Ok(found)
}

/// The functor category with its objects and morphisms spelled out.
#[derive(Debug, Clone)]
pub struct FunctorCategory {
    pub category: Arc<FinCat>,
    pub functors: Vec<Functor>,
    pub transformations: Vec<NatTrans>,
}

/// `d^c`: functors as objects, natural transformations as morphisms,
/// composed componentwise.
pub fn functor_category(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: Budget) -> Result<FunctorCategory> {
    if c.is_truncated() || d.is_truncated() {
        return Err(Error::invalid("functor categories need exact source and target"));
    }
    let obj_maps = (d.num_objects() as u128).checked_pow(c.num_objects() as u32).unwrap_or(u128::MAX);
    budget.check_count(|| "object maps".into(), obj_maps)?;
    let functors = enumerate_functors(c, d, budget)?;
    let mut transformations = Vec::new();
    let mut infos = Vec::new();
    let mut index: HashMap<(usize, usize, Vec<MorId>), MorId> = HashMap::new();
    let mut identities = Vec::new();
    for (i, fi) in functors.iter().enumerate() {
        for (j, fj) in functors.iter().enumerate() {
            for t in enumerate_transformations(fi, fj, budget)? {
                let id = MorId(transformations.len());
                let comps: Vec<&str> = t.components.iter().map(|&m| d.label(m)).collect();
                infos.push(MorphismInfo {
                    label: format!("F{i}=>F{j}[{}]", comps.join(",")),
                    dom: ObjId(i),
                    cod: ObjId(j),
                    path: None,
                });
                if i == j && t == NatTrans::identity(fi) {
                    identities.push(id);
                }
                index.insert((i, j, t.components.clone()), id);
                transformations.push(t);
                budget.check_count(|| "natural transformations".into(), transformations.len() as u128)?;
            }
        }
    }
    let mut comp = HashMap::new();
    for (ai, a) in transformations.iter().enumerate() {
        for (bi, b) in transformations.iter().enumerate() {
            if infos[ai].cod != infos[bi].dom {
                continue;
            }
            let ba = a.then(b)?;
            let key = (infos[ai].dom.0, infos[bi].cod.0, ba.components);
            comp.insert((MorId(bi), MorId(ai)), index[&key]);
        }
    }
    let objects = (0..functors.len()).map(|i| format!("F{i}")).collect();
    let category = Arc::new(FinCat::from_tables(objects, infos, identities, comp, Certification::Exact)?);
    Ok(FunctorCategory { category, functors, transformations })
}
