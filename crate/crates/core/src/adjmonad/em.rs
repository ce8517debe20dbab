//! Algebras for a monad, the Eilenberg–Moore category and the comparison
//! functor of an adjunction.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{attempt, check_adjunction, monad_from_adjunction, monads_agree, Adjunction, Monad};
use crate::category::{Budget, Category, FunctorFn, NatFn, Universe};
use crate::error::{Error, Result};
use crate::fincat::{materialize, MorId, ObjId};
use crate::functcat::{check_functor, enumerate_transformations, Functor};
use crate::report::LawReport;

/// `⟨X, ξ: TX -> X⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra<O, M> {
    pub carrier: O,
    pub structure: M,
}

/// A map of carriers commuting with the structure maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraMor<O, M> {
    pub dom: Algebra<O, M>,
    pub cod: Algebra<O, M>,
    pub map: M,
}

pub type AlgOf<C> = Algebra<<C as Category>::Obj, <C as Category>::Mor>;
pub type AlgMorOf<C> = AlgebraMor<<C as Category>::Obj, <C as Category>::Mor>;

/// `ξ ∘ Tξ = ξ ∘ μ_X` and `ξ ∘ η_X = 1_X`.
pub fn check_algebra<C: Category + 'static>(m: &Monad<C>, a: &AlgOf<C>) -> Result<LawReport> {
    let c = &*m.c;
    let x = &a.carrier;
    let mut r = LawReport::new(format!("algebra on {}", c.show_obj(x)));
    let tx = m.t(x)?;
    if c.dom(&a.structure) != tx || c.cod(&a.structure) != *x {
        return Err(Error::invalid(format!("{} is not a map TX -> X", c.show_mor(&a.structure))));
    }
    let xi = &a.structure;
    if let Some((l, rr)) = attempt(&mut r, "multiplication", || c.show_obj(x), || {
        Ok((c.compose(xi, &m.endo.mor(xi)?)?, c.compose(xi, &m.mult.at(x)?)?))
    })? {
        r.expect(l == rr, "multiplication", || c.show_mor(xi), || "ξ∘Tξ != ξ∘μ".into());
    }
    if let Some(u) = attempt(&mut r, "unit", || c.show_obj(x), || c.compose(xi, &m.unit.at(x)?))? {
        r.expect(u == c.identity(x), "unit", || c.show_mor(xi), || "ξ∘η is not the identity".into());
    }
    Ok(r)
}

/// The category of `T`-algebras; hom-sets are filtered from the base.
pub struct EMCat<C: Category> {
    pub monad: Arc<Monad<C>>,
}

impl<C: Category + 'static> Category for EMCat<C> {
    type Obj = AlgOf<C>;
    type Mor = AlgMorOf<C>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.cod.clone()
    }

    fn identity(&self, x: &Self::Obj) -> Self::Mor {
        AlgebraMor { dom: x.clone(), cod: x.clone(), map: self.monad.c.identity(&x.carrier) }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.cod != g.dom {
            return Err(Error::NotComposable("algebra maps".into()));
        }
        Ok(AlgebraMor { dom: f.dom.clone(), cod: g.cod.clone(), map: self.monad.c.compose(&g.map, &f.map)? })
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj, budget: Budget) -> Result<Vec<Self::Mor>> {
        let c = &*self.monad.c;
        let mut out = Vec::new();
        for f in c.hom(&x.carrier, &y.carrier, budget)? {
            let lhs = c.compose(&f, &x.structure)?;
            let rhs = c.compose(&y.structure, &self.monad.endo.mor(&f)?)?;
            if lhs == rhs {
                out.push(AlgebraMor { dom: x.clone(), cod: y.clone(), map: f });
            }
        }
        Ok(out)
    }

    fn show_obj(&self, x: &Self::Obj) -> String {
        let c = &*self.monad.c;
        format!("<{},{}>", c.show_obj(&x.carrier), c.show_mor(&x.structure))
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        self.monad.c.show_mor(&f.map)
    }
}

pub struct EilenbergMoore<C: Category + 'static> {
    pub category: Arc<EMCat<C>>,
    /// Every law-abiding algebra on the given carriers, carrier by carrier
    /// in hom enumeration order.
    pub algebras: Vec<AlgOf<C>>,
    /// `F^T ⊣ G^T`.
    pub adjunction: Adjunction<C, EMCat<C>>,
}

/// Enumerates all algebras on `carriers` and builds the free/forgetful
/// adjunction. Its universe on the algebra side is every algebra found.
pub fn eilenberg_moore<C: Category + 'static>(
    m: &Monad<C>,
    carriers: &[C::Obj],
    budget: Budget,
) -> Result<EilenbergMoore<C>> {
    let monad = Arc::new(m.clone());
    let c = &*monad.c;
    let mut algebras = Vec::new();
    for x in carriers {
        for xi in c.hom(&monad.t(x)?, x, budget)? {
            let a = Algebra { carrier: x.clone(), structure: xi };
            if check_algebra(&monad, &a)?.passed() {
                algebras.push(a);
            }
        }
    }
    let category = Arc::new(EMCat { monad: monad.clone() });
    let (m1, m2, m3) = (monad.clone(), monad.clone(), monad.clone());
    let left: FunctorFn<C, EMCat<C>> = FunctorFn::new(
        "F^T",
        move |x: &C::Obj| Ok(Algebra { carrier: m1.t(x)?, structure: m1.mult.at(x)? }),
        move |f: &C::Mor| {
            let (x, y) = (m2.c.dom(f), m2.c.cod(f));
            Ok(AlgebraMor {
                dom: Algebra { carrier: m2.t(&x)?, structure: m2.mult.at(&x)? },
                cod: Algebra { carrier: m2.t(&y)?, structure: m2.mult.at(&y)? },
                map: m2.endo.mor(f)?,
            })
        },
    );
    let right: FunctorFn<EMCat<C>, C> =
        FunctorFn::new("G^T", |a: &AlgOf<C>| Ok(a.carrier.clone()), |f: &AlgMorOf<C>| Ok(f.map.clone()));
    let counit = NatFn::new("ε^T", move |a: &AlgOf<C>| {
        let x = &a.carrier;
        Ok(AlgebraMor {
            dom: Algebra { carrier: m3.t(x)?, structure: m3.mult.at(x)? },
            cod: a.clone(),
            map: a.structure.clone(),
        })
    });
    let universe_d = Universe::full(&*category, algebras.clone(), budget)?;
    let adjunction = Adjunction {
        name: format!("Eilenberg–Moore of {}", m.name),
        c: monad.c.clone(),
        d: category.clone(),
        left,
        right,
        unit: monad.unit.clone(),
        counit,
        universe_c: monad.universe.clone(),
        universe_d,
    };
    Ok(EilenbergMoore { category, algebras, adjunction })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `K` is an equivalence.
    Monadic,
    /// `K` is full and faithful but not essentially surjective.
    Premonadic,
    Neither,
    /// The equivalence search exceeded its budget.
    Undetermined,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BeckReport {
    pub verdict: Verdict,
    pub algebras: usize,
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    /// `G^T K = G` and `K F = F^T` on the universes.
    pub equations: LawReport,
    /// The monad of the Eilenberg–Moore adjunction against the original.
    pub round_trip: LawReport,
    /// The adjunction `F^T ⊣ G^T` itself.
    pub em_adjunction: LawReport,
    pub detail: Option<String>,
}

impl BeckReport {
    pub fn consistent(&self) -> bool {
        self.equations.passed() && self.round_trip.passed() && self.em_adjunction.passed()
    }
}

pub struct Beck<C: Category + 'static, D: Category + 'static> {
    /// `K B = ⟨GB, Gε_B⟩`, `K f = G f`.
    pub k: FunctorFn<D, EMCat<C>>,
    pub em: EilenbergMoore<C>,
    pub report: BeckReport,
}

/// Builds the comparison functor of `a` and classifies it by exhaustive
/// search over the universes: the algebra side is every algebra on the
/// carriers `universe_c ∪ G(universe_d)`.
pub fn beck_comparison<C: Category + 'static, D: Category + 'static>(
    a: &Adjunction<C, D>,
    budget: Budget,
) -> Result<Beck<C, D>> {
    let monad = monad_from_adjunction(a)?;
    let mut carriers = a.universe_c.objects.clone();
    for y in &a.universe_d.objects {
        let gy = a.right.obj(y)?;
        if !carriers.contains(&gy) {
            carriers.push(gy);
        }
    }
    let em = eilenberg_moore(&monad, &carriers, budget)?;
    let (g1, g2, eps) = (a.right.clone(), a.right.clone(), a.counit.clone());
    let d = a.d.clone();
    let k_obj = move |y: &D::Obj| -> Result<AlgOf<C>> { Ok(Algebra { carrier: g1.obj(y)?, structure: g1.mor(&eps.at(y)?)? }) };
    let k_obj2 = k_obj.clone();
    let k: FunctorFn<D, EMCat<C>> = FunctorFn::new("K", k_obj, move |f: &D::Mor| {
        Ok(AlgebraMor { dom: k_obj2(&d.dom(f))?, cod: k_obj2(&d.cod(f))?, map: g2.mor(f)? })
    });

    let (cc, dd) = (&*a.c, &*a.d);
    let mut equations = LawReport::new("comparison functor equations");
    let gt = &em.adjunction.right;
    let ft = &em.adjunction.left;
    for y in &a.universe_d.objects {
        equations.expect(gt.obj(&k.obj(y)?)? == a.right.obj(y)?, "G^T K = G", || dd.show_obj(y), || "objects differ".into());
    }
    for f in &a.universe_d.morphisms {
        equations.expect(gt.mor(&k.mor(f)?)? == a.right.mor(f)?, "G^T K = G", || dd.show_mor(f), || "maps differ".into());
    }
    for x in &a.universe_c.objects {
        equations.expect(k.obj(&a.left.obj(x)?)? == ft.obj(x)?, "K F = F^T", || cc.show_obj(x), || "algebras differ".into());
    }
    for f in &a.universe_c.morphisms {
        equations.expect(k.mor(&a.left.mor(f)?)? == ft.mor(f)?, "K F = F^T", || cc.show_mor(f), || "maps differ".into());
    }
    let round_trip = monads_agree(&monad, &monad_from_adjunction(&em.adjunction)?)?;
    let em_adjunction = check_adjunction(&em.adjunction)?;

    let mut report = BeckReport {
        verdict: Verdict::Undetermined,
        algebras: em.algebras.len(),
        faithful: false,
        full: false,
        essentially_surjective: false,
        equations,
        round_trip,
        em_adjunction,
        detail: None,
    };
    match classify(a, &k, &em, budget, &mut report) {
        Ok(v) => report.verdict = v,
        Err(e) if e.is_resource_limit() => {
            report.verdict = Verdict::Undetermined;
            report.detail = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(Beck { k, em, report })
}

fn classify<C: Category + 'static, D: Category + 'static>(
    a: &Adjunction<C, D>,
    k: &FunctorFn<D, EMCat<C>>,
    em: &EilenbergMoore<C>,
    budget: Budget,
    report: &mut BeckReport,
) -> Result<Verdict> {
    let md = materialize(&*a.d, a.universe_d.objects.clone(), budget)?;
    let me = materialize(&*em.category, em.algebras.clone(), budget)?;
    let (bd, be) = (&md.category, &me.category);
    let missing = || Error::invalid("K leaves the enumerated algebras");
    let objects = md.objects.iter().map(|y| me.obj_id(&k.obj(y)?).ok_or_else(missing)).collect::<Result<Vec<_>>>()?;
    let morphisms =
        md.morphisms.iter().map(|f| me.mor_id(&k.mor(f)?).ok_or_else(missing)).collect::<Result<Vec<_>>>()?;
    let kx = Functor::new(bd.clone(), be.clone(), objects, morphisms)?;

    let (mut faithful, mut full) = (true, true);
    for x in bd.object_ids() {
        for y in bd.object_ids() {
            let src = bd.hom_set(x, y)?;
            let img: std::collections::BTreeSet<MorId> = src.iter().map(|&f| kx.mor(f)).collect();
            faithful &= img.len() == src.len();
            full &= img.len() == be.hom_set(kx.obj(x), kx.obj(y))?.len();
        }
    }
    report.faithful = faithful;
    report.full = full;
    // for each algebra, the first object of D whose image is isomorphic to it
    let mut preimage: Vec<Option<(ObjId, MorId)>> = vec![None; be.num_objects()];
    for alg in be.object_ids() {
        'search: for y in bd.object_ids() {
            for &f in be.hom_set(kx.obj(y), alg)? {
                if be.is_iso(&f, budget)?.is_some() {
                    preimage[alg.0] = Some((y, f));
                    break 'search;
                }
            }
        }
    }
    report.essentially_surjective = preimage.iter().all(Option::is_some);
    if !(faithful && full) {
        return Ok(Verdict::Neither);
    }
    if !report.essentially_surjective {
        return Ok(Verdict::Premonadic);
    }
    // quasi-inverse: L A = y with φ_A: K y ≅ A, L h = K⁻¹(φ_B⁻¹ ∘ h ∘ φ_A)
    let pre: Vec<(ObjId, MorId)> = preimage.into_iter().map(Option::unwrap).collect();
    let inv = pre.iter().map(|&(_, f)| Ok(be.is_iso(&f, budget)?.expect("iso"))).collect::<Result<Vec<_>>>()?;
    let mut lmor = Vec::new();
    for h in be.morphism_ids() {
        let (s, t) = (be.src(h), be.tgt(h));
        let conj = be.compose(inv[t.0], be.compose(h, pre[s.0].1)?)?;
        let (ys, yt) = (pre[s.0].0, pre[t.0].0);
        let back = bd.hom_set(ys, yt)?.iter().copied().find(|&f| kx.mor(f) == conj).ok_or_else(|| Error::invalid("K is not full"))?;
        lmor.push(back);
    }
    let l = Functor::new(be.clone(), bd.clone(), pre.iter().map(|p| p.0).collect(), lmor)?;
    if !check_functor(&l).passed() {
        report.detail = Some("quasi-inverse candidate is not a functor".into());
        return Ok(Verdict::Neither);
    }
    let lk = kx.then(&l)?;
    let kl = l.then(&kx)?;
    let iso_to_identity = |f: &Functor| -> Result<bool> {
        let id = Functor::identity(f.source());
        let cat = f.target();
        for t in enumerate_transformations(f, &id, budget)? {
            let mut all = true;
            for &c in t.components() {
                all &= cat.is_iso(&c, budget)?.is_some();
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    };
    if iso_to_identity(&lk)? && iso_to_identity(&kl)? {
        report.detail = Some(format!("quasi-inverse found on {} algebras", be.num_objects()));
        Ok(Verdict::Monadic)
    } else {
        report.detail = Some("no natural isomorphisms LK ≅ 1, KL ≅ 1".into());
        Ok(Verdict::Neither)
    }
}
