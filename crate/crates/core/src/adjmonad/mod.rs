//! Adjunctions in unit/counit form, universal arrows, monads and their
//! algebras, the Eilenberg–Moore construction, Beck comparison, slices and
//! change of base.
//!
//! Everything is generic over [`Category`]; laws are checked on the finite
//! [`Universe`]s carried by each adjunction or monad.

pub mod builtin;
pub mod concrete;
pub mod em;
pub mod slice;

use std::sync::Arc;

use crate::category::{check_functor_on, check_natural_on, Budget, Category, FunctorFn, NatFn, Universe};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::functcat::Functor;
use crate::report::{Coverage, LawReport};

pub use em::{beck_comparison, check_algebra, eilenberg_moore, Algebra, AlgebraMor, Beck, EMCat, EilenbergMoore, Verdict};
pub use slice::{change_of_base, coslice, slice, HasPullbacks, PullbackSquare, SliceCat, SliceMor};

/// `F ⊣ G` with `F: C -> D`, unit `η: 1 ⇒ GF` and counit `ε: FG ⇒ 1`.
pub struct Adjunction<C: Category, D: Category> {
    pub name: String,
    pub c: Arc<C>,
    pub d: Arc<D>,
    pub left: FunctorFn<C, D>,
    pub right: FunctorFn<D, C>,
    pub unit: NatFn<C, C>,
    pub counit: NatFn<D, D>,
    pub universe_c: Universe<C>,
    pub universe_d: Universe<D>,
}

impl<C: Category, D: Category> Clone for Adjunction<C, D> {
    fn clone(&self) -> Self {
        Adjunction {
            name: self.name.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            unit: self.unit.clone(),
            counit: self.counit.clone(),
            universe_c: self.universe_c.clone(),
            universe_d: self.universe_d.clone(),
        }
    }
}

/// `1 ⊣ 1` on `c`.
pub fn identity_adjunction<C: Category + 'static>(c: Arc<C>, universe: Universe<C>) -> Adjunction<C, C> {
    let (c1, c2) = (c.clone(), c.clone());
    Adjunction {
        name: "identity".into(),
        c: c.clone(),
        d: c,
        left: FunctorFn::identity(),
        right: FunctorFn::identity(),
        unit: NatFn::new("1", move |x| Ok(c1.identity(x))),
        counit: NatFn::new("1", move |x| Ok(c2.identity(x))),
        universe_c: universe.clone(),
        universe_d: universe,
    }
}

/// Runs `f`; a resource-limit error aborts the whole check, any other error
/// is recorded as a violation of `law`.
pub(crate) fn attempt<T>(
    r: &mut LawReport,
    law: &str,
    at: impl FnOnce() -> String,
    f: impl FnOnce() -> Result<T>,
) -> Result<Option<T>> {
    match f() {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_resource_limit() => Err(e),
        Err(e) => {
            r.tick();
            r.violate(law, at(), e.to_string());
            Ok(None)
        }
    }
}

/// Functoriality of both sides, naturality of unit and counit, and the two
/// triangle identities `εF ∘ Fη = 1_F`, `Gε ∘ ηG = 1_G`, on the universes.
pub fn check_adjunction<C: Category + 'static, D: Category + 'static>(a: &Adjunction<C, D>) -> Result<LawReport> {
    let (c, d) = (&*a.c, &*a.d);
    let mut r = LawReport::new(format!("adjunction {}", a.name));
    r.absorb(check_functor_on(c, d, &a.left, &a.universe_c));
    r.absorb(check_functor_on(d, c, &a.right, &a.universe_d));
    let gf = a.left.then(&a.right);
    let fg = a.right.then(&a.left);
    r.absorb(check_natural_on(c, c, &FunctorFn::identity(), &gf, &a.unit, &a.universe_c));
    r.absorb(check_natural_on(d, d, &fg, &FunctorFn::identity(), &a.counit, &a.universe_d));
    for x in &a.universe_c.objects {
        let at = || format!("εF∘Fη at {}", c.show_obj(x));
        if let Some((lhs, rhs)) = attempt(&mut r, "triangle", at, || {
            let fx = a.left.obj(x)?;
            Ok((d.compose(&a.counit.at(&fx)?, &a.left.mor(&a.unit.at(x)?)?)?, d.identity(&fx)))
        })? {
            r.expect(lhs == rhs, "triangle", at, || format!("{} is not the identity", d.show_mor(&lhs)));
        }
    }
    for y in &a.universe_d.objects {
        let at = || format!("Gε∘ηG at {}", d.show_obj(y));
        if let Some((lhs, rhs)) = attempt(&mut r, "triangle", at, || {
            let gy = a.right.obj(y)?;
            Ok((c.compose(&a.right.mor(&a.counit.at(y)?)?, &a.unit.at(&gy)?)?, c.identity(&gy)))
        })? {
            r.expect(lhs == rhs, "triangle", at, || format!("{} is not the identity", c.show_mor(&lhs)));
        }
    }
    Ok(r)
}

/// The bijection `φ: D(FX, Y) -> C(X, GY)`, `φ(g) = Gg ∘ η_X`.
#[derive(Debug, Clone)]
pub struct HomBijection {
    /// `|D(FX, Y)|`.
    pub left_size: usize,
    /// `|C(X, GY)|`.
    pub right_size: usize,
    /// `(g, φ(g))` as displayed strings, in enumeration order of `D(FX, Y)`.
    pub pairs: Vec<(String, String)>,
    pub bijective: bool,
    /// Bijectivity, the inverse `f ↦ ε_Y ∘ Ff`, and naturality in both
    /// variables along universe morphisms into `X` and out of `Y`.
    pub report: LawReport,
}

pub fn hom_bijection<C: Category + 'static, D: Category + 'static>(
    a: &Adjunction<C, D>,
    x: &C::Obj,
    y: &D::Obj,
    budget: Budget,
) -> Result<HomBijection> {
    let (c, d) = (&*a.c, &*a.d);
    let (fx, gy) = (a.left.obj(x)?, a.right.obj(y)?);
    let left = d.hom(&fx, y, budget)?;
    let right = c.hom(x, &gy, budget)?;
    let eta = a.unit.at(x)?;
    let eps = a.counit.at(y)?;
    let phi = |g: &D::Mor| c.compose(&a.right.mor(g)?, &eta);
    let psi = |f: &C::Mor| d.compose(&eps, &a.left.mor(f)?);
    let mut r = LawReport::new(format!("hom bijection at ({}, {})", c.show_obj(x), d.show_obj(y)));
    let mut pairs = Vec::new();
    let mut images = Vec::new();
    for g in &left {
        let f = phi(g)?;
        pairs.push((d.show_mor(g), c.show_mor(&f)));
        r.expect(psi(&f)? == *g, "inverse", || d.show_mor(g), || "ψ(φ(g)) != g".into());
        images.push(f);
    }
    let mut seen = std::collections::HashSet::new();
    let injective = images.iter().all(|f| seen.insert(f.clone()));
    r.expect(injective, "injective", || "φ".into(), || "two maps share an image".into());
    for f in &right {
        r.expect(seen.contains(f), "surjective", || c.show_mor(f), || "not in the image of φ".into());
        r.expect(phi(&psi(f)?)? == *f, "inverse", || c.show_mor(f), || "φ(ψ(f)) != f".into());
    }
    for h in a.universe_c.morphisms.iter().filter(|h| c.cod(h) == *x) {
        let fh = a.left.mor(h)?;
        for g in &left {
            let lhs = phi_at(a, &c.dom(h), &d.compose(g, &fh)?)?;
            let rhs = c.compose(&phi(g)?, h)?;
            r.expect(lhs == rhs, "natural in X", || format!("{} at {}", c.show_mor(h), d.show_mor(g)), || {
                "φ(g∘Fh) != φ(g)∘h".into()
            });
        }
    }
    for k in a.universe_d.morphisms.iter().filter(|k| d.dom(k) == *y) {
        let gk = a.right.mor(k)?;
        for g in &left {
            let lhs = phi_at(a, x, &d.compose(k, g)?)?;
            let rhs = c.compose(&gk, &phi(g)?)?;
            r.expect(lhs == rhs, "natural in Y", || format!("{} at {}", d.show_mor(k), d.show_mor(g)), || {
                "φ(k∘g) != Gk∘φ(g)".into()
            });
        }
    }
    Ok(HomBijection { left_size: left.len(), right_size: right.len(), pairs, bijective: injective && left.len() == right.len(), report: r })
}

fn phi_at<C: Category + 'static, D: Category + 'static>(a: &Adjunction<C, D>, x: &C::Obj, g: &D::Mor) -> Result<C::Mor> {
    a.c.compose(&a.right.mor(g)?, &a.unit.at(x)?)
}

/// `(A, u: B -> FA)` through which every `B -> FA'` factors uniquely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalArrow<A: Category, B: Category> {
    pub object: A::Obj,
    pub arrow: B::Mor,
}

/// Searches `candidates` in order for a universal arrow from `b` to `f`;
/// universality is verified against every candidate object. `None` when no
/// candidate qualifies (in particular when no arrow `b -> FA` exists).
pub fn universal_arrow<A: Category + 'static, B: Category + 'static>(
    acat: &A,
    bcat: &B,
    f: &FunctorFn<A, B>,
    b: &B::Obj,
    candidates: &[A::Obj],
    budget: Budget,
) -> Result<Option<UniversalArrow<A, B>>> {
    let images = candidates.iter().map(|a| f.obj(a)).collect::<Result<Vec<_>>>()?;
    let arrows = images.iter().map(|fa| bcat.hom(b, fa, budget)).collect::<Result<Vec<_>>>()?;
    for (i, a) in candidates.iter().enumerate() {
        'arrow: for u in &arrows[i] {
            for (j, a2) in candidates.iter().enumerate() {
                let hs = acat.hom(a, a2, budget)?;
                let fhs = hs.iter().map(|h| bcat.compose(&f.mor(h)?, u)).collect::<Result<Vec<_>>>()?;
                for g in &arrows[j] {
                    if fhs.iter().filter(|x| *x == g).count() != 1 {
                        continue 'arrow;
                    }
                }
            }
            return Ok(Some(UniversalArrow { object: a.clone(), arrow: u.clone() }));
        }
    }
    Ok(None)
}

/// An explicit functor as a closure functor on [`FinCat`].
pub fn lift_functor(f: &Functor) -> FunctorFn<FinCat, FinCat> {
    let (f1, f2) = (f.clone(), f.clone());
    FunctorFn::new("F", move |x: &ObjId| Ok(f1.obj(*x)), move |m: &MorId| Ok(f2.mor(*m)))
}

/// The left adjoint of an explicit `g: D -> C`, built from universal arrows
/// `η_X: X -> G F0(X)` found by search over the objects of `D`.
pub fn left_adjoint(g: &Functor, budget: Budget) -> Result<Adjunction<FinCat, FinCat>> {
    let (d, c) = (g.source().clone(), g.target().clone());
    let gf = lift_functor(g);
    let candidates: Vec<ObjId> = d.object_ids().collect();
    let mut objects = Vec::new();
    let mut units = Vec::new();
    for x in c.object_ids() {
        let ua = universal_arrow(&*d, &*c, &gf, &x, &candidates, budget)?
            .ok_or_else(|| Error::Law(format!("no universal arrow from {}; no left adjoint", c.obj_name(x))))?;
        objects.push(ua.object);
        units.push(ua.arrow);
    }
    // F f is the unique f' with G f' ∘ η_X = η_X' ∘ f
    let mut morphisms = Vec::new();
    for f in c.morphism_ids() {
        let (x, x2) = (c.src(f), c.tgt(f));
        let want = c.compose(units[x2.0], f)?;
        let found: Vec<MorId> = d
            .hom_set(objects[x.0], objects[x2.0])?
            .iter()
            .copied()
            .filter(|&h| c.compose(g.mor(h), units[x.0]).ok() == Some(want))
            .collect();
        match found.as_slice() {
            [h] => morphisms.push(*h),
            _ => return Err(Error::Law(format!("{} has {} factorizations", c.label(f), found.len()))),
        }
    }
    let f = Functor::new(c.clone(), d.clone(), objects.clone(), morphisms)?;
    // ε_Y is the unique e: F G Y -> Y with G e ∘ η_{GY} = 1_{GY}
    let mut counits = Vec::new();
    for y in d.object_ids() {
        let gy = g.obj(y);
        let found: Vec<MorId> = d
            .hom_set(objects[gy.0], y)?
            .iter()
            .copied()
            .filter(|&e| c.compose(g.mor(e), units[gy.0]).ok() == Some(c.id(gy)))
            .collect();
        match found.as_slice() {
            [e] => counits.push(*e),
            _ => return Err(Error::Law(format!("counit at {} is not unique", d.obj_name(y)))),
        }
    }
    let universe_c = Universe::full(&*c, c.object_ids().collect(), budget)?;
    let universe_d = Universe::full(&*d, d.object_ids().collect(), budget)?;
    Ok(Adjunction {
        name: "left adjoint".into(),
        left: lift_functor(&f),
        right: gf,
        unit: NatFn::new("η", move |x: &ObjId| Ok(units[x.0])),
        counit: NatFn::new("ε", move |y: &ObjId| Ok(counits[y.0])),
        c,
        d,
        universe_c,
        universe_d,
    })
}

pub type Sampler<C> = Arc<dyn Fn(&<C as Category>::Obj, &mut LawReport) -> Result<()> + Send + Sync>;

/// `⟨T, η, μ⟩` on `c`.
pub struct Monad<C: Category> {
    pub name: String,
    pub c: Arc<C>,
    pub endo: FunctorFn<C, C>,
    pub unit: NatFn<C, C>,
    pub mult: NatFn<C, C>,
    pub universe: Universe<C>,
    /// Pointwise associativity check at `X`, used when building `T³X`
    /// exceeds the budget.
    pub sampler: Option<Sampler<C>>,
}

impl<C: Category> Clone for Monad<C> {
    fn clone(&self) -> Self {
        Monad {
            name: self.name.clone(),
            c: self.c.clone(),
            endo: self.endo.clone(),
            unit: self.unit.clone(),
            mult: self.mult.clone(),
            universe: self.universe.clone(),
            sampler: self.sampler.clone(),
        }
    }
}

impl<C: Category + 'static> Monad<C> {
    pub fn identity(c: Arc<C>, universe: Universe<C>) -> Self {
        let (c1, c2) = (c.clone(), c.clone());
        Monad {
            name: "identity".into(),
            c,
            endo: FunctorFn::identity(),
            unit: NatFn::new("1", move |x| Ok(c1.identity(x))),
            mult: NatFn::new("1", move |x| Ok(c2.identity(x))),
            universe,
            sampler: None,
        }
    }

    /// `T(x)`, `T(T(x))`.
    pub fn t(&self, x: &C::Obj) -> Result<C::Obj> {
        self.endo.obj(x)
    }
}

/// Functoriality of `T`, naturality of `η` and `μ`, the unit triangles
/// `μ∘ηT = 1 = μ∘Tη` and the associativity square `μ∘Tμ = μ∘μT`.
pub fn check_monad_laws<C: Category + 'static>(m: &Monad<C>) -> Result<LawReport> {
    let c = &*m.c;
    let mut r = LawReport::new(format!("monad {}", m.name));
    let t = &m.endo;
    let tt = t.then(t);
    r.absorb(check_functor_on(c, c, t, &m.universe));
    r.absorb(check_natural_on(c, c, &FunctorFn::identity(), t, &m.unit, &m.universe));
    r.absorb(check_natural_on(c, c, &tt, t, &m.mult, &m.universe));
    for x in &m.universe.objects {
        let show = c.show_obj(x);
        let parts = attempt(&mut r, "unit", || show.clone(), || {
            let tx = t.obj(x)?;
            let mu = m.mult.at(x)?;
            Ok((c.compose(&mu, &m.unit.at(&tx)?)?, c.compose(&mu, &t.mor(&m.unit.at(x)?)?)?, c.identity(&tx)))
        })?;
        if let Some((left, right, id)) = parts {
            r.expect(left == id, "unit", || format!("μ∘ηT at {show}"), || format!("{} is not the identity", c.show_mor(&left)));
            r.expect(right == id, "unit", || format!("μ∘Tη at {show}"), || format!("{} is not the identity", c.show_mor(&right)));
        }
        let assoc: Result<(C::Mor, C::Mor)> = (|| {
            let mu = m.mult.at(x)?;
            let tx = t.obj(x)?;
            Ok((c.compose(&mu, &t.mor(&mu)?)?, c.compose(&mu, &m.mult.at(&tx)?)?))
        })();
        match assoc {
            Ok((lhs, rhs)) => {
                r.expect(lhs == rhs, "associativity", || show.clone(), || {
                    format!("μ∘Tμ = {} but μ∘μT = {}", c.show_mor(&lhs), c.show_mor(&rhs))
                });
            }
            Err(e) if e.is_resource_limit() => match &m.sampler {
                Some(s) => s(x, &mut r)?,
                None => return Err(e),
            },
            Err(e) => r.violate("associativity", show, e.to_string()),
        }
    }
    Ok(r)
}

/// `⟨GF, η, GεF⟩`; the adjunction must pass [`check_adjunction`].
pub fn monad_from_adjunction<C: Category + 'static, D: Category + 'static>(a: &Adjunction<C, D>) -> Result<Monad<C>> {
    let report = check_adjunction(a)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Law(format!("not an adjunction: {} at {}: {}", v.law, v.at, v.detail)));
    }
    let (left, right, counit) = (a.left.clone(), a.right.clone(), a.counit.clone());
    Ok(Monad {
        name: format!("GF of {}", a.name),
        c: a.c.clone(),
        endo: a.left.then(&a.right),
        unit: a.unit.clone(),
        mult: NatFn::new("GεF", move |x| right.mor(&counit.at(&left.obj(x)?)?)),
        universe: a.universe_c.clone(),
        sampler: None,
    })
}

/// Componentwise equality of two monads on the first one's universe: `T` on
/// objects and morphisms, `η` and `μ`.
pub fn monads_agree<C: Category + 'static>(m: &Monad<C>, n: &Monad<C>) -> Result<LawReport> {
    let c = &*m.c;
    let mut r = LawReport::new(format!("{} = {}", m.name, n.name));
    for x in &m.universe.objects {
        let s = c.show_obj(x);
        r.expect(m.t(x)? == n.t(x)?, "T on objects", || s.clone(), || "differ".into());
        r.expect(m.unit.at(x)? == n.unit.at(x)?, "unit", || s.clone(), || "differ".into());
        r.expect(m.mult.at(x)? == n.mult.at(x)?, "multiplication", || s.clone(), || "differ".into());
    }
    for f in &m.universe.morphisms {
        r.expect(m.endo.mor(f)? == n.endo.mor(f)?, "T on morphisms", || c.show_mor(f), || "differ".into());
    }
    Ok(r)
}

pub(crate) fn sampled(r: &mut LawReport, samples: u64, seed: u64) {
    r.coverage = Coverage::Sampled { samples, seed };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinSetCat, FinSetObj};

    fn sets() -> Universe<FinSetCat> {
        Universe::full(&FinSetCat, (0..=2).map(FinSetObj::range).collect(), Budget::default()).unwrap()
    }

    #[test]
    fn identity_adjunction_passes() {
        let a = identity_adjunction(Arc::new(FinSetCat), sets());
        assert!(check_adjunction(&a).unwrap().passed());
        let x = FinSetObj::range(2);
        let hb = hom_bijection(&a, &x, &FinSetObj::range(2), Budget::default()).unwrap();
        assert!(hb.bijective && hb.report.passed());
        assert_eq!(hb.left_size, 4);
        assert!(hb.pairs.iter().all(|(g, f)| g == f));
        let m = monad_from_adjunction(&a).unwrap();
        assert!(check_monad_laws(&m).unwrap().passed());
        assert!(monads_agree(&m, &Monad::identity(Arc::new(FinSetCat), sets())).unwrap().passed());
    }

    #[test]
    fn wrong_counit_located() {
        let mut a = identity_adjunction(Arc::new(FinSetCat), sets());
        a.counit = NatFn::new("bad", |x: &FinSetObj| {
            Ok(if x.len() == 2 {
                crate::finset::FinSetMap::constant(x, x, 0)
            } else {
                crate::finset::FinSetMap::identity(x)
            })
        });
        let r = check_adjunction(&a).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.law == "triangle" && v.at.contains("{0,1}")));
    }

    #[test]
    fn universal_arrow_for_identity() {
        let id: FunctorFn<FinSetCat, FinSetCat> = FunctorFn::identity();
        let cands: Vec<FinSetObj> = (0..=2).map(FinSetObj::range).collect();
        let b = FinSetObj::range(1);
        let ua = universal_arrow(&FinSetCat, &FinSetCat, &id, &b, &cands, Budget::default()).unwrap().unwrap();
        assert_eq!(ua.object, b);
        assert_eq!(ua.arrow, crate::finset::FinSetMap::identity(&b));
        // nothing maps a nonempty set into the empty set
        let none =
            universal_arrow(&FinSetCat, &FinSetCat, &id, &b, &[FinSetObj::empty()], Budget::default()).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn left_adjoint_picks_initial_object() {
        let d = Arc::new(FinCat::chain(3));
        let t = Arc::new(FinCat::terminal());
        let g = Functor::constant(&d, &t, ObjId(0));
        let a = left_adjoint(&g, Budget::default()).unwrap();
        assert_eq!(a.left.obj(&ObjId(0)).unwrap(), d.obj("0").unwrap());
        assert!(check_adjunction(&a).unwrap().passed());
        // the constant functor from the terminal category has no left adjoint into a discrete pair
        let two = Arc::new(FinCat::discrete(&["a", "b"]).unwrap());
        assert!(matches!(left_adjoint(&Functor::constant(&two, &t, ObjId(0)), Budget::default()), Err(Error::Law(_))));
    }
}
