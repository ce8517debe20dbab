//! Slice and coslice categories, pullbacks, and the change-of-base
//! adjunction `e_! ⊣ e*` between slices.

use std::sync::Arc;

use super::Adjunction;
use crate::category::{Budget, Category, FunctorFn, NatFn, Universe};
use crate::error::{Error, Result};
use crate::fincat::{materialize, FinCat, MorId, ObjId};
use crate::finset::{pullback, FinSetCat, FinSetMap};

/// A morphism of the slice over `N`: `map: X -> Y` with `cod ∘ map = dom`
/// (dually `map ∘ dom = cod` under `N`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SliceMor<M> {
    pub dom: M,
    pub cod: M,
    pub map: M,
}

/// `C/N` (objects: morphisms into `over`) or, with `co`, `N/C`.
pub struct SliceCat<C: Category> {
    pub base: Arc<C>,
    pub over: C::Obj,
    pub co: bool,
}

impl<C: Category> SliceCat<C> {
    pub fn over(base: &Arc<C>, n: C::Obj) -> Self {
        SliceCat { base: base.clone(), over: n, co: false }
    }

    pub fn under(base: &Arc<C>, n: C::Obj) -> Self {
        SliceCat { base: base.clone(), over: n, co: true }
    }

    /// The object of the base a slice object sits on.
    fn foot(&self, x: &C::Mor) -> C::Obj {
        if self.co {
            self.base.cod(x)
        } else {
            self.base.dom(x)
        }
    }

    /// All slice objects whose foot is one of `feet`.
    pub fn objects_on(&self, feet: &[C::Obj], budget: Budget) -> Result<Vec<C::Mor>> {
        let mut out = Vec::new();
        for x in feet {
            if self.co {
                out.extend(self.base.hom(&self.over, x, budget)?);
            } else {
                out.extend(self.base.hom(x, &self.over, budget)?);
            }
        }
        Ok(out)
    }
}

impl<C: Category> Category for SliceCat<C> {
    type Obj = C::Mor;
    type Mor = SliceMor<C::Mor>;

    fn dom(&self, f: &Self::Mor) -> C::Mor {
        f.dom.clone()
    }

    fn cod(&self, f: &Self::Mor) -> C::Mor {
        f.cod.clone()
    }

    fn identity(&self, x: &C::Mor) -> Self::Mor {
        SliceMor { dom: x.clone(), cod: x.clone(), map: self.base.identity(&self.foot(x)) }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.cod != g.dom {
            return Err(Error::NotComposable("slice morphisms".into()));
        }
        Ok(SliceMor { dom: f.dom.clone(), cod: g.cod.clone(), map: self.base.compose(&g.map, &f.map)? })
    }

    fn hom(&self, x: &C::Mor, y: &C::Mor, budget: Budget) -> Result<Vec<Self::Mor>> {
        let c = &*self.base;
        let mut out = Vec::new();
        for e in c.hom(&self.foot(x), &self.foot(y), budget)? {
            let ok = if self.co { c.compose(&e, x)? == *y } else { c.compose(y, &e)? == *x };
            if ok {
                out.push(SliceMor { dom: x.clone(), cod: y.clone(), map: e });
            }
        }
        Ok(out)
    }

    fn show_obj(&self, x: &C::Mor) -> String {
        self.base.show_mor(x)
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        self.base.show_mor(&f.map)
    }
}

fn explicit_slice(c: &Arc<FinCat>, n: ObjId, co: bool, budget: Budget) -> Result<Arc<FinCat>> {
    let s = SliceCat { base: c.clone(), over: n, co };
    let feet: Vec<ObjId> = c.object_ids().collect();
    let objects = s.objects_on(&feet, budget)?;
    Ok(materialize(&s, objects, budget)?.category)
}

/// `C/N` as an explicit category; objects are named by the morphism labels.
pub fn slice(c: &Arc<FinCat>, n: ObjId, budget: Budget) -> Result<Arc<FinCat>> {
    explicit_slice(c, n, false, budget)
}

/// `N/C`.
pub fn coslice(c: &Arc<FinCat>, n: ObjId, budget: Budget) -> Result<Arc<FinCat>> {
    explicit_slice(c, n, true, budget)
}

/// Projections of a chosen pullback of `p: E -> B <- C: r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PullbackSquare<M> {
    pub pi1: M,
    pub pi2: M,
}

pub trait HasPullbacks: Category {
    fn pullback(&self, p: &Self::Mor, r: &Self::Mor, budget: Budget) -> Result<PullbackSquare<Self::Mor>>;

    /// The unique `u` with `pi1 ∘ u = s`, `pi2 ∘ u = t`.
    fn mediator(
        &self,
        sq: &PullbackSquare<Self::Mor>,
        s: &Self::Mor,
        t: &Self::Mor,
        budget: Budget,
    ) -> Result<Self::Mor>;
}

impl HasPullbacks for FinSetCat {
    fn pullback(&self, p: &FinSetMap, r: &FinSetMap, _budget: Budget) -> Result<PullbackSquare<FinSetMap>> {
        if *p == FinSetMap::identity(&p.dom) && r.cod == p.cod {
            return Ok(PullbackSquare { pi1: r.clone(), pi2: FinSetMap::identity(&r.dom) });
        }
        let pb = pullback(p, r)?;
        Ok(PullbackSquare { pi1: pb.pi1, pi2: pb.pi2 })
    }

    fn mediator(&self, sq: &PullbackSquare<FinSetMap>, s: &FinSetMap, t: &FinSetMap, _budget: Budget) -> Result<FinSetMap> {
        if s.dom != t.dom || s.cod != sq.pi1.cod || t.cod != sq.pi2.cod {
            return Err(Error::CarrierMismatch("mediator legs do not match the pullback".into()));
        }
        let apex = &sq.pi1.dom;
        let table = (0..s.dom.len())
            .map(|w| {
                (0..apex.len())
                    .find(|&i| sq.pi1.apply(i) == s.apply(w) && sq.pi2.apply(i) == t.apply(w))
                    .ok_or_else(|| Error::invalid(format!("legs disagree at `{}`", s.dom.label(w))))
            })
            .collect::<Result<Vec<_>>>()?;
        FinSetMap::new(s.dom.clone(), apex.clone(), table)
    }
}

/// Pullbacks in an explicit finite category, by exhaustive search: the
/// first commuting square (by apex, then projections) through which every
/// other commuting square factors uniquely.
impl HasPullbacks for FinCat {
    fn pullback(&self, p: &MorId, r: &MorId, _budget: Budget) -> Result<PullbackSquare<MorId>> {
        let (e, b, c) = (self.src(*p), self.tgt(*p), self.src(*r));
        if self.tgt(*r) != b {
            return Err(Error::invalid("not a cospan"));
        }
        if self.is_identity(*p) {
            return Ok(PullbackSquare { pi1: *r, pi2: self.id(c) });
        }
        let squares = |apex: ObjId| -> Result<Vec<(MorId, MorId)>> {
            let mut out = Vec::new();
            for &x in self.hom_set(apex, e)? {
                for &y in self.hom_set(apex, c)? {
                    if self.compose(*p, x)? == self.compose(*r, y)? {
                        out.push((x, y));
                    }
                }
            }
            Ok(out)
        };
        let all: Vec<(ObjId, Vec<(MorId, MorId)>)> =
            self.object_ids().map(|q| Ok((q, squares(q)?))).collect::<Result<_>>()?;
        for (apex, cands) in &all {
            for &(x, y) in cands {
                let universal = all.iter().all(|(q, cones)| {
                    cones.iter().all(|&(s, t)| {
                        let hs = self.hom_set(*q, *apex).map(|h| h.to_vec()).unwrap_or_default();
                        hs.iter()
                            .filter(|&&u| self.compose(x, u).ok() == Some(s) && self.compose(y, u).ok() == Some(t))
                            .count()
                            == 1
                    })
                });
                if universal {
                    return Ok(PullbackSquare { pi1: x, pi2: y });
                }
            }
        }
        Err(Error::invalid(format!("no pullback of {} and {}", self.label(*p), self.label(*r))))
    }

    fn mediator(&self, sq: &PullbackSquare<MorId>, s: &MorId, t: &MorId, _budget: Budget) -> Result<MorId> {
        let (q, apex) = (self.src(*s), self.src(sq.pi1));
        let found: Vec<MorId> = self
            .hom_set(q, apex)?
            .iter()
            .copied()
            .filter(|&u| self.compose(sq.pi1, u).ok() == Some(*s) && self.compose(sq.pi2, u).ok() == Some(*t))
            .collect();
        match found.as_slice() {
            [u] => Ok(*u),
            _ => Err(Error::invalid(format!("{} mediators", found.len()))),
        }
    }
}

/// Along an identity the chosen pullback is the other leg itself, so base
/// change along `1_N` is the identity adjunction on the nose.
///
/// `e_! ⊣ e*: C/N1 ⇄ C/N2` for `e: N1 -> N2`, with `e_!(s) = e∘s`,
/// `e*(r) = π1` of the pullback of `r` along `e`, unit `⟨s, 1⟩` and counit
/// `π2`. The universes are all slice objects on the given feet.
pub fn change_of_base<C: HasPullbacks + 'static>(
    c: Arc<C>,
    e: C::Mor,
    feet: &[C::Obj],
    budget: Budget,
) -> Result<Adjunction<SliceCat<C>, SliceCat<C>>> {
    let (n1, n2) = (c.dom(&e), c.cod(&e));
    let s1 = Arc::new(SliceCat::over(&c, n1));
    let s2 = Arc::new(SliceCat::over(&c, n2));
    let universe_c = Universe::full(&*s1, s1.objects_on(feet, budget)?, budget)?;
    let universe_d = Universe::full(&*s2, s2.objects_on(feet, budget)?, budget)?;

    let (ca, ea) = (c.clone(), e.clone());
    let push = move |s: &C::Mor| ca.compose(&ea, s);
    let push2 = push.clone();
    let left = FunctorFn::new("e_!", push.clone(), move |f: &SliceMor<C::Mor>| {
        Ok(SliceMor { dom: push2(&f.dom)?, cod: push2(&f.cod)?, map: f.map.clone() })
    });

    let (cb, eb) = (c.clone(), e.clone());
    let pull = move |r: &C::Mor| cb.pullback(&eb, r, budget);
    let (pull2, cc) = (pull.clone(), c.clone());
    let right = FunctorFn::new(
        "e*",
        {
            let pull = pull.clone();
            move |r: &C::Mor| Ok(pull(r)?.pi1)
        },
        move |f: &SliceMor<C::Mor>| {
            let (a, b) = (pull2(&f.dom)?, pull2(&f.cod)?);
            let u = cc.mediator(&b, &a.pi1, &cc.compose(&f.map, &a.pi2)?, budget)?;
            Ok(SliceMor { dom: a.pi1, cod: b.pi1, map: u })
        },
    );

    let (cu, pull3, push3) = (c.clone(), pull.clone(), push.clone());
    let unit = NatFn::new("⟨s,1⟩", move |s: &C::Mor| {
        let sq = pull3(&push3(s)?)?;
        let foot = cu.dom(s);
        let u = cu.mediator(&sq, s, &cu.identity(&foot), budget)?;
        Ok(SliceMor { dom: s.clone(), cod: sq.pi1, map: u })
    });
    let (push4, pull4) = (push.clone(), pull);
    let counit = NatFn::new("π2", move |r: &C::Mor| {
        let sq = pull4(r)?;
        Ok(SliceMor { dom: push4(&sq.pi1)?, cod: r.clone(), map: sq.pi2 })
    });

    Ok(Adjunction {
        name: "change of base".into(),
        c: s1,
        d: s2,
        left,
        right,
        unit,
        counit,
        universe_c,
        universe_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjmonad::{check_adjunction, hom_bijection};
    use crate::finset::FinSetObj;

    #[test]
    fn slices_of_the_two_chain() {
        let c = Arc::new(FinCat::chain(2));
        let one = c.obj("1").unwrap();
        let s = slice(&c, one, Budget::default()).unwrap();
        assert_eq!(s.num_objects(), 2);
        assert_eq!(s.num_morphisms(), 3);
        let zero = c.obj("0").unwrap();
        let only = slice(&c, zero, Budget::default()).unwrap();
        assert_eq!((only.num_objects(), only.num_morphisms()), (1, 1));
        let co = coslice(&c, zero, Budget::default()).unwrap();
        assert_eq!((co.num_objects(), co.num_morphisms()), (2, 3));
        assert_eq!(coslice(&c, one, Budget::default()).unwrap().num_objects(), 1);
    }

    #[test]
    fn worked_pullback_instance() {
        let b = FinSetObj::of(&["b1", "b2"]);
        let e_set = FinSetObj::of(&["e"]);
        let p = FinSetMap::from_pairs(&e_set, &b, &[("e", "b1")]).unwrap();
        let c_set = FinSetObj::of(&["c1", "c2"]);
        let r = FinSetMap::from_pairs(&c_set, &b, &[("c1", "b1"), ("c2", "b2")]).unwrap();
        let feet = vec![FinSetObj::empty(), e_set.clone(), c_set.clone()];
        let a = change_of_base(Arc::new(FinSetCat), p.clone(), &feet, Budget::default()).unwrap();
        let pr = a.right.obj(&r).unwrap();
        assert_eq!(pr.dom.to_vec(), ["(e,c1)"]);
        assert!(check_adjunction(&a).unwrap().passed());
        let s = FinSetMap::identity(&e_set);
        let hb = hom_bijection(&a, &s, &r, Budget::default()).unwrap();
        assert_eq!((hb.left_size, hb.right_size), (1, 1));
        assert!(hb.bijective && hb.report.passed());
    }

    #[test]
    fn identity_base_change() {
        let b = FinSetObj::of(&["b1", "b2"]);
        let id = FinSetMap::identity(&b);
        let feet = vec![FinSetObj::range(1), FinSetObj::range(2)];
        let a = change_of_base(Arc::new(FinSetCat), id, &feet, Budget::default()).unwrap();
        assert!(check_adjunction(&a).unwrap().passed());
        for r in &a.universe_d.objects {
            assert_eq!(a.left.obj(r).unwrap(), *r);
            assert_eq!(a.right.obj(r).unwrap(), *r);
            assert_eq!(a.unit.at(r).unwrap().map, FinSetMap::identity(&r.dom));
            assert_eq!(a.counit.at(r).unwrap().map, FinSetMap::identity(&r.dom));
        }
    }
}
