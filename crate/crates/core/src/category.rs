//! The generic category interface and closure-backed functors and natural
//! transformations between arbitrary (possibly large, concretely
//! represented) categories.
//!
//! Laws for these are checked on a finite [`Universe`] of test objects and
//! morphisms; explicit finite categories are checked in full.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::LawReport;

/// Enumeration limits. Exceeding either is a hard [`Error::Budget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of candidate maps/functors/families examined.
    pub max_candidates: u64,
    /// Maximum size of a finite set built by a construction (e.g. `P(X)`).
    pub max_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_candidates: 1_000_000, max_elements: 1 << 17 }
    }
}

impl Budget {
    pub fn with_candidates(max_candidates: u64) -> Self {
        Budget { max_candidates, ..Budget::default() }
    }

    pub(crate) fn check_count(&self, what: impl FnOnce() -> String, count: u128) -> Result<()> {
        if count > self.max_candidates as u128 {
            return Err(Error::budget(what(), self.max_candidates));
        }
        Ok(())
    }

    pub(crate) fn check_size(&self, what: impl FnOnce() -> String, size: u128) -> Result<()> {
        if size > self.max_elements as u128 {
            return Err(Error::budget(what(), self.max_elements as u64));
        }
        Ok(())
    }
}

/// A category whose hom-sets can be enumerated (within a budget).
pub trait Category: Send + Sync {
    type Obj: Clone + Eq + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Hash + Debug + Send + Sync;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn hom(&self, x: &Self::Obj, y: &Self::Obj, budget: Budget) -> Result<Vec<Self::Mor>>;
    fn show_obj(&self, x: &Self::Obj) -> String;
    fn show_mor(&self, f: &Self::Mor) -> String;

    fn compose_all(&self, chain: &[&Self::Mor]) -> Result<Self::Mor> {
        // chain is written right-to-left: [h, g, f] means h ∘ g ∘ f
        let (last, rest) = chain.split_last().ok_or_else(|| Error::invalid("empty chain"))?;
        rest.iter().rev().try_fold((*last).clone(), |acc, m| self.compose(m, &acc))
    }

    fn is_iso(&self, f: &Self::Mor, budget: Budget) -> Result<Option<Self::Mor>> {
        let (x, y) = (self.dom(f), self.cod(f));
        for g in self.hom(&y, &x, budget)? {
            if self.compose(&g, f)? == self.identity(&x) && self.compose(f, &g)? == self.identity(&y) {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

pub type MapFn<A, B> = Arc<dyn Fn(&A) -> Result<B> + Send + Sync>;

/// A functor given by object and morphism functions.
pub struct FunctorFn<C: Category, D: Category> {
    pub name: String,
    obj: MapFn<C::Obj, D::Obj>,
    mor: MapFn<C::Mor, D::Mor>,
}

impl<C: Category, D: Category> Clone for FunctorFn<C, D> {
    fn clone(&self) -> Self {
        FunctorFn { name: self.name.clone(), obj: self.obj.clone(), mor: self.mor.clone() }
    }
}

impl<C: Category + 'static, D: Category + 'static> FunctorFn<C, D> {
    pub fn new(
        name: impl Into<String>,
        obj: impl Fn(&C::Obj) -> Result<D::Obj> + Send + Sync + 'static,
        mor: impl Fn(&C::Mor) -> Result<D::Mor> + Send + Sync + 'static,
    ) -> Self {
        FunctorFn { name: name.into(), obj: Arc::new(obj), mor: Arc::new(mor) }
    }

    pub fn obj(&self, x: &C::Obj) -> Result<D::Obj> {
        (self.obj)(x)
    }

    pub fn mor(&self, f: &C::Mor) -> Result<D::Mor> {
        (self.mor)(f)
    }

    /// `next ∘ self`.
    pub fn then<E: Category + 'static>(&self, next: &FunctorFn<D, E>) -> FunctorFn<C, E> {
        let (f, g) = (self.clone(), next.clone());
        let (f2, g2) = (self.clone(), next.clone());
        FunctorFn::new(
            format!("{}{}", next.name, self.name),
            move |x| g.obj(&f.obj(x)?),
            move |m| g2.mor(&f2.mor(m)?),
        )
    }
}

impl<C: Category + 'static> FunctorFn<C, C> {
    pub fn identity() -> Self {
        FunctorFn::new("Id", |x: &C::Obj| Ok(x.clone()), |m: &C::Mor| Ok(m.clone()))
    }
}

/// A family of components `X ↦ α_X`.
pub struct NatFn<C: Category, D: Category> {
    pub name: String,
    comp: MapFn<C::Obj, D::Mor>,
}

impl<C: Category, D: Category> Clone for NatFn<C, D> {
    fn clone(&self) -> Self {
        NatFn { name: self.name.clone(), comp: self.comp.clone() }
    }
}

impl<C: Category + 'static, D: Category + 'static> NatFn<C, D> {
    pub fn new(
        name: impl Into<String>,
        comp: impl Fn(&C::Obj) -> Result<D::Mor> + Send + Sync + 'static,
    ) -> Self {
        NatFn { name: name.into(), comp: Arc::new(comp) }
    }

    pub fn at(&self, x: &C::Obj) -> Result<D::Mor> {
        (self.comp)(x)
    }

    /// Identity transformation on a functor.
    pub fn identity_on(d: Arc<D>, f: &FunctorFn<C, D>) -> Self {
        let f = f.clone();
        NatFn::new(format!("1_{}", f.name), move |x| Ok(d.identity(&f.obj(x)?)))
    }
}

/// Finite test data for a possibly large category.
#[derive(Debug)]
pub struct Universe<C: Category> {
    pub objects: Vec<C::Obj>,
    pub morphisms: Vec<C::Mor>,
}

impl<C: Category> Clone for Universe<C> {
    fn clone(&self) -> Self {
        Universe { objects: self.objects.clone(), morphisms: self.morphisms.clone() }
    }
}

impl<C: Category> Universe<C> {
    /// All morphisms between the listed objects.
    pub fn full(cat: &C, objects: Vec<C::Obj>, budget: Budget) -> Result<Self> {
        let mut morphisms = Vec::new();
        for x in &objects {
            for y in &objects {
                morphisms.extend(cat.hom(x, y, budget)?);
                budget.check_count(|| "universe morphisms".into(), morphisms.len() as u128)?;
            }
        }
        Ok(Universe { objects, morphisms })
    }

    pub fn objects_only(objects: Vec<C::Obj>) -> Self {
        Universe { objects, morphisms: Vec::new() }
    }
}

fn record<T>(report: &mut LawReport, law: &str, at: impl FnOnce() -> String, r: Result<T>) -> Option<T> {
    report.tick();
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            report.violate(law, at(), e.to_string());
            None
        }
    }
}

/// Identity and composition laws of `f` on the universe's morphisms.
pub fn check_functor_on<C: Category + 'static, D: Category + 'static>(
    c: &C,
    d: &D,
    f: &FunctorFn<C, D>,
    u: &Universe<C>,
) -> LawReport {
    let mut r = LawReport::new(format!("functor {}", f.name));
    for x in &u.objects {
        let lhs = f.mor(&c.identity(x));
        let rhs = f.obj(x).map(|fx| d.identity(&fx));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                r.expect(a == b, "identity", || c.show_obj(x), || format!("{} != {}", d.show_mor(&a), d.show_mor(&b)));
            }
            (Err(e), _) | (_, Err(e)) => r.violate("identity", c.show_obj(x), e.to_string()),
        }
    }
    for m in &u.morphisms {
        let Some(fm) = record(&mut r, "endpoints", || c.show_mor(m), f.mor(m)) else { continue };
        let ends = f.obj(&c.dom(m)).and_then(|a| Ok((a, f.obj(&c.cod(m))?)));
        if let Some((a, b)) = record(&mut r, "endpoints", || c.show_mor(m), ends) {
            r.expect(d.dom(&fm) == a && d.cod(&fm) == b, "endpoints", || c.show_mor(m), || {
                format!("image {} has wrong endpoints", d.show_mor(&fm))
            });
        }
    }
    for g in &u.morphisms {
        for h in &u.morphisms {
            if c.cod(g) != c.dom(h) {
                continue;
            }
            let Ok(hg) = c.compose(h, g) else { continue };
            let lhs = f.mor(&hg);
            let rhs = f.mor(g).and_then(|fg| d.compose(&f.mor(h)?, &fg));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    r.expect(a == b, "composition", || format!("{} ∘ {}", c.show_mor(h), c.show_mor(g)), || {
                        format!("{} != {}", d.show_mor(&a), d.show_mor(&b))
                    });
                }
                (Err(e), _) | (_, Err(e)) => {
                    r.violate("composition", format!("{} ∘ {}", c.show_mor(h), c.show_mor(g)), e.to_string())
                }
            }
        }
    }
    r
}

/// Endpoint and naturality-square checks for `alpha: f => g`.
pub fn check_natural_on<C: Category + 'static, D: Category + 'static>(
    c: &C,
    d: &D,
    f: &FunctorFn<C, D>,
    g: &FunctorFn<C, D>,
    alpha: &NatFn<C, D>,
    u: &Universe<C>,
) -> LawReport {
    let mut r = LawReport::new(format!("natural {}: {} => {}", alpha.name, f.name, g.name));
    for x in &u.objects {
        let comp = alpha.at(x).and_then(|a| Ok((a, f.obj(x)?, g.obj(x)?)));
        if let Some((a, fx, gx)) = record(&mut r, "component", || c.show_obj(x), comp) {
            r.expect(d.dom(&a) == fx && d.cod(&a) == gx, "component", || c.show_obj(x), || {
                format!("{} has wrong endpoints", d.show_mor(&a))
            });
        }
    }
    for m in &u.morphisms {
        let (x, y) = (c.dom(m), c.cod(m));
        let sides = (|| {
            let lhs = d.compose(&g.mor(m)?, &alpha.at(&x)?)?;
            let rhs = d.compose(&alpha.at(&y)?, &f.mor(m)?)?;
            Ok((lhs, rhs))
        })();
        if let Some((lhs, rhs)) = record(&mut r, "naturality", || c.show_mor(m), sides) {
            r.expect(lhs == rhs, "naturality", || c.show_mor(m), || {
                format!("{} != {}", d.show_mor(&lhs), d.show_mor(&rhs))
            });
        }
    }
    r
}

/// Product iterator over `sizes`, yielding index vectors in lexicographic order.
pub(crate) fn odometer(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let empty = sizes.iter().any(|&s| s == 0);
    let mut cur: Option<Vec<usize>> = if empty { None } else { Some(vec![0; sizes.len()]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = sizes.len();
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < sizes[i] {
                cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_order() {
        let all: Vec<_> = odometer(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(odometer(&[]).count(), 1);
        assert_eq!(odometer(&[2, 0]).count(), 0);
    }
}
