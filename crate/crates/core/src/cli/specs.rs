//! JSON inputs that bundle several objects: functors with their categories,
//! presheaves, transformations, and specifications of the built-in
//! adjunctions and monads.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adjmonad::builtin::{group_action_adjunction, group_action_monad, path_forget, powerset_monad, Upath};
use crate::adjmonad::concrete::{CatCat, FinGroup, GSetCat, GrphCat};
use crate::adjmonad::{change_of_base, identity_adjunction, left_adjoint, Adjunction, Monad, SliceCat};
use crate::category::{Budget, Universe};
use crate::error::{Error, Result};
use crate::fincat::{CategoryJson, FinCat};
use crate::finset::{FinSetCat, FinSetMap, FinSetObj};
use crate::foundations::{DiGraph, GraphHom};
use crate::functcat::{Functor, FunctorJson};
use crate::mlsys::{SystemJson, TransMap, Transformation};
use crate::presheaf::PresheafJson;

/// A category given inline or by workspace reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatRef {
    Ref(String),
    Inline(CategoryJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorFile {
    pub source: CatRef,
    pub target: CatRef,
    pub functor: FunctorJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafFile {
    pub category: CatRef,
    pub presheaf: PresheafJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapJson {
    Functor(FunctorJson),
    Graph(GraphHom),
    Elements(BTreeMap<String, String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationFile {
    pub source: SystemJson,
    pub target: SystemJson,
    pub map: MapJson,
}

impl TransformationFile {
    pub fn build(&self) -> Result<Transformation> {
        let source = Arc::new(self.source.build()?);
        let target = Arc::new(self.target.build()?);
        let map = match (&self.map, source.cat(), target.cat()) {
            (MapJson::Functor(f), Some(c), Some(d)) => TransMap::Functor(Functor::from_json(c, d, f)?),
            (MapJson::Graph(h), _, _) => TransMap::Graph(h.clone()),
            (MapJson::Elements(m), _, _) => TransMap::Elements(m.clone()),
            (MapJson::Functor(_), _, _) => return Err(Error::invalid("a functor map needs category systems")),
        };
        Ok(Transformation { source, target, map })
    }
}

fn ranges(sizes: &[usize]) -> Vec<FinSetObj> {
    sizes.iter().map(|&n| FinSetObj::range(n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub table: BTreeMap<String, String>,
}

impl MapSpec {
    pub fn build(&self) -> Result<FinSetMap> {
        FinSetMap::from_table(&FinSetObj::new(self.dom.clone())?, &FinSetObj::new(self.cod.clone())?, &self.table)
    }
}

/// Built-in adjunctions. Finite sets are given by size and stand for
/// `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "kebab-case")]
pub enum AdjunctionSpec {
    Identity { sets: Vec<usize> },
    GroupAction { order: usize, sets: Vec<usize> },
    PathForget { bound: usize, graphs: Vec<DiGraph>, #[serde(default)] categories: Vec<CatRef> },
    /// Base change along a morphism of a finite category; slice objects
    /// have feet among `feet` (all objects when empty).
    ChangeOfBase { category: CatRef, morphism: String, #[serde(default)] feet: Vec<String> },
    ChangeOfBaseSets { map: MapSpec, feet: Vec<usize> },
    /// The left adjoint of `functor`, found by universal arrows.
    LeftAdjoint { functor: FunctorFile },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "kebab-case")]
pub enum MonadSpec {
    Identity { sets: Vec<usize> },
    Powerset { sets: Vec<usize> },
    GroupAction { order: usize, sets: Vec<usize> },
    Upath { bound: usize, graphs: Vec<DiGraph> },
}

pub enum BuiltAdj {
    Sets(Adjunction<FinSetCat, FinSetCat>),
    GroupAction(Adjunction<FinSetCat, GSetCat>),
    PathForget(Adjunction<GrphCat, CatCat>),
    Slices(Adjunction<SliceCat<FinCat>, SliceCat<FinCat>>),
    SetSlices(Adjunction<SliceCat<FinSetCat>, SliceCat<FinSetCat>>),
    Explicit(Adjunction<FinCat, FinCat>),
}

/// Applies `$body` to whichever adjunction `$b` holds.
#[macro_export]
#[doc(hidden)]
macro_rules! with_adjunction {
    ($b:expr, $a:ident => $body:expr) => {
        match $b {
            $crate::cli::specs::BuiltAdj::Sets($a) => $body,
            $crate::cli::specs::BuiltAdj::GroupAction($a) => $body,
            $crate::cli::specs::BuiltAdj::PathForget($a) => $body,
            $crate::cli::specs::BuiltAdj::Slices($a) => $body,
            $crate::cli::specs::BuiltAdj::SetSlices($a) => $body,
            $crate::cli::specs::BuiltAdj::Explicit($a) => $body,
        }
    };
}

pub enum BuiltMonad {
    Sets(Monad<FinSetCat>),
    Paths(Upath, Universe<GrphCat>),
}

impl AdjunctionSpec {
    pub fn build(&self, cat: &dyn Fn(&CatRef) -> Result<Arc<FinCat>>, budget: Budget) -> Result<BuiltAdj> {
        Ok(match self {
            AdjunctionSpec::Identity { sets } => {
                let u = Universe::full(&FinSetCat, ranges(sets), budget)?;
                BuiltAdj::Sets(identity_adjunction(Arc::new(FinSetCat), u))
            }
            AdjunctionSpec::GroupAction { order, sets } => {
                BuiltAdj::GroupAction(group_action_adjunction(Arc::new(FinGroup::cyclic(*order)?), ranges(sets), budget)?)
            }
            AdjunctionSpec::PathForget { bound, graphs, categories } => {
                let cats = categories.iter().map(cat).collect::<Result<Vec<_>>>()?;
                BuiltAdj::PathForget(path_forget(*bound, graphs.clone(), cats, budget)?)
            }
            AdjunctionSpec::ChangeOfBase { category, morphism, feet } => {
                let c = cat(category)?;
                let e = c.mor(morphism)?;
                let feet = if feet.is_empty() {
                    c.object_ids().collect()
                } else {
                    feet.iter().map(|f| c.obj(f)).collect::<Result<Vec<_>>>()?
                };
                BuiltAdj::Slices(change_of_base(c, e, &feet, budget)?)
            }
            AdjunctionSpec::ChangeOfBaseSets { map, feet } => {
                BuiltAdj::SetSlices(change_of_base(Arc::new(FinSetCat), map.build()?, &ranges(feet), budget)?)
            }
            AdjunctionSpec::LeftAdjoint { functor } => {
                let g = Functor::from_json(&cat(&functor.source)?, &cat(&functor.target)?, &functor.functor)?;
                BuiltAdj::Explicit(left_adjoint(&g, budget)?)
            }
        })
    }
}

impl MonadSpec {
    pub fn build(&self, budget: Budget) -> Result<BuiltMonad> {
        Ok(match self {
            MonadSpec::Identity { sets } => {
                BuiltMonad::Sets(Monad::identity(Arc::new(FinSetCat), Universe::full(&FinSetCat, ranges(sets), budget)?))
            }
            MonadSpec::Powerset { sets } => {
                BuiltMonad::Sets(powerset_monad(Universe::full(&FinSetCat, ranges(sets), budget)?, budget))
            }
            MonadSpec::GroupAction { order, sets } => BuiltMonad::Sets(group_action_monad(
                Arc::new(FinGroup::cyclic(*order)?),
                Universe::full(&FinSetCat, ranges(sets), budget)?,
            )?),
            MonadSpec::Upath { bound, graphs } => {
                let gs = graphs.iter().cloned().map(Arc::new).collect();
                BuiltMonad::Paths(Upath::new(*bound), Universe::full(&GrphCat, gs, budget)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse() {
        let a: AdjunctionSpec = serde_json::from_str(r#"{"builtin": "group-action", "order": 2, "sets": [0, 1]}"#).unwrap();
        assert_eq!(a, AdjunctionSpec::GroupAction { order: 2, sets: vec![0, 1] });
        let m: MonadSpec = serde_json::from_str(r#"{"builtin": "powerset", "sets": [0, 1, 2, 3]}"#).unwrap();
        assert!(matches!(m, MonadSpec::Powerset { .. }));
        let r: CatRef = serde_json::from_str(r#""chain2""#).unwrap();
        assert_eq!(r, CatRef::Ref("chain2".into()));
        assert!(serde_json::from_str::<MonadSpec>(r#"{"builtin": "list"}"#).is_err());
    }
}
