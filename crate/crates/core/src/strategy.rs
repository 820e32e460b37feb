//! Space families behind a common trait, registered by name.
//!
//! The built-in registry knows `sup`, `l1` and `lp`; callers select one at
//! runtime (the CLI's `--space` flag) and get a boxed criterion back.

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::oracle::OrthogonalDirection;
use crate::space::{FunctionVec, MeasureSpace, SpaceKind, Tolerances};
use crate::verdict::{AdditivityWitness, Side, SymmetryVerdict, Verdict, Witness};
use crate::{l1, lp, sup};

/// Orthogonality, classification and witness construction for one norm
/// family.
pub trait OrthogonalityCriterion: fmt::Debug + Send + Sync {
    fn kind(&self) -> SpaceKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Analytic decision of `f ⊥ g`.
    fn orthogonal(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        g: &FunctionVec,
        tol: &Tolerances,
    ) -> Result<Verdict>;

    fn classify(&self, space: &MeasureSpace, f: &FunctionVec, tol: &Tolerances) -> Result<SymmetryVerdict>;

    /// Oracle-verified witness that `f` is not symmetric on `side`. Fails
    /// with a logic error when `f` is symmetric on that side.
    fn asymmetry_witness(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        tol: &Tolerances,
        side: Side,
    ) -> Result<Option<Witness>>;

    /// Oracle-verified failure of right-additivity at a non-smooth `f`.
    /// `None` when the family has no such construction for `f`.
    fn additivity_violation(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        tol: &Tolerances,
    ) -> Result<Option<AdditivityWitness>>;

    /// Random `g` with `f ⊥ g`.
    fn orthogonal_direction(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        rng: &mut dyn RngCore,
        tol: &Tolerances,
    ) -> Result<OrthogonalDirection>;
}

/// Construction parameters passed to a family factory.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FamilyParams {
    pub p: Option<f64>,
}

type Factory = Box<dyn Fn(&FamilyParams) -> Result<Box<dyn OrthogonalityCriterion>> + Send + Sync>;

pub struct Registry {
    factories: BTreeMap<String, Factory>,
}

impl Registry {
    pub fn new() -> Self {
        Self { factories: BTreeMap::new() }
    }

    /// Registry with the sup, L1 and Lp families.
    pub fn builtin() -> Self {
        let mut r = Self::new();
        r.register("sup", |_| Ok(Box::new(sup::SupNorm)));
        r.register("l1", |_| Ok(Box::new(l1::L1Norm)));
        r.register("lp", |params| {
            let p = params
                .p
                .ok_or_else(|| Error::Domain("the lp family needs an exponent p".into()))?;
            Ok(Box::new(lp::LpNorm::new(p)?))
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&FamilyParams) -> Result<Box<dyn OrthogonalityCriterion>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn create(&self, name: &str, params: &FamilyParams) -> Result<Box<dyn OrthogonalityCriterion>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
        factory(params)
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Built-in criterion governing `kind`.
pub fn criterion_for(kind: SpaceKind) -> Result<Box<dyn OrthogonalityCriterion>> {
    let params = FamilyParams {
        p: match kind {
            SpaceKind::Lp { p } => Some(p),
            _ => None,
        },
    };
    Registry::builtin().create(kind.name(), &params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(Registry::builtin().names(), vec!["l1", "lp", "sup"]);
    }

    #[test]
    fn lp_requires_exponent() {
        let r = Registry::builtin();
        assert!(r.create("lp", &FamilyParams::default()).is_err());
        assert!(r.create("lp", &FamilyParams { p: Some(0.5) }).is_err());
        let c = r.create("lp", &FamilyParams { p: Some(3.0) }).unwrap();
        assert_eq!(c.kind(), SpaceKind::Lp { p: 3.0 });
    }

    #[test]
    fn unknown_family() {
        let err = Registry::builtin().create("l7", &FamilyParams::default()).unwrap_err();
        assert_eq!(err, Error::UnknownFamily("l7".into()));
    }

    #[test]
    fn custom_registration() {
        let mut r = Registry::new();
        r.register("max", |_| Ok(Box::new(sup::SupNorm)));
        assert_eq!(r.create("max", &FamilyParams::default()).unwrap().name(), "sup");
    }
}
