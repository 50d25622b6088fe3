//! Runtime lookup of checks and frame constructors by name.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::constructors::{
    bt_frame, grassmannian_frame, point_frame, projective_frame, sphere_frame, toric_frame, Extent, ToricData,
};
use crate::frames::{axiom_checks, verify, ConjugationFrame, FrameCheck, FrameError};
use crate::report::CheckResult;

/// Every single-frame check, keyed by id. Axiom checks run first, in order.
pub struct CheckRegistry {
    order: Vec<&'static str>,
    checks: BTreeMap<&'static str, Box<dyn FrameCheck>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut r = CheckRegistry { order: Vec::new(), checks: BTreeMap::new() };
        for c in axiom_checks() {
            r.register(c);
        }
        r.register(Box::new(verify::InjectivityCheck));
        r.register(Box::new(verify::HalvingCheck));
        r.register(Box::new(verify::LocalizationCheck));
        r
    }
}

impl CheckRegistry {
    pub fn register(&mut self, check: Box<dyn FrameCheck>) {
        let id = check.id();
        if self.checks.insert(id, check).is_none() {
            self.order.push(id);
        }
    }

    pub fn get(&self, id: &str) -> Option<&dyn FrameCheck> {
        self.checks.get(id).map(|c| c.as_ref())
    }

    pub fn ids(&self) -> &[&'static str] {
        &self.order
    }

    pub fn run(&self, id: &str, frame: &ConjugationFrame) -> Option<CheckResult> {
        self.get(id).map(|c| c.run(frame))
    }

    pub fn run_all(&self, frame: &ConjugationFrame) -> Vec<CheckResult> {
        self.order.iter().map(|id| self.checks[id].run(frame)).collect()
    }
}

/// What each check id establishes.
const CATALOGUE: &[(&str, &str)] = &[
    ("even-cohomology", "The cohomology of X is concentrated in even degrees (first condition of a conjugation space)."),
    ("kappa-well-defined", "kappa: H^{2*}(X) -> H^*(X^τ) halves degrees and respects every relation (ring homomorphism)."),
    ("kappa-isomorphism", "kappa is bijective in each degree: the ring isomorphism of an H*-frame."),
    ("conjugation-equation", "Conjugation equation: r∘σ(a) = kappa(a) u^m + terms of lower u-degree, for a of degree 2m."),
    ("rsigma-relations", "r∘σ is multiplicative: every relation of H^{2*}(X) restricts to zero in H^*(X^τ)[u]."),
    ("kappa-unit", "kappa(1) = 1."),
    ("injectivity-r", "The restriction H^*_C(X) -> H^*_C(X^τ) = H^*(X^τ)[u] is injective for a conjugation space."),
    ("halving", "Halving identity P_X(t) = P_{X^τ}(t^2), the series-level consequence of kappa."),
    ("localization", "After inverting u, the restriction becomes surjective; evaluation at u = 1 need not be injective."),
    ("naturality-maps", "The maps of a frame morphism are ring homomorphisms preserving degree."),
    ("naturality-kappa", "Naturality of kappa: kappa commutes with maps induced by equivariant maps."),
    ("naturality-rsigma", "Naturality of the section: r∘σ commutes with maps induced by equivariant maps."),
    ("stabilize", "Direct limits: frames at increasing cutoffs agree, and kappa is the inverse limit."),
    ("chern-sw", "For a τ-bundle, kappa sends the total Chern class to the total Stiefel-Whitney class of the real part."),
    ("euler", "kappa sends the Euler class of a τ-bundle to the Euler class of its real part."),
    ("leray-hirsch", "The projective bundle of a τ-bundle is a free module over the base with basis 1, x, ..., x^{r-1}."),
    ("morse-halving", "Morse-Bott assembly of a Hamiltonian action with conjugation fixed set satisfies the halving identity."),
    ("xi-independence", "The assembled series do not depend on the generic direction."),
    ("equivariant-series", "Borel series of M and M^τ agree under halving (equivariant formality of both)."),
    ("two-torsion", "A fixed point is a 2-torsion point when an isotropy weight is divisible by 2."),
    ("mt2", "M^T = M^{T_2} exactly when no isotropy weight lies in 2 times the character lattice."),
    ("tw-kernel", "The kernel of the Kirwan map is generated by classes vanishing on sublevel fixed sets, over all directions."),
    ("three-cell", "Three-cell conjugation complexes: q is even, a^2 = p b, H^1 of the real locus has order q."),
];

pub fn explain(id: &str) -> Option<&'static str> {
    CATALOGUE.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

pub fn explained_ids() -> impl Iterator<Item = &'static str> {
    CATALOGUE.iter().map(|(k, _)| *k)
}

/// Named arguments for a constructor.
pub type Args = BTreeMap<String, Value>;

/// A frame constructor selectable by name.
pub trait FrameConstructor: Send + Sync {
    fn name(&self) -> &'static str;
    /// Parameter names, in the order used by the `name:p1:p2` shorthand.
    fn params(&self) -> &'static [&'static str];
    fn build(&self, args: &Args, cutoff: u32) -> Result<ConjugationFrame, FrameError>;
}

fn arg_u32(args: &Args, key: &str) -> Result<u32, FrameError> {
    match args.get(key) {
        Some(Value::Number(n)) => n.as_u64().and_then(|x| u32::try_from(x).ok()),
        Some(Value::String(s)) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| FrameError::Invalid(format!("argument `{key}` must be a nonnegative integer")))
}

fn arg_extent(args: &Args, key: &str) -> Result<Extent, FrameError> {
    match args.get(key) {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| FrameError::Invalid(format!("argument `{key}`: {e}"))),
        None => Err(FrameError::Invalid(format!("missing argument `{key}`"))),
    }
}

macro_rules! constructor {
    ($ty:ident, $name:literal, [$($p:literal),*], |$args:ident, $cutoff:ident| $body:expr) => {
        struct $ty;
        impl FrameConstructor for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn params(&self) -> &'static [&'static str] {
                &[$($p),*]
            }
            fn build(&self, $args: &Args, $cutoff: u32) -> Result<ConjugationFrame, FrameError> {
                $body
            }
        }
    };
}

constructor!(Point, "point", [], |_a, c| Ok(point_frame(c)));
constructor!(Sphere, "sphere", ["k"], |a, c| sphere_frame(arg_u32(a, "k")?, c));
constructor!(Projective, "projective", ["n"], |a, c| projective_frame(arg_extent(a, "n")?, c));
constructor!(Bt, "bt", ["r"], |a, c| bt_frame(arg_u32(a, "r")?, c));
constructor!(Grassmannian, "grassmannian", ["k", "n"], |a, c| grassmannian_frame(arg_u32(a, "k")?, arg_extent(a, "n")?, c));
constructor!(ToricSquare, "toric-square", [], |_a, c| toric_frame(&ToricData::square(), c));
constructor!(ToricSimplex, "toric-simplex", ["n"], |a, c| toric_frame(&ToricData::simplex(arg_u32(a, "n")? as usize), c));
constructor!(Hirzebruch, "hirzebruch", ["k"], |a, c| toric_frame(&ToricData::hirzebruch(i64::from(arg_u32(a, "k")?)), c));
constructor!(Toric, "toric", ["data"], |a, c| {
    let v = a.get("data").ok_or_else(|| FrameError::Invalid("missing argument `data`".into()))?;
    let data: ToricData = serde_json::from_value(v.clone()).map_err(|e| FrameError::Invalid(format!("toric data: {e}")))?;
    toric_frame(&data, c)
});

pub struct ConstructorRegistry {
    ctors: BTreeMap<&'static str, Box<dyn FrameConstructor>>,
}

impl Default for ConstructorRegistry {
    fn default() -> Self {
        let mut r = ConstructorRegistry { ctors: BTreeMap::new() };
        let all: Vec<Box<dyn FrameConstructor>> = vec![
            Box::new(Point),
            Box::new(Sphere),
            Box::new(Projective),
            Box::new(Bt),
            Box::new(Grassmannian),
            Box::new(ToricSquare),
            Box::new(ToricSimplex),
            Box::new(Hirzebruch),
            Box::new(Toric),
        ];
        for c in all {
            r.register(c);
        }
        r
    }
}

impl ConstructorRegistry {
    pub fn register(&mut self, c: Box<dyn FrameConstructor>) {
        self.ctors.insert(c.name(), c);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.ctors.keys().copied()
    }

    pub fn get(&self, name: &str) -> Option<&dyn FrameConstructor> {
        self.ctors.get(name).map(|c| c.as_ref())
    }

    pub fn build(&self, name: &str, args: &Args, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
        self.get(name).ok_or_else(|| FrameError::Invalid(format!("unknown constructor `{name}`")))?.build(args, cutoff)
    }

    /// Builds from the shorthand `name:arg1:arg2`, e.g. `grassmannian:2:4`.
    pub fn build_shorthand(&self, spec: &str, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
        let mut parts = spec.split(':');
        let name = parts.next().unwrap_or_default();
        let ctor = self.get(name).ok_or_else(|| FrameError::Invalid(format!("unknown constructor `{name}`")))?;
        let values: Vec<&str> = parts.collect();
        if values.len() != ctor.params().len() {
            return Err(FrameError::Invalid(format!(
                "`{name}` takes {} argument(s) ({}), got {}",
                ctor.params().len(),
                ctor.params().join(", "),
                values.len()
            )));
        }
        let args = ctor.params().iter().zip(values).map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect();
        ctor.build(&args, cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_is_explained() {
        let r = CheckRegistry::default();
        for id in r.ids() {
            assert!(explain(id).is_some(), "{id}");
        }
        assert_eq!(r.ids()[..3], ["even-cohomology", "kappa-well-defined", "kappa-isomorphism"]);
        assert!(explain("no-such-check").is_none());
    }

    #[test]
    fn shorthand_builds() {
        let r = ConstructorRegistry::default();
        let f = r.build_shorthand("grassmannian:2:4", 16).unwrap();
        assert_eq!(f.name(), "Gr(2,4)");
        let inf = r.build_shorthand("projective:inf", 10).unwrap();
        assert_eq!(inf.even().dim(10), 1);
        assert!(r.build_shorthand("projective", 10).is_err());
        assert!(r.build_shorthand("nope:1", 10).is_err());
    }
}
