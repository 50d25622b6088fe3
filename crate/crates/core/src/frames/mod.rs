//! H*-frames: the even ring `A`, the fixed ring `B`, the degree-halving
//! isomorphism `kappa: A -> B`, and the restriction `r∘σ` of each generator
//! of `A` as an element of `B[u]`.
//!
//! The equivariant cohomology of the space is identified with `A[u]`, so the
//! section `σ` is never stored; `r∘σ` is given on generators and extended
//! multiplicatively.

mod canonical;
mod module;
mod morphism;
mod upoly;
pub(crate) mod verify;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraMap, AlgebraSpec, DegreeScale, GradedAlgebra, Polynomial};

pub use canonical::canonical_frame;
pub use module::FrameModule;
pub use morphism::{verify_naturality, FrameMorphism, NaturalityReport};
pub use upoly::UPoly;
pub use verify::{
    axiom_checks, check_injectivity_r, halving_series, localize_check, verify_frame, FrameCheck, FrameReport,
    HalvingReport, InjectivityReport, LocalizationReport, LocalizedClass, AXIOMS_VERIFIED,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("frame needs one r∘σ image per even generator: {expected} generators, {found} images")]
    RsigmaCount { expected: usize, found: usize },
    #[error("class must be homogeneous of even degree, got {0}")]
    NotEvenHomogeneous(String),
    #[error("u-exponent {u_exp} exceeds degree {degree} for generator `{generator}`")]
    UExponent { generator: String, u_exp: u32, degree: u32 },
    #[error("even ring is not finite-dimensional below the cutoff")]
    NotFiniteDimensional,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationFrame {
    name: String,
    even: Arc<GradedAlgebra>,
    fixed: Arc<GradedAlgebra>,
    kappa: AlgebraMap,
    rsigma: Vec<UPoly>,
}

/// One `u^k * coeff` term of a serialized r∘σ image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UTerm {
    pub u_exp: u32,
    pub coeff: String,
}

/// Serialized form of a frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub even_ring: AlgebraSpec,
    pub fixed_ring: AlgebraSpec,
    pub kappa: BTreeMap<String, String>,
    pub rsigma: BTreeMap<String, Vec<UTerm>>,
}

impl ConjugationFrame {
    pub fn new(
        name: impl Into<String>,
        even: Arc<GradedAlgebra>,
        fixed: Arc<GradedAlgebra>,
        kappa_images: Vec<Polynomial>,
        rsigma: Vec<UPoly>,
    ) -> Result<Self, FrameError> {
        if rsigma.len() != even.ngens() {
            return Err(FrameError::RsigmaCount { expected: even.ngens(), found: rsigma.len() });
        }
        let kappa = AlgebraMap::new(even.clone(), fixed.clone(), DegreeScale::Half, kappa_images)?;
        let rsigma = rsigma.iter().map(|p| p.reduce(&fixed)).collect();
        Ok(ConjugationFrame { name: name.into(), even, fixed, kappa, rsigma })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn even(&self) -> &Arc<GradedAlgebra> {
        &self.even
    }

    pub fn fixed(&self) -> &Arc<GradedAlgebra> {
        &self.fixed
    }

    pub fn kappa(&self) -> &AlgebraMap {
        &self.kappa
    }

    pub fn rsigma(&self) -> &[UPoly] {
        &self.rsigma
    }

    pub fn cutoff(&self) -> u32 {
        self.even.cutoff()
    }

    pub fn kappa_of(&self, a: &Polynomial) -> Polynomial {
        self.kappa.apply(a)
    }

    /// `r∘σ(a) * u^j`, extending the generator data multiplicatively.
    pub fn restrict(&self, a: &Polynomial, j: u32) -> Result<UPoly, FrameError> {
        Restrictor::new(self).restrict(a, j)
    }

    pub fn restrictor(&self) -> Restrictor<'_> {
        Restrictor::new(self)
    }

    pub fn to_spec(&self) -> FrameSpec {
        let gens = self.even.generators();
        FrameSpec {
            name: self.name.clone(),
            even_ring: self.even.to_spec(),
            fixed_ring: self.fixed.to_spec(),
            kappa: gens.iter().zip(self.kappa.images()).map(|(g, p)| (g.name.clone(), self.fixed.format(p))).collect(),
            rsigma: gens
                .iter()
                .zip(&self.rsigma)
                .map(|(g, r)| {
                    let terms = r.terms().map(|(i, c)| UTerm { u_exp: i, coeff: self.fixed.format(c) }).collect();
                    (g.name.clone(), terms)
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &FrameSpec) -> Result<Self, FrameError> {
        let even = Arc::new(GradedAlgebra::from_spec(&spec.even_ring)?);
        let fixed = Arc::new(GradedAlgebra::from_spec(&spec.fixed_ring)?);
        for name in spec.kappa.keys().chain(spec.rsigma.keys()) {
            if even.generator_index(name).is_none() {
                return Err(AlgebraError::UnknownGenerator(name.clone()).into());
            }
        }
        let mut kappa = Vec::new();
        let mut rsigma = Vec::new();
        for g in even.generators() {
            kappa.push(match spec.kappa.get(&g.name) {
                Some(s) => fixed.parse(s)?,
                None => Polynomial::zero(),
            });
            let mut terms = Vec::new();
            for t in spec.rsigma.get(&g.name).map(Vec::as_slice).unwrap_or(&[]) {
                if t.u_exp > g.degree {
                    return Err(FrameError::UExponent { generator: g.name.clone(), u_exp: t.u_exp, degree: g.degree });
                }
                terms.push((t.u_exp, fixed.parse(&t.coeff)?));
            }
            rsigma.push(UPoly::from_terms(g.degree, terms));
        }
        ConjugationFrame::new(spec.name.clone(), even, fixed, kappa, rsigma)
    }

    /// Same frame with the generators of both rings renamed.
    pub fn renamed(&self, even_names: &[String], fixed_names: &[String]) -> Result<Self, FrameError> {
        let even = Arc::new(self.even.renamed(even_names)?);
        let fixed = Arc::new(self.fixed.renamed(fixed_names)?);
        ConjugationFrame::new(self.name.clone(), even, fixed, self.kappa.images().to_vec(), self.rsigma.clone())
    }

    /// Same frame data with every ring recomputed at a new cutoff.
    pub fn with_cutoff(&self, cutoff: u32) -> Result<Self, FrameError> {
        let mut spec = self.to_spec();
        spec.even_ring.cutoff = cutoff;
        spec.fixed_ring.cutoff = cutoff;
        ConjugationFrame::from_spec(&spec)
    }
}

/// Evaluates `r∘σ` on many classes of one frame, caching generator powers.
pub struct Restrictor<'a> {
    frame: &'a ConjugationFrame,
    powers: HashMap<(usize, u16), UPoly>,
}

impl<'a> Restrictor<'a> {
    pub fn new(frame: &'a ConjugationFrame) -> Self {
        Restrictor { frame, powers: HashMap::new() }
    }

    fn power(&mut self, i: usize, e: u16) -> UPoly {
        if let Some(p) = self.powers.get(&(i, e)) {
            return p.clone();
        }
        let fixed = &self.frame.fixed;
        let p = if e == 1 {
            self.frame.rsigma[i].clone()
        } else {
            let lower = self.power(i, e - 1);
            lower.mul(&self.frame.rsigma[i], fixed)
        };
        self.powers.insert((i, e), p.clone());
        p
    }

    pub fn restrict(&mut self, a: &Polynomial, j: u32) -> Result<UPoly, FrameError> {
        let a = self.frame.even.normal_form(a)?;
        Ok(self.restrict_unreduced(&a)?.shift(j))
    }

    /// Applies the multiplicative extension to `a` exactly as written, without
    /// first reducing modulo the relations of `A`.
    pub fn restrict_unreduced(&mut self, a: &Polynomial) -> Result<UPoly, FrameError> {
        let even = &self.frame.even;
        if let Some(d) = a.max_degree().filter(|d| *d > even.cutoff()) {
            return Err(AlgebraError::DegreeAboveCutoff { degree: d, cutoff: even.cutoff() }.into());
        }
        let degree = match a.degree() {
            None if a.is_zero() => return Ok(UPoly::zero(0)),
            Some(d) if d % 2 == 0 => d,
            _ => return Err(FrameError::NotEvenHomogeneous(even.format(a))),
        };
        let fixed = self.frame.fixed.clone();
        let mut out = UPoly::zero(degree);
        for m in a.terms() {
            let mut acc = UPoly::u_power(0, &fixed);
            for (i, e) in m.exponents().iter().enumerate() {
                if *e > 0 {
                    let p = self.power(i, *e);
                    acc = acc.mul(&p, &fixed);
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(n: u32) -> ConjugationFrame {
        let a = Arc::new(GradedAlgebra::from_strs(&[("a", 2)], &[&format!("a^{}", n + 1)], 24).unwrap());
        let b = Arc::new(GradedAlgebra::from_strs(&[("b", 1)], &[&format!("b^{}", n + 1)], 24).unwrap());
        let rs = UPoly::from_terms(2, [(1, b.parse("b").unwrap()), (0, b.parse("b^2").unwrap())]);
        ConjugationFrame::new("cp", a, b.clone(), vec![b.parse("b").unwrap()], vec![rs]).unwrap()
    }

    #[test]
    fn restrict_is_multiplicative_extension() {
        let f = cp(8);
        let a3 = f.even().parse("a^3").unwrap();
        let r = f.restrict(&a3, 0).unwrap();
        assert_eq!(r.display(f.fixed()).to_string(), "b^3*u^3 + b^4*u^2 + b^5*u + b^6");
        let one = f.even().one();
        assert_eq!(f.restrict(&one, 0).unwrap(), UPoly::u_power(0, f.fixed()));
    }

    #[test]
    fn restrict_rejects_above_cutoff() {
        let f = cp(20);
        let big = f.even().parse("a^13").unwrap();
        assert!(matches!(f.restrict(&big, 0), Err(FrameError::Algebra(AlgebraError::DegreeAboveCutoff { .. }))));
    }

    #[test]
    fn spec_round_trip_preserves_frame() {
        let f = cp(3);
        let json = serde_json::to_string(&f.to_spec()).unwrap();
        let back = ConjugationFrame::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
