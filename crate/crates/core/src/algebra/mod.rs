//! Finitely presented graded-commutative algebras over the two-element field.
//!
//! Every algebra carries a degree cutoff; all results are exact in degrees up
//! to the cutoff and say nothing beyond it. Grading is always by topological
//! degree.

mod groebner;
mod map;
mod parse;
mod poly;
mod presentation;
mod series;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::BitVec;

pub use groebner::{groebner_basis, reduce, Limits};
pub use map::{AlgebraMap, DegreeScale, IsoFailure, IsoReport, MapReport};
pub use poly::{Monomial, Polynomial};
pub use presentation::{minimal_presentation, MinimalPresentation};
pub use series::HilbertSeries;

pub const DEFAULT_CUTOFF: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("relation `{0}` is not homogeneous")]
    NonHomogeneous(String),
    #[error("degree {degree} exceeds cutoff {cutoff}")]
    DegreeAboveCutoff { degree: u32, cutoff: u32 },
    #[error("Gröbner computation exceeded resource limits in degree {degree} ({pairs} pairs, {basis} basis elements)")]
    CutoffOverflow { degree: u32, pairs: usize, basis: usize },
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("cutoff must be positive")]
    ZeroCutoff,
    #[error("map has {found} images for {expected} source generators")]
    ImageCount { expected: usize, found: usize },
    #[error("maps do not compose: {0}")]
    Composition(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// Serialized form of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default = "default_cutoff")]
    pub cutoff: u32,
}

fn default_cutoff() -> u32 {
    DEFAULT_CUTOFF
}

/// A graded-commutative algebra `Z2[generators]/(relations)` truncated at `cutoff`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    generators: Vec<Generator>,
    weights: Vec<u32>,
    relations: Vec<Polynomial>,
    cutoff: u32,
    basis: Vec<Polynomial>,
    standard: Vec<Vec<Monomial>>,
}

impl PartialEq for GradedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.cutoff == other.cutoff && self.basis == other.basis
    }
}

impl Eq for GradedAlgebra {}

impl GradedAlgebra {
    pub fn new(generators: Vec<Generator>, relations: Vec<Polynomial>, cutoff: u32) -> Result<Self, AlgebraError> {
        Self::with_limits(generators, relations, cutoff, Limits::default())
    }

    pub fn with_limits(
        generators: Vec<Generator>,
        relations: Vec<Polynomial>,
        cutoff: u32,
        limits: Limits,
    ) -> Result<Self, AlgebraError> {
        if cutoff == 0 {
            return Err(AlgebraError::ZeroCutoff);
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let weights: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let mut this = GradedAlgebra {
            generators,
            weights,
            relations: Vec::new(),
            cutoff,
            basis: Vec::new(),
            standard: Vec::new(),
        };
        for r in &relations {
            if !r.is_homogeneous() {
                return Err(AlgebraError::NonHomogeneous(this.format(r)));
            }
        }
        this.basis = groebner_basis(&relations, &this.weights, cutoff, limits)?;
        this.relations = relations;
        this.standard = (0..=cutoff)
            .map(|d| {
                let mut ms: Vec<Monomial> = this
                    .all_monomials(d)
                    .into_iter()
                    .filter(|m| !this.basis.iter().any(|g| g.leading().unwrap().divides(m)))
                    .collect();
                ms.sort();
                ms
            })
            .collect();
        Ok(this)
    }

    /// Builds an algebra from generator names/degrees and relation strings.
    pub fn from_strs(generators: &[(&str, u32)], relations: &[&str], cutoff: u32) -> Result<Self, AlgebraError> {
        let spec = AlgebraSpec {
            generators: generators.iter().map(|(n, d)| Generator::new(*n, *d)).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
            cutoff,
        };
        Self::from_spec(&spec)
    }

    pub fn polynomial_ring(generators: Vec<Generator>, cutoff: u32) -> Result<Self, AlgebraError> {
        Self::new(generators, Vec::new(), cutoff)
    }

    /// The two-element field concentrated in degree 0.
    pub fn ground_field(cutoff: u32) -> Self {
        Self::new(Vec::new(), Vec::new(), cutoff).expect("ground field is always valid")
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, AlgebraError> {
        let skeleton = GradedAlgebra {
            generators: spec.generators.clone(),
            weights: spec.generators.iter().map(|g| g.degree).collect(),
            relations: Vec::new(),
            cutoff: spec.cutoff,
            basis: Vec::new(),
            standard: Vec::new(),
        };
        let rels = spec.relations.iter().map(|s| skeleton.parse(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(spec.generators.clone(), rels, spec.cutoff)
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|r| self.format(r)).collect(),
            cutoff: self.cutoff,
        }
    }

    /// Serialized form with the reduced Gröbner basis in place of the given relations.
    pub fn to_canonical_spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            generators: self.generators.clone(),
            relations: self.basis.iter().map(|r| self.format(r)).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Reduced Gröbner basis of the relation ideal, valid up to the cutoff.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn gen(&self, i: usize) -> Polynomial {
        let mut exps = vec![0; self.ngens()];
        exps[i] = 1;
        Polynomial::from_monomial(Monomial::new(exps, &self.weights))
    }

    pub fn gen_named(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        self.generator_index(name).map(|i| self.gen(i)).ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))
    }

    pub fn one(&self) -> Polynomial {
        self.reduce(&Polynomial::one(self.ngens()))
    }

    pub fn monomial(&self, exps: Vec<u16>) -> Monomial {
        Monomial::new(exps, &self.weights)
    }

    /// Every monomial of weighted degree `d`, in increasing order.
    pub fn all_monomials(&self, d: u32) -> Vec<Monomial> {
        fn rec(w: &[u32], i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if i == w.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0u16;
            loop {
                let used = e as u32 * w[i];
                if used > left {
                    break;
                }
                cur.push(e);
                rec(w, i + 1, left - used, cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(&self.weights, 0, d, &mut Vec::new(), &mut out);
        let mut ms: Vec<Monomial> = out.into_iter().map(|e| Monomial::new(e, &self.weights)).collect();
        ms.sort();
        ms
    }

    /// Normal form of `p`. Fails if `p` has terms above the cutoff.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if let Some(d) = p.max_degree() {
            if d > self.cutoff {
                return Err(AlgebraError::DegreeAboveCutoff { degree: d, cutoff: self.cutoff });
            }
        }
        Ok(reduce(p, &self.basis))
    }

    /// Normal form in the truncated algebra: terms above the cutoff are dropped.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        reduce(&p.truncate(self.cutoff), &self.basis)
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in p.terms() {
            for b in q.terms() {
                if a.degree() + b.degree() <= self.cutoff {
                    out.toggle(a.mul(b));
                }
            }
        }
        reduce(&out, &self.basis)
    }

    pub fn pow(&self, p: &Polynomial, k: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, p);
        }
        acc
    }

    pub fn square(&self, p: &Polynomial) -> Polynomial {
        self.mul(p, p)
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    /// Standard monomials of degree `d`: a basis of the degree-`d` piece.
    pub fn basis(&self, d: u32) -> &[Monomial] {
        self.standard.get(d as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, d: u32) -> usize {
        self.basis(d).len()
    }

    pub fn hilbert(&self) -> HilbertSeries {
        HilbertSeries::new((0..=self.cutoff).map(|d| self.dim(d) as u64).collect())
    }

    /// True if every odd-degree piece up to the cutoff vanishes.
    pub fn is_even(&self) -> bool {
        (1..=self.cutoff).step_by(2).all(|d| self.dim(d) == 0)
    }

    /// Coordinates of the degree-`d` component of `p` in the standard basis.
    pub fn coordinates(&self, p: &Polynomial, d: u32) -> BitVec {
        let basis = self.basis(d);
        let mut v = BitVec::zeros(basis.len());
        for m in self.reduce(&p.component(d)).terms() {
            let i = basis.binary_search(m).expect("normal form term is standard");
            v.flip(i);
        }
        v
    }

    pub fn from_coordinates(&self, d: u32, v: &BitVec) -> Polynomial {
        let basis = self.basis(d);
        Polynomial::from_terms(v.ones().map(|i| basis[i].clone()))
    }

    pub fn basis_element(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_monomial(m.clone())
    }

    /// Tensor product. Generators are the disjoint union; a right-hand name
    /// that collides with a left-hand one gets primes appended until unique.
    pub fn tensor(&self, other: &GradedAlgebra) -> Result<GradedAlgebra, AlgebraError> {
        let n = self.ngens() + other.ngens();
        let mut gens = self.generators.clone();
        let mut names: HashSet<String> = gens.iter().map(|g| g.name.clone()).collect();
        for g in &other.generators {
            let mut name = g.name.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            names.insert(name.clone());
            gens.push(Generator::new(name, g.degree));
        }
        let mut rels: Vec<Polynomial> = self.relations.iter().map(|r| r.embed(0, n)).collect();
        rels.extend(other.relations.iter().map(|r| r.embed(self.ngens(), n)));
        GradedAlgebra::new(gens, rels, self.cutoff.min(other.cutoff))
    }

    /// Inclusion of a polynomial of this algebra into a tensor product where
    /// this algebra's generators start at `offset`.
    pub fn include(&self, p: &Polynomial, offset: usize, total: usize) -> Polynomial {
        p.embed(offset, total)
    }

    pub fn with_cutoff(&self, cutoff: u32) -> Result<GradedAlgebra, AlgebraError> {
        GradedAlgebra::new(self.generators.clone(), self.relations.clone(), cutoff)
    }

    pub fn renamed(&self, names: &[String]) -> Result<GradedAlgebra, AlgebraError> {
        assert_eq!(names.len(), self.ngens());
        let gens = self.generators.iter().zip(names).map(|(g, n)| Generator::new(n.clone(), g.degree)).collect();
        GradedAlgebra::new(gens, self.relations.clone(), self.cutoff)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial, AlgebraError> {
        parse::parse_polynomial(s, &self.generators, &self.weights)
    }

    pub fn format(&self, p: &Polynomial) -> String {
        parse::format_polynomial(p, &self.generators)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        parse::format_monomial(m, &self.generators)
    }
}

impl fmt::Display for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| self.format(r)).collect();
        write!(f, "Z2[{}]/({}) (deg <= {})", gens.join(", "), rels.join(", "), self.cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truncated_poly(deg: u32, n: u32) -> GradedAlgebra {
        GradedAlgebra::from_strs(&[("a", deg)], &[&format!("a^{}", n + 1)], 24).unwrap()
    }

    #[test]
    fn truncated_polynomial_series() {
        let a = truncated_poly(2, 2);
        assert_eq!(a.groebner_basis().len(), 1);
        assert_eq!(a.format(&a.groebner_basis()[0]), "a^3");
        assert_eq!(&a.hilbert().coefficients()[..8], &[1, 0, 1, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn normal_form_kills_relation_and_doubles() {
        let a = truncated_poly(2, 2);
        let a3 = a.parse("a^3").unwrap();
        assert!(a.normal_form(&a3).unwrap().is_zero());
        let a2 = a.parse("a^2").unwrap();
        assert!(a.normal_form(&(&a2 + &a2)).unwrap().is_zero());
    }

    #[test]
    fn normal_form_rejects_degree_above_cutoff() {
        let r = GradedAlgebra::from_strs(&[("u", 1)], &[], 5).unwrap();
        let p = r.parse("u^6").unwrap();
        assert_eq!(r.normal_form(&p), Err(AlgebraError::DegreeAboveCutoff { degree: 6, cutoff: 5 }));
    }

    #[test]
    fn polynomial_ring_in_degree_one_is_all_ones() {
        let r = GradedAlgebra::from_strs(&[("u", 1)], &[], 24).unwrap();
        assert!(r.hilbert().coefficients().iter().all(|c| *c == 1));
    }

    #[test]
    fn non_homogeneous_relation_rejected() {
        let err = GradedAlgebra::from_strs(&[("a", 2), ("b", 1)], &["a + b"], 10).unwrap_err();
        assert!(matches!(err, AlgebraError::NonHomogeneous(_)));
    }

    #[test]
    fn grassmannian_total_class_relations() {
        // (1 + c1 + c2)(1 + cb1 + cb2) = 1, graded components in degrees 2, 4, 6, 8
        let gr = GradedAlgebra::from_strs(
            &[("c1", 2), ("c2", 4), ("cb1", 2), ("cb2", 4)],
            &["c1 + cb1", "c2 + c1*cb1 + cb2", "c2*cb1 + c1*cb2", "c2*cb2"],
            24,
        )
        .unwrap();
        assert_eq!(&gr.hilbert().coefficients()[..10], &[1, 0, 1, 0, 2, 0, 1, 0, 1, 0]);
        assert!(gr.hilbert().coefficients()[9..].iter().all(|c| *c == 0));
        // hand elimination: cb1 = c1, cb2 = c2 + c1^2
        let cb2 = gr.parse("cb2").unwrap();
        let expected = gr.parse("c2 + c1^2").unwrap();
        assert_eq!(gr.reduce(&cb2), gr.reduce(&expected));
        let cb1 = gr.parse("cb1").unwrap();
        assert_eq!(gr.reduce(&cb1), gr.reduce(&gr.parse("c1").unwrap()));
    }

    #[test]
    fn tensor_series_and_renaming() {
        let a = GradedAlgebra::from_strs(&[("a", 2)], &["a^2"], 24).unwrap();
        let t = a.tensor(&a).unwrap();
        assert_eq!(t.generators()[1].name, "a'");
        assert_eq!(&t.hilbert().coefficients()[..6], &[1, 0, 2, 0, 1, 0]);
        let unit = GradedAlgebra::ground_field(24);
        assert_eq!(a.tensor(&unit).unwrap().hilbert(), a.hilbert());
    }

    #[test]
    fn tensor_of_infinite_projective_rings_is_convolution() {
        let a = GradedAlgebra::from_strs(&[("a", 2)], &[], 20).unwrap();
        let t = a.tensor(&a).unwrap();
        // 1/(1-t^2)^2 has coefficient m+1 at t^{2m}
        for d in 0..=20u32 {
            let expected = if d % 2 == 0 { d as u64 / 2 + 1 } else { 0 };
            assert_eq!(t.hilbert().coefficient(d), expected);
        }
    }

    #[test]
    fn spec_round_trip() {
        let a = GradedAlgebra::from_strs(&[("c1", 2), ("cb1", 2)], &["c1*cb1 + cb1^2"], 12).unwrap();
        let back = GradedAlgebra::from_spec(&a.to_spec()).unwrap();
        assert_eq!(a, back);
    }
}
