use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::{AlgebraError, GradedAlgebra};
use crate::linalg;

/// How a map rescales degrees: `Half` sends degree `2m` to degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeScale {
    One,
    Half,
}

impl DegreeScale {
    pub fn apply(self, d: u32) -> Option<u32> {
        match self {
            DegreeScale::One => Some(d),
            DegreeScale::Half => (d % 2 == 0).then_some(d / 2),
        }
    }
}

/// A ring homomorphism between graded algebras given by generator images.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMap {
    source: Arc<GradedAlgebra>,
    target: Arc<GradedAlgebra>,
    scale: DegreeScale,
    images: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMismatch {
    pub generator: String,
    pub expected: u32,
    /// `None` when the image is not homogeneous.
    pub found: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationViolation {
    pub index: usize,
    pub relation: String,
    pub image: String,
}

/// Outcome of [`AlgebraMap::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub degree_mismatches: Vec<DegreeMismatch>,
    pub relation_violations: Vec<RelationViolation>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.degree_mismatches.is_empty() && self.relation_violations.is_empty()
    }

    pub fn first_witness(&self) -> Option<String> {
        if let Some(m) = self.degree_mismatches.first() {
            return Some(match m.found {
                Some(f) => format!("generator {} maps to degree {f}, expected {}", m.generator, m.expected),
                None => format!("generator {} maps to an inhomogeneous element, expected degree {}", m.generator, m.expected),
            });
        }
        self.relation_violations
            .first()
            .map(|v| format!("relation #{} `{}` maps to `{}`", v.index, v.relation, v.image))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoFailure {
    pub source_degree: u32,
    pub target_degree: Option<u32>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub iso: bool,
    pub failure: Option<IsoFailure>,
}

impl AlgebraMap {
    pub fn new(
        source: Arc<GradedAlgebra>,
        target: Arc<GradedAlgebra>,
        scale: DegreeScale,
        images: Vec<Polynomial>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != source.ngens() {
            return Err(AlgebraError::ImageCount { expected: source.ngens(), found: images.len() });
        }
        let images = images.iter().map(|p| target.reduce(p)).collect();
        Ok(AlgebraMap { source, target, scale, images })
    }

    /// Builds a map from `generator name -> polynomial string` pairs; missing
    /// generators map to zero.
    pub fn from_strs(
        source: Arc<GradedAlgebra>,
        target: Arc<GradedAlgebra>,
        scale: DegreeScale,
        images: &[(&str, &str)],
    ) -> Result<Self, AlgebraError> {
        let mut imgs = vec![Polynomial::zero(); source.ngens()];
        for (name, poly) in images {
            let i = source.generator_index(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            imgs[i] = target.parse(poly)?;
        }
        Self::new(source, target, scale, imgs)
    }

    pub fn identity(ring: Arc<GradedAlgebra>) -> Self {
        let images = (0..ring.ngens()).map(|i| ring.gen(i)).collect();
        AlgebraMap::new(ring.clone(), ring, DegreeScale::One, images).expect("identity is valid")
    }

    pub fn source(&self) -> &Arc<GradedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedAlgebra> {
        &self.target
    }

    pub fn scale(&self) -> DegreeScale {
        self.scale
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_of_generator(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    /// Image of a source polynomial, in normal form in the target.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut powers: HashMap<(usize, u16), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for m in p.terms() {
            let mut acc = self.target.one();
            for (i, e) in m.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let pw = powers.entry((i, *e)).or_insert_with(|| self.target.pow(&self.images[i], *e as u32));
                acc = self.target.mul(&acc, pw);
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Well-definedness: image degrees match the scale and every relation
    /// maps to zero in the target.
    pub fn check(&self) -> MapReport {
        let mut report = MapReport::default();
        for (g, img) in self.source.generators().iter().zip(&self.images) {
            let Some(expected) = self.scale.apply(g.degree) else {
                report.degree_mismatches.push(DegreeMismatch { generator: g.name.clone(), expected: g.degree, found: None });
                continue;
            };
            if img.is_zero() {
                continue;
            }
            match img.degree() {
                Some(d) if d == expected => {}
                found => report.degree_mismatches.push(DegreeMismatch { generator: g.name.clone(), expected, found }),
            }
        }
        if !report.degree_mismatches.is_empty() {
            return report;
        }
        for (index, r) in self.source.relations().iter().enumerate() {
            let Some(d) = r.degree() else { continue };
            if d > self.source.cutoff() {
                continue;
            }
            match self.scale.apply(d) {
                Some(e) if e <= self.target.cutoff() => {}
                _ => continue,
            }
            let img = self.apply(r);
            if !img.is_zero() {
                report.relation_violations.push(RelationViolation {
                    index,
                    relation: self.source.format(r),
                    image: self.target.format(&img),
                });
            }
        }
        report
    }

    /// Degreewise bijectivity up to the shared reach of both cutoffs. Assumes
    /// [`AlgebraMap::check`] passed.
    pub fn is_iso_up_to(&self) -> IsoReport {
        for d in 0..=self.source.cutoff() {
            let source_dim = self.source.dim(d);
            let Some(e) = self.scale.apply(d) else {
                if source_dim != 0 {
                    return IsoReport {
                        iso: false,
                        failure: Some(IsoFailure { source_degree: d, target_degree: None, source_dim, target_dim: 0, image_rank: 0 }),
                    };
                }
                continue;
            };
            if e > self.target.cutoff() {
                break;
            }
            let target_dim = self.target.dim(e);
            let images: Vec<_> = self
                .source
                .basis(d)
                .iter()
                .map(|m| self.target.coordinates(&self.apply(&Polynomial::from_monomial(m.clone())), e))
                .collect();
            let image_rank = linalg::rank(&images, target_dim);
            if source_dim != target_dim || image_rank != target_dim {
                return IsoReport {
                    iso: false,
                    failure: Some(IsoFailure { source_degree: d, target_degree: Some(e), source_dim, target_dim, image_rank }),
                };
            }
        }
        IsoReport { iso: true, failure: None }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AlgebraMap) -> Result<AlgebraMap, AlgebraError> {
        if *self.target != *next.source {
            return Err(AlgebraError::Composition("target of the first map is not the source of the second".into()));
        }
        let scale = match (self.scale, next.scale) {
            (DegreeScale::One, s) | (s, DegreeScale::One) => s,
            (DegreeScale::Half, DegreeScale::Half) => {
                return Err(AlgebraError::Composition("two half-degree maps compose to a quarter-degree map".into()))
            }
        };
        let images = self.images.iter().map(|p| next.apply(p)).collect();
        AlgebraMap::new(self.source.clone(), next.target.clone(), scale, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(name: &str, deg: u32, top: u32) -> Arc<GradedAlgebra> {
        Arc::new(GradedAlgebra::from_strs(&[(name, deg)], &[&format!("{name}^{}", top + 1)], 24).unwrap())
    }

    #[test]
    fn kappa_for_cp2_is_well_defined_iso() {
        let f = AlgebraMap::from_strs(ring("a", 2, 2), ring("b", 1, 2), DegreeScale::Half, &[("a", "b")]).unwrap();
        assert!(f.check().passed());
        assert!(f.is_iso_up_to().iso);
    }

    #[test]
    fn wrong_image_degree_reported() {
        let f = AlgebraMap::from_strs(ring("a", 2, 2), ring("b", 1, 2), DegreeScale::Half, &[("a", "b^2")]).unwrap();
        let rep = f.check();
        assert_eq!(rep.degree_mismatches, vec![DegreeMismatch { generator: "a".into(), expected: 1, found: Some(2) }]);
    }

    #[test]
    fn well_defined_but_not_iso() {
        let f = AlgebraMap::from_strs(ring("a", 2, 2), ring("b", 1, 1), DegreeScale::Half, &[("a", "b")]).unwrap();
        assert!(f.check().passed());
        let iso = f.is_iso_up_to();
        assert!(!iso.iso);
        assert_eq!(iso.failure.unwrap().target_degree, Some(2));
    }

    #[test]
    fn relation_violation_reported() {
        // a^2 = 0 on the source but b^2 != 0 on the target
        let f = AlgebraMap::from_strs(ring("a", 2, 1), ring("b", 1, 2), DegreeScale::Half, &[("a", "b")]).unwrap();
        let rep = f.check();
        assert_eq!(rep.relation_violations.len(), 1);
        assert_eq!(rep.relation_violations[0].image, "b^2");
    }

    #[test]
    fn identity_is_iso_and_composes() {
        let r = ring("a", 2, 3);
        let id = AlgebraMap::identity(r.clone());
        assert!(id.is_iso_up_to().iso);
        let kappa = AlgebraMap::from_strs(r, ring("b", 1, 3), DegreeScale::Half, &[("a", "b")]).unwrap();
        let composed = id.then(&kappa).unwrap();
        assert_eq!(composed, kappa);
        assert!(kappa.then(&kappa).is_err());
    }
}
