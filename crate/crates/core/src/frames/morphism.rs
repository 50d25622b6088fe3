use std::sync::Arc;

use serde::Serialize;

use super::{ConjugationFrame, FrameError, UPoly};
use crate::algebra::{AlgebraMap, DegreeScale};
use crate::report::CheckResult;

/// A map of frames in the cohomological direction: `even_map: A_src -> A_tgt`
/// and `fixed_map: B_src -> B_tgt`. A map of spaces `Y -> X` induces a
/// morphism with source the frame of `X`.
#[derive(Clone, Debug)]
pub struct FrameMorphism {
    pub source: Arc<ConjugationFrame>,
    pub target: Arc<ConjugationFrame>,
    pub even_map: AlgebraMap,
    pub fixed_map: AlgebraMap,
}

impl FrameMorphism {
    pub fn new(
        source: Arc<ConjugationFrame>,
        target: Arc<ConjugationFrame>,
        even_images: &[(&str, &str)],
        fixed_images: &[(&str, &str)],
    ) -> Result<Self, FrameError> {
        let even_map = AlgebraMap::from_strs(source.even().clone(), target.even().clone(), DegreeScale::One, even_images)?;
        let fixed_map = AlgebraMap::from_strs(source.fixed().clone(), target.fixed().clone(), DegreeScale::One, fixed_images)?;
        Ok(FrameMorphism { source, target, even_map, fixed_map })
    }

    pub fn identity(frame: Arc<ConjugationFrame>) -> Self {
        FrameMorphism {
            even_map: AlgebraMap::identity(frame.even().clone()),
            fixed_map: AlgebraMap::identity(frame.fixed().clone()),
            source: frame.clone(),
            target: frame,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FrameMorphism) -> Result<FrameMorphism, FrameError> {
        Ok(FrameMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            even_map: self.even_map.then(&next.even_map)?,
            fixed_map: self.fixed_map.then(&next.fixed_map)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub maps: CheckResult,
    pub kappa: CheckResult,
    pub rsigma: CheckResult,
}

impl NaturalityReport {
    pub fn passed(&self) -> bool {
        self.maps.passed() && self.kappa.passed() && self.rsigma.passed()
    }

    pub fn checks(&self) -> Vec<CheckResult> {
        vec![self.maps.clone(), self.kappa.clone(), self.rsigma.clone()]
    }
}

fn same_terms(a: &UPoly, b: &UPoly) -> bool {
    let n = a.degree().max(b.degree());
    (0..=n).all(|i| a.coeff(i) == b.coeff(i))
}

/// Checks `fixed_map ∘ kappa_src = kappa_tgt ∘ even_map` and
/// `fixed_map(r∘σ_src(a)) = r∘σ_tgt(even_map(a))` on every source generator.
pub fn verify_naturality(m: &FrameMorphism) -> NaturalityReport {
    let maps = {
        let e = m.even_map.check();
        let f = m.fixed_map.check();
        match e.first_witness().map(|w| format!("even map: {w}")).or_else(|| f.first_witness().map(|w| format!("fixed map: {w}"))) {
            None => CheckResult::pass("naturality-maps"),
            Some(w) => CheckResult::fail("naturality-maps", w),
        }
    };
    let src = &m.source;
    let tgt = &m.target;
    let gens = src.even().generators();

    let mut kappa = CheckResult::pass("naturality-kappa");
    for (i, g) in gens.iter().enumerate() {
        let lhs = m.fixed_map.apply(src.kappa().image_of_generator(i));
        let rhs = tgt.kappa_of(m.even_map.image_of_generator(i));
        if lhs != rhs {
            kappa = CheckResult::fail(
                "naturality-kappa",
                format!(
                    "degree {}: generator {}: fixed map of kappa gives {}, kappa of even map gives {}",
                    g.degree,
                    g.name,
                    tgt.fixed().format(&lhs),
                    tgt.fixed().format(&rhs)
                ),
            );
            break;
        }
    }

    let mut rsigma = CheckResult::pass("naturality-rsigma");
    let mut restrictor = tgt.restrictor();
    for (i, g) in gens.iter().enumerate() {
        let lhs = src.rsigma()[i].map_coeffs(g.degree, |c| m.fixed_map.apply(c));
        let rhs = match restrictor.restrict(m.even_map.image_of_generator(i), 0) {
            Ok(r) => r,
            Err(e) => {
                rsigma = CheckResult::fail("naturality-rsigma", format!("generator {}: {e}", g.name));
                break;
            }
        };
        if !same_terms(&lhs, &rhs) {
            rsigma = CheckResult::fail(
                "naturality-rsigma",
                format!(
                    "degree {}: generator {}: {} vs {}",
                    g.degree,
                    g.name,
                    lhs.display(tgt.fixed()),
                    rhs.display(tgt.fixed())
                ),
            );
            break;
        }
    }
    NaturalityReport { maps, kappa, rsigma }
}
