use std::sync::Arc;

use serde::Serialize;

use super::basic::product_frame;
use crate::algebra::{GradedAlgebra, HilbertSeries, Polynomial};
use crate::cellcomplex::{poincare_series, CellError, CellSpec};
use crate::frames::{ConjugationFrame, FrameError};

/// Attached to every connected-sum report.
pub const CONNECTED_SUM_CAVEAT: &str =
    "the equivariant diffeomorphism type of the connected sum may depend on choices; the frame does not";

/// Checks `dim A_0 = dim A_{2k} = 1` and `A_d = 0` for `2k < d ≤ cutoff`.
fn poincare_like(f: &ConjugationFrame, two_k: u32) -> Result<Polynomial, FrameError> {
    let a = f.even();
    if a.cutoff() < two_k {
        return Err(FrameError::Invalid(format!("{}: cutoff {} is below dimension {two_k}", f.name(), a.cutoff())));
    }
    if a.dim(0) != 1 || a.dim(two_k) != 1 {
        return Err(FrameError::Invalid(format!(
            "{}: not Poincaré-like in dimension {two_k} (dim A_0 = {}, dim A_{two_k} = {})",
            f.name(),
            a.dim(0),
            a.dim(two_k)
        )));
    }
    if let Some(d) = (two_k + 1..=a.cutoff()).find(|d| a.dim(*d) > 0) {
        return Err(FrameError::Invalid(format!("{}: nonzero class in degree {d} above dimension {two_k}", f.name())));
    }
    Ok(Polynomial::from_monomial(a.basis(two_k)[0].clone()))
}

fn with_extra(ring: &GradedAlgebra, extra: Vec<Polynomial>) -> Result<Arc<GradedAlgebra>, FrameError> {
    let mut rels = ring.relations().to_vec();
    rels.extend(extra);
    Ok(Arc::new(GradedAlgebra::new(ring.generators().to_vec(), rels, ring.cutoff())?))
}

/// `M₁ # M₂` of formal dimension `2k`: mixed products vanish and the two
/// top classes are identified, in both rings.
pub fn connected_sum_frame(f: &ConjugationFrame, g: &ConjugationFrame, two_k: u32) -> Result<ConjugationFrame, FrameError> {
    if two_k == 0 || two_k % 2 == 1 {
        return Err(FrameError::Invalid(format!("connected sum needs a positive even dimension, got {two_k}")));
    }
    let top_f = poincare_like(f, two_k)?;
    let top_g = poincare_like(g, two_k)?;
    let p = product_frame(f, g)?;
    let (nfa, nfb) = (f.even().ngens(), f.fixed().ngens());
    let (na, nb) = (p.even().ngens(), p.fixed().ngens());

    let mut extra_a = Vec::new();
    for i in 0..nfa {
        for j in nfa..na {
            extra_a.push(p.even().gen(i).mul(&p.even().gen(j)));
        }
    }
    extra_a.push(top_f.embed(0, na) + top_g.embed(nfa, na));
    let mut extra_b = Vec::new();
    for i in 0..nfb {
        for j in nfb..nb {
            extra_b.push(p.fixed().gen(i).mul(&p.fixed().gen(j)));
        }
    }
    extra_b.push(f.kappa_of(&top_f).embed(0, nb) + g.kappa_of(&top_g).embed(nfb, nb));

    let even = with_extra(p.even(), extra_a)?;
    let fixed = with_extra(p.fixed(), extra_b)?;
    ConjugationFrame::new(
        format!("{} # {}", f.name(), g.name()),
        even,
        fixed,
        p.kappa().images().to_vec(),
        p.rsigma().to_vec(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberSeriesReport {
    pub total: HilbertSeries,
    pub real: HilbertSeries,
    pub halving: bool,
}

fn product_series(a: &HilbertSeries, b: &HilbertSeries, reach: u32) -> HilbertSeries {
    let mut v = vec![0u64; reach as usize + 1];
    for (i, x) in a.coefficients().iter().enumerate() {
        for (j, y) in b.coefficients().iter().enumerate() {
            if i + j <= reach as usize {
                v[i + j] += x * y;
            }
        }
    }
    HilbertSeries::new(v)
}

/// Leray-Hirsch at the level of series: `P_E = P_base · P_F` and likewise for
/// the real loci, up to the fiber's cutoff.
pub fn fiber_bundle_series(base: &CellSpec, fiber: &ConjugationFrame) -> Result<FiberSeriesReport, CellError> {
    let (px, py) = poincare_series(base)?;
    let n = fiber.cutoff();
    let total = product_series(&px, &fiber.even().hilbert(), n);
    let real = product_series(&py, &fiber.fixed().hilbert(), n);
    let halving = total.halving_defect(&real, n).is_none();
    Ok(FiberSeriesReport { total, real, halving })
}
