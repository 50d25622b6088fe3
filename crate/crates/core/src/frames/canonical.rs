use std::sync::Arc;

use super::{ConjugationFrame, FrameError};
use crate::algebra::{minimal_presentation, Generator, GradedAlgebra, MinimalPresentation};

fn renamed(mp: &MinimalPresentation, prefix: &str) -> Result<Arc<GradedAlgebra>, FrameError> {
    let gens = mp
        .algebra
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Generator::new(format!("{prefix}{}", i + 1), g.degree))
        .collect();
    Ok(Arc::new(GradedAlgebra::new(gens, mp.algebra.groebner_basis().to_vec(), mp.algebra.cutoff())?))
}

/// Canonical form: both rings on minimal generating sets named `x1, x2, …`
/// and `y1, y2, …`, relations replaced by the reduced Gröbner basis, and
/// `kappa`, `r∘σ` transported. Frames that differ only by presentation have
/// identical canonical serializations.
pub fn canonical_frame(frame: &ConjugationFrame) -> Result<ConjugationFrame, FrameError> {
    let ma = minimal_presentation(frame.even())?;
    let mb = minimal_presentation(frame.fixed())?;
    let even = renamed(&ma, "x")?;
    let fixed = renamed(&mb, "y")?;
    let mut restrictor = frame.restrictor();
    let mut kappa = Vec::new();
    let mut rsigma = Vec::new();
    for (k, g) in ma.algebra.generators().iter().enumerate() {
        let original = ma.from_minimal.image_of_generator(k);
        kappa.push(mb.to_minimal.apply(&frame.kappa_of(original)));
        let r = restrictor.restrict(original, 0)?;
        rsigma.push(r.map_coeffs(g.degree, |c| mb.to_minimal.apply(c)));
    }
    ConjugationFrame::new("", even, fixed, kappa, rsigma)
}
