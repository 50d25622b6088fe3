use std::sync::Arc;

use super::{ConjugationFrame, FrameError, UPoly};
use crate::algebra::Polynomial;

/// Frame data of a Thom pair: the free rank-one module `T·A` over the base
/// frame, with `r̄σ̄(T·a) = T^τ · ω · r∘σ(a)` and `κ̄(T·a) = T^τ · κ(a)`.
///
/// `ω = Σ_j w_{r-j} u^j` has total degree `r`; its `u^r` coefficient is 1 and
/// its `u^0` coefficient is the top class `w_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameModule {
    base: Arc<ConjugationFrame>,
    rank: u32,
    omega: UPoly,
}

impl FrameModule {
    /// `sw` lists `w_1..w_r` in the fixed ring of the base.
    pub fn new(base: Arc<ConjugationFrame>, sw: &[Polynomial]) -> Result<Self, FrameError> {
        let rank = sw.len() as u32;
        let fixed = base.fixed();
        for (i, w) in sw.iter().enumerate() {
            if !w.is_zero() && w.degree() != Some(i as u32 + 1) {
                return Err(FrameError::Invalid(format!("w_{} = {} is not of degree {}", i + 1, fixed.format(w), i + 1)));
            }
        }
        let mut terms = vec![(rank, fixed.one())];
        for j in 0..rank {
            terms.push((j, sw[(rank - j - 1) as usize].clone()));
        }
        Ok(FrameModule { omega: UPoly::from_terms(rank, terms).reduce(fixed), base, rank })
    }

    pub fn base(&self) -> &Arc<ConjugationFrame> {
        &self.base
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn thom_degree(&self) -> u32 {
        2 * self.rank
    }

    /// Restriction factor ω.
    pub fn omega(&self) -> &UPoly {
        &self.omega
    }

    /// The `T^τ`-coefficient of `r̄σ̄(T·a)`.
    pub fn restrict(&self, a: &Polynomial) -> Result<UPoly, FrameError> {
        Ok(self.omega.mul(&self.base.restrict(a, 0)?, self.base.fixed()))
    }

    /// The `T^τ`-coefficient of `κ̄(T·a)`.
    pub fn kappa(&self, a: &Polynomial) -> Polynomial {
        self.base.kappa_of(a)
    }

    pub fn leading_coefficient(&self) -> &Polynomial {
        self.omega.coeff(self.rank)
    }

    pub fn euler_class(&self) -> &Polynomial {
        self.omega.coeff(0)
    }
}
