use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, side, HamiltonianError};
use crate::algebra::{AlgebraMap, AlgebraSpec, DegreeScale, Generator, GradedAlgebra, HilbertSeries, Polynomial};
use crate::linalg::{self, BitVec, Echelon};

/// Restriction of `H_T(M)` to one fixed component.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedRestriction {
    pub name: String,
    pub moment: Vec<Rational64>,
    pub map: AlgebraMap,
}

/// `H_T(M)` with restrictions to every fixed component; the joint
/// restriction is checked injective up to the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantPresentation {
    ring: Arc<GradedAlgebra>,
    restrictions: Vec<FixedRestriction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionSpec {
    pub point: String,
    pub moment: Vec<String>,
    /// Cohomology of the component; defaults to the polynomial ring on `torus`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<AlgebraSpec>,
    /// Generator images; a torus generator missing here maps to itself.
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub ring: AlgebraSpec,
    /// Generators of `ring` coming from `H(BT)`.
    pub torus: Vec<String>,
    pub restrictions: Vec<RestrictionSpec>,
}

impl EquivariantPresentation {
    pub fn new(ring: Arc<GradedAlgebra>, restrictions: Vec<FixedRestriction>) -> Result<Self, HamiltonianError> {
        if restrictions.is_empty() {
            return Err(HamiltonianError::Empty);
        }
        for r in &restrictions {
            if let Some(w) = r.map.check().first_witness() {
                return Err(HamiltonianError::Invalid(format!("restriction to {}: {w}", r.name)));
            }
        }
        let this = EquivariantPresentation { ring, restrictions };
        let all: Vec<usize> = (0..this.restrictions.len()).collect();
        for d in 0..=this.ring.cutoff() {
            if let Some(k) = this.kernel_in_degree(d, &all).first() {
                return Err(HamiltonianError::NotInjective { degree: d, witness: this.ring.format(&this.ring.from_coordinates(d, k)) });
            }
        }
        Ok(this)
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Self, HamiltonianError> {
        let ring = Arc::new(GradedAlgebra::from_spec(&spec.ring).map_err(crate::frames::FrameError::from)?);
        let torus_gens: Vec<Generator> = spec
            .torus
            .iter()
            .map(|t| {
                ring.generator_index(t)
                    .map(|i| ring.generators()[i].clone())
                    .ok_or_else(|| HamiltonianError::Invalid(format!("unknown torus generator {t}")))
            })
            .collect::<Result<_, _>>()?;
        let mut restrictions = Vec::new();
        for r in &spec.restrictions {
            let target = match &r.target {
                Some(t) => GradedAlgebra::from_spec(t),
                None => GradedAlgebra::polynomial_ring(torus_gens.clone(), ring.cutoff()),
            }
            .map_err(crate::frames::FrameError::from)?;
            let target = Arc::new(target);
            for name in r.images.keys() {
                if ring.generator_index(name).is_none() {
                    return Err(HamiltonianError::Invalid(format!("restriction to {}: unknown generator {name}", r.point)));
                }
            }
            let mut images = Vec::new();
            for g in ring.generators() {
                let img = match r.images.get(&g.name) {
                    Some(s) => target.parse(s),
                    None if spec.torus.contains(&g.name) => target.parse(&g.name),
                    None => Err(crate::algebra::AlgebraError::Parse {
                        input: g.name.clone(),
                        reason: format!("no image at {}", r.point),
                    }),
                }
                .map_err(crate::frames::FrameError::from)?;
                images.push(img);
            }
            restrictions.push(FixedRestriction {
                name: r.point.clone(),
                moment: r.moment.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?,
                map: AlgebraMap::new(ring.clone(), target, DegreeScale::One, images).map_err(crate::frames::FrameError::from)?,
            });
        }
        Self::new(ring, restrictions)
    }

    /// `Z2[a, t]/Π(a + λ_i t)` for a circle acting on `P(⊕ C_{λ_i})`. The
    /// component at level `λ` of multiplicity `m` is `CP^{m-1}`, with
    /// `H_T = Z2[t, x]/(x^m)` and `a ↦ x + λ t`.
    pub fn projectivized_sum(levels: &[i64], cutoff: u32) -> Result<Self, HamiltonianError> {
        let fe = crate::frames::FrameError::from;
        let skeleton = GradedAlgebra::from_strs(&[("a", 2), ("t", 2)], &[], cutoff).map_err(fe)?;
        let mut rel = skeleton.one();
        for l in levels {
            let lin = if l.rem_euclid(2) == 1 { skeleton.parse("a + t") } else { skeleton.parse("a") }.map_err(fe)?;
            rel = rel.mul(&lin);
        }
        let ring = Arc::new(GradedAlgebra::new(skeleton.generators().to_vec(), vec![rel], cutoff).map_err(fe)?);
        let mut distinct = levels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut restrictions = Vec::new();
        for l in distinct {
            let m = levels.iter().filter(|x| **x == l).count();
            let odd = l.rem_euclid(2) == 1;
            let (target, a_img) = if m == 1 {
                let t = GradedAlgebra::from_strs(&[("t", 2)], &[], cutoff).map_err(fe)?;
                (t, if odd { "t" } else { "0" }.to_string())
            } else {
                let t = GradedAlgebra::from_strs(&[("t", 2), ("x", 2)], &[&format!("x^{m}")], cutoff).map_err(fe)?;
                (t, if odd { "x + t" } else { "x" }.to_string())
            };
            let map = AlgebraMap::from_strs(ring.clone(), Arc::new(target), DegreeScale::One, &[("a", &a_img), ("t", "t")])
                .map_err(fe)?;
            restrictions.push(FixedRestriction { name: format!("level {l}"), moment: vec![Rational64::from_integer(l)], map });
        }
        Self::new(ring, restrictions)
    }

    pub fn ring(&self) -> &Arc<GradedAlgebra> {
        &self.ring
    }

    pub fn restrictions(&self) -> &[FixedRestriction] {
        &self.restrictions
    }

    /// Classes of degree `d` vanishing at each selected component, as
    /// coordinate vectors in the standard basis of `ring`.
    fn kernel_in_degree(&self, d: u32, selected: &[usize]) -> Vec<BitVec> {
        let offsets: Vec<usize> = selected
            .iter()
            .scan(0, |acc, i| {
                let o = *acc;
                *acc += self.restrictions[*i].map.target().dim(d);
                Some(o)
            })
            .collect();
        let codim: usize = selected.iter().map(|i| self.restrictions[*i].map.target().dim(d)).sum();
        let images: Vec<BitVec> = self
            .ring
            .basis(d)
            .iter()
            .map(|m| {
                let p = Polynomial::from_monomial(m.clone());
                let mut v = BitVec::zeros(codim);
                for (k, i) in selected.iter().enumerate() {
                    let r = &self.restrictions[*i].map;
                    for j in r.target().coordinates(&r.apply(&p), d).ones() {
                        v.flip(offsets[k] + j);
                    }
                }
                v
            })
            .collect();
        linalg::kernel(&images, codim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub mu: Vec<String>,
    pub directions: Vec<Vec<i64>>,
    pub kernel_series: HilbertSeries,
    pub reduced_series: HilbertSeries,
    /// Minimal generators of the kernel ideal, lowest degree first.
    pub generators: Vec<String>,
    /// `None` when no real-reduction series was supplied.
    pub halving: Option<bool>,
    pub attestation: &'static str,
}

const FREENESS: &str = "free action of the torus on the level set is attested, not checked";

/// The ideal generated by the classes vanishing on the fixed components below
/// `mu` along each direction, and the series of the quotient.
pub fn tw_kernel(
    pres: &EquivariantPresentation,
    directions: &[Vec<i64>],
    mu: &[Rational64],
    real_reduction: Option<&HilbertSeries>,
) -> Result<KernelReport, HamiltonianError> {
    let ring = &pres.ring;
    for xi in directions {
        for r in &pres.restrictions {
            if r.moment.len() != mu.len() || xi.len() != mu.len() {
                return Err(HamiltonianError::Rank { rank: r.moment.len(), found: xi.len().min(mu.len()) });
            }
            if side(&r.moment, mu, xi) == std::cmp::Ordering::Equal {
                return Err(HamiltonianError::Wall {
                    mu: mu.iter().map(format_rational).collect::<Vec<_>>().join(","),
                    component: r.name.clone(),
                    xi: xi.clone(),
                });
            }
        }
    }
    let below: Vec<Vec<usize>> = directions
        .iter()
        .map(|xi| {
            (0..pres.restrictions.len())
                .filter(|i| side(&pres.restrictions[*i].moment, mu, xi) == std::cmp::Ordering::Less)
                .collect()
        })
        .collect();
    let n = ring.cutoff();
    let mut kernel = Vec::new();
    let mut reduced = Vec::new();
    let mut gens: Vec<(u32, Polynomial)> = Vec::new();
    for d in 0..=n {
        let dim = ring.dim(d);
        let pieces: Vec<BitVec> = below.iter().flat_map(|sel| pres.kernel_in_degree(d, sel)).collect();
        let mut k = Echelon::new(dim, pieces.len());
        for v in &pieces {
            let _ = k.insert(v);
        }
        let products: Vec<BitVec> = gens
            .iter()
            .flat_map(|(e, g)| {
                ring.basis(d - e).iter().map(move |m| ring.coordinates(&ring.mul(g, &Polynomial::from_monomial(m.clone())), d))
            })
            .collect();
        let mut generated = Echelon::new(dim, products.len() + dim);
        for v in &products {
            let _ = generated.insert(v);
        }
        let basis: Vec<BitVec> = k.basis().cloned().collect();
        for v in basis {
            let (residual, _) = generated.reduce(&v);
            if generated.insert(&residual).is_ok() {
                gens.push((d, ring.from_coordinates(d, &residual)));
            }
        }
        kernel.push(k.rank() as u64);
        reduced.push((dim - k.rank()) as u64);
    }
    let reduced_series = HilbertSeries::new(reduced);
    let halving = real_reduction.map(|r| reduced_series.halving_defect(r, n.min(2 * r.reach())).is_none());
    Ok(KernelReport {
        mu: mu.iter().map(format_rational).collect(),
        directions: directions.to_vec(),
        kernel_series: HilbertSeries::new(kernel),
        reduced_series,
        generators: gens.iter().map(|(_, g)| ring.format(g)).collect(),
        halving,
        attestation: FREENESS,
    })
}
