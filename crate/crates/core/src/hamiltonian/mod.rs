//! Morse-Bott assembly for Hamiltonian torus actions with a compatible
//! anti-symplectic involution, and the kernel of the Kirwan map on explicit
//! equivariant presentations.

mod kernel;

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::HilbertSeries;
use crate::constructors::{point_frame, projective_frame, Extent};
use crate::frames::{ConjugationFrame, FrameError};

pub use kernel::{tw_kernel, EquivariantPresentation, FixedRestriction, KernelReport, PresentationSpec, RestrictionSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HamiltonianError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("direction has length {found}, torus rank is {rank}")]
    Rank { rank: usize, found: usize },
    #[error("no fixed components")]
    Empty,
    #[error("component {component}: weight {weight} is zero or has zero multiplicity")]
    BadWeight { component: String, weight: WeightVector },
    #[error("degenerate direction: weight {weight} at component {component} pairs to zero")]
    WeightPairing { component: String, weight: WeightVector },
    #[error("degenerate direction: components {first} and {second} have equal moment pairing")]
    MomentTie { first: String, second: String },
    #[error("level {mu} lies on a wall: component {component} has pairing zero with direction {xi:?}")]
    Wall { mu: String, component: String, xi: Vec<i64> },
    #[error("joint restriction is not injective: degree {degree} contains {witness}")]
    NotInjective { degree: u32, witness: String },
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("{0}")]
    Invalid(String),
}

/// A character of the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn pairing(&self, xi: &[i64]) -> i64 {
        self.0.iter().zip(xi).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    /// Every coordinate even: the weight lies in `2·T̂`.
    pub fn is_two_divisible(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|x| x % 2 == 0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => write!(f, "{x}"),
            v => write!(f, "({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub vector: WeightVector,
    pub multiplicity: u32,
}

/// A fixed component `F` with its frame, moment value, and isotropy weights.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponent {
    pub name: String,
    pub frame: Arc<ConjugationFrame>,
    pub moment: Vec<Rational64>,
    pub weights: Vec<Weight>,
}

impl FixedComponent {
    pub fn moment_pairing(&self, xi: &[i64]) -> Rational64 {
        self.moment.iter().zip(xi).map(|(m, x)| m * Rational64::from_integer(*x)).sum()
    }

    /// Complex rank of the normal bundle.
    pub fn normal_rank(&self) -> u32 {
        self.weights.iter().map(|w| w.multiplicity).sum()
    }

    /// Complex rank of the negative normal bundle along `xi`.
    pub fn index(&self, xi: &[i64]) -> u32 {
        self.weights.iter().filter(|w| w.vector.pairing(xi) < 0).map(|w| w.multiplicity).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianData {
    pub rank: usize,
    pub components: Vec<FixedComponent>,
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational64, HamiltonianError> {
    s.trim().parse::<Rational64>().map_err(|_| HamiltonianError::Rational(s.to_string()))
}

pub(crate) fn format_rational(r: &Rational64) -> String {
    r.to_string()
}

/// Serialized component; `frame` names a frame bound elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub frame: String,
    pub moment: Vec<String>,
    #[serde(default)]
    pub weights: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub rank: usize,
    pub components: Vec<ComponentSpec>,
}

impl HamiltonianData {
    pub fn new(rank: usize, components: Vec<FixedComponent>) -> Result<Self, HamiltonianError> {
        if components.is_empty() {
            return Err(HamiltonianError::Empty);
        }
        for c in &components {
            if c.moment.len() != rank {
                return Err(HamiltonianError::Rank { rank, found: c.moment.len() });
            }
            for w in &c.weights {
                if w.vector.0.len() != rank {
                    return Err(HamiltonianError::Rank { rank, found: w.vector.0.len() });
                }
                if w.vector.is_zero() || w.multiplicity == 0 {
                    return Err(HamiltonianError::BadWeight { component: c.name.clone(), weight: w.vector.clone() });
                }
            }
        }
        Ok(HamiltonianData { rank, components })
    }

    pub fn from_spec(
        spec: &HamiltonianSpec,
        mut resolve: impl FnMut(&str) -> Result<Arc<ConjugationFrame>, HamiltonianError>,
    ) -> Result<Self, HamiltonianError> {
        let mut comps = Vec::new();
        for (i, c) in spec.components.iter().enumerate() {
            comps.push(FixedComponent {
                name: if c.name.is_empty() { format!("F{i}") } else { c.name.clone() },
                frame: resolve(&c.frame)?,
                moment: c.moment.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?,
                weights: c.weights.clone(),
            });
        }
        Self::new(spec.rank, comps)
    }

    /// Common cutoff of the component frames.
    pub fn cutoff(&self) -> u32 {
        self.components.iter().map(|c| c.frame.cutoff()).min().unwrap_or(0)
    }

    /// `CP^n` as an `S^1`-space with isolated fixed points `p_j` at level `j`
    /// and weights `i - j` at `p_j`.
    pub fn projective_circle(n: u32, cutoff: u32) -> Self {
        let levels: Vec<i64> = (0..=n as i64).collect();
        Self::projectivized_sum(&levels, cutoff).expect("standard projective data")
    }

    /// `P(C_{λ_0} ⊕ … ⊕ C_{λ_n})` for a circle: one component `CP^{m-1}` per
    /// distinct weight `λ` of multiplicity `m`, at level `λ`.
    pub fn projectivized_sum(levels: &[i64], cutoff: u32) -> Result<Self, HamiltonianError> {
        let mut distinct: Vec<i64> = levels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut comps = Vec::new();
        for &l in &distinct {
            let m = levels.iter().filter(|x| **x == l).count() as u32;
            let frame = if m == 1 { point_frame(cutoff) } else { projective_frame(Extent::Finite(m - 1), cutoff)? };
            let weights = distinct
                .iter()
                .filter(|o| **o != l)
                .map(|o| Weight {
                    vector: WeightVector(vec![o - l]),
                    multiplicity: levels.iter().filter(|x| *x == o).count() as u32,
                })
                .collect();
            comps.push(FixedComponent {
                name: format!("level {l}"),
                frame: Arc::new(frame),
                moment: vec![Rational64::from_integer(l)],
                weights,
            });
        }
        Self::new(1, comps)
    }

    /// `CP^1 × CP^1` with the standard `T^2`-action.
    pub fn toric_square(cutoff: u32) -> Self {
        let pt = Arc::new(point_frame(cutoff));
        let comps = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(x, y)| {
                let sx = if x == 0 { 1 } else { -1 };
                let sy = if y == 0 { 1 } else { -1 };
                FixedComponent {
                    name: format!("({x},{y})"),
                    frame: pt.clone(),
                    moment: vec![Rational64::from_integer(x), Rational64::from_integer(y)],
                    weights: vec![
                        Weight { vector: WeightVector(vec![sx, 0]), multiplicity: 1 },
                        Weight { vector: WeightVector(vec![0, sy]), multiplicity: 1 },
                    ],
                }
            })
            .collect();
        Self::new(2, comps).expect("toric square data")
    }

    /// A circle acting with the single weight 2.
    pub fn doubled_circle(cutoff: u32) -> Self {
        let comp = FixedComponent {
            name: "x".into(),
            frame: Arc::new(point_frame(cutoff)),
            moment: vec![Rational64::zero()],
            weights: vec![Weight { vector: WeightVector(vec![2]), multiplicity: 1 }],
        };
        Self::new(1, vec![comp]).expect("doubled circle data")
    }
}

/// Accepts `xi` iff every weight and every moment difference pairs nonzero.
pub fn generic_direction(data: &HamiltonianData, xi: &[i64]) -> Result<Vec<i64>, HamiltonianError> {
    if xi.len() != data.rank {
        return Err(HamiltonianError::Rank { rank: data.rank, found: xi.len() });
    }
    for c in &data.components {
        if let Some(w) = c.weights.iter().find(|w| w.vector.pairing(xi) == 0) {
            return Err(HamiltonianError::WeightPairing { component: c.name.clone(), weight: w.vector.clone() });
        }
    }
    for (i, a) in data.components.iter().enumerate() {
        for b in &data.components[i + 1..] {
            if a.moment != b.moment && a.moment_pairing(xi) == b.moment_pairing(xi) {
                return Err(HamiltonianError::MomentTie { first: a.name.clone(), second: b.name.clone() });
            }
        }
    }
    Ok(xi.to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentIndex {
    pub component: String,
    pub level: String,
    pub index: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub xi: Vec<i64>,
    /// Components in increasing order of `<Φ(F), ξ>`.
    pub components: Vec<ComponentIndex>,
    pub total: HilbertSeries,
    pub real: HilbertSeries,
    pub halving: bool,
}

fn shifted_sum(parts: impl Iterator<Item = (u32, HilbertSeries)>, reach: u32) -> HilbertSeries {
    let mut v = vec![0u64; reach as usize + 1];
    for (shift, s) in parts {
        for (d, c) in s.coefficients().iter().enumerate() {
            let e = d + shift as usize;
            if e <= reach as usize {
                v[e] += c;
            }
        }
    }
    HilbertSeries::new(v)
}

/// `P_M = Σ t^{2λ_F} P_{A_F}` and `P_{M^τ} = Σ t^{λ_F} P_{B_F}`.
pub fn morse_series(data: &HamiltonianData, xi: &[i64]) -> Result<MorseReport, HamiltonianError> {
    let xi = generic_direction(data, xi)?;
    let mut order: Vec<usize> = (0..data.components.len()).collect();
    order.sort_by(|a, b| {
        let (x, y) = (&data.components[*a], &data.components[*b]);
        x.moment_pairing(&xi).cmp(&y.moment_pairing(&xi)).then(a.cmp(b))
    });
    let reach = data.cutoff();
    let comps = order.iter().map(|i| &data.components[*i]);
    let total = shifted_sum(comps.clone().map(|c| (2 * c.index(&xi), c.frame.even().hilbert())), reach);
    let real = shifted_sum(comps.clone().map(|c| (c.index(&xi), c.frame.fixed().hilbert())), reach);
    let halving = total.halving_defect(&real, reach).is_none();
    let components = comps
        .map(|c| ComponentIndex { component: c.name.clone(), level: format_rational(&c.moment_pairing(&xi)), index: c.index(&xi) })
        .collect();
    Ok(MorseReport { xi, components, total, real, halving })
}

/// The assembled series do not depend on the generic direction.
pub fn xi_independence(data: &HamiltonianData, xi1: &[i64], xi2: &[i64]) -> Result<bool, HamiltonianError> {
    let a = morse_series(data, xi1)?;
    let b = morse_series(data, xi2)?;
    Ok(a.total == b.total && a.real == b.real)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionFlag {
    pub component: String,
    pub weight: WeightVector,
}

/// Weights lying in `2·T̂`.
pub fn two_torsion_scan(data: &HamiltonianData) -> Vec<TorsionFlag> {
    data.components
        .iter()
        .flat_map(|c| {
            c.weights
                .iter()
                .filter(|w| w.vector.is_two_divisible())
                .map(|w| TorsionFlag { component: c.name.clone(), weight: w.vector.clone() })
        })
        .collect()
}

/// `M^T = M^{T_2}`.
pub fn mt2_check(data: &HamiltonianData) -> bool {
    two_torsion_scan(data).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivariantSeriesReport {
    pub borel: HilbertSeries,
    pub borel_real: HilbertSeries,
    pub holds: bool,
    pub first_defect: Option<u32>,
}

/// `P_M / (1-t^2)^r` against `P_{M^τ} / (1-t)^r`.
pub fn equivariant_series(data: &HamiltonianData, xi: &[i64]) -> Result<EquivariantSeriesReport, HamiltonianError> {
    let m = morse_series(data, xi)?;
    let reach = data.cutoff();
    let r = data.rank as u32;
    let borel = m.total.convolve(&HilbertSeries::geometric_power(2, r, reach));
    let borel_real = m.real.convolve(&HilbertSeries::geometric_power(1, r, reach));
    let first_defect = borel.halving_defect(&borel_real, reach);
    Ok(EquivariantSeriesReport { borel, borel_real, holds: first_defect.is_none(), first_defect })
}

/// Sign of `<Φ(F) - μ, ξ>`.
pub(crate) fn side(moment: &[Rational64], mu: &[Rational64], xi: &[i64]) -> std::cmp::Ordering {
    let v: Rational64 = moment.iter().zip(mu).zip(xi).map(|((m, u), x)| (m - u) * Rational64::from_integer(*x)).sum();
    if v.is_zero() {
        std::cmp::Ordering::Equal
    } else if v.is_negative() {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_morse_series() {
        for n in 1..=6 {
            let d = HamiltonianData::projective_circle(n, 24);
            let m = morse_series(&d, &[1]).unwrap();
            let want: Vec<u64> = (0..=24).map(|k| u64::from(k % 2 == 0 && k <= 2 * n)).collect();
            assert_eq!(m.total.coefficients(), want.as_slice());
            assert!(m.halving);
            assert_eq!(m.components.iter().map(|c| c.index).collect::<Vec<_>>(), (0..=n).collect::<Vec<_>>());
            assert!(xi_independence(&d, &[1], &[-1]).unwrap());
        }
    }

    #[test]
    fn sphere_series() {
        let d = HamiltonianData::projective_circle(1, 8);
        let m = morse_series(&d, &[1]).unwrap();
        assert_eq!(m.total.truncated(2).coefficients(), &[1, 0, 1]);
        assert_eq!(m.real.truncated(2).coefficients(), &[1, 1, 0]);
    }

    #[test]
    fn degenerate_directions() {
        let d = HamiltonianData::projective_circle(2, 8);
        assert!(matches!(generic_direction(&d, &[0]), Err(HamiltonianError::WeightPairing { .. })));
        let bad = HamiltonianData::new(
            2,
            vec![FixedComponent {
                name: "p".into(),
                frame: Arc::new(point_frame(8)),
                moment: vec![Rational64::zero(); 2],
                weights: vec![Weight { vector: WeightVector(vec![2, -2]), multiplicity: 1 }],
            }],
        )
        .unwrap();
        assert!(generic_direction(&bad, &[1, 1]).is_err());
    }

    #[test]
    fn torsion() {
        assert!(!mt2_check(&HamiltonianData::doubled_circle(8)));
        assert_eq!(two_torsion_scan(&HamiltonianData::doubled_circle(8)).len(), 1);
        assert!(mt2_check(&HamiltonianData::toric_square(8)));
        assert!(mt2_check(&HamiltonianData::projective_circle(1, 8)));
        assert!(!mt2_check(&HamiltonianData::projective_circle(2, 8)));
        let mixed = WeightVector(vec![1, 2]);
        assert!(!mixed.is_two_divisible());
    }

    #[test]
    fn borel_series() {
        let pt = HamiltonianData::projectivized_sum(&[0], 10).unwrap();
        assert!(equivariant_series(&pt, &[1]).unwrap().holds);
        let cp1 = HamiltonianData::projective_circle(1, 10);
        let e = equivariant_series(&cp1, &[1]).unwrap();
        assert!(e.holds);
        assert_eq!(e.borel_real.truncated(4).coefficients(), &[1, 2, 2, 2, 2]);
    }

    #[test]
    fn projectivized_sum_with_repeated_weight() {
        let d = HamiltonianData::projectivized_sum(&[0, 1, 1], 12).unwrap();
        let m = morse_series(&d, &[1]).unwrap();
        assert_eq!(m.total.truncated(4).coefficients(), &[1, 0, 1, 0, 1]);
        assert!(m.halving);
    }
}
