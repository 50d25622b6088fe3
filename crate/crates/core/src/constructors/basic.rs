use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Generator, GradedAlgebra, Polynomial};
use crate::frames::{ConjugationFrame, FrameError, UPoly};
use crate::report::CheckResult;

/// Finite `n` or the direct limit. Serialized as an integer or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extent {
    Finite(u32),
    Infinite,
}

impl Serialize for Extent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extent::Finite(n) => s.serialize_u32(*n),
            Extent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Extent::Finite(n)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for Extent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Extent::Infinite),
            t => t.parse().map(Extent::Finite).map_err(|_| format!("expected an integer or \"inf\", got {s:?}")),
        }
    }
}

impl From<u32> for Extent {
    fn from(n: u32) -> Self {
        Extent::Finite(n)
    }
}

impl std::fmt::Display for Extent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extent::Finite(n) => write!(f, "{n}"),
            Extent::Infinite => f.write_str("inf"),
        }
    }
}

/// The line-bundle rule `y u + y^2`.
pub(crate) fn line_rule(fixed: &GradedAlgebra, y: &Polynomial) -> UPoly {
    UPoly::from_terms(2, [(1, y.clone()), (0, fixed.square(y))])
}

pub fn point_frame(cutoff: u32) -> ConjugationFrame {
    let k = Arc::new(GradedAlgebra::ground_field(cutoff));
    ConjugationFrame::new("point", k.clone(), k, Vec::new(), Vec::new()).expect("point frame")
}

/// Conjugation sphere `S^{2k}` with real locus `S^k`.
pub fn sphere_frame(k: u32, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
    if k == 0 {
        return Err(FrameError::Invalid("sphere needs k >= 1".into()));
    }
    let a = Arc::new(GradedAlgebra::from_strs(&[("a", 2 * k)], &["a^2"], cutoff)?);
    let b = Arc::new(GradedAlgebra::from_strs(&[("b", k)], &["b^2"], cutoff)?);
    let gb = b.gen(0);
    let rs = UPoly::from_terms(2 * k, [(k, gb.clone())]);
    ConjugationFrame::new(format!("S^{}", 2 * k), a, b, vec![gb], vec![rs])
}

/// `CP^n` with real locus `RP^n`.
pub fn projective_frame(n: Extent, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
    let (rel_a, rel_b) = match n {
        Extent::Finite(0) => return Err(FrameError::Invalid("projective space needs n >= 1".into())),
        Extent::Finite(n) => (vec![format!("a^{}", n + 1)], vec![format!("b^{}", n + 1)]),
        Extent::Infinite => (Vec::new(), Vec::new()),
    };
    let ra: Vec<&str> = rel_a.iter().map(String::as_str).collect();
    let rb: Vec<&str> = rel_b.iter().map(String::as_str).collect();
    let a = Arc::new(GradedAlgebra::from_strs(&[("a", 2)], &ra, cutoff)?);
    let b = Arc::new(GradedAlgebra::from_strs(&[("b", 1)], &rb, cutoff)?);
    let gb = b.gen(0);
    let rs = line_rule(&b, &gb);
    ConjugationFrame::new(format!("CP^{n}"), a, b, vec![gb], vec![rs])
}

/// Product frame: tensor products of both rings, generators of the right
/// factor renamed with primes on collision.
pub fn product_frame(f: &ConjugationFrame, g: &ConjugationFrame) -> Result<ConjugationFrame, FrameError> {
    let cutoff = f.cutoff().min(g.cutoff());
    let (f, g) = (f.with_cutoff(cutoff)?, g.with_cutoff(cutoff)?);
    let even = Arc::new(f.even().tensor(g.even())?);
    let fixed = Arc::new(f.fixed().tensor(g.fixed())?);
    let (na, nb) = (even.ngens(), fixed.ngens());
    let off = f.fixed().ngens();
    let mut kappa = Vec::new();
    let mut rsigma = Vec::new();
    for (frame, offset) in [(&f, 0), (&g, off)] {
        for (i, gen) in frame.even().generators().iter().enumerate() {
            kappa.push(frame.kappa().image_of_generator(i).embed(offset, nb));
            rsigma.push(frame.rsigma()[i].map_coeffs(gen.degree, |c| c.embed(offset, nb)));
        }
    }
    debug_assert_eq!(kappa.len(), na);
    let name = match (f.name(), g.name()) {
        (x, "") | ("", x) => x.to_string(),
        (x, y) => format!("{x} x {y}"),
    };
    ConjugationFrame::new(name, even, fixed, kappa, rsigma)
}

/// `BT^r = (CP^∞)^r` with generators `a1..ar`, `b1..br`.
pub fn bt_frame(r: u32, cutoff: u32) -> Result<ConjugationFrame, FrameError> {
    if r == 0 {
        return Err(FrameError::Invalid("BT needs rank r >= 1".into()));
    }
    let even = Arc::new(GradedAlgebra::polynomial_ring(
        (1..=r).map(|i| Generator::new(format!("a{i}"), 2)).collect(),
        cutoff,
    )?);
    let fixed = Arc::new(GradedAlgebra::polynomial_ring(
        (1..=r).map(|i| Generator::new(format!("b{i}"), 1)).collect(),
        cutoff,
    )?);
    let kappa: Vec<Polynomial> = (0..r as usize).map(|i| fixed.gen(i)).collect();
    let rsigma = kappa.iter().map(|y| line_rule(&fixed, y)).collect();
    ConjugationFrame::new(format!("BT^{r}"), even, fixed, kappa, rsigma)
}

/// Frames of one direct limit at increasing cutoffs.
#[derive(Clone, Debug)]
pub struct FrameFamily {
    frames: Vec<ConjugationFrame>,
}

impl FrameFamily {
    pub fn build(
        cutoffs: &[u32],
        mut at: impl FnMut(u32) -> Result<ConjugationFrame, FrameError>,
    ) -> Result<Self, FrameError> {
        let mut cutoffs = cutoffs.to_vec();
        cutoffs.sort_unstable();
        cutoffs.dedup();
        Ok(FrameFamily { frames: cutoffs.into_iter().map(&mut at).collect::<Result<_, _>>()? })
    }

    pub fn from_frames(mut frames: Vec<ConjugationFrame>) -> Self {
        frames.sort_by_key(ConjugationFrame::cutoff);
        FrameFamily { frames }
    }

    pub fn frames(&self) -> &[ConjugationFrame] {
        &self.frames
    }

    /// The member with the largest cutoff.
    pub fn top(&self) -> Option<&ConjugationFrame> {
        self.frames.last()
    }
}

/// Members at cutoffs `N < N'` must agree on all data in degrees `≤ N`.
pub fn stabilize(fam: &FrameFamily) -> CheckResult {
    const ID: &str = "stabilize";
    if fam.frames.len() < 2 {
        return CheckResult::skipped(ID, "need at least two cutoffs");
    }
    for w in fam.frames.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let n = lo.cutoff();
        let cut = match hi.with_cutoff(n) {
            Ok(f) => f,
            Err(e) => return CheckResult::fail(ID, format!("cutoff {} truncated to {n}: {e}", hi.cutoff())),
        };
        if let Some(w) = first_difference(lo, &cut) {
            return CheckResult::fail(ID, format!("cutoffs {n} and {}: {w}", hi.cutoff()));
        }
    }
    CheckResult::pass(ID)
}

fn first_difference(a: &ConjugationFrame, b: &ConjugationFrame) -> Option<String> {
    for (label, x, y) in [("even ring", a.even(), b.even()), ("fixed ring", a.fixed(), b.fixed())] {
        if x.generators() != y.generators() {
            return Some(format!("{label} generators differ"));
        }
        for d in 0..=x.cutoff() {
            if x.basis(d) != y.basis(d) {
                return Some(format!("{label} differs in degree {d}"));
            }
        }
    }
    for (i, g) in a.even().generators().iter().enumerate() {
        if a.kappa().image_of_generator(i) != b.kappa().image_of_generator(i) {
            return Some(format!("kappa({}) differs in degree {}", g.name, g.degree));
        }
        if a.rsigma()[i] != b.rsigma()[i] {
            return Some(format!("r∘σ({}) differs in degree {}", g.name, g.degree));
        }
    }
    None
}
