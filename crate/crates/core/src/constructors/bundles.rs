use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basic::line_rule;
use crate::algebra::{Generator, GradedAlgebra, Monomial, Polynomial};
use crate::frames::{ConjugationFrame, FrameError, FrameModule, UPoly};
use crate::linalg::{BitVec, Echelon};
use crate::report::CheckResult;

/// A τ-bundle over a frame, given by its Chern classes `c_1..c_r`. The
/// Stiefel-Whitney classes of the real part are `w_i = kappa(c_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauBundle {
    base: Arc<ConjugationFrame>,
    chern: Vec<Polynomial>,
}

/// Serialized bundle; `base` names a frame bound elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub base: String,
    pub rank: u32,
    pub chern: Vec<String>,
}

impl TauBundle {
    pub fn new(base: Arc<ConjugationFrame>, chern: Vec<Polynomial>) -> Result<Self, FrameError> {
        let even = base.even().clone();
        let chern = chern
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = even.normal_form(c)?;
                let want = 2 * (i as u32 + 1);
                if !c.is_zero() && c.degree() != Some(want) {
                    return Err(FrameError::Invalid(format!("c{} = {} is not of degree {want}", i + 1, even.format(&c))));
                }
                Ok(c)
            })
            .collect::<Result<_, FrameError>>()?;
        Ok(TauBundle { base, chern })
    }

    pub fn from_strs(base: Arc<ConjugationFrame>, chern: &[&str]) -> Result<Self, FrameError> {
        let parsed = chern.iter().map(|s| base.even().parse(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(base, parsed)
    }

    pub fn from_spec(base: Arc<ConjugationFrame>, spec: &BundleSpec) -> Result<Self, FrameError> {
        if spec.chern.len() > spec.rank as usize {
            return Err(FrameError::Invalid(format!("rank {} bundle has {} Chern classes", spec.rank, spec.chern.len())));
        }
        let mut chern = spec.chern.iter().map(|s| base.even().parse(s)).collect::<Result<Vec<_>, _>>()?;
        chern.resize(spec.rank as usize, Polynomial::zero());
        Self::new(base, chern)
    }

    pub fn to_spec(&self, base_ref: &str) -> BundleSpec {
        BundleSpec {
            base: base_ref.to_string(),
            rank: self.rank(),
            chern: self.chern.iter().map(|c| self.base.even().format(c)).collect(),
        }
    }

    /// Trivial bundle of rank `r`.
    pub fn trivial(base: Arc<ConjugationFrame>, r: u32) -> Self {
        TauBundle { base, chern: vec![Polynomial::zero(); r as usize] }
    }

    /// Line bundle with first Chern class `c1`.
    pub fn line(base: Arc<ConjugationFrame>, c1: &str) -> Result<Self, FrameError> {
        Self::from_strs(base, &[c1])
    }

    pub fn base(&self) -> &Arc<ConjugationFrame> {
        &self.base
    }

    pub fn rank(&self) -> u32 {
        self.chern.len() as u32
    }

    pub fn chern(&self) -> &[Polynomial] {
        &self.chern
    }

    /// `c_i` with `c_0 = 1` and `c_i = 0` above the rank.
    pub fn chern_class(&self, i: u32) -> Polynomial {
        match i {
            0 => self.base.even().one(),
            i => self.chern.get(i as usize - 1).cloned().unwrap_or_default(),
        }
    }

    pub fn sw(&self) -> Vec<Polynomial> {
        self.chern.iter().map(|c| self.base.kappa_of(c)).collect()
    }

    pub fn total_chern(&self) -> Polynomial {
        (0..=self.rank()).fold(Polynomial::zero(), |acc, i| acc + self.chern_class(i))
    }

    pub fn total_sw(&self) -> Polynomial {
        let fixed = self.base.fixed();
        self.sw().iter().fold(fixed.one(), |acc, w| acc + w.clone())
    }

    /// Whitney sum: total Chern classes multiply.
    pub fn whitney_sum(&self, other: &TauBundle) -> Result<TauBundle, FrameError> {
        if self.base != other.base {
            return Err(FrameError::Invalid("Whitney sum of bundles over different bases".into()));
        }
        let even = self.base.even();
        let r = self.rank() + other.rank();
        let chern = (1..=r)
            .map(|d| {
                let mut c = Polynomial::zero();
                for i in 0..=d {
                    c += &even.mul(&self.chern_class(i), &other.chern_class(d - i));
                }
                c
            })
            .collect();
        TauBundle::new(self.base.clone(), chern)
    }
}

/// `kappa(e) = w_r` for the Euler class `e = c_r`.
pub fn euler_check(b: &TauBundle) -> bool {
    let r = b.rank();
    if r == 0 {
        return true;
    }
    let top = b.chern_class(r);
    b.base.kappa_of(&top) == b.sw()[r as usize - 1]
}

/// `kappa(c) = w` on total classes.
pub fn chern_sw_check(b: &TauBundle) -> CheckResult {
    const ID: &str = "chern-sw";
    let lhs = b.base.kappa_of(&b.total_chern());
    let rhs = b.total_sw();
    if lhs == rhs {
        CheckResult::pass(ID)
    } else {
        let fixed = b.base.fixed();
        CheckResult::fail(ID, format!("kappa(c) = {} but w = {}", fixed.format(&lhs), fixed.format(&rhs)))
    }
}

pub fn thom_frame(b: &TauBundle) -> Result<FrameModule, FrameError> {
    FrameModule::new(b.base.clone(), &b.sw())
}

/// Standard monomials of all degrees `≤ top`, ordered by degree.
fn graded_basis(ring: &GradedAlgebra, top: u32) -> Vec<Monomial> {
    (0..=top).flat_map(|d| ring.basis(d).iter().cloned()).collect()
}

/// The ring `Z2 ⊕ T·R` with `(T x)(T y) = T (e x y)`, one generator per
/// basis element of `R` of degree at most `cutoff - shift`.
struct ThomRing {
    ring: Arc<GradedAlgebra>,
    basis: Vec<Monomial>,
    index: std::collections::HashMap<Monomial, usize>,
}

impl ThomRing {
    fn new(base: &GradedAlgebra, euler: &Polynomial, shift: u32, cutoff: u32, prefix: &str) -> Result<Self, FrameError> {
        let top = cutoff.saturating_sub(shift);
        let basis = graded_basis(base, top);
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let gens: Vec<Generator> =
            basis.iter().enumerate().map(|(i, m)| Generator::new(format!("{prefix}_{i}"), shift + m.degree())).collect();
        let skeleton = GradedAlgebra::polynomial_ring(gens.clone(), cutoff)?;
        let mut this = ThomRing { ring: Arc::new(skeleton), basis, index };
        let mut rels = Vec::new();
        for i in 0..this.basis.len() {
            for j in i..this.basis.len() {
                if 2 * shift + this.basis[i].degree() + this.basis[j].degree() > cutoff {
                    continue;
                }
                let x = Polynomial::from_monomial(this.basis[i].mul(&this.basis[j]));
                let prod = base.mul(euler, &x);
                let mut r = this.ring.gen(i).mul(&this.ring.gen(j));
                r += &this.embed(&prod);
                rels.push(r);
            }
        }
        this.ring = Arc::new(GradedAlgebra::new(gens, rels, cutoff)?);
        Ok(this)
    }

    /// `T·p` for `p` in normal form.
    fn embed(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for m in p.terms() {
            if let Some(&i) = self.index.get(m) {
                out += &self.ring.gen(i);
            }
        }
        out
    }
}

/// Thom space `Z2 ⊕ T·A` as a frame. Generators `T_i = T·β_i` and
/// `R_i = T^τ·β'_i` run over the standard monomials of `A` and `B` by degree.
pub fn thom_space_frame(b: &TauBundle) -> Result<ConjugationFrame, FrameError> {
    let base = &b.base;
    let r = b.rank();
    let cutoff = base.cutoff();
    if r == 0 {
        return Err(FrameError::Invalid("Thom space needs rank >= 1".into()));
    }
    if 2 * r > cutoff {
        return Err(FrameError::Invalid(format!("cutoff {cutoff} is below the Thom class degree {}", 2 * r)));
    }
    let module = thom_frame(b)?;
    let even = ThomRing::new(base.even(), &b.chern_class(r), 2 * r, cutoff, "T")?;
    let euler_real = b.sw().last().cloned().unwrap_or_else(|| base.fixed().one());
    let fixed = ThomRing::new(base.fixed(), &euler_real, r, cutoff, "R")?;
    let mut restrictor = base.restrictor();
    let mut kappa = Vec::new();
    let mut rsigma = Vec::new();
    for (i, m) in even.basis.iter().enumerate() {
        let beta = Polynomial::from_monomial(m.clone());
        kappa.push(fixed.embed(&base.kappa_of(&beta)));
        let rest = module.omega().mul(&restrictor.restrict(&beta, 0)?, base.fixed());
        let degree = even.ring.generators()[i].degree;
        rsigma.push(rest.map_coeffs(degree, |c| fixed.embed(c)));
    }
    ConjugationFrame::new(format!("Thom({})", base.name()), even.ring, fixed.ring, kappa, rsigma)
}

/// Degreewise check that `{1, x, …, x^{r-1}}` is a basis of `R'` over `R`.
fn leray_hirsch(base: &GradedAlgebra, ext: &GradedAlgebra, x: &Polynomial, r: u32, step: u32) -> Result<(), String> {
    let n = base.ngens();
    for d in 0..=ext.cutoff() {
        let dim = ext.dim(d);
        let mut ech = Echelon::new(dim, dim);
        let mut count = 0;
        for i in 0..r {
            let Some(e) = d.checked_sub(i * step) else { continue };
            let xi = ext.pow(x, i);
            for m in base.basis(e) {
                let p = ext.mul(&Polynomial::from_monomial(m.embed(0, n + 1)), &xi);
                let v: BitVec = ext.coordinates(&p, d);
                count += 1;
                if ech.insert(&v).is_err() {
                    return Err(format!("degree {d}: products with powers of the new generator are dependent"));
                }
            }
        }
        if count != dim {
            return Err(format!("degree {d}: {count} products for dimension {dim}"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ProjectiveBundle {
    pub frame: ConjugationFrame,
    pub leray_hirsch: CheckResult,
}

fn fresh_name(ring: &GradedAlgebra, want: &str) -> String {
    let mut name = want.to_string();
    while ring.generator_index(&name).is_some() {
        name.push('\'');
    }
    name
}

/// `A[t]/(t^r + Σ c_i t^{r-i})`, `B[s]/(s^r + Σ w_i s^{r-i})`, `t ↦ s`,
/// `r∘σ(t) = s u + s^2`.
pub fn projective_bundle_frame(b: &TauBundle) -> Result<ProjectiveBundle, FrameError> {
    let r = b.rank();
    if r == 0 {
        return Err(FrameError::Invalid("projective bundle needs rank >= 1".into()));
    }
    let base = &b.base;
    let cutoff = base.cutoff();
    let extend = |ring: &GradedAlgebra, var: &str, deg: u32, classes: &[Polynomial]| -> Result<Arc<GradedAlgebra>, FrameError> {
        let n = ring.ngens();
        let mut gens = ring.generators().to_vec();
        gens.push(Generator::new(fresh_name(ring, var), deg));
        let skeleton = GradedAlgebra::polynomial_ring(gens.clone(), cutoff)?;
        let x = skeleton.gen(n);
        let mut rels: Vec<Polynomial> = ring.relations().iter().map(|p| p.embed(0, n + 1)).collect();
        let mut rel = skeleton.pow(&x, r);
        for (i, c) in classes.iter().enumerate() {
            let i = i as u32 + 1;
            rel += &c.embed(0, n + 1).mul(&skeleton.pow(&x, r - i));
        }
        rels.push(rel);
        Ok(Arc::new(GradedAlgebra::new(gens, rels, cutoff)?))
    };
    let even = extend(base.even(), "t", 2, b.chern())?;
    let fixed = extend(base.fixed(), "s", 1, &b.sw())?;
    let (na, nb) = (base.even().ngens(), base.fixed().ngens());
    let mut kappa: Vec<Polynomial> = base.kappa().images().iter().map(|p| p.embed(0, nb + 1)).collect();
    let mut rsigma: Vec<UPoly> = base
        .even()
        .generators()
        .iter()
        .zip(base.rsigma())
        .map(|(g, rs)| rs.map_coeffs(g.degree, |c| c.embed(0, nb + 1)))
        .collect();
    let s = fixed.gen(nb);
    kappa.push(s.clone());
    rsigma.push(line_rule(&fixed, &s));
    let lh = leray_hirsch(base.even(), &even, &even.gen(na), r, 2)
        .and_then(|_| leray_hirsch(base.fixed(), &fixed, &s, r, 1));
    let frame = ConjugationFrame::new(format!("P({})", base.name()), even, fixed, kappa, rsigma)?;
    Ok(ProjectiveBundle { frame, leray_hirsch: CheckResult::from_outcome("leray-hirsch", lh) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{grassmannian_frame, point_frame, projective_frame, Extent};
    use crate::frames::{canonical_frame, halving_series, verify_frame};

    fn cp(n: u32) -> Arc<ConjugationFrame> {
        Arc::new(projective_frame(Extent::Finite(n), 24).unwrap())
    }

    #[test]
    fn euler_and_total_classes() {
        let inf = Arc::new(projective_frame(Extent::Infinite, 16).unwrap());
        let hopf = TauBundle::line(inf.clone(), "a").unwrap();
        assert!(euler_check(&hopf));
        assert_eq!(inf.fixed().format(&hopf.sw()[0]), "b");
        let two = hopf.whitney_sum(&hopf).unwrap();
        assert_eq!(inf.even().format(&two.chern_class(2)), "a^2");
        assert_eq!(inf.fixed().format(&two.sw()[1]), "b^2");
        assert!(euler_check(&TauBundle::trivial(inf.clone(), 2)));
        assert!(chern_sw_check(&two).passed());
        assert_eq!(two.total_sw(), inf.fixed().mul(&hopf.total_sw(), &hopf.total_sw()));
    }

    #[test]
    fn tautological_bundle_on_gr24() {
        let g = Arc::new(grassmannian_frame(2, Extent::Finite(4), 24).unwrap());
        let taut = TauBundle::from_strs(g, &["c1", "c2"]).unwrap();
        assert!(chern_sw_check(&taut).passed());
    }

    #[test]
    fn thom_leading_term() {
        let base = cp(3);
        let b = TauBundle::from_strs(base.clone(), &["a", "a^2"]).unwrap();
        let m = thom_frame(&b).unwrap();
        assert_eq!(m.leading_coefficient(), &base.fixed().one());
        assert_eq!(m.omega().display(base.fixed()).to_string(), "u^2 + b*u + b^2");
        let triv = thom_frame(&TauBundle::trivial(base.clone(), 2)).unwrap();
        assert_eq!(triv.omega(), &UPoly::u_power(2, base.fixed()));
    }

    #[test]
    fn thom_spaces_pass_axioms() {
        for n in 1..=4 {
            let f = thom_space_frame(&TauBundle::line(cp(n), "a").unwrap()).unwrap();
            let rep = verify_frame(&f);
            assert!(rep.passed(), "n={n}: {:?}", rep.first_failure());
            let c = canonical_frame(&f).unwrap();
            let p = canonical_frame(&projective_frame(Extent::Finite(n + 1), 24).unwrap()).unwrap();
            assert_eq!(c.to_spec(), p.to_spec());
        }
    }

    #[test]
    fn projective_bundle_of_trivial_plane_is_line() {
        let pt = Arc::new(point_frame(24));
        let pb = projective_bundle_frame(&TauBundle::trivial(pt, 2)).unwrap();
        assert!(pb.leray_hirsch.passed());
        let c = canonical_frame(&pb.frame).unwrap();
        let p = canonical_frame(&projective_frame(Extent::Finite(1), 24).unwrap()).unwrap();
        assert_eq!(c.to_spec(), p.to_spec());
    }

    #[test]
    fn hirzebruch_surface() {
        let b = TauBundle::from_strs(cp(1), &["a", "0"]).unwrap();
        let pb = projective_bundle_frame(&b).unwrap();
        assert!(pb.leray_hirsch.passed());
        assert!(verify_frame(&pb.frame).passed());
        let h = halving_series(&pb.frame);
        assert!(h.holds);
        assert_eq!(h.even.truncated(4).coefficients(), &[1, 0, 2, 0, 1]);
    }
}
