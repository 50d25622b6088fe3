//! Mechanical checks of the frame axioms and their consequences.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ConjugationFrame, FrameError, UPoly};
use crate::algebra::{HilbertSeries, Polynomial};
use crate::linalg::{self, BitVec, Echelon};
use crate::report::CheckResult;

/// Reports never claim more than this: the checks are necessary conditions.
pub const AXIOMS_VERIFIED: &str = "axioms verified";

/// A named check on a single frame.
pub trait FrameCheck: Send + Sync {
    fn id(&self) -> &'static str;
    fn run(&self, frame: &ConjugationFrame) -> CheckResult;
}

struct EvenConcentration;
struct KappaWellDefined;
struct KappaIsomorphism;
struct ConjugationEquation;
struct RsigmaRelations;
struct KappaUnit;

impl FrameCheck for EvenConcentration {
    fn id(&self) -> &'static str {
        "even-cohomology"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let even = frame.even();
        if let Some(g) = even.generators().iter().find(|g| g.degree % 2 == 1) {
            return CheckResult::fail(self.id(), format!("generator {} has odd degree {}", g.name, g.degree));
        }
        match (1..=even.cutoff()).step_by(2).find(|d| even.dim(*d) > 0) {
            Some(d) => CheckResult::fail(self.id(), format!("degree {d} has dimension {}", even.dim(d))),
            None => CheckResult::pass(self.id()),
        }
    }
}

impl FrameCheck for KappaWellDefined {
    fn id(&self) -> &'static str {
        "kappa-well-defined"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let rep = frame.kappa().check();
        match rep.first_witness() {
            None => CheckResult::pass(self.id()),
            Some(w) => CheckResult::fail(self.id(), w),
        }
    }
}

impl FrameCheck for KappaIsomorphism {
    fn id(&self) -> &'static str {
        "kappa-isomorphism"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        if !frame.kappa().check().passed() {
            return CheckResult::skipped(self.id(), "kappa is not well defined");
        }
        let iso = frame.kappa().is_iso_up_to();
        match iso.failure {
            None => CheckResult::pass(self.id()),
            Some(f) => {
                let w = match f.target_degree {
                    Some(e) if f.source_dim != f.target_dim => format!(
                        "even degree {} has dimension {} but fixed degree {e} has dimension {}",
                        f.source_degree, f.source_dim, f.target_dim
                    ),
                    Some(e) => format!(
                        "image of even degree {} spans only {} of {} dimensions in fixed degree {e}",
                        f.source_degree, f.image_rank, f.target_dim
                    ),
                    None => format!("odd even-ring degree {} is nonzero", f.source_degree),
                };
                CheckResult::fail(self.id(), w)
            }
        }
    }
}

impl FrameCheck for ConjugationEquation {
    fn id(&self) -> &'static str {
        "conjugation-equation"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let fixed = frame.fixed();
        for (i, g) in frame.even().generators().iter().enumerate() {
            let r = &frame.rsigma()[i];
            if g.degree % 2 == 1 {
                return CheckResult::fail(self.id(), format!("generator {} has odd degree", g.name));
            }
            let m = g.degree / 2;
            if let Some(k) = r.shape_defect() {
                return CheckResult::fail(
                    self.id(),
                    format!("r∘σ({}) has a coefficient of the wrong degree at u^{k}: {}", g.name, fixed.format(r.coeff(k))),
                );
            }
            if let Some(top) = r.u_degree().filter(|t| *t > m) {
                return CheckResult::fail(self.id(), format!("r∘σ({}) has a nonzero term at u^{top} above u^{m}", g.name));
            }
            let lead = r.coeff(m);
            let k = frame.kappa().image_of_generator(i);
            if lead != k {
                return CheckResult::fail(
                    self.id(),
                    format!(
                        "r∘σ({}) has u^{m} coefficient {} but kappa({}) = {}",
                        g.name,
                        fixed.format(lead),
                        g.name,
                        fixed.format(k)
                    ),
                );
            }
        }
        CheckResult::pass(self.id())
    }
}

impl FrameCheck for RsigmaRelations {
    fn id(&self) -> &'static str {
        "rsigma-relations"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let even = frame.even();
        let mut restrictor = frame.restrictor();
        for (idx, rel) in even.relations().iter().enumerate() {
            let Some(d) = rel.degree() else { continue };
            if d > even.cutoff() {
                continue;
            }
            // restrict the relation as a polynomial, before reduction in A
            let mut total = UPoly::zero(d);
            for m in rel.terms() {
                let mono = Polynomial::from_monomial(m.clone());
                let img = match restrictor.restrict_unreduced(&mono) {
                    Ok(p) => p,
                    Err(e) => return CheckResult::fail(self.id(), e.to_string()),
                };
                total = total.add(&img);
            }
            if !total.is_zero() {
                return CheckResult::fail(
                    self.id(),
                    format!("relation #{idx} `{}` maps to {}", even.format(rel), total.display(frame.fixed())),
                );
            }
        }
        CheckResult::pass(self.id())
    }
}

impl FrameCheck for KappaUnit {
    fn id(&self) -> &'static str {
        "kappa-unit"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let (a0, b0) = (frame.even().dim(0), frame.fixed().dim(0));
        if a0 != b0 {
            return CheckResult::fail(self.id(), format!("degree 0 dimensions differ: {a0} vs {b0}"));
        }
        let one = frame.kappa_of(&frame.even().one());
        if one != frame.fixed().one() {
            return CheckResult::fail(self.id(), format!("kappa(1) = {}", frame.fixed().format(&one)));
        }
        CheckResult::pass(self.id())
    }
}

/// The six axiom checks in their fixed order.
pub fn axiom_checks() -> Vec<Box<dyn FrameCheck>> {
    vec![
        Box::new(EvenConcentration),
        Box::new(KappaWellDefined),
        Box::new(KappaIsomorphism),
        Box::new(ConjugationEquation),
        Box::new(RsigmaRelations),
        Box::new(KappaUnit),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub frame: String,
    pub label: &'static str,
    pub checks: Vec<CheckResult>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == id)
    }
}

/// Runs the six axiom checks in order.
pub fn verify_frame(frame: &ConjugationFrame) -> FrameReport {
    FrameReport {
        frame: frame.name().to_string(),
        label: AXIOMS_VERIFIED,
        checks: axiom_checks().iter().map(|c| c.run(frame)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub injective: bool,
    pub failing_degree: Option<u32>,
    pub kernel_witness: Option<String>,
}

/// Restrictions of a basis of every even degree of `A`, indexed by degree.
fn restricted_basis(frame: &ConjugationFrame) -> Result<BTreeMap<u32, Vec<(Polynomial, UPoly)>>, FrameError> {
    let even = frame.even();
    let mut restrictor = frame.restrictor();
    let mut out = BTreeMap::new();
    for d in (0..=even.cutoff()).step_by(2) {
        let mut v = Vec::new();
        for m in even.basis(d) {
            let p = Polynomial::from_monomial(m.clone());
            let r = restrictor.restrict(&p, 0)?;
            v.push((p, r));
        }
        out.insert(d, v);
    }
    Ok(out)
}

/// Coordinates of the degree-`d` piece of `B[u]`: blocks `u^i * B_{d-i}`.
struct UCoordinates {
    offsets: Vec<usize>,
    dim: usize,
}

impl UCoordinates {
    fn new(frame: &ConjugationFrame, d: u32) -> Self {
        let mut offsets = Vec::new();
        let mut dim = 0;
        for i in 0..=d {
            offsets.push(dim);
            dim += frame.fixed().dim(d - i);
        }
        UCoordinates { offsets, dim }
    }

    /// Coordinates of `p * u^shift`, where `p * u^shift` has total degree `d`.
    fn of(&self, frame: &ConjugationFrame, p: &UPoly, shift: u32, d: u32) -> BitVec {
        let mut v = BitVec::zeros(self.dim);
        for (i, c) in p.terms() {
            let e = i + shift;
            let local = frame.fixed().coordinates(c, d - e);
            for k in local.ones() {
                v.flip(self.offsets[e as usize] + k);
            }
        }
        v
    }
}

/// Degreewise kernel of `r: A[u] -> B[u]`.
pub fn check_injectivity_r(frame: &ConjugationFrame) -> Result<InjectivityReport, FrameError> {
    let basis = restricted_basis(frame)?;
    for d in 0..=frame.cutoff() {
        let coords = UCoordinates::new(frame, d);
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (deg, elems) in basis.range(..=d) {
            let j = d - deg;
            for (a, r) in elems {
                domain.push((a, j));
                images.push(coords.of(frame, r, j, d));
            }
        }
        let kernel = linalg::kernel(&images, coords.dim);
        if let Some(k) = kernel.first() {
            let parts: Vec<String> = k
                .ones()
                .map(|i| {
                    let (a, j) = domain[i];
                    format!("{}*u^{j}", frame.even().format(a))
                })
                .collect();
            return Ok(InjectivityReport { injective: false, failing_degree: Some(d), kernel_witness: Some(parts.join(" + ")) });
        }
    }
    Ok(InjectivityReport { injective: true, failing_degree: None, kernel_witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingReport {
    pub even: HilbertSeries,
    pub fixed: HilbertSeries,
    pub holds: bool,
    pub first_defect: Option<u32>,
}

/// Compares `P_A(t)` with `P_B(t^2)` up to the even ring's cutoff.
pub fn halving_series(frame: &ConjugationFrame) -> HalvingReport {
    let even = frame.even().hilbert();
    let fixed = frame.fixed().hilbert();
    let reach = frame.cutoff().min(2 * frame.fixed().cutoff());
    let first_defect = even.halving_defect(&fixed, reach);
    HalvingReport { even, fixed, holds: first_defect.is_none(), first_defect }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizedClass {
    pub degree: u32,
    pub class: String,
    /// Least `k` with `class * u^k` in the image of `r`.
    pub k: Option<u32>,
    /// Bound from the downward induction: `m0 - degree`.
    pub bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    /// Top nonzero degree of the even ring, if it is finite below the cutoff.
    pub top_degree: Option<u32>,
    pub classes: Vec<LocalizedClass>,
    pub surjective_after_inverting_u: Option<bool>,
    /// Value of `r∘σ(a)` at `u = 1` and all fixed generators `= 1`, per even
    /// generator, when that evaluation is a ring map on the fixed ring.
    pub evaluation_at_ones: Option<Vec<(String, bool)>>,
}

impl LocalizationReport {
    pub fn surjectivity(&self) -> Result<bool, FrameError> {
        self.surjective_after_inverting_u.ok_or(FrameError::NotFiniteDimensional)
    }

    /// True when every even generator restricts to something killed by the
    /// evaluation: the composite is the zero map on generators.
    pub fn counterexample(&self) -> bool {
        matches!(&self.evaluation_at_ones, Some(v) if !v.is_empty() && v.iter().all(|(_, val)| !val))
    }
}

/// (a) every fixed class becomes a restriction after multiplying by a power
/// of `u`, when `A` is finite-dimensional; (b) evaluation at `u = b = 1`.
pub fn localize_check(frame: &ConjugationFrame) -> Result<LocalizationReport, FrameError> {
    let even = frame.even();
    let fixed = frame.fixed();
    let cutoff = frame.cutoff();
    let top = (0..=cutoff).rev().find(|d| even.dim(*d) > 0).unwrap_or(0);
    let finite = top < cutoff;

    let mut classes = Vec::new();
    let mut surjective = None;
    if finite {
        let basis = restricted_basis(frame)?;
        let mut images: BTreeMap<u32, (UCoordinates, Echelon)> = BTreeMap::new();
        let mut all = true;
        for q in 0..=top.min(fixed.cutoff()) {
            for m in fixed.basis(q) {
                let beta = Polynomial::from_monomial(m.clone());
                let mut found = None;
                for k in 0..=top {
                    let d = q + k;
                    if d > cutoff {
                        break;
                    }
                    let (coords, ech) = images.entry(d).or_insert_with(|| {
                        let coords = UCoordinates::new(frame, d);
                        let mut vecs = Vec::new();
                        for (deg, elems) in basis.range(..=d) {
                            for (_, r) in elems {
                                vecs.push(coords.of(frame, r, d - deg, d));
                            }
                        }
                        let mut ech = Echelon::new(coords.dim, vecs.len());
                        for v in &vecs {
                            let _ = ech.insert(v);
                        }
                        (coords, ech)
                    });
                    let target = coords.of(frame, &UPoly::constant(beta.clone(), q), k, d);
                    if ech.contains(&target) {
                        found = Some(k);
                        break;
                    }
                }
                all &= found.is_some();
                classes.push(LocalizedClass { degree: q, class: fixed.format(&beta), k: found, bound: top.saturating_sub(q) });
            }
        }
        surjective = Some(all);
    }

    let evaluation_defined = fixed.groebner_basis().iter().all(|g| g.len() % 2 == 0);
    let evaluation_at_ones = evaluation_defined.then(|| {
        even.generators().iter().zip(frame.rsigma()).map(|(g, r)| (g.name.clone(), r.evaluate_at_ones())).collect()
    });
    Ok(LocalizationReport {
        top_degree: finite.then_some(top),
        classes,
        surjective_after_inverting_u: surjective,
        evaluation_at_ones,
    })
}

pub(crate) struct InjectivityCheck;
pub(crate) struct HalvingCheck;
pub(crate) struct LocalizationCheck;

impl FrameCheck for InjectivityCheck {
    fn id(&self) -> &'static str {
        "injectivity-r"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        match check_injectivity_r(frame) {
            Ok(r) if r.injective => CheckResult::pass(self.id()),
            Ok(r) => CheckResult::fail(
                self.id(),
                format!("degree {}: {} restricts to 0", r.failing_degree.unwrap_or(0), r.kernel_witness.unwrap_or_default()),
            ),
            Err(e) => CheckResult::fail(self.id(), e.to_string()),
        }
    }
}

impl FrameCheck for HalvingCheck {
    fn id(&self) -> &'static str {
        "halving"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        let r = halving_series(frame);
        match r.first_defect {
            None => CheckResult::pass(self.id()),
            Some(d) => {
                let fixed = if d % 2 == 0 { r.fixed.coefficient(d / 2) } else { 0 };
                CheckResult::fail(self.id(), format!("degree {d}: even ring has {}, halved fixed ring has {fixed}", r.even.coefficient(d)))
            }
        }
    }
}

impl FrameCheck for LocalizationCheck {
    fn id(&self) -> &'static str {
        "localization"
    }

    fn run(&self, frame: &ConjugationFrame) -> CheckResult {
        match localize_check(frame) {
            Err(e) => CheckResult::fail(self.id(), e.to_string()),
            Ok(r) => match r.surjective_after_inverting_u {
                Some(true) => CheckResult::pass(self.id()),
                Some(false) => {
                    let bad = r.classes.iter().find(|c| c.k.is_none()).map(|c| c.class.clone()).unwrap_or_default();
                    CheckResult::fail(self.id(), format!("{bad} is not in the localized image"))
                }
                None if r.counterexample() => CheckResult::pass_with(
                    self.id(),
                    "not finite-dimensional; evaluation at u = b = 1 kills every generator (localization fails)",
                ),
                None => CheckResult::skipped(self.id(), "even ring not finite-dimensional below the cutoff"),
            },
        }
    }
}
