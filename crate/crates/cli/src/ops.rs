//! Pipeline ops, registered by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde::Deserialize;
use serde_json::{json, Value};

use conjspace::algebra::HilbertSeries;
use conjspace::cellcomplex::{poincare_series, validate_three_cell, CellSpec, ThreeCellInvariant};
use conjspace::constructors::{
    chern_sw_check, connected_sum_frame, euler_check, fiber_bundle_series, product_frame, projective_bundle_frame, stabilize,
    thom_frame, thom_space_frame, BundleSpec, FrameFamily, TauBundle, CONNECTED_SUM_CAVEAT,
};
use conjspace::frames::{canonical_frame, localize_check, verify_naturality, ConjugationFrame, FrameMorphism, FrameSpec, AXIOMS_VERIFIED};
use conjspace::hamiltonian::{
    equivariant_series, morse_series, mt2_check, tw_kernel, two_torsion_scan, xi_independence, EquivariantPresentation,
    HamiltonianData, HamiltonianError, HamiltonianSpec, PresentationSpec,
};
use conjspace::registry::{CheckRegistry, ConstructorRegistry};
use conjspace::report::CheckResult;

use crate::pipeline::{Args, Bound, Outcome};
use crate::report::Table;
use crate::CliError;

type R = Result<Outcome, CliError>;

pub trait PipelineOp: Send + Sync {
    fn name(&self) -> &str;
    fn run(&self, args: &Args) -> R;
}

pub struct OpRegistry {
    ops: BTreeMap<String, Box<dyn PipelineOp>>,
}

impl Default for OpRegistry {
    fn default() -> Self {
        let mut r = OpRegistry { ops: BTreeMap::new() };
        for name in ConstructorRegistry::default().names() {
            r.register(Box::new(Construct(name)));
        }
        let fixed: Vec<Box<dyn PipelineOp>> = vec![
            Box::new(Load),
            Box::new(Emit),
            Box::new(Product),
            Box::new(ConnectedSum),
            Box::new(Canonical),
            Box::new(Verify),
            Box::new(Localize),
            Box::new(Series),
            Box::new(Naturality),
            Box::new(Stabilize),
            Box::new(Bundle),
            Box::new(WhitneySum),
            Box::new(CharClasses),
            Box::new(ThomSpace),
            Box::new(ProjectiveBundle),
            Box::new(Cells),
            Box::new(ThreeCell),
            Box::new(Hamiltonian),
            Box::new(Reduce),
        ];
        for op in fixed {
            r.register(op);
        }
        r
    }
}

impl OpRegistry {
    pub fn register(&mut self, op: Box<dyn PipelineOp>) {
        self.ops.insert(op.name().to_string(), op);
    }

    pub fn get(&self, name: &str) -> Option<&dyn PipelineOp> {
        self.ops.get(name).map(|o| o.as_ref())
    }
}

fn frame_out(f: ConjugationFrame) -> Outcome {
    let output = json!({ "frame": f.name() });
    Outcome { value: Some(Bound::Frame(Arc::new(f))), output: Some(output), ..Default::default() }
}

fn series_json(s: &HilbertSeries) -> Value {
    json!(s.coefficients())
}

struct Construct(&'static str);

impl PipelineOp for Construct {
    fn name(&self) -> &str {
        self.0
    }

    fn run(&self, args: &Args) -> R {
        let map: conjspace::registry::Args = args.map.iter().filter(|(k, _)| *k != "cutoff").map(|(k, v)| (k.clone(), v.clone())).collect();
        Ok(frame_out(args.env.constructors.build(self.0, &map, args.cutoff()?)?))
    }
}

/// A frame from a serialized spec, inline (`frame`) or on disk (`path`).
struct Load;

impl PipelineOp for Load {
    fn name(&self) -> &str {
        "load"
    }

    fn run(&self, args: &Args) -> R {
        let spec: FrameSpec = match args.opt("path") {
            Some(_) => {
                let path = args.str("path")?;
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Step(format!("{path}: {e}")))?;
                serde_json::from_str(&text).map_err(|e| CliError::Step(format!("{path}: {e}")))?
            }
            None => args.parsed("frame")?,
        };
        let f = ConjugationFrame::from_spec(&spec)?;
        Ok(frame_out(match args.opt("cutoff") {
            Some(_) => f.with_cutoff(args.u32("cutoff")?)?,
            None => f,
        }))
    }
}

struct Emit;

impl PipelineOp for Emit {
    fn name(&self) -> &str {
        "emit"
    }

    fn run(&self, args: &Args) -> R {
        let f = args.frame("frame")?;
        let spec = serde_json::to_value(f.to_spec()).map_err(|e| CliError::Step(e.to_string()))?;
        Ok(Outcome { output: Some(spec), ..Default::default() })
    }
}

struct Product;

impl PipelineOp for Product {
    fn name(&self) -> &str {
        "product"
    }

    fn run(&self, args: &Args) -> R {
        Ok(frame_out(product_frame(&*args.frame("left")?, &*args.frame("right")?)?))
    }
}

struct ConnectedSum;

impl PipelineOp for ConnectedSum {
    fn name(&self) -> &str {
        "connected_sum"
    }

    fn run(&self, args: &Args) -> R {
        let f = connected_sum_frame(&*args.frame("left")?, &*args.frame("right")?, args.u32("dim")?)?;
        let mut out = frame_out(f);
        out.output = Some(json!({ "frame": out.output.unwrap()["frame"], "caveat": CONNECTED_SUM_CAVEAT }));
        Ok(out)
    }
}

struct Canonical;

impl PipelineOp for Canonical {
    fn name(&self) -> &str {
        "canonical"
    }

    fn run(&self, args: &Args) -> R {
        Ok(frame_out(canonical_frame(&*args.frame("frame")?)?))
    }
}

/// Runs registered checks; all of them unless `checks` lists ids.
struct Verify;

impl PipelineOp for Verify {
    fn name(&self) -> &str {
        "verify"
    }

    fn run(&self, args: &Args) -> R {
        let f = args.frame("frame")?;
        let reg = CheckRegistry::default();
        let checks = match args.opt("checks") {
            None => reg.run_all(&f),
            Some(_) => {
                let ids: Vec<String> = args.parsed("checks")?;
                ids.iter()
                    .map(|id| reg.run(id, &f).ok_or_else(|| CliError::Step(format!("unknown check `{id}`"))))
                    .collect::<Result<_, _>>()?
            }
        };
        let verdict = if checks.iter().all(CheckResult::passed) { AXIOMS_VERIFIED } else { "verification failed" };
        Ok(Outcome { checks, output: Some(json!({ "frame": f.name(), "verdict": verdict })), ..Default::default() })
    }
}

struct Localize;

impl PipelineOp for Localize {
    fn name(&self) -> &str {
        "localize"
    }

    fn run(&self, args: &Args) -> R {
        let f = args.frame("frame")?;
        let rep = localize_check(&f)?;
        let check = CheckRegistry::default().run("localization", &f).expect("registered");
        let output = json!({
            "frame": f.name(),
            "top_degree": rep.top_degree,
            "surjective_after_inverting_u": rep.surjective_after_inverting_u,
            "evaluation_at_ones_is_zero": rep.counterexample(),
            "classes": rep.classes,
        });
        Ok(Outcome { checks: vec![check], output: Some(output), ..Default::default() })
    }
}

fn series_table(even: &HilbertSeries, fixed: &HilbertSeries, half: u32) -> Table {
    let last = (0..=half).rev().find(|m| even.coefficient(2 * m) > 0 || fixed.coefficient(*m) > 0).unwrap_or(0);
    let rows = (0..=last)
        .map(|m| {
            let (x, y) = (even.coefficient(2 * m), fixed.coefficient(m));
            vec![m.to_string(), x.to_string(), y.to_string(), if x == y { "=" } else { "≠" }.to_string()]
        })
        .collect();
    let columns = ["m", "dim H^2m(X)", "dim H^m(X^τ)", "halving"].map(String::from).to_vec();
    Table { columns, rows }
}

struct Series;

impl PipelineOp for Series {
    fn name(&self) -> &str {
        "series"
    }

    fn run(&self, args: &Args) -> R {
        let f = args.frame("frame")?;
        let (even, fixed) = (f.even().hilbert(), f.fixed().hilbert());
        let check = CheckRegistry::default().run("halving", &f).expect("registered");
        Ok(Outcome {
            checks: vec![check],
            table: Some(series_table(&even, &fixed, f.cutoff() / 2)),
            output: Some(json!({ "frame": f.name(), "even": series_json(&even), "fixed": series_json(&fixed) })),
            ..Default::default()
        })
    }
}

struct Naturality;

impl PipelineOp for Naturality {
    fn name(&self) -> &str {
        "naturality"
    }

    fn run(&self, args: &Args) -> R {
        let even: BTreeMap<String, String> = args.parsed("even_map")?;
        let fixed: BTreeMap<String, String> = args.parsed("fixed_map")?;
        let pairs = |m: &BTreeMap<String, String>| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect::<Vec<_>>();
        let (e, x) = (pairs(&even), pairs(&fixed));
        let e: Vec<(&str, &str)> = e.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let x: Vec<(&str, &str)> = x.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let m = FrameMorphism::new(args.frame("source")?, args.frame("target")?, &e, &x)?;
        Ok(Outcome { checks: verify_naturality(&m).checks(), ..Default::default() })
    }
}

/// Builds `constructor` at each of `cutoffs` and compares truncations.
struct Stabilize;

impl PipelineOp for Stabilize {
    fn name(&self) -> &str {
        "stabilize"
    }

    fn run(&self, args: &Args) -> R {
        let shorthand = args.str("constructor")?;
        let cutoffs: Vec<u32> = args.parsed("cutoffs")?;
        let fam = FrameFamily::build(&cutoffs, |c| args.env.constructors.build_shorthand(shorthand, c))?;
        Ok(Outcome { checks: vec![stabilize(&fam)], output: Some(json!({ "cutoffs": cutoffs })), ..Default::default() })
    }
}

struct Bundle;

impl PipelineOp for Bundle {
    fn name(&self) -> &str {
        "bundle"
    }

    fn run(&self, args: &Args) -> R {
        let base = args.frame("base")?;
        let chern: Vec<String> = args.parsed("chern")?;
        let rank = match args.opt("rank") {
            Some(_) => args.u32("rank")?,
            None => chern.len() as u32,
        };
        let spec = BundleSpec { base: String::new(), rank, chern };
        let b = TauBundle::from_spec(base, &spec)?;
        Ok(Outcome { value: Some(Bound::Bundle(b)), output: Some(json!({ "rank": rank })), ..Default::default() })
    }
}

struct WhitneySum;

impl PipelineOp for WhitneySum {
    fn name(&self) -> &str {
        "whitney_sum"
    }

    fn run(&self, args: &Args) -> R {
        let b = args.bundle("left")?.whitney_sum(&args.bundle("right")?)?;
        Ok(Outcome { output: Some(json!({ "rank": b.rank() })), value: Some(Bound::Bundle(b)), ..Default::default() })
    }
}

struct CharClasses;

impl PipelineOp for CharClasses {
    fn name(&self) -> &str {
        "char_classes"
    }

    fn run(&self, args: &Args) -> R {
        let b = args.bundle("bundle")?;
        let base = b.base();
        let (even, fixed) = (base.even(), base.fixed());
        let thom = thom_frame(&b)?;
        let euler = if euler_check(&b) {
            CheckResult::pass("euler")
        } else {
            CheckResult::fail("euler", "kappa(c_r) differs from w_r")
        };
        let output = json!({
            "base": base.name(),
            "rank": b.rank(),
            "chern": b.chern().iter().map(|c| even.format(c)).collect::<Vec<_>>(),
            "stiefel_whitney": b.sw().iter().map(|c| fixed.format(c)).collect::<Vec<_>>(),
            "total_chern": even.format(&b.total_chern()),
            "total_stiefel_whitney": fixed.format(&b.total_sw()),
            "thom_restriction": thom.omega().display(fixed).to_string(),
        });
        Ok(Outcome { checks: vec![chern_sw_check(&b), euler], output: Some(output), ..Default::default() })
    }
}

struct ThomSpace;

impl PipelineOp for ThomSpace {
    fn name(&self) -> &str {
        "thom_space"
    }

    fn run(&self, args: &Args) -> R {
        Ok(frame_out(thom_space_frame(&args.bundle("bundle")?)?))
    }
}

struct ProjectiveBundle;

impl PipelineOp for ProjectiveBundle {
    fn name(&self) -> &str {
        "projective_bundle"
    }

    fn run(&self, args: &Args) -> R {
        let pb = projective_bundle_frame(&args.bundle("bundle")?)?;
        let mut out = frame_out(pb.frame);
        out.checks.push(pb.leray_hirsch);
        Ok(out)
    }
}

/// Series of a cell structure `{dim, count}`, given explicitly or as
/// `point`, `sphere:k`, `projective:n`, `grassmannian:k:n`.
struct Cells;

fn cell_spec(args: &Args) -> Result<CellSpec, CliError> {
    if let Some(Value::String(s)) = args.opt("cells") {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u32, CliError> {
            parts.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| CliError::Step(format!("bad cell shorthand `{s}`")))
        };
        return Ok(match parts[0] {
            "point" => CellSpec::point(),
            "sphere" => CellSpec::sphere(num(1)?),
            "projective" => CellSpec::projective(num(1)?),
            "grassmannian" => CellSpec::grassmannian(num(1)?, num(2)?),
            _ => return Err(CliError::Step(format!("bad cell shorthand `{s}`"))),
        });
    }
    args.parsed("cells")
}

impl PipelineOp for Cells {
    fn name(&self) -> &str {
        "cells"
    }

    fn run(&self, args: &Args) -> R {
        let spec = cell_spec(args)?;
        let (x, y) = poincare_series(&spec)?;
        let half = spec.top_dimension().unwrap_or(0) / 2;
        let mut output = json!({ "total": series_json(&x), "real": series_json(&y) });
        let mut checks = Vec::new();
        if args.opt("fiber").is_some() {
            let rep = fiber_bundle_series(&spec, &*args.frame("fiber")?)?;
            checks.push(if rep.halving {
                CheckResult::pass("halving")
            } else {
                CheckResult::fail("halving", "fiber bundle series do not halve")
            });
            output["bundle_total"] = series_json(&rep.total);
            output["bundle_real"] = series_json(&rep.real);
        }
        Ok(Outcome { checks, table: Some(series_table(&x, &y, half)), output: Some(output), ..Default::default() })
    }
}

struct ThreeCell;

impl PipelineOp for ThreeCell {
    fn name(&self) -> &str {
        "three_cell"
    }

    fn run(&self, args: &Args) -> R {
        let inv: ThreeCellInvariant = serde_json::from_value(Value::Object(args.map.clone()))
            .map_err(|e| CliError::Step(format!("three_cell: {e}")))?;
        match validate_three_cell(inv) {
            Ok(rep) => Ok(Outcome {
                checks: vec![rep.check.clone()],
                output: Some(json!({ "a_squared_is_b": rep.a_squared_is_b, "h1_real_order": rep.h1_real_order })),
                ..Default::default()
            }),
            Err(e) => Ok(Outcome { checks: vec![CheckResult::fail("three-cell", e.to_string())], ..Default::default() }),
        }
    }
}

fn parse_levels(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| CliError::Step(format!("bad level `{x}`")))).collect()
}

/// Builtin Hamiltonian data: `circle:n`, `projectivized:l0,l1,...`,
/// `toric-square`, `doubled-circle`.
pub fn builtin_hamiltonian(s: &str, cutoff: u32) -> Result<HamiltonianData, CliError> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    Ok(match name {
        "circle" => HamiltonianData::projective_circle(rest.parse().map_err(|_| CliError::Step(format!("bad `{s}`")))?, cutoff),
        "projectivized" => HamiltonianData::projectivized_sum(&parse_levels(rest)?, cutoff)?,
        "toric-square" => HamiltonianData::toric_square(cutoff),
        "doubled-circle" => HamiltonianData::doubled_circle(cutoff),
        _ => return Err(CliError::Step(format!("unknown Hamiltonian builtin `{s}`"))),
    })
}

/// `(1, 101, 101^2, ...)`: generic for small weights and moments.
fn default_xi(rank: usize) -> Vec<i64> {
    (0..rank as u32).map(|i| 101i64.pow(i)).collect()
}

struct Hamiltonian;

impl PipelineOp for Hamiltonian {
    fn name(&self) -> &str {
        "hamiltonian"
    }

    fn run(&self, args: &Args) -> R {
        let cutoff = args.cutoff()?;
        let data = if let Some(h) = args.hamiltonian("data").ok().flatten() {
            h
        } else if let Some(Value::String(s)) = args.opt("data") {
            Arc::new(builtin_hamiltonian(s, cutoff)?)
        } else {
            let spec: HamiltonianSpec = args.parsed("data")?;
            let resolve = |name: &str| -> Result<Arc<ConjugationFrame>, HamiltonianError> {
                let m: serde_json::Map<String, Value> = std::iter::once(("frame".to_string(), Value::String(name.to_string()))).collect();
                Args { map: &m, env: args.env }.frame("frame").map_err(|e| HamiltonianError::Invalid(e.to_string()))
            };
            Arc::new(HamiltonianData::from_spec(&spec, resolve)?)
        };
        let xi: Vec<i64> = match args.opt("xi") {
            Some(_) => args.parsed("xi")?,
            None => default_xi(data.rank),
        };
        let morse = morse_series(&data, &xi)?;
        let neg: Vec<i64> = xi.iter().map(|x| -x).collect();
        let eq = equivariant_series(&data, &xi)?;
        let flags = two_torsion_scan(&data);
        let mut checks = vec![if morse.halving {
            CheckResult::pass("morse-halving")
        } else {
            CheckResult::fail("morse-halving", "P_M(t) differs from P_{M^τ}(t^2)")
        }];
        checks.push(if xi_independence(&data, &xi, &neg)? {
            CheckResult::pass("xi-independence")
        } else {
            CheckResult::fail("xi-independence", format!("series for {xi:?} and {neg:?} differ"))
        });
        checks.push(match eq.first_defect {
            None => CheckResult::pass("equivariant-series"),
            Some(d) => CheckResult::fail("equivariant-series", format!("first defect in degree {d}")),
        });
        let output = json!({
            "xi": morse.xi,
            "components": morse.components,
            "total": series_json(&morse.total),
            "real": series_json(&morse.real),
            "borel": series_json(&eq.borel),
            "borel_real": series_json(&eq.borel_real),
            "two_torsion": flags,
            "mt2": mt2_check(&data),
        });
        Ok(Outcome { value: Some(Bound::Hamiltonian(data)), checks, output: Some(output), ..Default::default() })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PresentationArg {
    Builtin(String),
    Spec(PresentationSpec),
}

struct Reduce;

impl PipelineOp for Reduce {
    fn name(&self) -> &str {
        "reduce"
    }

    fn run(&self, args: &Args) -> R {
        let cutoff = args.cutoff()?;
        let pres = match args.parsed::<PresentationArg>("presentation")? {
            PresentationArg::Builtin(s) => match s.split_once(':') {
                Some(("projectivized", levels)) => EquivariantPresentation::projectivized_sum(&parse_levels(levels)?, cutoff)?,
                _ => return Err(CliError::Step(format!("unknown presentation builtin `{s}`"))),
            },
            PresentationArg::Spec(spec) => EquivariantPresentation::from_spec(&spec)?,
        };
        let mu: Vec<String> = args.parsed("mu")?;
        let mu: Vec<Rational64> = mu
            .iter()
            .map(|s| s.trim().parse().map_err(|_| CliError::Step(format!("bad rational `{s}`"))))
            .collect::<Result<_, _>>()?;
        let directions: Vec<Vec<i64>> = match args.opt("directions") {
            Some(_) => args.parsed("directions")?,
            None => (0..mu.len())
                .flat_map(|i| {
                    let e = |s: i64| (0..mu.len()).map(|j| if i == j { s } else { 0 }).collect::<Vec<_>>();
                    [e(1), e(-1)]
                })
                .collect(),
        };
        let real: Option<HilbertSeries> = match args.opt("real_series") {
            Some(_) => Some(HilbertSeries::new(args.parsed("real_series")?)),
            None => None,
        };
        let rep = tw_kernel(&pres, &directions, &mu, real.as_ref())?;
        let mut checks = Vec::new();
        if let Some(h) = rep.halving {
            checks.push(if h {
                CheckResult::pass("halving")
            } else {
                CheckResult::fail("halving", "reduced series and real reduction do not halve")
            });
        }
        let output = serde_json::to_value(&rep).map_err(|e| CliError::Step(e.to_string()))?;
        Ok(Outcome { checks, output: Some(output), ..Default::default() })
    }
}
