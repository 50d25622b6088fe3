//! Pipeline documents: ordered steps, each an op applied to literal arguments
//! or references (`"@name"`) to earlier bindings.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use conjspace::constructors::TauBundle;
use conjspace::frames::ConjugationFrame;
use conjspace::hamiltonian::HamiltonianData;
use conjspace::registry::ConstructorRegistry;
use conjspace::report::CheckResult;

use crate::ops::OpRegistry;
use crate::report::{Report, StepReport, StepStatus, Table};
use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub op: String,
    #[serde(default)]
    pub args: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bind: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pipeline {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    pub steps: Vec<Step>,
}

/// A value held by a binding.
#[derive(Clone, Debug)]
pub enum Bound {
    Frame(Arc<ConjugationFrame>),
    Bundle(TauBundle),
    Hamiltonian(Arc<HamiltonianData>),
}

impl Bound {
    fn kind(&self) -> &'static str {
        match self {
            Bound::Frame(_) => "frame",
            Bound::Bundle(_) => "bundle",
            Bound::Hamiltonian(_) => "hamiltonian",
        }
    }
}

/// What an op produced.
#[derive(Default)]
pub struct Outcome {
    pub value: Option<Bound>,
    pub checks: Vec<CheckResult>,
    pub output: Option<Value>,
    pub table: Option<Table>,
}

fn references(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => {
            if let Some(r) = s.strip_prefix('@') {
                out.push(r.to_string());
            }
        }
        Value::Array(a) => a.iter().for_each(|x| references(x, out)),
        Value::Object(m) => m.values().for_each(|x| references(x, out)),
        _ => {}
    }
}

impl Pipeline {
    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("pipeline: {e}")))
    }

    /// Ops exist, references point backwards, bindings are unique.
    pub fn validate(&self, ops: &OpRegistry) -> Result<(), CliError> {
        let mut bound = BTreeSet::new();
        for (i, s) in self.steps.iter().enumerate() {
            if ops.get(&s.op).is_none() {
                return Err(CliError::Parse(format!("step {i}: unknown op `{}`", s.op)));
            }
            let mut refs = Vec::new();
            s.args.values().for_each(|v| references(v, &mut refs));
            if let Some(r) = refs.iter().find(|r| !bound.contains(*r)) {
                return Err(CliError::Parse(format!("step {i}: reference `@{r}` is not bound by an earlier step")));
            }
            if let Some(b) = &s.bind {
                if b.is_empty() || b.starts_with('@') {
                    return Err(CliError::Parse(format!("step {i}: invalid binding name `{b}`")));
                }
                if !bound.insert(b.clone()) {
                    return Err(CliError::Parse(format!("step {i}: `{b}` is already bound")));
                }
            }
        }
        Ok(())
    }

    /// Runs every step in order. A failed step only blocks steps that
    /// reference its binding.
    pub fn run(&self, ops: &OpRegistry, cutoff: u32) -> Report {
        let mut env = Env { values: BTreeMap::new(), cutoff, constructors: ConstructorRegistry::default() };
        let mut broken: BTreeSet<String> = BTreeSet::new();
        let mut steps = Vec::new();
        for (index, s) in self.steps.iter().enumerate() {
            let mut refs = Vec::new();
            s.args.values().for_each(|v| references(v, &mut refs));
            let mut rep = StepReport::new(index, &s.op, s.bind.clone());
            if let Some(r) = refs.iter().find(|r| broken.contains(*r)) {
                rep.status = StepStatus::Skipped;
                rep.error = Some(format!("depends on `@{r}`, which failed"));
            } else {
                let op = ops.get(&s.op).expect("validated");
                match op.run(&Args { map: &s.args, env: &env }) {
                    Ok(out) => {
                        rep.status = if out.checks.iter().any(|c| c.failed()) { StepStatus::Fail } else { StepStatus::Ok };
                        rep.checks = out.checks;
                        rep.output = out.output;
                        rep.table = out.table;
                        if let (Some(b), Some(v)) = (&s.bind, out.value) {
                            env.values.insert(b.clone(), v);
                        } else if let Some(b) = &s.bind {
                            rep.status = StepStatus::Error;
                            rep.error = Some(format!("op `{}` produces no value to bind as `{b}`", s.op));
                        }
                    }
                    Err(e) => {
                        rep.status = StepStatus::Error;
                        rep.error = Some(e.to_string());
                    }
                }
            }
            if rep.status != StepStatus::Ok {
                if let Some(b) = &s.bind {
                    if !env.values.contains_key(b) {
                        broken.insert(b.clone());
                    }
                }
            }
            steps.push(rep);
        }
        Report::new(cutoff, steps)
    }
}

pub struct Env {
    values: BTreeMap<String, Bound>,
    pub cutoff: u32,
    pub constructors: ConstructorRegistry,
}

/// Arguments of one step, with lookups into the environment.
pub struct Args<'a> {
    pub map: &'a Map<String, Value>,
    pub env: &'a Env,
}

type R<T> = Result<T, CliError>;

impl Args<'_> {
    pub fn raw(&self, key: &str) -> R<&Value> {
        self.map.get(key).ok_or_else(|| CliError::Step(format!("missing argument `{key}`")))
    }

    pub fn opt(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    pub fn str(&self, key: &str) -> R<&str> {
        self.raw(key)?.as_str().ok_or_else(|| CliError::Step(format!("argument `{key}` must be a string")))
    }

    pub fn u32(&self, key: &str) -> R<u32> {
        self.raw(key)?
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| CliError::Step(format!("argument `{key}` must be a nonnegative integer")))
    }

    pub fn parsed<T: serde::de::DeserializeOwned>(&self, key: &str) -> R<T> {
        serde_json::from_value(self.raw(key)?.clone()).map_err(|e| CliError::Step(format!("argument `{key}`: {e}")))
    }

    pub fn cutoff(&self) -> R<u32> {
        match self.opt("cutoff") {
            Some(_) => self.u32("cutoff"),
            None => Ok(self.env.cutoff),
        }
    }

    fn bound(&self, key: &str) -> R<Option<&Bound>> {
        match self.raw(key)?.as_str().and_then(|s| s.strip_prefix('@')) {
            Some(name) => Ok(Some(self.env.values.get(name).expect("validated reference"))),
            None => Ok(None),
        }
    }

    /// A frame given as `@binding` or as a constructor shorthand.
    pub fn frame(&self, key: &str) -> R<Arc<ConjugationFrame>> {
        match self.bound(key)? {
            Some(Bound::Frame(f)) => Ok(f.clone()),
            Some(other) => Err(CliError::Step(format!("argument `{key}` is a {}, not a frame", other.kind()))),
            None => {
                let s = self.str(key)?;
                Ok(Arc::new(self.env.constructors.build_shorthand(s, self.cutoff()?)?))
            }
        }
    }

    pub fn bundle(&self, key: &str) -> R<TauBundle> {
        match self.bound(key)? {
            Some(Bound::Bundle(b)) => Ok(b.clone()),
            Some(other) => Err(CliError::Step(format!("argument `{key}` is a {}, not a bundle", other.kind()))),
            None => Err(CliError::Step(format!("argument `{key}` must reference a bundle"))),
        }
    }

    pub fn hamiltonian(&self, key: &str) -> R<Option<Arc<HamiltonianData>>> {
        match self.bound(key)? {
            Some(Bound::Hamiltonian(h)) => Ok(Some(h.clone())),
            Some(other) => Err(CliError::Step(format!("argument `{key}` is a {}, not Hamiltonian data", other.kind()))),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_forward_references() {
        let ops = OpRegistry::default();
        let p = Pipeline::parse(r#"{"steps":[{"op":"verify","args":{"frame":"@x"}},{"op":"point","bind":"x"}]}"#).unwrap();
        assert!(matches!(p.validate(&ops), Err(CliError::Parse(_))));
        let p = Pipeline::parse(r#"{"steps":[{"op":"nope"}]}"#).unwrap();
        assert!(p.validate(&ops).is_err());
    }

    #[test]
    fn failure_skips_only_dependents() {
        let ops = OpRegistry::default();
        let p = Pipeline::parse(
            r#"{"steps":[
                {"op":"sphere","args":{"k":0},"bind":"bad"},
                {"op":"verify","args":{"frame":"@bad"}},
                {"op":"projective","args":{"n":2},"bind":"ok"},
                {"op":"verify","args":{"frame":"@ok"}}
            ]}"#,
        )
        .unwrap();
        p.validate(&ops).unwrap();
        let r = p.run(&ops, 12);
        let st: Vec<StepStatus> = r.steps.iter().map(|s| s.status).collect();
        assert_eq!(st, [StepStatus::Error, StepStatus::Skipped, StepStatus::Ok, StepStatus::Ok]);
        assert!(!r.passed());
    }
}
