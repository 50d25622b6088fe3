mod ops;
mod pipeline;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use conjspace::constructors::BundleSpec;
use conjspace::registry::{explain, ConstructorRegistry};

use ops::OpRegistry;
use pipeline::{Pipeline, Step};

const DEFAULT_CUTOFF: u32 = 24;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Step(String),
    #[error("{0}")]
    Io(String),
}

macro_rules! step_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Step(e.to_string())
            }
        }
    )*};
}

step_error!(
    conjspace::frames::FrameError,
    conjspace::hamiltonian::HamiltonianError,
    conjspace::cellcomplex::CellError
);

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Human,
    Json,
}

/// Mod-2 H*-frame toolkit: build, verify and tabulate frames of spaces with involution.
#[derive(Parser, Debug)]
#[command(name = "conjspace", version)]
struct Cli {
    /// Truncation degree for every ring [default: 24, or the pipeline's own]
    #[arg(long, global = true)]
    cutoff: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a frame and print its serialization. TARGET is a pipeline file,
    /// a frame file or a constructor shorthand such as `grassmannian:2:4`.
    Build { target: String },
    /// Run a pipeline, or every registered check on a frame.
    Verify { target: String },
    /// Series table of a frame with the halving column.
    Series { target: String },
    /// Characteristic classes of a bundle file `{base, rank, chern}`.
    CharClasses { file: PathBuf },
    /// Morse-Bott assembly. TARGET is a spec file or `circle:n`,
    /// `projectivized:l0,l1,..`, `toric-square`, `doubled-circle`.
    Hamiltonian {
        target: String,
        /// Generic direction, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<i64>>,
    },
    /// Kirwan kernel of a reduction. TARGET is a file
    /// `{presentation, mu, directions?, real_series?}` or `projectivized:l0,l1,..`.
    Reduce {
        target: String,
        /// Level, comma separated rationals (with a builtin TARGET)
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<String>>,
    },
    /// What a check id establishes.
    Explain { id: String },
}

fn step(op: &str, args: Value, bind: Option<&str>) -> Step {
    let args = match args {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    Step { op: op.to_string(), args, bind: bind.map(String::from) }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A frame target as pipeline steps ending with a frame bound to `frame`,
/// or a whole pipeline.
enum Target {
    Frame(Vec<Step>),
    Pipeline(Pipeline),
}

fn frame_target(target: &str) -> Result<Target, CliError> {
    let path = Path::new(target);
    if path.is_file() {
        let v = read_json(path)?;
        if v.get("steps").is_some() {
            let p: Pipeline = serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{target}: {e}")))?;
            return Ok(Target::Pipeline(p));
        }
        if v.get("even_ring").is_some() {
            return Ok(Target::Frame(vec![step("load", json!({ "frame": v }), Some("frame"))]));
        }
        return Err(CliError::Parse(format!("{target}: neither a pipeline nor a frame")));
    }
    let name = target.split(':').next().unwrap_or_default();
    if ConstructorRegistry::default().get(name).is_none() {
        return Err(CliError::Parse(format!("`{target}` is not a file or a known constructor")));
    }
    Ok(Target::Frame(vec![step("load_shorthand", json!({ "frame": target }), None)]))
}

/// The last frame-valued binding of a pipeline.
fn last_frame(p: &Pipeline) -> Option<String> {
    const FRAME_OPS: &[&str] =
        &["load", "product", "connected_sum", "canonical", "thom_space", "projective_bundle"];
    let ctors = ConstructorRegistry::default();
    p.steps.iter().rev().find_map(|s| {
        let is_frame = FRAME_OPS.contains(&s.op.as_str()) || ctors.get(&s.op).is_some();
        s.bind.clone().filter(|_| is_frame)
    })
}

/// Pipeline that binds a frame, then applies `op` to it.
fn with_frame(target: &str, op: &str) -> Result<Pipeline, CliError> {
    match frame_target(target)? {
        Target::Pipeline(mut p) => {
            if op == "verify" {
                return Ok(p);
            }
            let f = last_frame(&p).ok_or_else(|| CliError::Parse(format!("{target}: no frame is bound")))?;
            p.steps.push(step(op, json!({ "frame": format!("@{f}") }), None));
            Ok(p)
        }
        Target::Frame(steps) => {
            let mut steps = steps;
            let frame_ref = match steps[0].op.as_str() {
                "load_shorthand" => {
                    let s = steps.remove(0);
                    s.args["frame"].clone()
                }
                _ => json!("@frame"),
            };
            steps.push(step(op, json!({ "frame": frame_ref }), None));
            Ok(Pipeline { cutoff: None, steps })
        }
    }
}

fn bundle_pipeline(file: &Path) -> Result<Pipeline, CliError> {
    let v = read_json(file)?;
    let spec: BundleSpec = serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
    let mut steps = match frame_target(&spec.base)? {
        Target::Frame(s) if s[0].op == "load" => s,
        Target::Frame(_) => vec![],
        Target::Pipeline(_) => return Err(CliError::Parse("bundle base must be a frame".into())),
    };
    let base = if steps.is_empty() { json!(spec.base) } else { json!("@frame") };
    steps.push(step("bundle", json!({ "base": base, "rank": spec.rank, "chern": spec.chern }), Some("bundle")));
    steps.push(step("char_classes", json!({ "bundle": "@bundle" }), None));
    Ok(Pipeline { cutoff: None, steps })
}

fn spec_or_builtin(target: &str) -> Result<Value, CliError> {
    let path = Path::new(target);
    if path.is_file() {
        read_json(path)
    } else {
        Ok(Value::String(target.to_string()))
    }
}

fn hamiltonian_pipeline(target: &str, xi: Option<Vec<i64>>) -> Result<Pipeline, CliError> {
    let mut args = json!({ "data": spec_or_builtin(target)? });
    if let Some(xi) = xi {
        args["xi"] = json!(xi);
    }
    Ok(Pipeline { cutoff: None, steps: vec![step("hamiltonian", args, None)] })
}

fn reduce_pipeline(target: &str, mu: Option<Vec<String>>) -> Result<Pipeline, CliError> {
    let args = match spec_or_builtin(target)? {
        Value::String(s) => {
            let mu = mu.ok_or_else(|| CliError::Parse("--mu is required with a builtin presentation".into()))?;
            json!({ "presentation": s, "mu": mu })
        }
        Value::Object(mut m) => {
            if let Some(mu) = mu {
                m.insert("mu".into(), json!(mu));
            }
            if !m.contains_key("presentation") || !m.contains_key("mu") {
                return Err(CliError::Parse(format!("{target}: needs `presentation` and `mu`")));
            }
            Value::Object(m)
        }
        _ => return Err(CliError::Parse(format!("{target}: expected an object"))),
    };
    Ok(Pipeline { cutoff: None, steps: vec![step("reduce", args, None)] })
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let pipeline = match &cli.command {
        Command::Explain { id } => {
            let text = explain(id).ok_or_else(|| CliError::Parse(format!("unknown check id `{id}`")))?;
            let out = match cli.format {
                Format::Human => format!("{id}: {text}\n"),
                Format::Json => {
                    let v = json!({ "schema_version": report::SCHEMA_VERSION, "check_id": id, "statement": text });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializes"))
                }
            };
            emit(cli, &out)?;
            return Ok(true);
        }
        Command::Build { target } => with_frame(target, "emit")?,
        Command::Verify { target } => with_frame(target, "verify")?,
        Command::Series { target } => with_frame(target, "series")?,
        Command::CharClasses { file } => bundle_pipeline(file)?,
        Command::Hamiltonian { target, xi } => hamiltonian_pipeline(target, xi.clone())?,
        Command::Reduce { target, mu } => reduce_pipeline(target, mu.clone())?,
    };
    let ops = OpRegistry::default();
    pipeline.validate(&ops)?;
    let cutoff = cli.cutoff.or(pipeline.cutoff).unwrap_or(DEFAULT_CUTOFF);
    let report = pipeline.run(&ops, cutoff);
    let text = match cli.format {
        Format::Human => report.to_human(),
        Format::Json => report.to_json(),
    };
    emit(cli, &text)?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Parse(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
