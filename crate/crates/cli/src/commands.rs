//! Subcommand implementations. Each returns the text to print on success.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use pqr_core::bounds::{self, BoundResult, Caveat};
use pqr_core::family::{self, Budget, Family};
use pqr_core::generators::{self, GeneratorSpec};
use pqr_core::geometry::{Line, Rational};
use pqr_core::piercing::{self, PiercingSet, DEFAULT_NODE_BUDGET};

use crate::document::{parse_rational, point_json, FamilyDocument};
use crate::error::{CliError, ErrorKind};
use crate::experiment;

#[derive(Debug, Parser)]
#[command(
    name = "pqr",
    version,
    about = "Piercing numbers and (p,q)_r thresholds for convex families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a threshold formula.
    Bounds(BoundsArgs),
    /// Report max_r, a witness subset, f_{q-1} and the degeneracy level.
    Analyze(AnalyzeArgs),
    /// Compute a certified piercing set.
    Pierce(PierceArgs),
    /// Build a family document from a generator spec.
    Generate(GenerateArgs),
    /// Run a seeded experiment grid and write CSV rows.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Thm1,
    Thm2,
    Thm3,
    PropDim1,
    LemmaR0,
    Remark,
    Kalai,
    HdRegion,
    ImpliedQ,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub f: Option<u64>,
    #[arg(long)]
    pub s: Option<u64>,
    /// Rational, e.g. `1/2`.
    #[arg(long)]
    pub eps: Option<String>,
    /// Decimal integer of any size.
    #[arg(long)]
    pub r: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub family: PathBuf,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// Cap on C(n,p)*C(n,q) enumeration work.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Exact,
    Hd,
    Line,
}

#[derive(Debug, Args)]
pub struct PierceArgs {
    pub family: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub strategy: Strategy,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// The line `a*x + b*y = c`, given as `a,b,c`.
    #[arg(long)]
    pub line: Option<String>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// File holding the generator spec as JSON.
    pub spec_file: Option<PathBuf>,
    /// Inline generator spec JSON.
    #[arg(long, conflicts_with = "spec_file")]
    pub spec: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// File holding the experiment config as JSON.
    pub config: PathBuf,
    /// CSV destination; overrides the config's `output`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Pierce(a) => cmd_pierce(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Experiment(a) => experiment::cmd_experiment(&a),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn load_family(path: &Path) -> Result<Family, CliError> {
    FamilyDocument::from_json(&read_text(path)?)?.to_family()
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::invalid(format!("missing --{flag}")))
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

#[derive(Serialize)]
struct BoundOutput {
    threshold_r: String,
    pierce_bound: u64,
    caveats: Vec<Caveat>,
    theorem: String,
    params: BTreeMap<&'static str, String>,
}

fn bound_output(theorem: Theorem, a: &BoundsArgs, r: BoundResult) -> String {
    let mut params = BTreeMap::new();
    params.insert("p", a.p.to_string());
    params.insert("q", a.q.to_string());
    for (name, v) in [("d", a.d), ("k", a.k), ("f", a.f)] {
        if let Some(v) = v {
            params.insert(name, v.to_string());
        }
    }
    if let Some(eps) = &a.eps {
        params.insert("eps", eps.clone());
    }
    let theorem = theorem
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    pretty(&BoundOutput {
        threshold_r: r.threshold_r.to_string(),
        pierce_bound: r.pierce_bound,
        caveats: r.caveats,
        theorem,
        params,
    })
}

fn parse_eps(a: &BoundsArgs) -> Result<Rational, CliError> {
    let text = a
        .eps
        .as_deref()
        .ok_or_else(|| CliError::invalid("missing --eps"))?;
    parse_rational(text).map_err(CliError::invalid)
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<String, CliError> {
    let (p, q) = (a.p, a.q);
    let result = match a.theorem {
        Theorem::Thm1 => bounds::ms_threshold(p, q, need(a.d, "d")?)?,
        Theorem::Thm2 => bounds::thm2_threshold(p, q, need(a.d, "d")?, &parse_eps(a)?)?,
        Theorem::Thm3 => bounds::thm3_threshold(p, q, need(a.d, "d")?, need(a.k, "k")?)?,
        Theorem::PropDim1 => bounds::dim1_threshold(p, q, need(a.k, "k")?)?,
        Theorem::LemmaR0 => bounds::lemma_r0_threshold(p, q, need(a.d, "d")?, need(a.f, "f")?)?,
        Theorem::Remark => {
            bounds::remark_threshold(p, q, need(a.d, "d")?, need(a.f, "f")?, &parse_eps(a)?)?
        }
        Theorem::Kalai => {
            let value = bounds::kalai_bound(p, q, need(a.s, "s")?, need(a.d, "d")?);
            return Ok(pretty(&serde_json::json!({ "value": value.to_string() })));
        }
        Theorem::HdRegion => {
            let value = bounds::hd_exact_region(p, q, need(a.d, "d")?);
            return Ok(pretty(&serde_json::json!({ "pierce_bound": value })));
        }
        Theorem::ImpliedQ => {
            let text =
                a.r.as_deref()
                    .ok_or_else(|| CliError::invalid("missing --r"))?;
            let r: BigUint = text
                .parse()
                .map_err(|_| CliError::invalid(format!("invalid --r {text:?}")))?;
            let value = bounds::implied_q(p, q, &r, need(a.d, "d")?)?;
            return Ok(pretty(&serde_json::json!({ "q": value })));
        }
    };
    Ok(bound_output(a.theorem, a, result))
}

#[derive(Serialize)]
struct AnalyzeOutput {
    n: usize,
    dimension: usize,
    p: usize,
    q: usize,
    max_r: String,
    witness_subset: Vec<usize>,
    intersecting_q_tuples: String,
    degeneracy_level: usize,
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<String, CliError> {
    let f = load_family(&a.family)?;
    let budget = a
        .budget
        .map(|b| Budget {
            max_work: b as u128,
        })
        .unwrap_or_default();
    let report = family::max_r_within(&f, a.p, a.q, budget)?;
    let tuples = family::count_intersecting_qtuples(&f, a.q)?;
    Ok(pretty(&AnalyzeOutput {
        n: f.len(),
        dimension: f.dimension().as_usize(),
        p: a.p,
        q: a.q,
        max_r: report.max_r.to_string(),
        witness_subset: report.witness_subset,
        intersecting_q_tuples: tuples.to_string(),
        degeneracy_level: family::degeneracy_level(&f),
    }))
}

fn parse_line(text: &str) -> Result<Line, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(CliError::invalid(format!(
            "--line wants a,b,c, got {text:?}"
        )));
    };
    let coef = |s: &str| parse_rational(s).map_err(CliError::invalid);
    Ok(Line::new(coef(a)?, coef(b)?, coef(c)?)?)
}

fn pierce_output(strategy: &str, f: &Family, set: &PiercingSet) -> Result<String, CliError> {
    if !set.certified || !piercing::pierces(f, &set.points) {
        return Err(CliError::new(
            ErrorKind::Internal,
            "piercing set failed re-verification",
        ));
    }
    let points: Vec<serde_json::Value> = set
        .points
        .iter()
        .map(|p| point_json(p, f.dimension()))
        .collect();
    Ok(pretty(&serde_json::json!({
        "strategy": strategy,
        "size": set.len(),
        "certified": true,
        "points": points,
    })))
}

pub fn cmd_pierce(a: &PierceArgs) -> Result<String, CliError> {
    let f = load_family(&a.family)?;
    let set = match a.strategy {
        Strategy::Exact => match f.dimension().as_usize() {
            1 => piercing::greedy_interval_piercing(&f)?,
            _ => piercing::branch_and_bound_piercing(&f, a.node_budget)?,
        },
        Strategy::Hd => piercing::hd_pierce(&f, need(a.p, "p")?, need(a.q, "q")?)?,
        Strategy::Line => {
            let text = a
                .line
                .as_deref()
                .ok_or_else(|| CliError::invalid("missing --line"))?;
            piercing::line_pierce(&f, &parse_line(text)?, need(a.p, "p")?, need(a.k, "k")?)?
        }
    };
    let name = a
        .strategy
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    pierce_output(&name, &f, &set)
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<String, CliError> {
    let text = match (&a.spec, &a.spec_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => read_text(path)?,
        (None, None) => return Err(CliError::invalid("give a spec file or --spec")),
    };
    let spec: GeneratorSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("invalid generator spec: {e}")))?;
    let f = generators::generate(&spec)?;
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "generator".to_string(),
        serde_json::to_string(&spec).expect("spec serializes"),
    );
    let seed = match &spec {
        GeneratorSpec::RandomIntervals(p) => Some(p.seed),
        GeneratorSpec::RandomPolygons(p) => Some(p.seed),
        _ => None,
    };
    if let Some(seed) = seed {
        metadata.insert("seed".to_string(), seed.to_string());
    }
    let doc = FamilyDocument::from_family(&f, metadata).to_json();
    match &a.output {
        Some(path) => {
            write_text(path, &doc)?;
            Ok(pretty(
                &serde_json::json!({ "output": path.display().to_string(), "bodies": f.len() }),
            ))
        }
        None => Ok(doc),
    }
}
