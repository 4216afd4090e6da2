//! Seeded experiment grids. Each row pairs one family with one parameter
//! point; any instance that meets a theorem's premise but needs more points
//! than claimed stops the run and is dumped for reproduction.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pqr_core::bounds;
use pqr_core::family::{self, Budget, Family, FamilyError};
use pqr_core::generators::{self, GeneratorError, GeneratorSpec, IntervalParams, PolygonParams};
use pqr_core::piercing::{self, PiercingError, DEFAULT_NODE_BUDGET};

use crate::commands::{read_text, write_text, ExperimentArgs};
use crate::document::FamilyDocument;
use crate::error::{CliError, ErrorKind};

pub const CSV_HEADER: [&str; 11] = [
    "theorem_tag",
    "p",
    "q",
    "k",
    "seed",
    "n",
    "r_threshold",
    "max_r",
    "pierce_bound_claimed",
    "pierce_actual",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    Thm1,
    Thm3,
    Thm5,
    PropDim1,
    Kalai,
}

impl TheoremTag {
    fn name(self) -> &'static str {
        match self {
            TheoremTag::Thm1 => "thm1",
            TheoremTag::Thm3 => "thm3",
            TheoremTag::Thm5 => "thm5",
            TheoremTag::PropDim1 => "prop-dim1",
            TheoremTag::Kalai => "kalai",
        }
    }
}

fn default_dimension() -> usize {
    1
}

fn default_seeds() -> u64 {
    10
}

fn default_attempts() -> usize {
    200
}

/// Inclusive ranges are `[lo, hi]`. For `kalai` the `p` range is the family
/// size and `k` holds the smallest `s` with `f_{d+s} = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub theorem: TheoremTag,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    pub p: [usize; 2],
    #[serde(default)]
    pub q: Option<[usize; 2]>,
    #[serde(default)]
    pub k: Option<[usize; 2]>,
    #[serde(default = "default_seeds")]
    pub seeds: u64,
    #[serde(default)]
    pub seed_offset: u64,
    /// Members beyond `p` in each sampled family.
    #[serde(default)]
    pub extra_members: usize,
    /// Resample until the `(p,q)` property holds (always on for `thm5`).
    #[serde(default)]
    pub filter: bool,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
    /// Add one extremal row per grid point (`prop-dim1` only).
    #[serde(default)]
    pub extremal: bool,
    #[serde(default)]
    pub intervals: IntervalParams,
    #[serde(default)]
    pub polygons: PolygonParams,
    #[serde(default)]
    pub work_budget: Option<u64>,
    #[serde(default)]
    pub node_budget: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub theorem: TheoremTag,
    pub p: usize,
    pub q: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub r_threshold: Option<BigUint>,
    pub max_r: Option<BigUint>,
    pub pierce_bound_claimed: Option<u64>,
    pub pierce_actual: Option<usize>,
    pub status: &'static str,
}

impl ExperimentRow {
    fn new(theorem: TheoremTag, task: &Task) -> Self {
        ExperimentRow {
            theorem,
            p: task.p,
            q: task.q,
            k: task.k,
            seed: task.seed,
            n: None,
            r_threshold: None,
            max_r: None,
            pierce_bound_claimed: None,
            pierce_actual: None,
            status: "",
        }
    }

    pub fn fields(&self) -> [String; 11] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        [
            self.theorem.name().to_string(),
            self.p.to_string(),
            self.q.to_string(),
            opt(&self.k),
            opt(&self.seed),
            opt(&self.n),
            opt(&self.r_threshold),
            opt(&self.max_r),
            opt(&self.pierce_bound_claimed),
            opt(&self.pierce_actual),
            self.status.to_string(),
        ]
    }

    pub fn csv_line(&self) -> String {
        self.fields().join(",")
    }
}

/// One grid point with one seed; `seed = None` marks an extremal instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Task {
    p: usize,
    q: usize,
    k: Option<usize>,
    seed: Option<u64>,
}

struct Violation {
    row: ExperimentRow,
    family: Family,
    reason: String,
}

enum Outcome {
    Row(ExperimentRow),
    Violation(Box<Violation>),
}

fn range(r: Option<[usize; 2]>, lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    match r {
        Some([a, b]) => a.max(lo)..=b.min(hi),
        None => lo..=hi,
    }
}

fn tasks(c: &ExperimentConfig) -> Vec<Task> {
    let d = c.dimension;
    let seeds = || (c.seed_offset..c.seed_offset + c.seeds).map(Some);
    let mut out = Vec::new();
    for p in c.p[0]..=c.p[1] {
        let q_lo = match c.theorem {
            TheoremTag::Kalai => 1,
            TheoremTag::PropDim1 | TheoremTag::Thm5 => 2.max(d),
            TheoremTag::Thm1 | TheoremTag::Thm3 => d + 1,
        };
        for q in range(c.q, q_lo, p) {
            if c.theorem == TheoremTag::Thm5 && d * q <= (d - 1) * p + d {
                continue;
            }
            let ks: Vec<Option<usize>> = match c.theorem {
                TheoremTag::Thm3 | TheoremTag::PropDim1 if p > q => {
                    range(c.k, 0, p - q - 1).map(Some).collect()
                }
                TheoremTag::Thm3 | TheoremTag::PropDim1 => Vec::new(),
                _ => vec![None],
            };
            for k in ks {
                if c.theorem == TheoremTag::PropDim1 && c.extremal {
                    out.push(Task {
                        p,
                        q,
                        k,
                        seed: None,
                    });
                }
                out.extend(seeds().map(|seed| Task { p, q, k, seed }));
            }
        }
    }
    out
}

fn validate(c: &ExperimentConfig) -> Result<(), CliError> {
    if !(1..=2).contains(&c.dimension) {
        return Err(CliError::invalid("dimension must be 1 or 2"));
    }
    if c.theorem == TheoremTag::PropDim1 && c.dimension != 1 {
        return Err(CliError::invalid(
            "prop-dim1 runs on intervals, dimension must be 1",
        ));
    }
    if c.p[0] < 1 || c.p[0] > c.p[1] || c.p[1] > 16 {
        return Err(CliError::invalid(
            "p range must satisfy 1 <= lo <= hi <= 16",
        ));
    }
    if c.p[1] + c.extra_members > 64 {
        return Err(CliError::invalid("families are limited to 64 members"));
    }
    Ok(())
}

fn sample(
    c: &ExperimentConfig,
    n: usize,
    seed: u64,
    accept: impl Fn(&Family) -> bool,
) -> Result<Family, GeneratorError> {
    let spec = if c.dimension == 1 {
        GeneratorSpec::RandomIntervals(IntervalParams {
            n,
            seed,
            ..c.intervals.clone()
        })
    } else {
        GeneratorSpec::RandomPolygons(PolygonParams {
            n,
            seed,
            ..c.polygons.clone()
        })
    };
    if c.filter || c.theorem == TheoremTag::Thm5 {
        generators::random_family_filtered(&spec, c.max_attempts, accept)
    } else {
        generators::random_family_filtered(&spec, 1, |_| true)
    }
}

fn min_piercing(c: &ExperimentConfig, f: &Family) -> Result<usize, PiercingError> {
    if f.dimension().as_usize() == 1 {
        return Ok(piercing::greedy_interval_piercing(f)?.len());
    }
    Ok(piercing::branch_and_bound_piercing(f, c.node_budget.unwrap_or(DEFAULT_NODE_BUDGET))?.len())
}

fn budget(c: &ExperimentConfig) -> Budget {
    c.work_budget
        .map(|w| Budget {
            max_work: w as u128,
        })
        .unwrap_or_default()
}

fn is_budget(e: &PiercingError) -> bool {
    matches!(
        e,
        PiercingError::BudgetExceeded(_)
            | PiercingError::Family(FamilyError::BudgetExceeded { .. })
    )
}

fn run_task(c: &ExperimentConfig, task: &Task) -> Result<Outcome, CliError> {
    let mut row = ExperimentRow::new(c.theorem, task);
    match run_into(c, task, &mut row) {
        Ok(outcome) => Ok(outcome),
        Err(e) if is_budget(&e) => {
            row.status = "budget_exceeded";
            Ok(Outcome::Row(row))
        }
        Err(e) => Err(CliError::from(e)),
    }
}

fn violation(row: ExperimentRow, family: Family, reason: String) -> Result<Outcome, PiercingError> {
    Ok(Outcome::Violation(Box::new(Violation {
        row,
        family,
        reason,
    })))
}

fn run_into(
    c: &ExperimentConfig,
    task: &Task,
    row: &mut ExperimentRow,
) -> Result<Outcome, PiercingError> {
    let (p, q, d) = (task.p, task.q, c.dimension as u64);
    if c.theorem == TheoremTag::Kalai {
        return kalai_row(c, task, row);
    }
    let (threshold, claimed, nondegenerate) = match c.theorem {
        TheoremTag::Thm1 => {
            let b = bounds::ms_threshold(p as u64, q as u64, d).expect("grid is valid");
            (b.threshold_r, b.pierce_bound, false)
        }
        TheoremTag::Thm3 => {
            let b = bounds::thm3_threshold(p as u64, q as u64, d, task.k.expect("k") as u64)
                .expect("grid is valid");
            (b.threshold_r, b.pierce_bound, true)
        }
        TheoremTag::Thm5 => (BigUint::from(1u32), (p - q + 1) as u64, false),
        TheoremTag::PropDim1 => {
            let b = bounds::dim1_threshold(p as u64, q as u64, task.k.expect("k") as u64)
                .expect("grid is valid");
            (b.threshold_r, b.pierce_bound, false)
        }
        TheoremTag::Kalai => unreachable!(),
    };
    row.r_threshold = Some(threshold.clone());
    row.pierce_bound_claimed = Some(claimed);

    let f = match task.seed {
        None => generators::extremal_dim1(p, task.k.expect("k")).expect("valid grid point"),
        Some(seed) => {
            let n = p + c.extra_members;
            match sample(c, n, seed, |f| {
                family::satisfies_pqr(f, p, q, 1u32).unwrap_or(false)
            }) {
                Ok(f) => f,
                Err(GeneratorError::RetriesExhausted(_)) => {
                    row.n = Some(n);
                    row.status = "generation_failed";
                    return Ok(Outcome::Row(row.clone()));
                }
                Err(e) => return Err(PiercingError::Internal(e.to_string())),
            }
        }
    };
    row.n = Some(f.len());
    let max_r = family::max_r_within(&f, p, q, budget(c))?.max_r;
    row.max_r = Some(max_r.clone());
    let tau = min_piercing(c, &f)?;
    row.pierce_actual = Some(tau);

    if task.seed.is_none() {
        row.status = "extremal";
        let k = task.k.expect("k");
        if max_r.clone() + 1u32 != threshold || tau != k + 2 {
            let reason = format!("extremal family has max_r {max_r} and piercing {tau}");
            return violation(row.clone(), f, reason);
        }
        return Ok(Outcome::Row(row.clone()));
    }
    let degenerate = nondegenerate && family::is_t_degenerate(&f, p - q);
    if max_r < threshold || degenerate {
        row.status = if degenerate {
            "degenerate"
        } else {
            "premise_unmet"
        };
        return Ok(Outcome::Row(row.clone()));
    }
    row.status = "premise_met";
    if tau as u64 > claimed {
        let reason = format!("piercing number {tau} exceeds claimed {claimed}");
        return violation(row.clone(), f, reason);
    }
    if c.theorem == TheoremTag::Thm5 {
        let set = piercing::hd_pierce(&f, p, q)?;
        if !set.certified || set.len() as u64 > claimed {
            let reason = format!(
                "hd_pierce returned {} points (certified: {})",
                set.len(),
                set.certified
            );
            return violation(row.clone(), f, reason);
        }
    }
    Ok(Outcome::Row(row.clone()))
}

fn kalai_row(
    c: &ExperimentConfig,
    task: &Task,
    row: &mut ExperimentRow,
) -> Result<Outcome, PiercingError> {
    let (n, q, d) = (task.p, task.q, c.dimension);
    let f = sample(c, n, task.seed.expect("seeded"), |_| true)
        .map_err(|e| PiercingError::Internal(e.to_string()))?;
    row.n = Some(n);
    let faces = family::face_counts(&f, n)?;
    row.max_r = Some(BigUint::from(faces[q - 1]));
    let Some(s) = (0..n.saturating_sub(d)).find(|&s| faces[d + s] == 0) else {
        row.status = "no_empty_face";
        return Ok(Outcome::Row(row.clone()));
    };
    row.k = Some(s);
    let bound = bounds::kalai_bound(n as u64, q as u64, s as u64, d as u64);
    row.r_threshold = Some(bound.clone());
    if BigUint::from(faces[q - 1]) > bound {
        let reason = format!("f_{} = {} exceeds {bound}", q - 1, faces[q - 1]);
        return violation(row.clone(), f, reason);
    }
    row.status = "premise_met";
    Ok(Outcome::Row(row.clone()))
}

fn dump_path(output: Option<&Path>, row: &ExperimentRow) -> PathBuf {
    let name = format!(
        "violation-{}-p{}-q{}-k{}-seed{}.json",
        row.theorem.name(),
        row.p,
        row.q,
        row.k.map(|k| k.to_string()).unwrap_or_else(|| "na".into()),
        row.seed
            .map(|s| s.to_string())
            .unwrap_or_else(|| "extremal".into()),
    );
    match output.and_then(Path::parent) {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(name),
        _ => PathBuf::from(name),
    }
}

/// Runs the grid and returns the CSV text, or the first violation (in row
/// order) after dumping its family.
pub fn run_experiment(
    c: &ExperimentConfig,
    output: Option<&Path>,
) -> Result<(String, Vec<ExperimentRow>), CliError> {
    validate(c)?;
    let tasks = tasks(c);
    let outcomes: Vec<Result<Outcome, CliError>> =
        tasks.par_iter().map(|t| run_task(c, t)).collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome? {
            Outcome::Row(row) => rows.push(row),
            Outcome::Violation(v) => {
                let path = dump_path(output, &v.row);
                let mut metadata = BTreeMap::new();
                metadata.insert("violation".to_string(), v.reason.clone());
                metadata.insert("row".to_string(), v.row.csv_line());
                write_text(
                    &path,
                    &FamilyDocument::from_family(&v.family, metadata).to_json(),
                )?;
                return Err(CliError {
                    path: Some(path.display().to_string()),
                    ..CliError::new(
                        ErrorKind::Violation,
                        format!("{}: {}", v.row.csv_line(), v.reason),
                    )
                });
            }
        }
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(CSV_HEADER)
        .and_then(|_| rows.iter().try_for_each(|r| out.write_record(r.fields())))
        .map_err(|e| CliError::io(format!("csv: {e}")))?;
    let bytes = out
        .into_inner()
        .map_err(|e| CliError::io(format!("csv: {e}")))?;
    Ok((String::from_utf8(bytes).expect("ascii fields"), rows))
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<String, CliError> {
    let config: ExperimentConfig = serde_json::from_str(&read_text(&a.config)?)
        .map_err(|e| CliError::parse(format!("invalid experiment config: {e}")))?;
    let output = a.output.clone().or_else(|| config.output.clone());
    let (csv, rows) = run_experiment(&config, output.as_deref())?;
    let Some(path) = output else {
        return Ok(csv.trim_end().to_string());
    };
    write_text(&path, &csv)?;
    let mut statuses: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &rows {
        *statuses.entry(row.status).or_default() += 1;
    }
    Ok(serde_json::to_string_pretty(&serde_json::json!({
        "output": path.display().to_string(),
        "rows": rows.len(),
        "statuses": statuses,
        "config": config,
    }))
    .expect("summary serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ExperimentConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn grid_enumeration() {
        let c = config(r#"{"theorem":"prop-dim1","p":[4,4],"seeds":2,"extremal":true}"#);
        let t = tasks(&c);
        // q=2: k in 0..=1, q=3: k=0, q=4: none; each with 1 extremal + 2 seeds
        assert_eq!(t.len(), 3 * 3);
        assert!(t.windows(2).all(|w| w[0] < w[1]));

        let c = config(r#"{"theorem":"thm5","dimension":2,"p":[3,5],"seeds":1}"#);
        let pq: Vec<(usize, usize)> = tasks(&c).iter().map(|t| (t.p, t.q)).collect();
        assert_eq!(pq, vec![(3, 3), (4, 4), (5, 4), (5, 5)]);
    }

    #[test]
    fn extremal_rows_are_tight() {
        let c = config(r#"{"theorem":"prop-dim1","p":[3,6],"seeds":3,"extremal":true}"#);
        let (_, rows) = run_experiment(&c, None).unwrap();
        let extremal: Vec<_> = rows.iter().filter(|r| r.status == "extremal").collect();
        assert!(!extremal.is_empty());
        for r in extremal {
            assert_eq!(r.pierce_actual, Some(r.k.unwrap() + 2));
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(
            serde_json::from_str::<ExperimentConfig>(r#"{"theorem":"thm9","p":[3,4]}"#).is_err()
        );
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"theorem":"thm1","p":[3,4],"bogus":1}"#
        )
        .is_err());
        let c = config(r#"{"theorem":"prop-dim1","dimension":2,"p":[3,4]}"#);
        assert_eq!(
            run_experiment(&c, None).unwrap_err().kind,
            ErrorKind::Invalid
        );
    }
}
