//! Seeded campaigns over the pipeline.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::generate::{gen_instance, Distribution, InstanceSpec};
use crate::harness::tsplib::parse_tsplib;
use crate::matrix::AsymCostMatrix;
use crate::oracle::OracleLimits;
use crate::pipeline::{solve_named, PipelineResult, SolveOptions, Verdict};
use crate::tour::Tour;
use crate::upper_bound::UpperBoundChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

impl SeedRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.start..self.start + self.count
    }
}

/// Generated instances: every `n` crossed with every seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Campaign {
    pub distribution: Distribution,
    pub n: Vec<usize>,
    pub seeds: SeedRange,
}

/// A hand-written instance; the diagonal of `rows` is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InlineInstance {
    pub name: String,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default = "default_version")]
    pub version: u32,
    pub k_values: Vec<usize>,
    #[serde(default = "default_true")]
    pub verify: bool,
    #[serde(default = "default_oracle_limit")]
    pub oracle_limit: usize,
    #[serde(default)]
    pub upper_bound: UpperBoundChoice,
    #[serde(default, rename = "campaign")]
    pub campaigns: Vec<Campaign>,
    #[serde(default, rename = "inline")]
    pub inline: Vec<InlineInstance>,
    /// TSPLIB files, relative to the config file.
    #[serde(default)]
    pub files: Vec<PathBuf>,
}

fn default_version() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

fn default_oracle_limit() -> usize {
    OracleLimits::default().held_karp
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for f in &mut cfg.files {
            if f.is_relative() {
                *f = base.join(&*f);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::Config("k_values must be non-empty and positive".into()));
        }
        if self.oracle_limit > OracleLimits::default().held_karp {
            return Err(Error::Config(format!(
                "oracle_limit {} exceeds the Held-Karp limit {}",
                self.oracle_limit,
                OracleLimits::default().held_karp
            )));
        }
        for c in &self.campaigns {
            c.distribution.validate().map_err(|e| Error::Config(e.to_string()))?;
            if c.n.iter().any(|&n| n < 2) {
                return Err(Error::Config(format!("campaign {} has n < 2", c.distribution)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Source {
    Generated(InstanceSpec),
    Inline(InlineInstance),
    File(PathBuf),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Generated(s) => s.distribution.to_string(),
            Source::Inline(_) => "inline".into(),
            Source::File(_) => "tsplib".into(),
        }
    }

    fn instance_id(&self) -> String {
        match self {
            Source::Generated(s) => s.id(),
            Source::Inline(i) => format!("inline/{}", i.name),
            Source::File(p) => format!("file/{}", p.display()),
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Source::Generated(s) => s.seed,
            _ => 0,
        }
    }

    fn load(&self) -> Result<AsymCostMatrix> {
        match self {
            Source::Generated(s) => gen_instance(s),
            Source::Inline(i) => AsymCostMatrix::from_rows(&i.rows),
            Source::File(p) => Ok(parse_tsplib(&std::fs::read_to_string(p)?)?.matrix),
        }
    }

    fn declared_n(&self) -> usize {
        match self {
            Source::Generated(s) => s.n,
            Source::Inline(i) => i.rows.len(),
            Source::File(_) => 0,
        }
    }
}

/// One pipeline run in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub distribution: String,
    pub n: usize,
    pub seed: u64,
    pub k_best: usize,
    pub shift: i64,
    pub upper_bound_cost: i64,
    pub cycle_found: bool,
    pub cycle_value: Option<i64>,
    pub final_cost: Option<i64>,
    pub oracle_cost: Option<i64>,
    /// `None` when the row failed before a verdict.
    pub verdict: Option<Verdict>,
    pub gap: Option<i64>,
    pub sandwich_ok: bool,
    pub relaxation_steps: u64,
    pub backtracks: u64,
    pub rejected_nonsimple: u64,
    pub truncated: u64,
    pub total_steps: u64,
    /// Microseconds; zero unless timings were requested.
    pub elapsed_us: u64,
    pub counterexample: Option<String>,
    pub error: Option<String>,
}

impl ReportRow {
    fn sort_key(&self) -> (usize, u64, &str, usize, &str) {
        (self.n, self.seed, &self.distribution, self.k_best, &self.instance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub distribution: String,
    pub n: usize,
    pub k_best: usize,
    pub instances: u64,
    pub verified: u64,
    pub optimal: u64,
    pub suboptimal: u64,
    pub errors: u64,
    /// `optimal / verified`, 0 when nothing was verified.
    pub optimality_rate: f64,
    pub mean_gap: f64,
    pub max_gap: i64,
    pub cycles_found: u64,
    pub mean_backtracks: f64,
    pub max_backtracks: u64,
    pub sandwich_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub overall: GroupStats,
    pub groups: Vec<GroupStats>,
}

impl Aggregates {
    /// Recomputes every aggregate from the rows alone.
    pub fn from_rows(rows: &[ReportRow]) -> Aggregates {
        let mut groups: BTreeMap<(String, usize, usize), Vec<&ReportRow>> = BTreeMap::new();
        for r in rows {
            groups
                .entry((r.distribution.clone(), r.n, r.k_best))
                .or_default()
                .push(r);
        }
        let all: Vec<&ReportRow> = rows.iter().collect();
        Aggregates {
            overall: group_stats("all", 0, 0, &all),
            groups: groups
                .into_iter()
                .map(|((d, n, k), rs)| group_stats(&d, n, k, &rs))
                .collect(),
        }
    }
}

fn group_stats(distribution: &str, n: usize, k_best: usize, rows: &[&ReportRow]) -> GroupStats {
    let verified: Vec<&&ReportRow> = rows
        .iter()
        .filter(|r| matches!(r.verdict, Some(Verdict::Optimal | Verdict::Suboptimal)))
        .collect();
    let optimal = rows.iter().filter(|r| r.verdict == Some(Verdict::Optimal)).count() as u64;
    let suboptimal = rows.iter().filter(|r| r.verdict == Some(Verdict::Suboptimal)).count() as u64;
    let gaps: Vec<i64> = verified.iter().filter_map(|r| r.gap).collect();
    let ok_rows: Vec<&&ReportRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let mean = |xs: &[f64]| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };
    GroupStats {
        distribution: distribution.to_string(),
        n,
        k_best,
        instances: rows.len() as u64,
        verified: verified.len() as u64,
        optimal,
        suboptimal,
        errors: rows.iter().filter(|r| r.error.is_some()).count() as u64,
        optimality_rate: if verified.is_empty() {
            0.0
        } else {
            optimal as f64 / verified.len() as f64
        },
        mean_gap: mean(&gaps.iter().map(|&g| g as f64).collect::<Vec<_>>()),
        max_gap: gaps.iter().copied().max().unwrap_or(0),
        cycles_found: rows.iter().filter(|r| r.cycle_found).count() as u64,
        mean_backtracks: mean(&ok_rows.iter().map(|r| r.backtracks as f64).collect::<Vec<_>>()),
        max_backtracks: ok_rows.iter().map(|r| r.backtracks).max().unwrap_or(0),
        sandwich_violations: rows.iter().filter(|r| r.error.is_none() && !r.sandwich_ok).count() as u64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    pub aggregates: Aggregates,
}

impl ExperimentReport {
    pub fn sandwich_violations(&self) -> u64 {
        self.aggregates.overall.sandwich_violations
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Record per-row wall-clock time. Off keeps report bodies reproducible.
    pub timings: bool,
    /// Where SUBOPTIMAL instances are archived; `None` skips archiving.
    pub counterexample_dir: Option<PathBuf>,
}

/// Standalone record of an instance on which the pipeline missed the optimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: String,
    pub spec: Option<InstanceSpec>,
    pub k_best: usize,
    pub upper_bound: UpperBoundChoice,
    pub matrix: AsymCostMatrix,
    pub found_tour: Tour,
    pub found_cost: i64,
    pub optimal_tour: Tour,
    pub optimal_cost: i64,
}

impl Counterexample {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Reruns the pipeline on the archived matrix.
    pub fn reproduce(&self) -> Result<PipelineResult> {
        let opts = SolveOptions {
            k_best: self.k_best,
            verify: true,
            oracle_limit: OracleLimits::default().held_karp,
            upper_bound: self.upper_bound,
        };
        solve_named(&self.matrix, &opts, &self.instance)
    }

    /// True when a rerun gives the same SUBOPTIMAL outcome.
    pub fn reproduces(&self) -> Result<bool> {
        let r = self.reproduce()?;
        Ok(r.verdict == Verdict::Suboptimal
            && r.final_cost == self.found_cost
            && r.final_tour == self.found_tour
            && r.oracle_cost == Some(self.optimal_cost))
    }
}

fn counterexample_file_name(source: &Source, k: usize) -> String {
    let slug: String = source
        .instance_id()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    format!("ce_{slug}_k{k}.json")
}

fn sources(config: &ExperimentConfig) -> Vec<Source> {
    let mut out = Vec::new();
    for c in &config.campaigns {
        for &n in &c.n {
            for seed in c.seeds.iter() {
                out.push(Source::Generated(InstanceSpec {
                    n,
                    distribution: c.distribution,
                    seed,
                }));
            }
        }
    }
    out.extend(config.inline.iter().cloned().map(Source::Inline));
    out.extend(config.files.iter().cloned().map(Source::File));
    out
}

fn run_one(source: &Source, k: usize, config: &ExperimentConfig, opts: &RunOptions) -> ReportRow {
    let mut row = ReportRow {
        instance: source.instance_id(),
        distribution: source.label(),
        n: source.declared_n(),
        seed: source.seed(),
        k_best: k,
        shift: 0,
        upper_bound_cost: 0,
        cycle_found: false,
        cycle_value: None,
        final_cost: None,
        oracle_cost: None,
        verdict: None,
        gap: None,
        sandwich_ok: false,
        relaxation_steps: 0,
        backtracks: 0,
        rejected_nonsimple: 0,
        truncated: 0,
        total_steps: 0,
        elapsed_us: 0,
        counterexample: None,
        error: None,
    };
    let started = Instant::now();
    let solve_opts = SolveOptions {
        k_best: k,
        verify: config.verify,
        oracle_limit: config.oracle_limit,
        upper_bound: config.upper_bound,
    };
    let outcome = source
        .load()
        .and_then(|m| solve_named(&m, &solve_opts, &row.instance).map(|r| (m, r)));
    if opts.timings {
        row.elapsed_us = started.elapsed().as_micros() as u64;
    }
    let (matrix, r) = match outcome {
        Ok(x) => x,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.n = r.n;
    row.shift = r.shift;
    row.upper_bound_cost = r.upper_bound_cost;
    row.cycle_found = r.found_cycle.is_some();
    row.cycle_value = r.found_cycle.as_ref().map(|c| c.value);
    row.final_cost = Some(r.final_cost);
    row.oracle_cost = r.oracle_cost;
    row.verdict = Some(r.verdict);
    row.gap = r.gap;
    row.sandwich_ok = r.sandwich_holds();
    row.relaxation_steps = r.counters.fw.relaxation_steps;
    row.backtracks = r.counters.fw.backtracks;
    row.rejected_nonsimple = r.counters.fw.rejected_nonsimple;
    row.truncated = r.counters.fw.truncated;
    row.total_steps = r.counters.total_steps;

    if r.verdict == Verdict::Suboptimal {
        if let Some(dir) = &opts.counterexample_dir {
            let ce = Counterexample {
                instance: r.instance_id.clone(),
                spec: match source {
                    Source::Generated(s) => Some(*s),
                    _ => None,
                },
                k_best: k,
                upper_bound: config.upper_bound,
                matrix,
                found_tour: r.final_tour.clone(),
                found_cost: r.final_cost,
                optimal_tour: r.oracle_tour.clone().expect("verified"),
                optimal_cost: r.oracle_cost.expect("verified"),
            };
            let name = counterexample_file_name(source, k);
            let written = serde_json::to_string_pretty(&ce)
                .map_err(Error::from)
                .and_then(|body| std::fs::write(dir.join(&name), body + "\n").map_err(Error::from));
            match written {
                Ok(()) => row.counterexample = Some(name),
                Err(e) => row.error = Some(format!("archiving counterexample: {e}")),
            }
        }
    }
    row
}

/// Runs every instance of the configuration under every K.
///
/// Instances run in parallel; rows are sorted by `(n, seed, distribution,
/// K, instance)` so the report does not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentReport> {
    config.validate()?;
    if let Some(dir) = &opts.counterexample_dir {
        std::fs::create_dir_all(dir)?;
    }
    let jobs: Vec<(Source, usize)> = sources(config)
        .into_iter()
        .flat_map(|s| config.k_values.iter().map(move |&k| (s.clone(), k)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|(s, k)| run_one(s, *k, config, opts))
        .collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let aggregates = Aggregates::from_rows(&rows);
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_toml() {
        let cfg = ExperimentConfig::from_toml(
            r#"
name = "mini"
k_values = [1, 3]

[[campaign]]
distribution = { kind = "uniform", lo = 1, hi = 100 }
n = [5, 6]
seeds = { start = 0, count = 3 }

[[inline]]
name = "e1"
rows = [[0, 1, 2], [2, 0, 1], [1, 2, 0]]
"#,
        )
        .unwrap();
        assert_eq!(cfg.version, 1);
        assert!(cfg.verify);
        assert_eq!(cfg.upper_bound, UpperBoundChoice::Best);
        assert_eq!(sources(&cfg).len(), 7);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            ExperimentConfig::from_toml("name = \"x\"\nk_values = []\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_toml("name = \"x\"\nk_values = [0]\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(ExperimentConfig::from_toml("name = 3"), Err(Error::Config(_))));
    }

    #[test]
    fn row_errors_do_not_abort() {
        let cfg = ExperimentConfig {
            name: "broken".into(),
            version: 1,
            k_values: vec![2],
            verify: true,
            oracle_limit: 16,
            upper_bound: UpperBoundChoice::Best,
            campaigns: vec![],
            inline: vec![
                InlineInstance {
                    name: "bad".into(),
                    rows: vec![vec![0]],
                },
                InlineInstance {
                    name: "ok".into(),
                    rows: vec![vec![0, 1], vec![1, 0]],
                },
            ],
            files: vec![PathBuf::from("/nonexistent/file.atsp")],
        };
        let report = run_experiment(&cfg, &RunOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.aggregates.overall.errors, 2);
        assert_eq!(report.aggregates.overall.optimal, 1);
    }
}
