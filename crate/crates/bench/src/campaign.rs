//! Multi-seed campaigns: run `k` uses seed `base_seed + k`, runs may execute
//! concurrently, and results are always ordered by run index.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rrap_core::optimizer::{optimize, StopReason};
use rrap_core::{HybridConfig, RunTrace, SerialParallelProblem, Variant};

pub const CSV_HEADER: [&str; 5] = [
    "seed",
    "fe_used",
    "fe_to_target",
    "best_reliability",
    "feasible",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub fe_used: u64,
    pub fe_to_target: Option<u64>,
    pub best_reliability: f64,
    pub feasible: bool,
    pub stop_reason: StopReason,
}

impl From<&RunTrace> for RunSummary {
    fn from(t: &RunTrace) -> Self {
        Self {
            seed: t.seed,
            fe_used: t.fe_used,
            fe_to_target: t.fe_to_target,
            best_reliability: t.final_reliability(),
            feasible: t.final_evaluation.feasible,
            stop_reason: t.stop_reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub problem: String,
    pub algorithm: Variant,
    pub target: Option<f64>,
    pub runs: usize,
    pub success_count: usize,
    /// Over successful runs only; absent when nothing succeeded.
    pub fe_to_target_median: Option<f64>,
    pub fe_to_target_mean: Option<f64>,
    pub best_reliability_overall: f64,
    pub per_run: Vec<RunSummary>,
}

pub fn median(values: &[u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        (sorted[mid - 1] as f64 + sorted[mid] as f64) / 2.0
    })
}

pub fn mean(values: &[u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    Some(values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64)
}

impl CampaignResult {
    pub fn from_runs(
        problem: &str,
        algorithm: Variant,
        target: Option<f64>,
        per_run: Vec<RunSummary>,
    ) -> Self {
        let hits: Vec<u64> = per_run.iter().filter_map(|r| r.fe_to_target).collect();
        let best_reliability_overall = per_run
            .iter()
            .filter(|r| r.feasible)
            .map(|r| r.best_reliability)
            .fold(0.0, f64::max);
        Self {
            problem: problem.to_string(),
            algorithm,
            target,
            runs: per_run.len(),
            success_count: hits.len(),
            fe_to_target_median: median(&hits),
            fe_to_target_mean: mean(&hits),
            best_reliability_overall,
            per_run,
        }
    }

    pub fn feasible_runs(&self) -> usize {
        self.per_run.iter().filter(|r| r.feasible).count()
    }

    pub fn success_rate(&self) -> f64 {
        self.success_count as f64 / self.runs as f64
    }

    /// One row per run in run order, then a summary row whose columns hold
    /// total FE, median FE-to-target, best reliability and
    /// `successes/runs`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.per_run {
            w.write_record([
                r.seed.to_string(),
                r.fe_used.to_string(),
                opt(r.fe_to_target),
                r.best_reliability.to_string(),
                r.feasible.to_string(),
            ])?;
        }
        let total_fe: u64 = self.per_run.iter().map(|r| r.fe_used).sum();
        w.write_record([
            "summary".to_string(),
            total_fe.to_string(),
            self.fe_to_target_median
                .map(|m| m.to_string())
                .unwrap_or_default(),
            self.best_reliability_overall.to_string(),
            format!("{}/{}", self.success_count, self.runs),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Statistics recomputed from a campaign CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDigest {
    pub rows: Vec<CsvRow>,
    pub summary_total_fe: u64,
    pub summary_median: Option<f64>,
    pub summary_best: f64,
    pub summary_successes: usize,
    pub summary_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub seed: u64,
    pub fe_used: u64,
    pub fe_to_target: Option<u64>,
    pub best_reliability: f64,
    pub feasible: bool,
}

pub fn read_csv<R: Read>(input: R) -> Result<CsvDigest> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    let mut rows = Vec::new();
    let mut summary = None;
    for record in reader.records() {
        let record = record?;
        if &record[0] == "summary" {
            let (s, r) = record[4]
                .split_once('/')
                .context("summary successes column")?;
            summary = Some((
                record[1].parse()?,
                if record[2].is_empty() {
                    None
                } else {
                    Some(record[2].parse()?)
                },
                record[3].parse()?,
                s.parse()?,
                r.parse()?,
            ));
            continue;
        }
        rows.push(CsvRow {
            seed: record[0].parse()?,
            fe_used: record[1].parse()?,
            fe_to_target: if record[2].is_empty() {
                None
            } else {
                Some(record[2].parse()?)
            },
            best_reliability: record[3].parse()?,
            feasible: record[4].parse()?,
        });
    }
    let (summary_total_fe, summary_median, summary_best, summary_successes, summary_runs) =
        summary.context("CSV has no summary row")?;
    Ok(CsvDigest {
        rows,
        summary_total_fe,
        summary_median,
        summary_best,
        summary_successes,
        summary_runs,
    })
}

/// Runs `runs` independent seeds, `jobs` at a time, and returns the full
/// traces in run order.
pub fn run_traces(
    problem: &SerialParallelProblem,
    config: &HybridConfig,
    variant: Variant,
    runs: usize,
    target: Option<f64>,
    jobs: usize,
) -> Result<Vec<RunTrace>> {
    if runs == 0 {
        bail!("a campaign needs at least one run");
    }
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    config.validate()?;
    let run_one = |k: usize| {
        let cfg = HybridConfig {
            seed: config.seed.wrapping_add(k as u64),
            ..*config
        };
        optimize(problem, &cfg, variant, target)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let traces = pool.install(|| {
        (0..runs)
            .into_par_iter()
            .map(run_one)
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(traces)
}

pub fn run_campaign(
    problem: &SerialParallelProblem,
    config: &HybridConfig,
    variant: Variant,
    runs: usize,
    target: Option<f64>,
    jobs: usize,
) -> Result<CampaignResult> {
    let traces = run_traces(problem, config, variant, runs, target, jobs)?;
    Ok(CampaignResult::from_runs(
        problem.name(),
        variant,
        target,
        traces.iter().map(RunSummary::from).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_and_mean() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[5, 1, 3]), Some(3.0));
        assert_eq!(median(&[4, 1, 3, 2]), Some(2.5));
        assert_eq!(mean(&[1, 2, 6]), Some(3.0));
    }

    fn summary(seed: u64, fe_to_target: Option<u64>, r: f64, feasible: bool) -> RunSummary {
        RunSummary {
            seed,
            fe_used: fe_to_target.unwrap_or(1000),
            fe_to_target,
            best_reliability: r,
            feasible,
            stop_reason: StopReason::BudgetExhausted,
        }
    }

    #[test]
    fn aggregates_only_successes() {
        let c = CampaignResult::from_runs(
            "p",
            Variant::Hybrid,
            Some(0.9),
            vec![
                summary(1, Some(100), 0.9, true),
                summary(2, None, 0.8, true),
                summary(3, Some(300), 0.9, true),
                summary(4, None, 0.99, false),
            ],
        );
        assert_eq!((c.runs, c.success_count), (4, 2));
        assert_eq!(c.fe_to_target_median, Some(200.0));
        assert_eq!(c.fe_to_target_mean, Some(200.0));
        assert_eq!(c.best_reliability_overall, 0.9);

        let none = CampaignResult::from_runs(
            "p",
            Variant::Mde,
            Some(0.99),
            vec![summary(1, None, 0.5, true)],
        );
        assert_eq!(none.fe_to_target_median, None);
        assert_eq!(none.fe_to_target_mean, None);
    }

    #[test]
    fn csv_round_trip() {
        let c = CampaignResult::from_runs(
            "p",
            Variant::Imhs,
            Some(0.9),
            vec![
                summary(7, Some(120), 0.91, true),
                summary(8, None, 0.1 + 0.2, true),
            ],
        );
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("seed,fe_used,fe_to_target,best_reliability,feasible\n"));
        assert_eq!(text.lines().count(), 1 + c.runs + 1);

        let digest = read_csv(buf.as_slice()).unwrap();
        assert_eq!(digest.rows.len(), 2);
        assert_eq!(digest.rows[1].best_reliability, 0.1 + 0.2);
        assert_eq!(digest.summary_median, c.fe_to_target_median);
        assert_eq!((digest.summary_successes, digest.summary_runs), (1, 2));
        assert_eq!(digest.summary_total_fe, 1120);
    }

    #[test]
    fn rejects_empty_campaign() {
        let p = SerialParallelProblem::rrap15();
        assert!(run_campaign(&p, &HybridConfig::default(), Variant::Hybrid, 0, None, 1).is_err());
        assert!(run_campaign(&p, &HybridConfig::default(), Variant::Hybrid, 1, None, 0).is_err());
    }
}
