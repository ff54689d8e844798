//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rrap_bench::campaign::run_traces;
use rrap_bench::literature;
use rrap_bench::{CampaignResult, RunSummary};
use rrap_core::optimizer::RunTrace;
use rrap_core::oracle::{solve_exact_dp, solve_exhaustive, DEFAULT_EXHAUSTIVE_CAP};
use rrap_core::sla::{serial_reliability, sla_reliability, sla_size, SlaSizing, SlaSpec};
use rrap_core::{Allocation, HybridConfig, SerialParallelProblem, Subsystem, Variant};

const TABLE_II_OPTIMUM: [u32; 15] = [3, 4, 6, 4, 3, 2, 4, 5, 4, 2, 3, 4, 5, 4, 5];
const TABLE_II_RELIABILITY: f64 = 0.945613;
const REPORTING_TOLERANCE: f64 = 5e-7;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rrap15_path() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks/rrap15.json");
    path.to_str().unwrap().to_string()
}

fn evaluator_golden() -> Outcome {
    let p = SerialParallelProblem::rrap15();
    let e = p
        .evaluate(&Allocation::new(TABLE_II_OPTIMUM.to_vec()))
        .map_err(|e| e.to_string())?;
    ensure(
        (e.system_reliability - TABLE_II_RELIABILITY).abs() <= REPORTING_TOLERANCE,
        format!("R_s = {}", e.system_reliability),
    )?;
    ensure(
        e.cost_used == 392 && e.cost_used <= 400,
        format!("cost {}", e.cost_used),
    )?;
    ensure(
        e.weight_used == 414 && e.weight_used <= 414,
        format!("weight {}", e.weight_used),
    )?;
    Ok(format!(
        "R_s={:.9} cost=392 weight=414",
        e.system_reliability
    ))
}

fn oracle_certification() -> Outcome {
    let p = SerialParallelProblem::rrap15();
    let start = Instant::now();
    let r = solve_exact_dp(&p).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let table_bytes = (p.len() + 1) as u64 * (p.cost_budget() + 1) * (p.weight_budget() + 1) * 8;
    ensure(
        (r.best_reliability - TABLE_II_RELIABILITY).abs() <= REPORTING_TOLERANCE,
        format!("oracle R_s = {}", r.best_reliability),
    )?;
    ensure(
        p.evaluate(&r.best_allocation).unwrap().feasible,
        "oracle allocation infeasible",
    )?;
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    ensure(
        table_bytes < 4 << 30,
        format!("table needs {table_bytes} bytes"),
    )?;
    Ok(format!(
        "R_s={:.9} x={} in {:.2?}, table {:.1} MB",
        r.best_reliability,
        r.best_allocation,
        elapsed,
        table_bytes as f64 / 1e6
    ))
}

fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> SerialParallelProblem {
    let n = rng.random_range(1..=max_n);
    let subs: Vec<Subsystem> = (0..n)
        .map(|_| {
            Subsystem::new(
                rng.random_range(0.5..=0.95),
                rng.random_range(1..=5),
                rng.random_range(1..=5),
            )
        })
        .collect();
    let min_c: u64 = subs.iter().map(|s| s.cost).sum();
    let min_w: u64 = subs.iter().map(|s| s.weight).sum();
    let cb = rng.random_range(min_c..=3 * min_c);
    let wb = rng.random_range(min_w..=3 * min_w);
    SerialParallelProblem::new("random", subs, cb, wb).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..200 {
        let p = random_instance(&mut rng, 4);
        let dp = solve_exact_dp(&p).map_err(|e| format!("instance {k}: {e}"))?;
        let ex = solve_exhaustive(&p, DEFAULT_EXHAUSTIVE_CAP)
            .map_err(|e| format!("instance {k}: {e}"))?;
        let rel = (dp.best_reliability - ex.best_reliability).abs() / ex.best_reliability;
        worst = worst.max(rel);
        ensure(
            rel <= 1e-10,
            format!(
                "instance {k}: dp {} vs exhaustive {}",
                dp.best_reliability, ex.best_reliability
            ),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "200 instances, worst relative gap {worst:.1e}, {elapsed:.2?}"
    ))
}

fn hybrid_effectiveness(traces: &mut Vec<RunTrace>) -> Outcome {
    let p = SerialParallelProblem::rrap15();
    let config = HybridConfig {
        max_fe: 250_000,
        ..HybridConfig::default()
    };
    let runs = run_traces(
        &p,
        &config,
        Variant::Hybrid,
        25,
        Some(TABLE_II_RELIABILITY),
        4,
    )
    .map_err(|e| e.to_string())?;
    let campaign = CampaignResult::from_runs(
        p.name(),
        Variant::Hybrid,
        Some(TABLE_II_RELIABILITY),
        runs.iter().map(RunSummary::from).collect(),
    );
    for t in runs.iter().filter(|t| t.reached_target()) {
        ensure(
            (t.final_reliability() - TABLE_II_RELIABILITY).abs() <= REPORTING_TOLERANCE,
            format!("seed {} stopped at {}", t.seed, t.final_reliability()),
        )?;
    }
    traces.extend(runs);
    let reference = literature::reference_for("hybrid")
        .and_then(|r| r.fe)
        .unwrap();
    let line = format!(
        "success {}/{} ({:.0}%), median FE to target {} (literature {reference}), mean {}",
        campaign.success_count,
        campaign.runs,
        100.0 * campaign.success_rate(),
        campaign
            .fe_to_target_median
            .map_or("-".into(), |m| m.to_string()),
        campaign
            .fe_to_target_mean
            .map_or("-".into(), |m| format!("{m:.1}")),
    );
    ensure(campaign.success_rate() >= 0.6, line.clone())?;
    Ok(line)
}

fn elitism_and_upper_bound(traces: &mut Vec<RunTrace>) -> Outcome {
    let p = SerialParallelProblem::rrap15();
    let optimum = solve_exact_dp(&p).unwrap().best_reliability;
    for variant in [Variant::Imhs, Variant::Mde] {
        let config = HybridConfig {
            max_fe: 50_000,
            ..HybridConfig::default()
        };
        traces.extend(
            run_traces(&p, &config, variant, 5, Some(TABLE_II_RELIABILITY), 4)
                .map_err(|e| e.to_string())?,
        );
    }
    let mut points = 0;
    for t in traces.iter() {
        ensure(
            t.final_reliability() <= optimum + 1e-9 || !t.final_evaluation.feasible,
            format!(
                "{} seed {} final {}",
                t.algorithm,
                t.seed,
                t.final_reliability()
            ),
        )?;
        for c in t.best_curve.iter().filter(|c| c.feasible) {
            points += 1;
            ensure(
                c.reliability <= optimum + 1e-9,
                format!("{} seed {} reported {}", t.algorithm, t.seed, c.reliability),
            )?;
        }
        for pair in t.best_curve.windows(2) {
            ensure(
                pair[1].evaluation().beats(&pair[0].evaluation()),
                format!(
                    "{} seed {} incumbent worsened at fe {}",
                    t.algorithm, t.seed, pair[1].fe
                ),
            )?;
        }
        let last = t.best_curve.last().ok_or("empty curve")?;
        ensure(
            last.reliability == t.final_reliability(),
            "curve end differs from final",
        )?;
    }
    Ok(format!(
        "{} runs, {points} feasible incumbents, all <= {optimum:.9}",
        traces.len()
    ))
}

fn sla_arithmetic() -> Outcome {
    let base = serial_reliability(0.9995, 5);
    ensure((base - 0.9975).abs() <= 1e-4, format!("0.9995^5 = {base}"))?;
    let r23 = sla_reliability(0.9995, 2, 3);
    ensure((r23 - 0.999000).abs() <= 1e-6, format!("R(2,3) = {r23}"))?;
    let spec = SlaSpec::new(0.9995, 0.99999, 1000.0).map_err(|e| e.to_string())?;
    let sizing = sla_size(&spec, 5, 5).map_err(|e| e.to_string())?;
    ensure(
        matches!(sizing, SlaSizing::NotAchievable { .. }),
        format!("{sizing:?}"),
    )?;
    Ok(format!(
        "0.9995^5={base:.6}, R(2,3)={r23:.6}, five nines NotAchievable"
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("rrap-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let problem = rrap15_path();
    let run = |args: &[&str]| -> Result<(), String> {
        let o = Command::new(env!("CARGO_BIN_EXE_rrap"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            o.status.success(),
            String::from_utf8_lossy(&o.stderr).into_owned(),
        )
    };
    let read = |name: &str| std::fs::read(dir.join(name)).map_err(|e| e.to_string());
    let path = |name: &str| dir.join(name).to_str().unwrap().to_string();

    for name in ["solve_a.json", "solve_b.json"] {
        run(&[
            "solve",
            &problem,
            "--algo",
            "hybrid",
            "--seed",
            "5",
            "--max-fe",
            "250000",
            "--target",
            "0.945613",
            "--out",
            &path(name),
        ])?;
    }
    ensure(
        read("solve_a.json")? == read("solve_b.json")?,
        "solve JSON differs between invocations",
    )?;

    for (jobs, name) in [("1", "bench_1.json"), ("8", "bench_8.json")] {
        run(&[
            "bench",
            &problem,
            "--runs",
            "8",
            "--max-fe",
            "40000",
            "--target",
            "0.945613",
            "--jobs",
            jobs,
            "--out",
            &path(name),
        ])?;
    }
    ensure(
        read("bench_1.json")? == read("bench_8.json")?,
        "bench summary depends on --jobs",
    )?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok("solve JSON byte-identical; bench --jobs 1 == --jobs 8".into())
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let table = SerialParallelProblem::rrap15();
    for k in 0..1000 {
        let p = if k % 10 == 0 {
            table.clone()
        } else {
            random_instance(&mut rng, 15)
        };
        // Counts stay small enough that each extra component changes R_s by
        // far more than one ulp.
        let counts: Vec<u32> = (0..p.len()).map(|_| rng.random_range(1..=8)).collect();
        let index = rng.random_range(0..p.len());
        let before = p
            .evaluate_reliability(&Allocation::new(counts.clone()))
            .unwrap();
        let mut bumped = counts.clone();
        bumped[index] += 1;
        let after = p.evaluate_reliability(&Allocation::new(bumped)).unwrap();
        ensure(
            after > before,
            format!("triple {k}: x={counts:?} index {index}: {before} -> {after}"),
        )?;
    }
    Ok("1000 triples strictly increasing".into())
}

fn main() -> ExitCode {
    let mut traces = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1. evaluator golden value", evaluator_golden()),
        ("2. oracle certifies the optimum", oracle_certification()),
        ("3. DP and exhaustive oracles agree", oracle_equivalence()),
        (
            "4. hybrid effectiveness over 25 seeds",
            hybrid_effectiveness(&mut traces),
        ),
        (
            "5. elitism and oracle upper bound",
            elitism_and_upper_bound(&mut traces),
        ),
        ("6. SLA arithmetic", sla_arithmetic()),
        ("7. determinism", determinism()),
        ("8. monotonicity", monotonicity()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
