use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rrap_bench::campaign::run_campaign;
use rrap_bench::literature::{self, LITERATURE_LABEL};
use rrap_core::optimizer::optimize;
use rrap_core::oracle::{self, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_STATE_CAP};
use rrap_core::sla::{serial_reliability, sla_size, SlaSizing, SlaSpec};
use rrap_core::{Allocation, HybridConfig, SerialParallelProblem, Variant};

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

/// Reliability-redundancy allocation for serial-parallel systems.
#[derive(Parser, Debug)]
#[command(name = "rrap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one allocation (exit 3 when it is over budget).
    Evaluate {
        problem: PathBuf,
        /// Comma-separated redundancy levels, e.g. 3,4,6.
        allocation: String,
    },
    /// Certified global optimum.
    Oracle {
        problem: PathBuf,
        /// Enumerate the bounded box instead of running the DP.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        state_cap: Option<u128>,
        /// Write the result as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One optimizer run.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-seed campaign; run k uses seed base + k.
    Bench {
        problem: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 25)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size series/parallel redundancy for an uptime target.
    Sla {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 1000.0)]
        unit_cost: f64,
        #[arg(long, default_value_t = 5)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        max_m: u32,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value = "hybrid")]
    algo: String,
    /// Seed (base seed for `bench`).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_fe: Option<u64>,
    /// Stop as soon as this reliability is matched.
    #[arg(long)]
    target: Option<f64>,
    /// Extra parameters as key=value (cr, f, bw, par, hmcr, population_size,
    /// phase_length, stall_phases).
    #[arg(long = "param", alias = "params", num_args = 1.., value_name = "KEY=VALUE")]
    params: Vec<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<(Variant, HybridConfig)> {
        let variant: Variant = self.algo.parse()?;
        let mut config = HybridConfig::default();
        for kv in &self.params {
            let (key, value) = kv
                .split_once('=')
                .with_context(|| format!("parameter {kv:?} is not key=value"))?;
            config.set(key.trim(), value.trim())?;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(max_fe) = self.max_fe {
            config.max_fe = max_fe;
        }
        config.validate()?;
        if let Some(t) = self.target {
            anyhow::ensure!(t > 0.0 && t <= 1.0, "target {t} must lie in (0, 1]");
        }
        Ok((variant, config))
    }
}

fn load(path: &Path) -> Result<SerialParallelProblem> {
    Ok(SerialParallelProblem::from_path(path)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut file, value)?;
    writeln!(file)?;
    Ok(())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn run(cli: Cli) -> Result<u8> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Evaluate {
            problem,
            allocation,
        } => {
            let problem = load(&problem)?;
            let alloc: Allocation = allocation.parse()?;
            let e = problem.evaluate(&alloc)?;
            let status = if e.feasible { "feasible" } else { "infeasible" };
            writeln!(
                stdout,
                "R_s={:.6} g1={} g2={} {status}",
                e.system_reliability, e.cost_used, e.weight_used
            )?;
            if !e.feasible {
                writeln!(
                    stdout,
                    "budgets: cost {} weight {}; violation={:.6}",
                    problem.cost_budget(),
                    problem.weight_budget(),
                    e.violation
                )?;
                return Ok(EXIT_INFEASIBLE);
            }
        }
        Command::Oracle {
            problem,
            exhaustive,
            state_cap,
            out,
        } => {
            let problem = load(&problem)?;
            let result = if exhaustive {
                oracle::solve_exhaustive(&problem, state_cap.unwrap_or(DEFAULT_EXHAUSTIVE_CAP))?
            } else {
                oracle::solve_exact_dp_with_cap(&problem, state_cap.unwrap_or(DEFAULT_STATE_CAP))?
            };
            let e = problem.evaluate(&result.best_allocation)?;
            writeln!(stdout, "allocation={}", result.best_allocation)?;
            writeln!(
                stdout,
                "R_s={:.6} g1={} g2={} states={}",
                result.best_reliability, e.cost_used, e.weight_used, result.states_explored
            )?;
            if let Some(out) = out {
                write_json(&out, &result)?;
            }
        }
        Command::Solve { problem, run, out } => {
            let problem = load(&problem)?;
            let (variant, config) = run.resolve()?;
            let trace = optimize(&problem, &config, variant, run.target)?;
            let e = &trace.final_evaluation;
            writeln!(stdout, "algorithm={variant} seed={}", config.seed)?;
            writeln!(stdout, "allocation={}", trace.final_allocation)?;
            writeln!(
                stdout,
                "R_s={:.6} g1={} g2={} {}",
                e.system_reliability,
                e.cost_used,
                e.weight_used,
                if e.feasible { "feasible" } else { "infeasible" }
            )?;
            writeln!(
                stdout,
                "fe_used={} fe_to_target={} stop={}",
                trace.fe_used,
                opt(trace.fe_to_target),
                serde_json::to_value(trace.stop_reason)?
                    .as_str()
                    .unwrap_or("?")
            )?;
            if let Some(out) = out {
                write_json(&out, &trace)?;
            }
        }
        Command::Bench {
            problem,
            run,
            runs,
            jobs,
            csv,
            out,
        } => {
            let problem = load(&problem)?;
            let (variant, config) = run.resolve()?;
            let result = run_campaign(&problem, &config, variant, runs, run.target, jobs)?;
            writeln!(
                stdout,
                "problem={} algorithm={variant} runs={} base_seed={} max_fe={} target={}",
                result.problem,
                result.runs,
                config.seed,
                config.max_fe,
                opt(run.target)
            )?;
            writeln!(
                stdout,
                "success={}/{} best_R_s={:.6}",
                result.success_count, result.runs, result.best_reliability_overall
            )?;
            writeln!(
                stdout,
                "fe_to_target median={} mean={}",
                opt(result.fe_to_target_median),
                opt(result.fe_to_target_mean.map(|m| format!("{m:.1}")))
            )?;
            if problem.name() == "rrap15" {
                if let Some(row) = literature::reference_for(&variant.to_string()) {
                    writeln!(
                        stdout,
                        "reference {}: R_s={:.6} FE={} ({}; {LITERATURE_LABEL})",
                        row.algorithm,
                        row.reliability,
                        opt(row.fe),
                        row.fe_statistic.as_deref().unwrap_or("-")
                    )?;
                }
            }
            if let Some(path) = csv {
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                result.write_csv(file)?;
            }
            if let Some(out) = out {
                write_json(&out, &result)?;
            }
        }
        Command::Sla {
            r,
            target,
            unit_cost,
            max_n,
            max_m,
        } => {
            let spec = SlaSpec::new(r, target, unit_cost)?;
            writeln!(
                stdout,
                "baseline: {max_n} components in series, R = {r}^{max_n} = {:.6}",
                serial_reliability(r, max_n)
            )?;
            match sla_size(&spec, max_n, max_m)? {
                SlaSizing::Sized {
                    n,
                    m,
                    reliability,
                    total_cost,
                } => {
                    writeln!(
                        stdout,
                        "sized: n={n} m={m} R={reliability:.9} cost={total_cost}"
                    )?;
                }
                SlaSizing::NotAchievable {
                    best_n,
                    best_m,
                    best_reliability,
                } => {
                    writeln!(
                        stdout,
                        "NotAchievable: no n<={max_n}, m<={max_m} reaches {target}; best is n={best_n} m={best_m} R={best_reliability:.9}"
                    )?;
                    writeln!(
                        stdout,
                        "the series term r^n never exceeds r = {r}, so targets at or above r cannot be met"
                    )?;
                }
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
