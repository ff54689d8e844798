//! Population-based search over the integer allocation space.
//!
//! Candidates carry a real-valued genotype that decodes to an allocation by
//! half-up rounding, so the continuous operators of harmony search (pitch
//! bandwidth) and differential evolution (scaled differences) apply
//! directly. Both operators share one selection rule: a new candidate
//! replaces the current worst member when it beats it under the Deb
//! ordering and does not duplicate an allocation already in memory.
//!
//! The hybrid alternates harmony-search phases and differential-evolution
//! phases over the same population, harmony search first. A phase lasts
//! `phase_length` generations for both kinds, one generation being
//! `population_size` evaluations, so the two kinds get equal budgets.

mod evolution;
mod harmony;
mod population;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Evaluation, SerialParallelProblem};

pub use population::{decode, Candidate, Population};
pub use search::Search;

/// Slack allowed when checking whether a run has matched a target
/// reliability; targets are quoted to six decimals.
pub const TARGET_TOLERANCE: f64 = 5e-7;

/// Anything that can score an allocation. Each call counts as one function
/// evaluation.
pub trait Objective {
    fn upper_bounds(&self) -> Vec<u32>;
    fn evaluate(&self, alloc: &Allocation) -> Evaluation;
}

impl Objective for SerialParallelProblem {
    fn upper_bounds(&self) -> Vec<u32> {
        SerialParallelProblem::upper_bounds(self)
    }

    fn evaluate(&self, alloc: &Allocation) -> Evaluation {
        SerialParallelProblem::evaluate(self, alloc).expect("decoded allocations are in bounds")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Hybrid,
    Imhs,
    Mde,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Hybrid => "hybrid",
            Variant::Imhs => "imhs",
            Variant::Mde => "mde",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(Variant::Hybrid),
            "imhs" => Ok(Variant::Imhs),
            "mde" => Ok(Variant::Mde),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm {other:?} (expected hybrid, imhs or mde)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    /// Crossover rate of differential evolution.
    pub cr: f64,
    /// Differential weight.
    pub f: f64,
    /// Pitch bandwidth, in genotype units.
    pub bw: f64,
    /// Pitch adjustment rate.
    pub par: f64,
    /// Harmony memory consideration rate.
    pub hmcr: f64,
    pub population_size: usize,
    /// Generations per phase; a generation is `population_size` evaluations.
    pub phase_length: usize,
    pub max_fe: u64,
    /// Stop after this many consecutive phases without a new incumbent.
    pub stall_phases: usize,
    pub seed: u64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            cr: 0.3,
            f: 1.0,
            bw: 0.5,
            par: 0.2,
            hmcr: 0.95,
            population_size: 20,
            phase_length: 50,
            max_fe: 250_000,
            stall_phases: 50,
            seed: 0,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} = {v} must lie in [0, 1]"
                )))
            }
        };
        unit("cr", self.cr)?;
        unit("par", self.par)?;
        unit("hmcr", self.hmcr)?;
        if !(self.f > 0.0 && self.f.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "f = {} must be positive",
                self.f
            )));
        }
        if !(self.bw > 0.0 && self.bw.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "bw = {} must be positive",
                self.bw
            )));
        }
        if self.population_size < 4 {
            return Err(Error::InvalidConfig(
                "population_size must be at least 4 for rand/1 mutation".into(),
            ));
        }
        if self.phase_length < 1 {
            return Err(Error::InvalidConfig(
                "phase_length must be at least 1".into(),
            ));
        }
        if self.stall_phases < 1 {
            return Err(Error::InvalidConfig(
                "stall_phases must be at least 1".into(),
            ));
        }
        if self.max_fe < self.population_size as u64 {
            return Err(Error::InvalidConfig(format!(
                "max_fe = {} cannot cover the initial population of {}",
                self.max_fe, self.population_size
            )));
        }
        Ok(())
    }

    /// Sets one parameter by name, as used by `--param key=value`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("cannot parse {key} = {value:?}")))
        }
        match key {
            "cr" => self.cr = parse(key, value)?,
            "f" => self.f = parse(key, value)?,
            "bw" => self.bw = parse(key, value)?,
            "par" => self.par = parse(key, value)?,
            "hmcr" => self.hmcr = parse(key, value)?,
            "population_size" | "pop" => self.population_size = parse(key, value)?,
            "phase_length" => self.phase_length = parse(key, value)?,
            "max_fe" => self.max_fe = parse(key, value)?,
            "stall_phases" => self.stall_phases = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            other => return Err(Error::InvalidConfig(format!("unknown parameter {other:?}"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    BudgetExhausted,
    Stalled,
    /// Every bound is 1, so the initial population already covers the space.
    SinglePoint,
}

/// An improvement of the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fe: u64,
    pub reliability: f64,
    pub feasible: bool,
    pub violation: f64,
}

impl CurvePoint {
    pub(crate) fn new(fe: u64, e: &Evaluation) -> Self {
        Self {
            fe,
            reliability: e.system_reliability,
            feasible: e.feasible,
            violation: e.violation,
        }
    }

    pub fn evaluation(&self) -> Evaluation {
        Evaluation {
            system_reliability: self.reliability,
            cost_used: 0,
            weight_used: 0,
            feasible: self.feasible,
            violation: self.violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: Variant,
    pub seed: u64,
    pub target: Option<f64>,
    pub fe_used: u64,
    pub fe_to_target: Option<u64>,
    pub stop_reason: StopReason,
    pub best_curve: Vec<CurvePoint>,
    pub final_allocation: Allocation,
    pub final_evaluation: Evaluation,
}

impl RunTrace {
    pub fn final_reliability(&self) -> f64 {
        self.final_evaluation.system_reliability
    }

    pub fn reached_target(&self) -> bool {
        self.fe_to_target.is_some()
    }
}

/// Runs one optimizer from a fresh population until the budget, the stall
/// window or the target stops it.
pub fn optimize<O: Objective>(
    objective: &O,
    config: &HybridConfig,
    variant: Variant,
    target: Option<f64>,
) -> Result<RunTrace> {
    config.validate()?;
    let mut search = Search::new(objective, *config, target);
    let pop = search.init_population();
    Ok(search.run(pop, variant))
}

/// The alternating harmony-search / differential-evolution hybrid.
pub fn hybrid_optimize(
    problem: &SerialParallelProblem,
    config: &HybridConfig,
    target: Option<f64>,
) -> Result<RunTrace> {
    optimize(problem, config, Variant::Hybrid, target)
}

/// Runs only one of the two phase kinds, repeatedly.
pub fn solo_optimize(
    problem: &SerialParallelProblem,
    config: &HybridConfig,
    variant: Variant,
    target: Option<f64>,
) -> Result<RunTrace> {
    optimize(problem, config, variant, target)
}
