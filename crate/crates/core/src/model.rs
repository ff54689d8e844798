//! Problem representation and the exact evaluators.
//!
//! A serial-parallel system chains `N` subsystems in series. Subsystem `i`
//! holds `x_i` identical components in parallel, each working with
//! probability `R_i`, so the system works with probability
//!
//! ```text
//! R_s = prod_i [1 - (1 - R_i)^x_i]
//! ```
//!
//! Each component also consumes `C_i` cost units and `W_i` weight units,
//! and both totals are capped by a budget.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RRAP15_JSON: &str = include_str!("../../../benchmarks/rrap15.json");

/// One stage of the series chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subsystem {
    #[serde(rename = "r")]
    pub reliability: f64,
    #[serde(rename = "c")]
    pub cost: u64,
    #[serde(rename = "w")]
    pub weight: u64,
}

impl Subsystem {
    pub fn new(reliability: f64, cost: u64, weight: u64) -> Self {
        Self {
            reliability,
            cost,
            weight,
        }
    }

    /// Natural log of the reliability of `count` parallel copies.
    pub fn log_reliability(&self, count: u32) -> f64 {
        let unreliability = (1.0 - self.reliability).powi(count as i32);
        (-unreliability).ln_1p()
    }

    /// Reliability of `count` parallel copies.
    pub fn parallel_reliability(&self, count: u32) -> f64 {
        1.0 - (1.0 - self.reliability).powi(count as i32)
    }
}

#[derive(Debug, Clone, Deserialize)]
struct ProblemFile {
    #[serde(default)]
    name: String,
    subsystems: Vec<Subsystem>,
    cost_budget: u64,
    weight_budget: u64,
}

/// A validated serial-parallel reliability-redundancy allocation instance.
///
/// Construction rejects instances whose all-ones allocation is already over
/// budget, so every valid problem has at least one feasible allocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemFile")]
pub struct SerialParallelProblem {
    name: String,
    subsystems: Vec<Subsystem>,
    cost_budget: u64,
    weight_budget: u64,
}

impl TryFrom<ProblemFile> for SerialParallelProblem {
    type Error = Error;

    fn try_from(raw: ProblemFile) -> Result<Self> {
        Self::new(raw.name, raw.subsystems, raw.cost_budget, raw.weight_budget)
    }
}

impl SerialParallelProblem {
    pub fn new(
        name: impl Into<String>,
        subsystems: Vec<Subsystem>,
        cost_budget: u64,
        weight_budget: u64,
    ) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one subsystem is required".into(),
            ));
        }
        for (i, s) in subsystems.iter().enumerate() {
            if !(s.reliability > 0.0 && s.reliability < 1.0) {
                return Err(Error::InvalidProblem(format!(
                    "subsystem {i}: reliability {} is outside (0, 1)",
                    s.reliability
                )));
            }
            if s.cost == 0 || s.weight == 0 {
                return Err(Error::InvalidProblem(format!(
                    "subsystem {i}: cost and weight must be at least 1"
                )));
            }
        }
        let min_cost: u64 = subsystems.iter().map(|s| s.cost).sum();
        let min_weight: u64 = subsystems.iter().map(|s| s.weight).sum();
        if cost_budget < min_cost {
            return Err(Error::InvalidProblem(format!(
                "cost budget {cost_budget} is below {min_cost}, the cost of one component per subsystem"
            )));
        }
        if weight_budget < min_weight {
            return Err(Error::InvalidProblem(format!(
                "weight budget {weight_budget} is below {min_weight}, the weight of one component per subsystem"
            )));
        }
        Ok(Self {
            name: name.into(),
            subsystems,
            cost_budget,
            weight_budget,
        })
    }

    /// The bundled 15-subsystem benchmark with budgets 400 and 414.
    pub fn rrap15() -> Self {
        Self::from_json(RRAP15_JSON).expect("bundled benchmark is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn cost_budget(&self) -> u64 {
        self.cost_budget
    }

    pub fn weight_budget(&self) -> u64 {
        self.weight_budget
    }

    fn check(&self, alloc: &Allocation) -> Result<()> {
        if alloc.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: alloc.len(),
            });
        }
        if let Some((index, &value)) = alloc.iter().enumerate().find(|(_, &x)| x < 1) {
            return Err(Error::InvalidAllocation { index, value });
        }
        Ok(())
    }

    /// Sum of per-subsystem log reliabilities.
    pub fn log_reliability(&self, alloc: &Allocation) -> Result<f64> {
        self.check(alloc)?;
        Ok(self
            .subsystems
            .iter()
            .zip(alloc.iter())
            .map(|(s, &x)| s.log_reliability(x))
            .sum())
    }

    /// System reliability, accumulated in log space.
    pub fn evaluate_reliability(&self, alloc: &Allocation) -> Result<f64> {
        self.log_reliability(alloc).map(f64::exp)
    }

    /// Resource usage, feasibility and reliability of an allocation.
    pub fn evaluate(&self, alloc: &Allocation) -> Result<Evaluation> {
        let system_reliability = self.evaluate_reliability(alloc)?;
        let (cost_used, weight_used) = self
            .subsystems
            .iter()
            .zip(alloc.iter())
            .fold((0u64, 0u64), |(c, w), (s, &x)| {
                (c + s.cost * u64::from(x), w + s.weight * u64::from(x))
            });
        let over = |used: u64, budget: u64| used.saturating_sub(budget) as f64 / budget as f64;
        let violation = over(cost_used, self.cost_budget) + over(weight_used, self.weight_budget);
        Ok(Evaluation {
            system_reliability,
            cost_used,
            weight_used,
            feasible: cost_used <= self.cost_budget && weight_used <= self.weight_budget,
            violation,
        })
    }

    /// Largest `x_i` reachable when every other subsystem keeps a single
    /// component.
    pub fn upper_bounds(&self) -> Vec<u32> {
        let total_cost: u64 = self.subsystems.iter().map(|s| s.cost).sum();
        let total_weight: u64 = self.subsystems.iter().map(|s| s.weight).sum();
        self.subsystems
            .iter()
            .map(|s| {
                let by_cost = (self.cost_budget - (total_cost - s.cost)) / s.cost;
                let by_weight = (self.weight_budget - (total_weight - s.weight)) / s.weight;
                u32::try_from(by_cost.min(by_weight)).unwrap_or(u32::MAX)
            })
            .collect()
    }
}

/// Redundancy levels `x_1..x_N`, one per subsystem.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation(Vec<u32>);

impl Allocation {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl std::ops::Deref for Allocation {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Allocation {
    fn from(counts: Vec<u32>) -> Self {
        Self(counts)
    }
}

impl std::str::FromStr for Allocation {
    type Err = Error;

    /// Parses a comma-separated list such as `3,4,6`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("allocation entry {part:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Outcome of evaluating one allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub system_reliability: f64,
    pub cost_used: u64,
    pub weight_used: u64,
    pub feasible: bool,
    /// Budget overshoot, each constraint divided by its own budget. Zero
    /// exactly when feasible.
    pub violation: f64,
}

impl Evaluation {
    /// Deb feasibility ordering: `Greater` means `self` is the better one.
    ///
    /// Feasible beats infeasible, feasible pairs rank by reliability and
    /// infeasible pairs by smaller violation.
    pub fn compare(&self, other: &Evaluation) -> Ordering {
        match (self.feasible, other.feasible) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => self.system_reliability.total_cmp(&other.system_reliability),
            (false, false) => other.violation.total_cmp(&self.violation),
        }
    }

    pub fn beats(&self, other: &Evaluation) -> bool {
        self.compare(other) == Ordering::Greater
    }
}

/// Free-function form of [`Evaluation::compare`].
pub fn compare(a: &Evaluation, b: &Evaluation) -> Ordering {
    a.compare(b)
}
