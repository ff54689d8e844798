//! Exact global optimization.
//!
//! The log of the system reliability is a sum of per-subsystem terms, so the
//! problem is a two-constraint integer knapsack over log reliabilities.
//! [`solve_exact_dp`] tabulates the best suffix value for every remaining
//! (cost, weight) budget pair and walks the table forward to recover the
//! allocation. [`solve_exhaustive`] enumerates the whole bounded box and
//! exists to cross-check the DP on small instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, SerialParallelProblem};

/// Default limit on `(N + 1) * (cost_budget + 1) * (weight_budget + 1)`.
pub const DEFAULT_STATE_CAP: u128 = 100_000_000;

/// Default limit on the number of allocations [`solve_exhaustive`] visits.
pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 10_000_000;

/// Two log objectives closer than this are treated as a tie.
pub const OBJECTIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_allocation: Allocation,
    pub best_reliability: f64,
    pub states_explored: u64,
}

/// Best achievable log reliability of subsystems `i..N` for every budget
/// pair `(c, w)` with `c <= cost_budget`, `w <= weight_budget`.
pub(crate) struct DpTable {
    costs: usize,
    weights: usize,
    values: Vec<f64>,
}

impl DpTable {
    fn index(&self, layer: usize, cost: usize, weight: usize) -> usize {
        (layer * self.costs + cost) * self.weights + weight
    }

    pub(crate) fn value(&self, layer: usize, cost: usize, weight: usize) -> f64 {
        self.values[self.index(layer, cost, weight)]
    }
}

fn dp_states(problem: &SerialParallelProblem) -> u128 {
    (problem.len() as u128 + 1)
        * (u128::from(problem.cost_budget()) + 1)
        * (u128::from(problem.weight_budget()) + 1)
}

pub(crate) fn build_table(
    problem: &SerialParallelProblem,
    state_cap: u128,
) -> Result<(DpTable, u64)> {
    let states = dp_states(problem);
    if states > state_cap {
        return Err(Error::StateCapExceeded {
            states,
            cap: state_cap,
        });
    }
    let n = problem.len();
    let costs = problem.cost_budget() as usize + 1;
    let weights = problem.weight_budget() as usize + 1;
    let mut table = DpTable {
        costs,
        weights,
        values: vec![f64::NEG_INFINITY; states as usize],
    };
    let bounds = problem.upper_bounds();
    let mut explored = 0u64;

    for c in 0..costs {
        for w in 0..weights {
            let idx = table.index(n, c, w);
            table.values[idx] = 0.0;
        }
    }
    for layer in (0..n).rev() {
        let sub = problem.subsystems()[layer];
        let (unit_c, unit_w) = (sub.cost as usize, sub.weight as usize);
        let terms: Vec<f64> = (1..=bounds[layer])
            .map(|x| sub.log_reliability(x))
            .collect();
        for c in 0..costs {
            for w in 0..weights {
                let mut best = f64::NEG_INFINITY;
                for (k, term) in terms.iter().enumerate() {
                    let x = k + 1;
                    if unit_c * x > c || unit_w * x > w {
                        break;
                    }
                    explored += 1;
                    let rest = table.value(layer + 1, c - unit_c * x, w - unit_w * x);
                    let candidate = term + rest;
                    if candidate > best {
                        best = candidate;
                    }
                }
                let idx = table.index(layer, c, w);
                table.values[idx] = best;
            }
        }
    }
    Ok((table, explored))
}

/// Provably optimal allocation by dynamic programming over remaining
/// budgets, using [`DEFAULT_STATE_CAP`].
pub fn solve_exact_dp(problem: &SerialParallelProblem) -> Result<OracleResult> {
    solve_exact_dp_with_cap(problem, DEFAULT_STATE_CAP)
}

/// Like [`solve_exact_dp`] with an explicit state cap.
///
/// Among optima tied within [`OBJECTIVE_TOLERANCE`] the lexicographically
/// smallest allocation is returned.
pub fn solve_exact_dp_with_cap(
    problem: &SerialParallelProblem,
    state_cap: u128,
) -> Result<OracleResult> {
    let (table, explored) = build_table(problem, state_cap)?;
    let n = problem.len();
    let bounds = problem.upper_bounds();
    let mut cost = problem.cost_budget() as usize;
    let mut weight = problem.weight_budget() as usize;
    let optimum = table.value(0, cost, weight);
    debug_assert!(
        optimum.is_finite(),
        "validated problems have a feasible allocation"
    );

    // Walk forward, keeping the smallest x_i that can still reach the optimum.
    let mut counts = Vec::with_capacity(n);
    let mut remaining = optimum;
    for (layer, sub) in problem.subsystems().iter().enumerate() {
        let (unit_c, unit_w) = (sub.cost as usize, sub.weight as usize);
        let chosen = (1..=bounds[layer])
            .take_while(|&x| unit_c * x as usize <= cost && unit_w * x as usize <= weight)
            .find(|&x| {
                let value = sub.log_reliability(x)
                    + table.value(
                        layer + 1,
                        cost - unit_c * x as usize,
                        weight - unit_w * x as usize,
                    );
                value >= remaining - OBJECTIVE_TOLERANCE
            })
            .expect("table entry is reachable");
        remaining -= sub.log_reliability(chosen);
        cost -= unit_c * chosen as usize;
        weight -= unit_w * chosen as usize;
        counts.push(chosen);
    }

    let best_allocation = Allocation::new(counts);
    let best_reliability = problem.evaluate_reliability(&best_allocation)?;
    Ok(OracleResult {
        best_allocation,
        best_reliability,
        states_explored: explored,
    })
}

fn box_size(bounds: &[u32]) -> u128 {
    bounds.iter().map(|&u| u128::from(u)).product()
}

/// Visits every allocation in `[1, u_1] x ... x [1, u_N]` in lexicographic
/// order.
fn for_each_in_box(bounds: &[u32], mut visit: impl FnMut(&[u32])) {
    let mut counts = vec![1u32; bounds.len()];
    loop {
        visit(&counts);
        let mut i = counts.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if counts[i] < bounds[i] {
                counts[i] += 1;
                break;
            }
            counts[i] = 1;
        }
    }
}

/// Brute-force optimum over the bounded box, for instances with at most
/// `cap` allocations.
pub fn solve_exhaustive(problem: &SerialParallelProblem, cap: u128) -> Result<OracleResult> {
    let bounds = problem.upper_bounds();
    let size = box_size(&bounds);
    if size > cap {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    let subs = problem.subsystems();
    let (cost_budget, weight_budget) = (problem.cost_budget(), problem.weight_budget());
    let feasible_log = |counts: &[u32]| -> Option<f64> {
        let mut cost = 0u64;
        let mut weight = 0u64;
        let mut log_r = 0.0;
        for (s, &x) in subs.iter().zip(counts) {
            cost += s.cost * u64::from(x);
            weight += s.weight * u64::from(x);
            log_r += s.log_reliability(x);
        }
        (cost <= cost_budget && weight <= weight_budget).then_some(log_r)
    };

    let mut best = f64::NEG_INFINITY;
    for_each_in_box(&bounds, |counts| {
        if let Some(v) = feasible_log(counts) {
            best = best.max(v);
        }
    });
    let mut first: Option<Vec<u32>> = None;
    for_each_in_box(&bounds, |counts| {
        if first.is_none() && feasible_log(counts).is_some_and(|v| v >= best - OBJECTIVE_TOLERANCE)
        {
            first = Some(counts.to_vec());
        }
    });

    let best_allocation = Allocation::new(first.expect("all-ones allocation is feasible"));
    let best_reliability = problem.evaluate_reliability(&best_allocation)?;
    Ok(OracleResult {
        best_allocation,
        best_reliability,
        states_explored: size as u64,
    })
}
