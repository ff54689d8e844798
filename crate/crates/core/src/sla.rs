//! Sizing a redundant deployment against an uptime target.
//!
//! A service chains `n` identical components in series and backs the chain
//! with `m` parallel copies of the component, giving
//! `r^n * (1 - (1 - r)^m)`. [`sla_size`] scans every `(n, m)` within the
//! supplied bounds for the cheapest pair that meets the target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reliability of `n` components of reliability `r` in series.
pub fn serial_reliability(r: f64, n: u32) -> f64 {
    r.powi(n as i32)
}

/// Reliability of `n` series components combined with an `m`-way parallel
/// stage.
pub fn sla_reliability(r: f64, n: u32, m: u32) -> f64 {
    serial_reliability(r, n) * (1.0 - (1.0 - r).powi(m as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlaSpec {
    pub unit_reliability: f64,
    pub target: f64,
    /// Price of a single component.
    pub unit_cost: f64,
}

impl SlaSpec {
    pub fn new(unit_reliability: f64, target: f64, unit_cost: f64) -> Result<Self> {
        let prob = |p: f64| p > 0.0 && p < 1.0;
        if !prob(unit_reliability) {
            return Err(Error::InvalidConfig(format!(
                "unit reliability {unit_reliability} is outside (0, 1)"
            )));
        }
        if !prob(target) {
            return Err(Error::InvalidConfig(format!(
                "target {target} is outside (0, 1)"
            )));
        }
        if !(unit_cost.is_finite() && unit_cost >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "unit cost {unit_cost} must be non-negative"
            )));
        }
        Ok(Self {
            unit_reliability,
            target,
            unit_cost,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SlaSizing {
    Sized {
        n: u32,
        m: u32,
        reliability: f64,
        total_cost: f64,
    },
    /// No pair within the bounds reaches the target. `best_*` report the
    /// most reliable pair that was tried.
    NotAchievable {
        best_n: u32,
        best_m: u32,
        best_reliability: f64,
    },
}

/// Cheapest `(n, m)` with `n <= max_n`, `m <= max_m` meeting the target.
///
/// Cost is `unit_cost * (n + m)`; ties go to the smaller `n`, then the
/// smaller `m`.
pub fn sla_size(spec: &SlaSpec, max_n: u32, max_m: u32) -> Result<SlaSizing> {
    if max_n < 1 || max_m < 1 {
        return Err(Error::InvalidConfig(
            "max_n and max_m must be at least 1".into(),
        ));
    }
    let r = spec.unit_reliability;
    let mut chosen: Option<(u32, u32, f64)> = None;
    let mut most_reliable = (1, 1, sla_reliability(r, 1, 1));
    for n in 1..=max_n {
        for m in 1..=max_m {
            let rel = sla_reliability(r, n, m);
            if rel > most_reliable.2 {
                most_reliable = (n, m, rel);
            }
            if rel >= spec.target && chosen.is_none_or(|(cn, cm, _)| n + m < cn + cm) {
                chosen = Some((n, m, rel));
            }
        }
    }
    Ok(match chosen {
        Some((n, m, reliability)) => SlaSizing::Sized {
            n,
            m,
            reliability,
            total_cost: spec.unit_cost * f64::from(n + m),
        },
        None => SlaSizing::NotAchievable {
            best_n: most_reliable.0,
            best_m: most_reliable.1,
            best_reliability: most_reliable.2,
        },
    })
}
