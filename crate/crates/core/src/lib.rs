//! Solvers for the serial-parallel reliability-redundancy allocation
//! problem (RRAP).
//!
//! * [`model`] holds the problem, the exact evaluator and the Deb
//!   feasibility ordering.
//! * [`oracle`] finds certified global optima by dynamic programming.
//! * [`optimizer`] implements harmony search, differential evolution with
//!   harmony-search replacement, and their alternating hybrid.
//! * [`sla`] sizes series/parallel redundancy against an uptime target.
//!
//! ```
//! use rrap_core::{oracle, Allocation, SerialParallelProblem};
//!
//! let problem = SerialParallelProblem::rrap15();
//! let alloc: Allocation = "3,4,6,4,3,2,4,5,4,2,3,4,5,4,5".parse().unwrap();
//! let eval = problem.evaluate(&alloc).unwrap();
//! assert!(eval.feasible);
//! assert_eq!((eval.cost_used, eval.weight_used), (392, 414));
//!
//! let best = oracle::solve_exact_dp(&problem).unwrap();
//! assert!((best.best_reliability - eval.system_reliability).abs() < 1e-9);
//! ```

pub mod error;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod sla;

pub use error::{Error, Result};
pub use model::{compare, Allocation, Evaluation, SerialParallelProblem, Subsystem};
pub use optimizer::{HybridConfig, RunTrace, Variant};
pub use oracle::OracleResult;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/optimizer.md")]
    mod optimizer {}
    #[doc = include_str!("../../../book/src/sla.md")]
    mod sla {}
}
