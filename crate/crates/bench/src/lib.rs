//! Benchmark campaigns for the RRAP optimizers and the `rrap` command-line
//! tool built on top of them.

pub mod campaign;
pub mod literature;

pub use campaign::{run_campaign, run_traces, CampaignResult, RunSummary};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
}
