//! Published results for the 15-subsystem benchmark, kept for report
//! rendering only. None of these algorithms is implemented here.

use serde::Deserialize;

const RRAP15_LITERATURE: &str = include_str!("../../../benchmarks/rrap15_literature.json");

/// Label printed next to every literature row.
pub const LITERATURE_LABEL: &str = "literature values, not reproduced";

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct LiteratureRow {
    pub algorithm: String,
    pub allocation: Vec<u32>,
    pub reliability: f64,
    pub fe: Option<u64>,
    pub fe_statistic: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct LiteratureTable {
    problem: String,
    rows: Vec<LiteratureRow>,
}

pub fn rrap15_rows() -> Vec<LiteratureRow> {
    let table: LiteratureTable =
        serde_json::from_str(RRAP15_LITERATURE).expect("bundled table parses");
    debug_assert_eq!(table.problem, "rrap15");
    table.rows
}

/// The literature row to print next to a campaign of the given algorithm.
pub fn reference_for(algorithm: &str) -> Option<LiteratureRow> {
    let wanted = match algorithm {
        "hybrid" => "IMHS+MDE",
        "imhs" => "IMHS",
        _ => return None,
    };
    rrap15_rows().into_iter().find(|r| r.algorithm == wanted)
}
