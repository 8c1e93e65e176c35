//! Evaluation of placements: resource activation counts, service
//! availability under server/facility failures, and user throughput.

mod availability;
mod throughput;

pub use availability::{
    availability, availability_exhaustive, availability_monte_carlo, AvailabilityReport,
    BackupMode, FailureExtent, FailureScenario,
};
pub use throughput::{throughput, ThroughputMode, ThroughputReport};

use serde::{Deserialize, Serialize};

use crate::model::{CostBreakdown, Instance, Placement};
use crate::solver::Solution;

/// Distinct facilities and servers hosting at least one slice/VNF
/// (Σ q_m, Σ u_ms).
pub fn resource_usage(placement: &Placement, inst: &Instance) -> (usize, usize) {
    (
        placement.mecs_activated(inst.sites.len()),
        placement.servers_activated(inst),
    )
}

/// Summary of one solve, as written to result tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: String,
    pub cost: CostBreakdown,
    pub mecs_activated: usize,
    pub servers_activated: usize,
    pub throughput_aggregate_mbps: f64,
    pub throughput_duplicate_mbps: f64,
    pub requests: usize,
    pub rejected: usize,
}

impl EvaluationReport {
    pub fn from_solution(solution: &Solution, inst: &Instance) -> Self {
        let (mecs, servers) = resource_usage(&solution.placement, inst);
        EvaluationReport {
            method: solution.method.name().to_string(),
            cost: solution.cost,
            mecs_activated: mecs,
            servers_activated: servers,
            throughput_aggregate_mbps: throughput(
                &solution.placement,
                inst,
                ThroughputMode::Aggregate,
            )
            .total_mbps,
            throughput_duplicate_mbps: throughput(
                &solution.placement,
                inst,
                ThroughputMode::Duplicate,
            )
            .total_mbps,
            requests: inst.requests.len(),
            rejected: solution.rejected.len(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
