//! User throughput achieved by a placement.

use serde::{Deserialize, Serialize};

use crate::model::{Connectivity, Instance, Placement};

/// How the two slices of a request are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThroughputMode {
    /// Multi-connectivity multiplexing: both slices carry distinct data, so
    /// a request with both slices active achieves twice its bandwidth.
    Aggregate,
    /// Reliability duplication: the same data flows over both slices, so the
    /// achieved rate is the request bandwidth.
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub total_mbps: f64,
    /// Achieved rate per request id; rejected requests carry zero.
    pub per_request: Vec<f64>,
}

/// Computes the achieved throughput. Single-connectivity placements deliver
/// the plain request bandwidth in either mode: their backup stands idle until
/// a failure.
pub fn throughput(placement: &Placement, inst: &Instance, mode: ThroughputMode) -> ThroughputReport {
    let mut per_request = vec![0.0; inst.requests.len()];
    for (r, _) in placement.admitted() {
        let b = inst.requests[r].service.bandwidth_mbps;
        let multiplexed =
            mode == ThroughputMode::Aggregate && placement.mode == Connectivity::Multi;
        per_request[r] = if multiplexed { 2.0 * b } else { b };
    }
    ThroughputReport {
        total_mbps: per_request.iter().sum(),
        per_request,
    }
}
