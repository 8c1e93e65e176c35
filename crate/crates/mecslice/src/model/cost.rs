//! The service provisioning cost: facility, server and traffic components.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_feasibility, CostWeights, Instance, Placement, Violation};

/// Decomposed objective value of a placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Facility activation component, c_mc · Σ q_m.
    pub mec: f64,
    /// Server activation component, c_sc · Σ u_ms.
    pub server: f64,
    /// Traffic forwarding component,
    /// c_tc · Σ_r b^r · (delay to primary + delay to backup).
    pub traffic: f64,
    /// α1·mec + α2·server + α3·traffic.
    pub total: f64,
}

/// A placement that fails the constraint checker cannot be costed.
#[derive(Debug, Error)]
#[error("placement violates {} constraint(s): {}", .violations.len(), summarize(.violations))]
pub struct InfeasiblePlacement {
    pub violations: Vec<Violation>,
}

fn summarize(violations: &[Violation]) -> String {
    let mut parts: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    if violations.len() > 3 {
        parts.push(format!("... {} more", violations.len() - 3));
    }
    parts.join("; ")
}

/// Evaluates the weighted total cost of a feasible placement.
///
/// Errors with the full violation list when the placement does not pass
/// [`check_feasibility`].
pub fn total_cost(
    placement: &Placement,
    inst: &Instance,
    weights: &CostWeights,
) -> Result<CostBreakdown, InfeasiblePlacement> {
    let violations = check_feasibility(placement, inst);
    if !violations.is_empty() {
        return Err(InfeasiblePlacement { violations });
    }
    Ok(cost_unchecked(placement, inst, weights))
}

/// Cost of a placement without re-running the constraint checker. Solvers use
/// this on states they keep feasible by construction.
pub fn cost_unchecked(
    placement: &Placement,
    inst: &Instance,
    weights: &CostWeights,
) -> CostBreakdown {
    let mec = weights.mec_cost * placement.mecs_activated(inst.sites.len()) as f64;
    let server = weights.server_cost * placement.servers_activated(inst) as f64;
    let mut traffic = 0.0;
    for (r, a) in placement.admitted() {
        let b = inst.requests[r].service.bandwidth_mbps;
        let primary_att = inst.attachment(r, false, placement.mode);
        let backup_att = inst.attachment(r, true, placement.mode);
        traffic += b
            * (inst.delay_to_site(primary_att, a.primary.mec)
                + inst.delay_to_site(backup_att, a.backup.mec));
    }
    traffic *= weights.traffic_cost;
    CostBreakdown {
        mec,
        server,
        traffic,
        total: weights.alpha_mec * mec
            + weights.alpha_server * server
            + weights.alpha_traffic * traffic,
    }
}
