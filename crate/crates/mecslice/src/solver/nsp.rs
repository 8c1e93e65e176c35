//! Dedicated-protection proxy under single connectivity: protection-first
//! placement that serves each request from the nearest reachable facility
//! and its dedicated backup from the nearest other one.

use crate::model::{
    Connectivity, CostWeights, Instance, MecId, Placement, Protection, RequestPlacement,
    SliceAssignment,
};

use super::{reachable_mecs, Loading};

/// Approximation of dedicated network-slice protection: requests are served
/// in id order through the master base station; the primary slice goes to
/// the nearest latency-feasible facility, the dedicated backup to the
/// nearest *different* feasible facility so a facility failure cannot take
/// both out. Only when no second facility is in latency range does the
/// backup fall back to disjoint servers inside the primary's facility.
///
/// Unlike the greedy comparator this proxy never trades protection distance
/// against activation cost, so it activates more facilities. Placements
/// carry [`Protection::ServerDisjoint`]: facility-level separation implies
/// server-level disjointness, and the onsite fallback is checked at server
/// granularity.
pub fn solve_nsp_proxy(inst: &Instance, _weights: &CostWeights) -> Placement {
    let mode = Connectivity::Single;
    let mut placement = Placement::empty(inst.requests.len(), mode, Protection::ServerDisjoint);
    let mut state = Loading::new(inst);

    for r in 0..inst.requests.len() {
        let bw = inst.requests[r].service.bandwidth_mbps;
        let master = inst.attachment(r, false, mode);
        // Nearest-first scan order; reachable_mecs returns id order, so sort
        // by (delay, id) for determinism.
        let mut reachable = reachable_mecs(inst, r, master);
        reachable.sort_by(|&a, &b| {
            inst.delay_to_site(master, a)
                .partial_cmp(&inst.delay_to_site(master, b))
                .unwrap()
                .then(a.cmp(&b))
        });

        let fits = |state: &Loading, m: MecId| -> Option<Vec<usize>> {
            if !state.bandwidth_fits(inst, m, bw) {
                return None;
            }
            state.ffd_slice(inst, r, m, &[])
        };

        // Primary: nearest feasible facility.
        let Some((pm, primary_servers)) = reachable
            .iter()
            .find_map(|&m| fits(&state, m).map(|servers| (m, servers)))
        else {
            continue; // rejected
        };
        state.place(inst, r, pm, &primary_servers);

        // Backup: nearest feasible facility other than the primary's, else
        // disjoint servers onsite.
        let mut backup = reachable
            .iter()
            .filter(|&&m| m != pm)
            .find_map(|&m| fits(&state, m).map(|servers| (m, servers)));
        if backup.is_none() && state.bandwidth_fits(inst, pm, bw) {
            backup = state
                .ffd_slice(inst, r, pm, &primary_servers)
                .map(|servers| (pm, servers));
        }

        match backup {
            Some((bm, backup_servers)) => {
                state.place(inst, r, bm, &backup_servers);
                placement.assignments[r] = Some(RequestPlacement {
                    primary: SliceAssignment { mec: pm, servers: primary_servers },
                    backup: SliceAssignment { mec: bm, servers: backup_servers },
                });
            }
            None => {
                // No protected deployment exists; undo the primary.
                state.remove(inst, r, pm, &primary_servers);
            }
        }
    }
    placement
}
