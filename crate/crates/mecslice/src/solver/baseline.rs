//! Baseline comparator: random first fit decreasing under single
//! connectivity.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Connectivity, CostWeights, Instance, Placement, Protection, RequestPlacement, SliceAssignment,
};

use super::Loading;

/// Places requests in seeded-random order; for each, facilities are scanned
/// in a fresh seeded-random order and the first latency/bandwidth/capacity
/// feasible (primary, backup) pair is taken. Both slices are reached through
/// the master base station. VNFs pack first-fit-decreasing onto activated
/// servers.
pub fn solve_baseline(inst: &Instance, _weights: &CostWeights, seed: u64) -> Placement {
    let mode = Connectivity::Single;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placement = Placement::empty(inst.requests.len(), mode, Protection::MecDisjoint);
    let mut state = Loading::new(inst);

    let mut order: Vec<usize> = (0..inst.requests.len()).collect();
    order.shuffle(&mut rng);

    for r in order {
        let bw = inst.requests[r].service.bandwidth_mbps;
        let master = inst.attachment(r, false, mode);
        let mut mecs: Vec<usize> = (0..inst.sites.len()).collect();
        mecs.shuffle(&mut rng);

        'pairs: for &a in &mecs {
            if !inst.latency_ok(r, master, a) || !state.bandwidth_fits(inst, a, bw) {
                continue;
            }
            let Some(primary_servers) = state.ffd_slice(inst, r, a, &[]) else {
                continue;
            };
            for &b in &mecs {
                if b == a || !inst.latency_ok(r, master, b) || !state.bandwidth_fits(inst, b, bw)
                {
                    continue;
                }
                let Some(backup_servers) = state.ffd_slice(inst, r, b, &[]) else {
                    continue;
                };
                state.place(inst, r, a, &primary_servers);
                state.place(inst, r, b, &backup_servers);
                placement.assignments[r] = Some(RequestPlacement {
                    primary: SliceAssignment { mec: a, servers: primary_servers },
                    backup: SliceAssignment { mec: b, servers: backup_servers },
                });
                break 'pairs;
            }
        }
    }
    placement
}
