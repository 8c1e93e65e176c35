//! Greedy placement: latency-critical requests first, each taking the
//! facility pair with the lowest marginal cost.

use crate::model::{Connectivity, CostWeights, Instance, Placement, Protection, RequestPlacement, SliceAssignment};

use super::{candidate_pairs, latency_order, Loading};

/// Places requests in ascending order of latency budget. Each request takes
/// the latency-feasible (primary, backup) facility pair that minimizes its
/// marginal cost given the already-activated facilities and servers; VNFs are
/// packed first-fit-decreasing onto active servers before new ones open.
/// Requests with no feasible pair are left unplaced.
pub fn solve_greedy(inst: &Instance, weights: &CostWeights) -> Placement {
    solve_greedy_mode(inst, weights, Connectivity::Multi)
}

/// Greedy under an explicit connectivity mode. The exact solver uses the
/// single-connectivity variant to seed its incumbent.
pub(crate) fn solve_greedy_mode(
    inst: &Instance,
    weights: &CostWeights,
    mode: Connectivity,
) -> Placement {
    let mut placement = Placement::empty(inst.requests.len(), mode, Protection::MecDisjoint);
    let mut state = Loading::new(inst);

    for r in latency_order(inst) {
        let bw = inst.requests[r].service.bandwidth_mbps;
        let primary_att = inst.attachment(r, false, mode);
        let backup_att = inst.attachment(r, true, mode);

        let mut best: Option<(f64, RequestPlacement)> = None;
        for (a, b) in candidate_pairs(inst, r, mode) {
            if !state.bandwidth_fits(inst, a, bw) || !state.bandwidth_fits(inst, b, bw) {
                continue;
            }
            // Primary and backup land on distinct facilities, so the two
            // packings are independent.
            let Some(primary_servers) = state.ffd_slice(inst, r, a, &[]) else {
                continue;
            };
            let Some(backup_servers) = state.ffd_slice(inst, r, b, &[]) else {
                continue;
            };
            let new_mecs =
                usize::from(!state.mec_active(a)) + usize::from(!state.mec_active(b));
            let new_servers = state.newly_opened(a, &primary_servers)
                + state.newly_opened(b, &backup_servers);
            let forwarding = bw
                * (inst.delay_to_site(primary_att, a) + inst.delay_to_site(backup_att, b));
            let marginal = weights.alpha_mec * weights.mec_cost * new_mecs as f64
                + weights.alpha_server * weights.server_cost * new_servers as f64
                + weights.alpha_traffic * weights.traffic_cost * forwarding;
            if best.as_ref().is_none_or(|(c, _)| marginal < c - 1e-12) {
                best = Some((
                    marginal,
                    RequestPlacement {
                        primary: SliceAssignment { mec: a, servers: primary_servers },
                        backup: SliceAssignment { mec: b, servers: backup_servers },
                    },
                ));
            }
        }

        if let Some((_, chosen)) = best {
            state.place(inst, r, chosen.primary.mec, &chosen.primary.servers);
            state.place(inst, r, chosen.backup.mec, &chosen.backup.servers);
            placement.assignments[r] = Some(chosen);
        }
    }
    placement
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_feasibility, generate_requests, MecSite};
    use crate::topology::{all_pairs_delay, parse_sndlib, select_mec_sites_with};

    pub(crate) fn germany_instance(n_requests: usize, seed: u64, k: usize) -> Instance {
        let net = parse_sndlib(include_str!("../../data/germany50.txt")).unwrap();
        let delays = all_pairs_delay(&net).unwrap();
        let hosts = select_mec_sites_with(&net, &delays, k, seed).unwrap();
        let sites = hosts.into_iter().map(MecSite::standard).collect();
        let requests = generate_requests(n_requests, &delays, seed);
        Instance::new(net, delays, sites, requests)
    }

    #[test]
    fn greedy_output_is_feasible() {
        let inst = germany_instance(20, 4, 7);
        let p = solve_greedy(&inst, &CostWeights::default());
        assert!(check_feasibility(&p, &inst).is_empty());
        assert!(p.rejected().is_empty(), "rejected: {:?}", p.rejected());
    }

    #[test]
    fn second_request_reuses_activated_resources() {
        // Two identical small requests sharing master/secondary: the second
        // one must not open any new facility or server.
        let mut inst = germany_instance(1, 11, 5);
        let mut clone = inst.requests[0].clone();
        clone.id = 1;
        inst.requests.push(clone);
        let p = solve_greedy(&inst, &CostWeights::default());
        let a0 = p.assignments[0].clone().unwrap();
        let a1 = p.assignments[1].clone().unwrap();
        assert_eq!(a0.primary.mec, a1.primary.mec);
        assert_eq!(a0.backup.mec, a1.backup.mec);
        assert_eq!(p.mecs_activated(inst.sites.len()), 2);
    }

    #[test]
    fn unreachable_request_is_rejected_and_solve_continues() {
        let mut inst = germany_instance(2, 8, 7);
        // Shrink one request's budget below any reachable facility.
        inst.requests[0].service.max_delay_ms = 1e-6;
        let p = solve_greedy(&inst, &CostWeights::default());
        assert_eq!(p.rejected(), vec![0]);
        assert!(p.assignments[1].is_some());
    }

    #[test]
    fn greedy_is_deterministic() {
        let inst = germany_instance(15, 21, 7);
        let w = CostWeights::default();
        assert_eq!(solve_greedy(&inst, &w), solve_greedy(&inst, &w));
    }

    #[test]
    fn sc_variant_reaches_backup_through_master() {
        let inst = germany_instance(10, 3, 7);
        let p = solve_greedy_mode(&inst, &CostWeights::default(), Connectivity::Single);
        assert_eq!(p.mode, Connectivity::Single);
        assert!(check_feasibility(&p, &inst).is_empty());
        for (r, a) in p.admitted() {
            let master = inst.requests[r].master;
            assert!(inst.latency_ok(r, master, a.backup.mec));
        }
    }

    #[test]
    fn hand_traced_two_site_choice() {
        // Single request on a tiny instance: the cheapest pair is the two
        // nearest facilities with primary at the nearest.
        let inst = germany_instance(1, 2, 7);
        let p = solve_greedy(&inst, &CostWeights::default());
        let a = p.assignments[0].clone().unwrap();
        let r = 0;
        let (n1, n2) = (inst.requests[0].master, inst.requests[0].secondary);
        // No cheaper feasible pair exists.
        let chosen_fw = inst.delay_to_site(n1, a.primary.mec) + inst.delay_to_site(n2, a.backup.mec);
        for (x, y) in super::super::candidate_pairs(&inst, r, Connectivity::Multi) {
            let fw = inst.delay_to_site(n1, x) + inst.delay_to_site(n2, y);
            assert!(chosen_fw <= fw + 1e-12, "pair ({x},{y}) is cheaper");
        }
    }
}
