//! Exact placement by branch and bound over per-request facility pairs.
//!
//! The search assigns each request a (primary, backup) facility pair; server
//! assignment inside a facility only influences the server-activation cost,
//! so leaves are completed by exact minimal-server bin packing per facility.
//! This decomposition is lossless: forwarding cost depends only on the pair
//! choice, and facility/server costs only on each facility's slice content.

use crate::model::{
    Connectivity, CostBreakdown, CostWeights, Instance, MecId, Placement, Protection,
    RequestPlacement, SliceAssignment,
};

use super::greedy::solve_greedy_mode;
use super::packing::{min_servers, PackFailure};
use super::{candidate_pairs, infeasibility_reason, latency_order, SolveError};

/// What to do with a request whose candidate facility-pair set is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnplaceableAction {
    /// Fail the whole solve with an infeasibility report.
    Error,
    /// Leave the request unplaced and optimize the rest. Joint infeasibility
    /// of requests that do have candidates still fails the solve.
    Reject,
}

/// Exact solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactConfig {
    /// Connectivity model: multi (backup through the secondary base station)
    /// or single (both slices through the master).
    pub mode: Connectivity,
    /// Budget on branch-and-bound nodes; when exhausted the best incumbent is
    /// returned with `proven_optimal = false`.
    pub node_cap: u64,
    /// Optimality tolerance: subtrees that cannot improve the incumbent by
    /// more than this are pruned. Zero means exact.
    pub tolerance: f64,
    pub unplaceable: UnplaceableAction,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            mode: Connectivity::Multi,
            node_cap: 10_000_000,
            tolerance: 0.0,
            unplaceable: UnplaceableAction::Error,
        }
    }
}

/// Result of an exact solve.
#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub placement: Placement,
    pub cost: CostBreakdown,
    /// True when the search space was exhausted within the node budget and
    /// every leaf packing was provably minimal.
    pub proven_optimal: bool,
    pub nodes_explored: u64,
}

#[derive(Clone)]
struct Candidate {
    primary: MecId,
    backup: MecId,
    /// Forwarding term b^r * (d(att1, primary) + d(att2, backup)).
    forwarding: f64,
}

struct Search<'a> {
    inst: &'a Instance,
    node_cap: u64,
    tolerance: f64,
    /// Requests in placement order.
    order: Vec<usize>,
    /// Candidates per order position, sorted by (forwarding, primary, backup).
    candidates: Vec<Vec<Candidate>>,
    /// min_fw_suffix[pos] = sum over positions >= pos of the minimum
    /// forwarding among that position's candidates.
    min_fw_suffix: Vec<f64>,
    /// Per-facility server capacities sorted descending, prefix-summed.
    cap_prefix: Vec<Vec<u64>>,
    // Cost factors with the objective weights folded in.
    mec_factor: f64,
    server_factor: f64,
    traffic_factor: f64,
    // Mutable search state.
    chosen: Vec<(MecId, MecId)>,
    load: Vec<u64>,
    bandwidth: Vec<f64>,
    slices: Vec<u32>,
    forwarding_sum: f64,
    nodes: u64,
    capped: bool,
    packing_proven: bool,
    best_total: f64,
    best: Option<(Vec<(MecId, MecId)>, f64)>,
    verbose: bool,
}

impl<'a> Search<'a> {
    fn active_mecs(&self) -> usize {
        self.slices.iter().filter(|&&c| c > 0).count()
    }

    /// Fewest servers of facility `m` that can hold `load` vCPUs.
    fn server_lower_bound(&self, m: MecId, load: u64) -> usize {
        if load == 0 {
            return 0;
        }
        match self.cap_prefix[m].iter().position(|&acc| acc >= load) {
            Some(idx) => idx + 1,
            None => self.cap_prefix[m].len() + 1, // cannot fit; caller rejects
        }
    }

    fn lower_bound(&self, pos: usize) -> f64 {
        let mc = self.mec_factor * self.active_mecs() as f64;
        let sc: f64 = (0..self.inst.sites.len())
            .map(|m| self.server_lower_bound(m, self.load[m]) as f64)
            .sum::<f64>()
            * self.server_factor;
        let tc = self.traffic_factor * (self.forwarding_sum + self.min_fw_suffix[pos]);
        mc + sc + tc
    }

    fn dfs(&mut self, pos: usize) {
        if self.capped {
            return;
        }
        if pos == self.order.len() {
            self.evaluate_leaf();
            return;
        }
        let r = self.order[pos];
        let demand = self.inst.requests[r].vcpu_demand() as u64;
        let bw = self.inst.requests[r].service.bandwidth_mbps;
        for ci in 0..self.candidates[pos].len() {
            if self.capped {
                return;
            }
            let cand = self.candidates[pos][ci].clone();
            let (a, b) = (cand.primary, cand.backup);
            self.nodes += 1;
            if self.nodes > self.node_cap {
                self.capped = true;
                return;
            }
            // Bandwidth is exact; the vCPU check is a necessary condition
            // refined by exact packing at the leaf.
            let site_a = &self.inst.sites[a];
            let site_b = &self.inst.sites[b];
            if self.bandwidth[a] + bw > site_a.bandwidth_mbps + 1e-9
                || self.bandwidth[b] + bw > site_b.bandwidth_mbps + 1e-9
            {
                continue;
            }
            if self.load[a] + demand > *self.cap_prefix[a].last().unwrap_or(&0)
                || self.load[b] + demand > *self.cap_prefix[b].last().unwrap_or(&0)
            {
                continue;
            }

            self.chosen[pos] = (a, b);
            self.load[a] += demand;
            self.load[b] += demand;
            self.bandwidth[a] += bw;
            self.bandwidth[b] += bw;
            self.slices[a] += 1;
            self.slices[b] += 1;
            self.forwarding_sum += cand.forwarding;

            if self.lower_bound(pos + 1) < self.best_total - self.tolerance - 1e-9 {
                self.dfs(pos + 1);
            }

            self.forwarding_sum -= cand.forwarding;
            self.slices[a] -= 1;
            self.slices[b] -= 1;
            self.bandwidth[a] -= bw;
            self.bandwidth[b] -= bw;
            self.load[a] -= demand;
            self.load[b] -= demand;
        }
    }

    /// All pairs assigned: close the leaf with exact per-facility packing.
    fn evaluate_leaf(&mut self) {
        let mut servers_total = 0usize;
        for m in 0..self.inst.sites.len() {
            if self.slices[m] == 0 {
                continue;
            }
            let demands = self.facility_demands(m);
            let caps: Vec<u32> = self.inst.sites[m].servers.iter().map(|s| s.vcpus).collect();
            match min_servers(&demands, &caps) {
                Ok(packing) => {
                    servers_total += packing.servers_used;
                    if !packing.proven_minimal {
                        self.packing_proven = false;
                    }
                }
                // Fragmentation makes this leaf infeasible; an unresolved
                // packing search additionally voids the optimality proof.
                Err(PackFailure::Infeasible) => return,
                Err(PackFailure::Unknown) => {
                    self.packing_proven = false;
                    return;
                }
            }
        }
        let total = self.mec_factor * self.active_mecs() as f64
            + self.server_factor * servers_total as f64
            + self.traffic_factor * self.forwarding_sum;
        if total < self.best_total - 1e-9 {
            self.best_total = total;
            self.best = Some((self.chosen.clone(), total));
            if self.verbose {
                eprintln!(
                    "exact: node {} incumbent {:.3} ({} MECs, {} servers)",
                    self.nodes,
                    total,
                    self.active_mecs(),
                    servers_total
                );
            }
        }
    }

    /// Installs a complete pair assignment (e.g. the greedy seed), evaluates
    /// it as a leaf, and unwinds the state again.
    fn seed_incumbent(&mut self, pairs: &[(MecId, MecId)]) {
        for (pos, &(a, b)) in pairs.iter().enumerate() {
            let r = self.order[pos];
            let demand = self.inst.requests[r].vcpu_demand() as u64;
            let bw = self.inst.requests[r].service.bandwidth_mbps;
            self.chosen[pos] = (a, b);
            self.load[a] += demand;
            self.load[b] += demand;
            self.bandwidth[a] += bw;
            self.bandwidth[b] += bw;
            self.slices[a] += 1;
            self.slices[b] += 1;
            self.forwarding_sum += self.candidates[pos]
                .iter()
                .find(|c| c.primary == a && c.backup == b)
                .expect("seed pair is a known candidate")
                .forwarding;
        }
        self.evaluate_leaf();
        for (pos, &(a, b)) in pairs.iter().enumerate() {
            let r = self.order[pos];
            let demand = self.inst.requests[r].vcpu_demand() as u64;
            let bw = self.inst.requests[r].service.bandwidth_mbps;
            self.load[a] -= demand;
            self.load[b] -= demand;
            self.bandwidth[a] -= bw;
            self.bandwidth[b] -= bw;
            self.slices[a] -= 1;
            self.slices[b] -= 1;
        }
        self.forwarding_sum = 0.0;
    }

    /// vCPU demands of every VNF hosted by facility `m` under the current
    /// pair assignment, in (position, role, vnf) order.
    fn facility_demands(&self, m: MecId) -> Vec<u32> {
        let mut demands = Vec::new();
        for (pos, &(a, b)) in self.chosen.iter().enumerate() {
            let r = self.order[pos];
            for (slice_mec, _) in [(a, false), (b, true)] {
                if slice_mec == m {
                    demands.extend(self.inst.requests[r].vnfs.iter().map(|v| v.vcpus));
                }
            }
        }
        demands
    }
}

/// Computes a cost-minimal feasible placement, or reports which request makes
/// the instance infeasible.
///
/// Search order is deterministic (requests by latency budget, candidates by
/// forwarding cost), so ties among equal-cost optima resolve to the first
/// optimum encountered in that fixed order.
pub fn solve_exact(
    inst: &Instance,
    weights: &CostWeights,
    cfg: &ExactConfig,
) -> Result<ExactOutcome, SolveError> {
    solve_exact_traced(inst, weights, cfg, false)
}

/// [`solve_exact`] with an optional line-oriented trace of incumbent
/// progress on stderr.
pub fn solve_exact_traced(
    inst: &Instance,
    weights: &CostWeights,
    cfg: &ExactConfig,
    verbose: bool,
) -> Result<ExactOutcome, SolveError> {
    if cfg.node_cap == 0 {
        return Err(SolveError::BadConfig("node cap must be at least 1".into()));
    }
    let mut order = Vec::new();
    let mut candidates: Vec<Vec<Candidate>> = Vec::new();
    for r in latency_order(inst) {
        let primary_att = inst.attachment(r, false, cfg.mode);
        let backup_att = inst.attachment(r, true, cfg.mode);
        let bw = inst.requests[r].service.bandwidth_mbps;
        let mut cands: Vec<Candidate> = candidate_pairs(inst, r, cfg.mode)
            .into_iter()
            .map(|(a, b)| Candidate {
                primary: a,
                backup: b,
                forwarding: bw
                    * (inst.delay_to_site(primary_att, a) + inst.delay_to_site(backup_att, b)),
            })
            .collect();
        if cands.is_empty() {
            match cfg.unplaceable {
                UnplaceableAction::Error => {
                    return Err(SolveError::Infeasible {
                        request: r,
                        reason: infeasibility_reason(inst, r, cfg.mode),
                    })
                }
                UnplaceableAction::Reject => continue,
            }
        }
        cands.sort_by(|x, y| {
            x.forwarding
                .partial_cmp(&y.forwarding)
                .unwrap()
                .then(x.primary.cmp(&y.primary))
                .then(x.backup.cmp(&y.backup))
        });
        order.push(r);
        candidates.push(cands);
    }

    let mut min_fw_suffix = vec![0.0; order.len() + 1];
    for pos in (0..order.len()).rev() {
        let min_fw = candidates[pos]
            .iter()
            .map(|c| c.forwarding)
            .fold(f64::INFINITY, f64::min);
        min_fw_suffix[pos] = min_fw_suffix[pos + 1] + min_fw;
    }

    let cap_prefix: Vec<Vec<u64>> = inst
        .sites
        .iter()
        .map(|site| {
            let mut caps: Vec<u64> = site.servers.iter().map(|s| s.vcpus as u64).collect();
            caps.sort_unstable_by(|a, b| b.cmp(a));
            caps.iter()
                .scan(0u64, |acc, &c| {
                    *acc += c;
                    Some(*acc)
                })
                .collect()
        })
        .collect();

    // Seed the incumbent with the greedy pair assignment when greedy places
    // the whole admitted set; evaluate_leaf re-packs it exactly.
    let greedy = solve_greedy_mode(inst, weights, cfg.mode);
    let greedy_pairs: Option<Vec<(MecId, MecId)>> = order
        .iter()
        .all(|&r| greedy.assignments[r].is_some())
        .then(|| {
            order
                .iter()
                .map(|&r| {
                    let a = greedy.assignments[r].as_ref().unwrap();
                    (a.primary.mec, a.backup.mec)
                })
                .collect()
        });

    let mut search = Search {
        inst,
        node_cap: cfg.node_cap,
        tolerance: cfg.tolerance,
        candidates,
        min_fw_suffix,
        cap_prefix,
        mec_factor: weights.alpha_mec * weights.mec_cost,
        server_factor: weights.alpha_server * weights.server_cost,
        traffic_factor: weights.alpha_traffic * weights.traffic_cost,
        chosen: vec![(0, 0); order.len()],
        load: vec![0; inst.sites.len()],
        bandwidth: vec![0.0; inst.sites.len()],
        slices: vec![0; inst.sites.len()],
        forwarding_sum: 0.0,
        nodes: 0,
        capped: false,
        packing_proven: true,
        best_total: f64::INFINITY,
        best: None,
        order,
        verbose,
    };
    if let Some(pairs) = &greedy_pairs {
        search.seed_incumbent(pairs);
    }
    search.dfs(0);

    let Some((pairs, _)) = search.best.take() else {
        return Err(SolveError::Infeasible {
            request: search.order[0],
            reason: if search.capped {
                format!(
                    "node budget of {} exhausted before any feasible placement",
                    cfg.node_cap
                )
            } else {
                "every candidate pair violates server capacity (11) or facility \
                 bandwidth (19) jointly with the other requests"
                    .to_string()
            },
        });
    };

    let placement = decode(inst, cfg.mode, &search.order, &pairs)?;
    let cost = crate::model::cost_unchecked(&placement, inst, weights);
    Ok(ExactOutcome {
        placement,
        cost,
        proven_optimal: !search.capped && search.packing_proven,
        nodes_explored: search.nodes,
    })
}

/// Materializes a pair assignment into a full placement by running the exact
/// packer per facility and distributing the server assignments back to the
/// slices.
fn decode(
    inst: &Instance,
    mode: Connectivity,
    order: &[usize],
    pairs: &[(MecId, MecId)],
) -> Result<Placement, SolveError> {
    let mut placement = Placement::empty(inst.requests.len(), mode, Protection::MecDisjoint);
    for (pos, &(a, b)) in pairs.iter().enumerate() {
        let r = order[pos];
        placement.assignments[r] = Some(RequestPlacement {
            primary: SliceAssignment { mec: a, servers: Vec::new() },
            backup: SliceAssignment { mec: b, servers: Vec::new() },
        });
    }

    for m in 0..inst.sites.len() {
        // Slices hosted at m in deterministic (position, role) order.
        let mut slice_refs: Vec<(usize, bool)> = Vec::new();
        let mut demands: Vec<u32> = Vec::new();
        for (pos, &(a, b)) in pairs.iter().enumerate() {
            let r = order[pos];
            for (slice_mec, backup) in [(a, false), (b, true)] {
                if slice_mec == m {
                    slice_refs.push((r, backup));
                    demands.extend(inst.requests[r].vnfs.iter().map(|v| v.vcpus));
                }
            }
        }
        if demands.is_empty() {
            continue;
        }
        let caps: Vec<u32> = inst.sites[m].servers.iter().map(|s| s.vcpus).collect();
        let packing = min_servers(&demands, &caps).map_err(|_| SolveError::Infeasible {
            request: slice_refs[0].0,
            reason: format!("facility {m} cannot pack the assigned slices"),
        })?;
        let mut item = 0usize;
        for &(r, backup) in &slice_refs {
            let vnfs = inst.requests[r].vnfs.len();
            let servers = packing.assignment[item..item + vnfs].to_vec();
            item += vnfs;
            let assignment = placement.assignments[r].as_mut().unwrap();
            if backup {
                assignment.backup.servers = servers;
            } else {
                assignment.primary.servers = servers;
            }
        }
    }
    Ok(placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_feasibility;
    use crate::solver::testutil::germany_instance;

    #[test]
    fn single_request_matches_hand_enumeration() {
        let inst = germany_instance(1, 2, 3);
        let w = CostWeights::default();
        let out = solve_exact(&inst, &w, &ExactConfig::default()).unwrap();
        assert!(out.proven_optimal);
        assert!(check_feasibility(&out.placement, &inst).is_empty());

        // Hand enumeration: two facilities and two servers always open; only
        // the forwarding term varies over candidate pairs.
        let r = &inst.requests[0];
        let mut best = f64::INFINITY;
        for a in 0..inst.sites.len() {
            for b in 0..inst.sites.len() {
                if a == b
                    || !inst.latency_ok(0, r.master, a)
                    || !inst.latency_ok(0, r.secondary, b)
                {
                    continue;
                }
                let fw = r.service.bandwidth_mbps
                    * (inst.delay_to_site(r.master, a) + inst.delay_to_site(r.secondary, b));
                best = best.min(200.0 + 20.0 + fw);
            }
        }
        assert!((out.cost.total - best).abs() < 1e-9);
    }

    #[test]
    fn greedy_equals_exact_on_single_request() {
        for seed in 0..10 {
            let inst = germany_instance(1, seed, 7);
            let w = CostWeights::default();
            let exact = solve_exact(&inst, &w, &ExactConfig::default()).unwrap();
            let greedy = crate::solver::solve_greedy(&inst, &w);
            let gc = crate::model::cost_unchecked(&greedy, &inst, &w);
            assert!(
                (exact.cost.total - gc.total).abs() < 1e-9,
                "seed {seed}: exact {} vs greedy {}",
                exact.cost.total,
                gc.total
            );
        }
    }

    #[test]
    fn colocation_beats_spreading_when_capacity_allows() {
        // Two requests with a shared candidate pair: the optimum are two
        // facilities total, not four.
        let mut inst = germany_instance(1, 5, 7);
        let mut second = inst.requests[0].clone();
        second.id = 1;
        inst.requests.push(second);
        let out = solve_exact(&inst, &CostWeights::default(), &ExactConfig::default()).unwrap();
        assert!(out.proven_optimal);
        assert_eq!(out.placement.mecs_activated(inst.sites.len()), 2);
    }

    #[test]
    fn infeasible_request_is_named() {
        let mut inst = germany_instance(3, 4, 7);
        inst.requests[1].service.max_delay_ms = 1e-6;
        match solve_exact(&inst, &CostWeights::default(), &ExactConfig::default()) {
            Err(SolveError::Infeasible { request, reason }) => {
                assert_eq!(request, 1);
                assert!(reason.contains("(15)"), "reason: {reason}");
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn node_cap_degrades_to_unproven() {
        let inst = germany_instance(6, 9, 7);
        let w = CostWeights::default();
        let full = solve_exact(&inst, &w, &ExactConfig::default()).unwrap();
        assert!(full.proven_optimal);
        let capped = solve_exact(
            &inst,
            &w,
            &ExactConfig { node_cap: 3, ..ExactConfig::default() },
        )
        .unwrap();
        assert!(!capped.proven_optimal);
        // The capped run still returns a feasible placement (the greedy seed
        // or better).
        assert!(check_feasibility(&capped.placement, &inst).is_empty());
        assert!(capped.cost.total >= full.cost.total - 1e-9);
    }

    #[test]
    fn cost_invariant_under_request_reordering() {
        let inst = germany_instance(4, 12, 5);
        let w = CostWeights::default();
        let base = solve_exact(&inst, &w, &ExactConfig::default()).unwrap();

        let mut reordered = inst.clone();
        reordered.requests.reverse();
        for (i, r) in reordered.requests.iter_mut().enumerate() {
            r.id = i;
        }
        let flipped = solve_exact(&reordered, &w, &ExactConfig::default()).unwrap();
        assert!((base.cost.total - flipped.cost.total).abs() < 1e-9);
    }

    #[test]
    fn cost_scales_linearly_with_weights() {
        let inst = germany_instance(3, 33, 5);
        let w = CostWeights::default();
        let base = solve_exact(&inst, &w, &ExactConfig::default()).unwrap();
        let scaled_weights = CostWeights {
            mec_cost: w.mec_cost * 3.0,
            server_cost: w.server_cost * 3.0,
            traffic_cost: w.traffic_cost * 3.0,
            ..w
        };
        let scaled = solve_exact(&inst, &scaled_weights, &ExactConfig::default()).unwrap();
        assert!((scaled.cost.total - 3.0 * base.cost.total).abs() < 1e-6);
        assert_eq!(scaled.placement, base.placement);
    }
}
