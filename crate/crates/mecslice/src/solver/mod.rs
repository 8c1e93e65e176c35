//! Placement solvers: exact branch and bound, the genetic-algorithm
//! metaheuristic, and the greedy / NSP-proxy / baseline comparators.

pub mod baseline;
pub mod exact;
pub mod greedy;
pub mod mga;
pub mod nsp;
pub mod packing;

pub use baseline::solve_baseline;
pub use exact::{solve_exact, solve_exact_traced, ExactConfig, ExactOutcome, UnplaceableAction};
pub use greedy::solve_greedy;
pub use mga::{
    crossover, history_csv, mga_init, mutate, solve_mga, Chromosome, GaConfig, GenStats,
    MgaOutcome,
};
pub use nsp::solve_nsp_proxy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    cost_unchecked, Connectivity, CostBreakdown, CostWeights, Instance, MecId, Placement,
};

/// The placement methods exposed by the CLI and the experiment sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Branch-and-bound optimum under multi-connectivity.
    Exact,
    /// Branch-and-bound optimum under single connectivity.
    ExactSc,
    /// Genetic-algorithm metaheuristic (multi-connectivity).
    Mga,
    /// Latency-ordered greedy (multi-connectivity).
    Greedy,
    /// Dedicated-protection proxy: server-disjoint backup preferring the
    /// primary's facility (single connectivity).
    NspProxy,
    /// Random first-fit-decreasing (single connectivity).
    Baseline,
}

impl Method {
    pub fn all() -> [Method; 6] {
        [
            Method::Exact,
            Method::ExactSc,
            Method::Mga,
            Method::Greedy,
            Method::NspProxy,
            Method::Baseline,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ExactSc => "exact-sc",
            Method::Mga => "mga",
            Method::Greedy => "greedy",
            Method::NspProxy => "nsp-proxy",
            Method::Baseline => "baseline",
        }
    }

    /// Whether the method reaches the backup slice through the secondary
    /// base station.
    pub fn connectivity(&self) -> Connectivity {
        match self {
            Method::Exact | Method::Mga | Method::Greedy => Connectivity::Multi,
            Method::ExactSc | Method::NspProxy | Method::Baseline => Connectivity::Single,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Method::all().iter().map(|m| m.name()).collect();
                format!("unknown method \"{s}\" (known: {})", known.join(", "))
            })
    }
}

/// A solver run: the placement, its cost, and method-specific extras.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub method: Method,
    pub placement: Placement,
    pub cost: CostBreakdown,
    /// Requests no solver decision could place.
    pub rejected: Vec<usize>,
    /// Set by the exact solver: whether the result is provably optimal.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proven_optimal: Option<bool>,
    /// Set by the GA: per-generation (best, mean, worst) fitness.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub history: Option<Vec<GenStats>>,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("request {request} cannot be placed: {reason}")]
    Infeasible { request: usize, reason: String },
    #[error("no feasible initial population after {attempts} rebuild attempts")]
    InitExhausted { attempts: usize },
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
}

/// Runs `method` on `inst` and normalizes the outcome into a [`Solution`].
pub fn solve(
    method: Method,
    inst: &Instance,
    weights: &CostWeights,
    seed: u64,
    ga: &GaConfig,
    exact: &ExactConfig,
) -> Result<Solution, SolveError> {
    match method {
        Method::Exact | Method::ExactSc => {
            let cfg = ExactConfig {
                mode: method.connectivity(),
                ..exact.clone()
            };
            let out = solve_exact(inst, weights, &cfg)?;
            Ok(Solution {
                method,
                rejected: out.placement.rejected(),
                placement: out.placement,
                cost: out.cost,
                proven_optimal: Some(out.proven_optimal),
                history: None,
            })
        }
        Method::Mga => {
            let cfg = GaConfig { seed, ..ga.clone() };
            let out = solve_mga(inst, weights, &cfg)?;
            Ok(Solution {
                method,
                rejected: out.placement.rejected(),
                placement: out.placement,
                cost: out.cost,
                proven_optimal: None,
                history: Some(out.history),
            })
        }
        Method::Greedy => Ok(finish(method, solve_greedy(inst, weights), inst, weights)),
        Method::NspProxy => Ok(finish(method, solve_nsp_proxy(inst, weights), inst, weights)),
        Method::Baseline => Ok(finish(
            method,
            solve_baseline(inst, weights, seed),
            inst,
            weights,
        )),
    }
}

fn finish(method: Method, placement: Placement, inst: &Instance, weights: &CostWeights) -> Solution {
    let cost = cost_unchecked(&placement, inst, weights);
    Solution {
        method,
        rejected: placement.rejected(),
        placement,
        cost,
        proven_optimal: None,
        history: None,
    }
}

/// Facilities whose end-to-end delay from `attachment` fits the budget of
/// request `r`, in facility-id order.
pub(crate) fn reachable_mecs(
    inst: &Instance,
    r: usize,
    attachment: crate::topology::NodeId,
) -> Vec<MecId> {
    (0..inst.sites.len())
        .filter(|&m| inst.latency_ok(r, attachment, m))
        .collect()
}

/// Latency-feasible (primary, backup) facility pairs for request `r` under
/// the given connectivity, honoring anti-affinity, in (primary, backup) order.
pub(crate) fn candidate_pairs(
    inst: &Instance,
    r: usize,
    mode: Connectivity,
) -> Vec<(MecId, MecId)> {
    let primary_att = inst.attachment(r, false, mode);
    let backup_att = inst.attachment(r, true, mode);
    let primaries = reachable_mecs(inst, r, primary_att);
    let backups = reachable_mecs(inst, r, backup_att);
    let mut pairs = Vec::with_capacity(primaries.len() * backups.len());
    for &a in &primaries {
        for &b in &backups {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Reason string for a request with no latency-feasible facility pair.
pub(crate) fn infeasibility_reason(inst: &Instance, r: usize, mode: Connectivity) -> String {
    let primary_att = inst.attachment(r, false, mode);
    let backup_att = inst.attachment(r, true, mode);
    let primaries = reachable_mecs(inst, r, primary_att);
    let backups = reachable_mecs(inst, r, backup_att);
    if primaries.is_empty() {
        "no facility satisfies the primary latency budget (15)".to_string()
    } else if backups.is_empty() {
        "no facility satisfies the backup latency budget (16)".to_string()
    } else {
        "anti-affinity (14): no two distinct facilities satisfy both latency budgets".to_string()
    }
}

/// Mutable packing state shared by the constructive solvers: per-server
/// residual tracking plus facility bandwidth and slice counters.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Loading {
    /// vCPU load per `[mec][server]`.
    pub loads: Vec<Vec<u32>>,
    /// Admitted bandwidth per facility.
    pub bandwidth: Vec<f64>,
    /// Number of slices hosted per facility.
    pub slices: Vec<u32>,
}

impl Loading {
    pub fn new(inst: &Instance) -> Self {
        Loading {
            loads: inst
                .sites
                .iter()
                .map(|s| vec![0; s.server_count()])
                .collect(),
            bandwidth: vec![0.0; inst.sites.len()],
            slices: vec![0; inst.sites.len()],
        }
    }

    pub fn mec_active(&self, m: MecId) -> bool {
        self.slices[m] > 0
    }

    pub fn active_mecs(&self) -> usize {
        self.slices.iter().filter(|&&c| c > 0).count()
    }

    pub fn active_servers(&self, m: MecId) -> usize {
        self.loads[m].iter().filter(|&&l| l > 0).count()
    }

    pub fn total_active_servers(&self) -> usize {
        (0..self.loads.len()).map(|m| self.active_servers(m)).sum()
    }

    pub fn bandwidth_fits(&self, inst: &Instance, m: MecId, extra_mbps: f64) -> bool {
        self.bandwidth[m] + extra_mbps <= inst.sites[m].bandwidth_mbps + 1e-9
    }

    /// First-fit-decreasing of a slice's VNFs into facility `m`, reusing
    /// active servers first. Returns the per-VNF server assignment without
    /// mutating the state.
    pub fn ffd_slice(
        &self,
        inst: &Instance,
        r: usize,
        m: MecId,
        exclude: &[usize],
    ) -> Option<Vec<usize>> {
        let demands: Vec<u32> = inst.requests[r].vnfs.iter().map(|v| v.vcpus).collect();
        let site = &inst.sites[m];
        let free: Vec<u32> = (0..site.server_count())
            .map(|s| site.servers[s].vcpus.saturating_sub(self.loads[m][s]))
            .collect();
        let active: Vec<bool> = self.loads[m].iter().map(|&l| l > 0).collect();
        packing::ffd_fit(&demands, &free, &active, exclude)
    }

    /// Number of idle servers of `m` that `assignment` would newly activate.
    pub fn newly_opened(&self, m: MecId, assignment: &[usize]) -> usize {
        let mut opened: Vec<usize> = assignment
            .iter()
            .copied()
            .filter(|&s| self.loads[m][s] == 0)
            .collect();
        opened.sort_unstable();
        opened.dedup();
        opened.len()
    }

    /// Commits a slice of request `r` onto facility `m`.
    pub fn place(&mut self, inst: &Instance, r: usize, m: MecId, assignment: &[usize]) {
        for (v, &s) in assignment.iter().enumerate() {
            self.loads[m][s] += inst.requests[r].vnfs[v].vcpus;
        }
        self.bandwidth[m] += inst.requests[r].service.bandwidth_mbps;
        self.slices[m] += 1;
    }

    /// Removes a previously committed slice of request `r` from facility `m`.
    pub fn remove(&mut self, inst: &Instance, r: usize, m: MecId, assignment: &[usize]) {
        for (v, &s) in assignment.iter().enumerate() {
            self.loads[m][s] -= inst.requests[r].vnfs[v].vcpus;
        }
        self.bandwidth[m] -= inst.requests[r].service.bandwidth_mbps;
        self.slices[m] -= 1;
    }
}

/// Re-packs every facility's slices onto the fewest servers that hold them,
/// keeping each slice's facility choice. The facility and traffic costs
/// depend only on the per-request facility pairs, so this canonical
/// completion never raises the total cost; it undoes the fragmentation that
/// slice relocations leave behind.
pub(crate) fn repack_min_servers(placement: &mut Placement, inst: &Instance) {
    for m in 0..inst.sites.len() {
        // Slices hosted at m in (request, role) order.
        let mut slice_refs: Vec<(usize, bool)> = Vec::new();
        let mut demands: Vec<u32> = Vec::new();
        for (r, a) in placement.admitted() {
            for (slice, backup) in [(&a.primary, false), (&a.backup, true)] {
                if slice.mec == m {
                    slice_refs.push((r, backup));
                    demands.extend(inst.requests[r].vnfs.iter().map(|v| v.vcpus));
                }
            }
        }
        if demands.is_empty() {
            continue;
        }
        let caps: Vec<u32> = inst.sites[m].servers.iter().map(|s| s.vcpus).collect();
        let Ok(packing) = packing::min_servers(&demands, &caps) else {
            continue; // existing assignment already packs; keep it
        };
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
}

/// Requests ordered by ascending latency budget, ties by ascending bandwidth,
/// then id.
pub(crate) fn latency_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.requests.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = &inst.requests[a].service;
        let rb = &inst.requests[b].service;
        ra.max_delay_ms
            .partial_cmp(&rb.max_delay_ms)
            .unwrap()
            .then(ra.bandwidth_mbps.partial_cmp(&rb.bandwidth_mbps).unwrap())
            .then(a.cmp(&b))
    });
    order
}
