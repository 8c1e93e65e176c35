//! Service availability under server and facility failures.
//!
//! A failure scenario knocks out `k` servers of one target facility. A
//! request stays available while at least one of its slices has every VNF on
//! a surviving server. The three backup modes mirror the protection designs:
//! no backup at all, onsite backup on disjoint servers of the primary's
//! facility, and the inter-facility backup the anti-affinity constraint
//! yields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, MecId, Placement};

/// How backups are treated during the failure evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackupMode {
    /// Strip backups: only primary slices count.
    None,
    /// Relocate every backup into its primary's facility on disjoint servers
    /// before evaluating.
    Onsite,
    /// Relocate every backup onto the very servers of its primary slice.
    /// Such a backup covers VNF faults but no server failure, so under this
    /// model it protects nothing.
    OnsiteSameServer,
    /// Evaluate the placement as deployed.
    InterMec,
}

impl BackupMode {
    pub fn name(&self) -> &'static str {
        match self {
            BackupMode::None => "none",
            BackupMode::Onsite => "onsite",
            BackupMode::OnsiteSameServer => "onsite-same-server",
            BackupMode::InterMec => "inter-mec",
        }
    }
}

/// How many servers of the target facility fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureExtent {
    Servers(usize),
    WholeFacility,
}

/// One failure scenario: `k` uniformly chosen servers (or the whole facility)
/// fail within the target facility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureScenario {
    pub mec: MecId,
    pub extent: FailureExtent,
    pub backup: BackupMode,
}

/// Availability estimate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvailabilityReport {
    /// Mean fraction of placed requests still served.
    pub availability: f64,
    /// True when every failure subset was enumerated instead of sampled.
    pub exhaustive: bool,
    /// Evaluated failure subsets (samples, or the full count).
    pub evaluations: u64,
    /// Requests whose backup could not be relocated onsite; they are
    /// evaluated on their primary slice alone.
    pub relocation_failures: Vec<usize>,
}

/// Exhaustive enumeration is selected when C(servers, k) stays below this.
const EXHAUSTIVE_LIMIT: u64 = 50_000;

/// Evaluates a failure scenario, enumerating all failure subsets when there
/// are at most 50,000 of them and falling back to seeded Monte Carlo with
/// `trials` samples otherwise.
pub fn availability(
    placement: &Placement,
    inst: &Instance,
    scenario: &FailureScenario,
    trials: u64,
    seed: u64,
) -> AvailabilityReport {
    let servers = inst.sites[scenario.mec].server_count();
    let k = failed_count(scenario, servers);
    if binomial(servers, k) <= EXHAUSTIVE_LIMIT {
        availability_exhaustive(placement, inst, scenario)
    } else {
        availability_monte_carlo(placement, inst, scenario, trials, seed)
    }
}

/// Exact availability: averages over every k-subset of failed servers.
pub fn availability_exhaustive(
    placement: &Placement,
    inst: &Instance,
    scenario: &FailureScenario,
) -> AvailabilityReport {
    let (slices, relocation_failures) = effective_slices(placement, inst, scenario.backup);
    let servers = inst.sites[scenario.mec].server_count();
    let k = failed_count(scenario, servers);

    let mut failed: Vec<usize> = (0..k).collect();
    let mut sum = 0.0;
    let mut count = 0u64;
    loop {
        sum += fraction_available(&slices, scenario.mec, &failed);
        count += 1;
        if !next_combination(&mut failed, servers) {
            break;
        }
    }
    AvailabilityReport {
        availability: if count > 0 { sum / count as f64 } else { 1.0 },
        exhaustive: true,
        evaluations: count,
        relocation_failures,
    }
}

/// Sampled availability: `trials` uniformly drawn k-subsets of failed
/// servers. Each trial derives its own RNG stream from (seed, trial), so the
/// estimate does not depend on evaluation order.
pub fn availability_monte_carlo(
    placement: &Placement,
    inst: &Instance,
    scenario: &FailureScenario,
    trials: u64,
    seed: u64,
) -> AvailabilityReport {
    let (slices, relocation_failures) = effective_slices(placement, inst, scenario.backup);
    let servers = inst.sites[scenario.mec].server_count();
    let k = failed_count(scenario, servers);

    let mut sum = 0.0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial.wrapping_add(1));
        let failed = sample_subset(servers, k, &mut rng);
        sum += fraction_available(&slices, scenario.mec, &failed);
    }
    AvailabilityReport {
        availability: if trials > 0 { sum / trials as f64 } else { 1.0 },
        exhaustive: false,
        evaluations: trials,
        relocation_failures,
    }
}

fn failed_count(scenario: &FailureScenario, servers: usize) -> usize {
    match scenario.extent {
        FailureExtent::Servers(k) => k.min(servers),
        FailureExtent::WholeFacility => servers,
    }
}

/// Slices of one request as (facility, server set) pairs.
type RequestSlices = Vec<(MecId, Vec<usize>)>;

/// Per-request slices that participate in the evaluation. Rejected requests
/// are skipped: availability is the fraction of *placed* requests still
/// served.
fn effective_slices(
    placement: &Placement,
    inst: &Instance,
    mode: BackupMode,
) -> (Vec<RequestSlices>, Vec<usize>) {
    let mut relocation_failures = Vec::new();
    let mut slices: Vec<RequestSlices> = Vec::new();
    match mode {
        BackupMode::None => {
            for (_, a) in placement.admitted() {
                slices.push(vec![(a.primary.mec, a.primary.servers.clone())]);
            }
        }
        BackupMode::OnsiteSameServer => {
            // Mirrored backups share the primary's servers, so each server
            // must hold both copies.
            let mut free: Vec<Vec<u32>> = inst
                .sites
                .iter()
                .map(|site| site.servers.iter().map(|s| s.vcpus).collect())
                .collect();
            for (r, a) in placement.admitted() {
                for (v, &s) in a.primary.servers.iter().enumerate() {
                    free[a.primary.mec][s] =
                        free[a.primary.mec][s].saturating_sub(inst.requests[r].vnfs[v].vcpus);
                }
            }
            for (r, a) in placement.admitted() {
                let m = a.primary.mec;
                let mut scratch = free[m].clone();
                let fits = a.primary.servers.iter().enumerate().all(|(v, &s)| {
                    let demand = inst.requests[r].vnfs[v].vcpus;
                    if scratch[s] >= demand {
                        scratch[s] -= demand;
                        true
                    } else {
                        false
                    }
                });
                if fits {
                    free[m] = scratch;
                    slices.push(vec![
                        (m, a.primary.servers.clone()),
                        (m, a.primary.servers.clone()),
                    ]);
                } else {
                    relocation_failures.push(r);
                    slices.push(vec![(m, a.primary.servers.clone())]);
                }
            }
        }
        BackupMode::InterMec => {
            for (_, a) in placement.admitted() {
                slices.push(vec![
                    (a.primary.mec, a.primary.servers.clone()),
                    (a.backup.mec, a.backup.servers.clone()),
                ]);
            }
        }
        BackupMode::Onsite => {
            // Rebuild per-server loads with primaries only, then relocate
            // each backup into its primary's facility on servers disjoint
            // from that request's primary servers.
            let mut free: Vec<Vec<u32>> = inst
                .sites
                .iter()
                .map(|site| site.servers.iter().map(|s| s.vcpus).collect())
                .collect();
            for (r, a) in placement.admitted() {
                for (v, &s) in a.primary.servers.iter().enumerate() {
                    free[a.primary.mec][s] =
                        free[a.primary.mec][s].saturating_sub(inst.requests[r].vnfs[v].vcpus);
                }
            }
            for (r, a) in placement.admitted() {
                let m = a.primary.mec;
                let demands: Vec<u32> =
                    inst.requests[r].vnfs.iter().map(|v| v.vcpus).collect();
                let active: Vec<bool> = free[m]
                    .iter()
                    .zip(&inst.sites[m].servers)
                    .map(|(&f, s)| f < s.vcpus)
                    .collect();
                match crate::solver::packing::ffd_fit(
                    &demands,
                    &free[m],
                    &active,
                    &a.primary.servers,
                ) {
                    Some(assignment) => {
                        for (v, &s) in assignment.iter().enumerate() {
                            free[m][s] -= demands[v];
                        }
                        slices.push(vec![
                            (m, a.primary.servers.clone()),
                            (m, assignment),
                        ]);
                    }
                    None => {
                        relocation_failures.push(r);
                        slices.push(vec![(m, a.primary.servers.clone())]);
                    }
                }
            }
        }
    }
    (slices, relocation_failures)
}

fn fraction_available(
    slices: &[RequestSlices],
    target: MecId,
    failed: &[usize],
) -> f64 {
    if slices.is_empty() {
        return 1.0;
    }
    let available = slices
        .iter()
        .filter(|request| {
            request.iter().any(|(mec, servers)| {
                *mec != target || servers.iter().all(|s| !failed.contains(s))
            })
        })
        .count();
    available as f64 / slices.len() as f64
}

/// Advances `combo` (a sorted k-subset of 0..n) to the next combination in
/// lexicographic order; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn sample_subset(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut result: u64 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u64) / (i + 1) as u64;
    }
    result
}
