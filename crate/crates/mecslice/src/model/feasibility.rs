//! Constraint checker. Violations are data, not failures: the checker
//! collects every broken constraint instead of failing fast.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Instance, MecId, Placement, Protection};

/// One broken constraint, tagged with the entities involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// Server vCPU load exceeds its capacity.
    ServerCapacity {
        mec: MecId,
        server: usize,
        load: u32,
        capacity: u32,
    },
    /// A request is not served by exactly one primary facility.
    PrimaryCount { request: usize, count: usize },
    /// A request is not served by exactly one backup facility.
    BackupCount { request: usize, count: usize },
    /// Primary and backup slices of a request share a facility.
    AntiAffinity { request: usize, mec: MecId },
    /// Primary slice end-to-end delay exceeds the service budget.
    PrimaryDelay {
        request: usize,
        delay_ms: f64,
        budget_ms: f64,
    },
    /// Backup slice end-to-end delay exceeds the service budget.
    BackupDelay {
        request: usize,
        delay_ms: f64,
        budget_ms: f64,
    },
    /// A primary-slice VNF is not mapped to exactly one server inside the
    /// slice's facility.
    PrimaryVnfMapping { request: usize, vnf: usize },
    /// A backup-slice VNF is not mapped to exactly one server inside the
    /// slice's facility.
    BackupVnfMapping { request: usize, vnf: usize },
    /// Admitted bandwidth at a facility exceeds its capacity.
    Bandwidth {
        mec: MecId,
        load_mbps: f64,
        capacity_mbps: f64,
    },
    /// A facility has active servers without being marked as used.
    FacilityActivation { mec: MecId },
    /// Primary and backup slices of a request share a server (only checked
    /// under server-disjoint protection).
    SliceOverlap {
        request: usize,
        mec: MecId,
        server: usize,
    },
}

impl Violation {
    /// The number of the constraint in the placement model, for reporting.
    pub fn constraint(&self) -> u8 {
        match self {
            Violation::ServerCapacity { .. } => 11,
            Violation::PrimaryCount { .. } => 12,
            Violation::BackupCount { .. } => 13,
            Violation::AntiAffinity { .. } => 14,
            Violation::SliceOverlap { .. } => 14,
            Violation::PrimaryDelay { .. } => 15,
            Violation::BackupDelay { .. } => 16,
            Violation::PrimaryVnfMapping { .. } => 17,
            Violation::BackupVnfMapping { .. } => 18,
            Violation::Bandwidth { .. } => 19,
            Violation::FacilityActivation { .. } => 20,
        }
    }

    /// Canonical sort key used to compare violation sets.
    pub fn key(&self) -> (u8, usize, usize, usize) {
        match *self {
            Violation::ServerCapacity { mec, server, .. } => (11, mec, server, 0),
            Violation::PrimaryCount { request, .. } => (12, request, 0, 0),
            Violation::BackupCount { request, .. } => (13, request, 0, 0),
            Violation::AntiAffinity { request, mec } => (14, request, mec, 0),
            Violation::SliceOverlap { request, mec, server } => (14, request, mec, server + 1),
            Violation::PrimaryDelay { request, .. } => (15, request, 0, 0),
            Violation::BackupDelay { request, .. } => (16, request, 0, 0),
            Violation::PrimaryVnfMapping { request, vnf } => (17, request, vnf, 0),
            Violation::BackupVnfMapping { request, vnf } => (18, request, vnf, 0),
            Violation::Bandwidth { mec, .. } => (19, mec, 0, 0),
            Violation::FacilityActivation { mec } => (20, mec, 0, 0),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ServerCapacity { mec, server, load, capacity } => write!(
                f,
                "(11) server {server} of MEC {mec} loaded {load}/{capacity} vCPUs"
            ),
            Violation::PrimaryCount { request, count } => {
                write!(f, "(12) request {request} has {count} primary facilities")
            }
            Violation::BackupCount { request, count } => {
                write!(f, "(13) request {request} has {count} backup facilities")
            }
            Violation::AntiAffinity { request, mec } => write!(
                f,
                "(14) request {request}: primary and backup share MEC {mec}"
            ),
            Violation::SliceOverlap { request, mec, server } => write!(
                f,
                "(14) request {request}: slices share server {server} of MEC {mec}"
            ),
            Violation::PrimaryDelay { request, delay_ms, budget_ms } => write!(
                f,
                "(15) request {request}: primary delay {delay_ms:.3} ms > {budget_ms:.3} ms"
            ),
            Violation::BackupDelay { request, delay_ms, budget_ms } => write!(
                f,
                "(16) request {request}: backup delay {delay_ms:.3} ms > {budget_ms:.3} ms"
            ),
            Violation::PrimaryVnfMapping { request, vnf } => write!(
                f,
                "(17) request {request}: primary VNF {vnf} not on one in-facility server"
            ),
            Violation::BackupVnfMapping { request, vnf } => write!(
                f,
                "(18) request {request}: backup VNF {vnf} not on one in-facility server"
            ),
            Violation::Bandwidth { mec, load_mbps, capacity_mbps } => write!(
                f,
                "(19) MEC {mec} bandwidth {load_mbps:.1}/{capacity_mbps:.1} Mbps"
            ),
            Violation::FacilityActivation { mec } => {
                write!(f, "(20) MEC {mec} has active servers but is not marked used")
            }
        }
    }
}

const DELAY_TOLERANCE_MS: f64 = 1e-12;

/// Checks a placement against the full constraint set and returns every
/// violation found. Rejected requests are reported separately by solvers and
/// are not constraint violations.
///
/// Anti-affinity is enforced at facility granularity for
/// [`Protection::MecDisjoint`] placements and at server granularity for
/// [`Protection::ServerDisjoint`] ones.
pub fn check_feasibility(placement: &Placement, inst: &Instance) -> Vec<Violation> {
    let mut violations = Vec::new();
    let site_count = inst.sites.len();

    for (r, a) in placement.admitted() {
        let req = &inst.requests[r];

        // (12), (13): exactly one facility per slice. Out-of-range facility
        // ids count as zero valid facilities.
        let primary_count = usize::from(a.primary.mec < site_count);
        if primary_count != 1 {
            violations.push(Violation::PrimaryCount { request: r, count: primary_count });
        }
        let backup_count = usize::from(a.backup.mec < site_count);
        if backup_count != 1 {
            violations.push(Violation::BackupCount { request: r, count: backup_count });
        }
        if primary_count != 1 || backup_count != 1 {
            continue;
        }

        // (14): anti-affinity, or server-disjointness for dedicated
        // protection placements.
        match placement.protection {
            Protection::MecDisjoint => {
                if a.primary.mec == a.backup.mec {
                    violations.push(Violation::AntiAffinity { request: r, mec: a.primary.mec });
                }
            }
            Protection::ServerDisjoint => {
                if a.primary.mec == a.backup.mec {
                    let count = inst.sites[a.primary.mec].server_count();
                    let mut shared: Vec<usize> = a
                        .primary
                        .servers
                        .iter()
                        .filter(|&&s| s < count && a.backup.servers.contains(&s))
                        .copied()
                        .collect();
                    shared.sort_unstable();
                    shared.dedup();
                    for server in shared {
                        violations.push(Violation::SliceOverlap {
                            request: r,
                            mec: a.primary.mec,
                            server,
                        });
                    }
                }
            }
        }

        // (15), (16): end-to-end latency for both slices.
        let budget = req.service.max_delay_ms;
        let primary_att = inst.attachment(r, false, placement.mode);
        let primary_delay = inst.e2e_delay(r, primary_att, a.primary.mec);
        if primary_delay > budget + DELAY_TOLERANCE_MS {
            violations.push(Violation::PrimaryDelay {
                request: r,
                delay_ms: primary_delay,
                budget_ms: budget,
            });
        }
        let backup_att = inst.attachment(r, true, placement.mode);
        let backup_delay = inst.e2e_delay(r, backup_att, a.backup.mec);
        if backup_delay > budget + DELAY_TOLERANCE_MS {
            violations.push(Violation::BackupDelay {
                request: r,
                delay_ms: backup_delay,
                budget_ms: budget,
            });
        }

        // (17), (18): every VNF on exactly one in-facility server.
        for v in 0..req.vnfs.len() {
            let ok = a
                .primary
                .servers
                .get(v)
                .is_some_and(|&s| s < inst.sites[a.primary.mec].server_count());
            if !ok {
                violations.push(Violation::PrimaryVnfMapping { request: r, vnf: v });
            }
            let ok = a
                .backup
                .servers
                .get(v)
                .is_some_and(|&s| s < inst.sites[a.backup.mec].server_count());
            if !ok {
                violations.push(Violation::BackupVnfMapping { request: r, vnf: v });
            }
        }
    }

    // (11): per-server capacity.
    let loads = placement.server_loads(inst);
    for (m, site) in inst.sites.iter().enumerate() {
        for (s, server) in site.servers.iter().enumerate() {
            if loads[m][s] > server.vcpus {
                violations.push(Violation::ServerCapacity {
                    mec: m,
                    server: s,
                    load: loads[m][s],
                    capacity: server.vcpus,
                });
            }
        }
    }

    // (19): facility bandwidth.
    let bw = placement.bandwidth_loads(inst);
    for (m, site) in inst.sites.iter().enumerate() {
        if bw[m] > site.bandwidth_mbps + 1e-9 {
            violations.push(Violation::Bandwidth {
                mec: m,
                load_mbps: bw[m],
                capacity_mbps: site.bandwidth_mbps,
            });
        }
    }

    // (20): q_m consistent with u_ms. Guaranteed by the derived views, but
    // evaluated so the checker covers the full constraint set.
    for (m, site) in inst.sites.iter().enumerate() {
        let any_server = (0..site.server_count()).any(|s| placement.server_used(m, s));
        if any_server && !placement.mec_used(m) {
            violations.push(Violation::FacilityActivation { mec: m });
        }
    }

    violations.sort_by_key(|v| v.key());
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        Connectivity, CostWeights, MecSite, RequestPlacement, ServiceType, SliceAssignment,
        SliceRequest, Vnf,
    };
    use crate::topology::{all_pairs_delay, Network, Node, NodeId};

    fn node(name: &str) -> Node {
        Node { name: name.into(), longitude: 0.0, latitude: 0.0 }
    }

    /// Square-ish test net: 4 nodes on a line with 1 ms links, facilities at
    /// nodes 1, 2, 3 with 2 servers x 56 vCPUs.
    fn small_instance(requests: Vec<SliceRequest>) -> Instance {
        let nodes = vec![node("a"), node("b"), node("c"), node("d")];
        let network = Network::new(
            nodes,
            vec![
                (NodeId(0), NodeId(1), 1.0),
                (NodeId(1), NodeId(2), 1.0),
                (NodeId(2), NodeId(3), 1.0),
            ],
        )
        .unwrap();
        let delays = all_pairs_delay(&network).unwrap();
        let sites = vec![
            MecSite::with_shape(NodeId(1), 2, 56, 10_000.0),
            MecSite::with_shape(NodeId(2), 2, 56, 10_000.0),
            MecSite::with_shape(NodeId(3), 2, 56, 10_000.0),
        ];
        Instance::new(network, delays, sites, requests)
    }

    fn request(id: usize, vnf_vcpus: &[u32], bandwidth: f64, budget: f64) -> SliceRequest {
        SliceRequest {
            id,
            vnfs: vnf_vcpus
                .iter()
                .map(|&vcpus| Vnf { vcpus, processing_delay_ms: 0.05 })
                .collect(),
            master: NodeId(0),
            secondary: NodeId(1),
            service: ServiceType {
                name: "test".into(),
                bandwidth_mbps: bandwidth,
                max_delay_ms: budget,
            },
        }
    }

    #[test]
    fn same_mec_for_both_slices_breaks_anti_affinity() {
        let inst = small_instance(vec![request(0, &[1, 1], 50.0, 10.0)]);
        let p = Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: vec![Some(RequestPlacement {
                primary: SliceAssignment { mec: 0, servers: vec![0, 0] },
                backup: SliceAssignment { mec: 0, servers: vec![1, 1] },
            })],
        };
        let violations = check_feasibility(&p, &inst);
        assert_eq!(violations.len(), 1);
        assert!(matches!(violations[0], Violation::AntiAffinity { request: 0, mec: 0 }));
        // The same layout is legal under dedicated server-disjoint protection.
        let p2 = Placement { protection: Protection::ServerDisjoint, ..p };
        assert!(check_feasibility(&p2, &inst).is_empty());
    }

    #[test]
    fn overloaded_server_is_reported() {
        // 57 vCPUs of primary demand against a 56 vCPU server.
        let inst = small_instance(vec![
            request(0, &[4, 4, 4, 4, 4], 10.0, 10.0), // 20
            request(1, &[4, 4, 4, 4, 4], 10.0, 10.0), // 20
            request(2, &[4, 4, 4, 4, 1], 10.0, 10.0), // 17 -> 57 total
        ]);
        let assign = |mec, server| {
            Some(RequestPlacement {
                primary: SliceAssignment { mec, servers: vec![server; 5] },
                backup: SliceAssignment { mec: mec + 1, servers: vec![0; 5] },
            })
        };
        let p = Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: vec![assign(0, 0), assign(0, 0), assign(0, 0)],
        };
        let violations = check_feasibility(&p, &inst);
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::ServerCapacity { mec: 0, server: 0, load: 57, capacity: 56 }
        )));
    }

    #[test]
    fn valid_two_request_placement_is_clean() {
        let inst = small_instance(vec![
            request(0, &[2, 3], 100.0, 10.0),
            request(1, &[1, 1, 1], 50.0, 10.0),
        ]);
        let p = Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: vec![
                Some(RequestPlacement {
                    primary: SliceAssignment { mec: 0, servers: vec![0, 0] },
                    backup: SliceAssignment { mec: 1, servers: vec![0, 0] },
                }),
                Some(RequestPlacement {
                    primary: SliceAssignment { mec: 0, servers: vec![0, 1, 1] },
                    backup: SliceAssignment { mec: 2, servers: vec![0, 0, 0] },
                }),
            ],
        };
        assert!(check_feasibility(&p, &inst).is_empty());
        let c = crate::model::total_cost(&p, &inst, &CostWeights::default()).unwrap();
        assert!(c.total > 0.0);
    }

    #[test]
    fn latency_budget_violations_name_both_slices() {
        // Master at node 0; facility at node 3 is 3 ms + 0.1 ms processing
        // away, above a 2 ms budget for both slices under single connectivity.
        let inst = small_instance(vec![request(0, &[1, 1], 50.0, 2.0)]);
        let p = Placement {
            mode: Connectivity::Single,
            protection: Protection::MecDisjoint,
            assignments: vec![Some(RequestPlacement {
                primary: SliceAssignment { mec: 2, servers: vec![0, 0] },
                backup: SliceAssignment { mec: 1, servers: vec![0, 0] },
            })],
        };
        let violations = check_feasibility(&p, &inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::PrimaryDelay { request: 0, .. })));
        // Backup at node 2 is 2 ms + 0.1 ms away: also over budget.
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::BackupDelay { request: 0, .. })));
    }

    #[test]
    fn missing_vnf_mapping_is_reported() {
        let inst = small_instance(vec![request(0, &[1, 1, 1], 50.0, 10.0)]);
        let p = Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: vec![Some(RequestPlacement {
                // Only two of three VNFs mapped; one server index out of range.
                primary: SliceAssignment { mec: 0, servers: vec![0, 9] },
                backup: SliceAssignment { mec: 1, servers: vec![0, 0, 0] },
            })],
        };
        let violations = check_feasibility(&p, &inst);
        let mapping: Vec<_> = violations
            .iter()
            .filter(|v| matches!(v, Violation::PrimaryVnfMapping { .. }))
            .collect();
        assert_eq!(mapping.len(), 2); // vnf 1 out of range, vnf 2 missing
    }

    #[test]
    fn bandwidth_cap_is_enforced() {
        let mut inst = small_instance(vec![request(0, &[1], 600.0, 10.0)]);
        inst.sites[0].bandwidth_mbps = 500.0;
        let p = Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: vec![Some(RequestPlacement {
                primary: SliceAssignment { mec: 0, servers: vec![0] },
                backup: SliceAssignment { mec: 1, servers: vec![0] },
            })],
        };
        let violations = check_feasibility(&p, &inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Bandwidth { mec: 0, .. })));
    }
}
