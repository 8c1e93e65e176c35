//! Placements and their binary indicator views.

use serde::{Deserialize, Serialize};

use super::{Instance, MecId};

/// How the user reaches its two slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Connectivity {
    /// Primary through the master base station, backup through the secondary.
    Multi,
    /// Both slices through the master base station.
    Single,
}

/// The protection discipline a placement promises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protection {
    /// Primary and backup slices in different MEC facilities (anti-affinity).
    MecDisjoint,
    /// Primary and backup slices on disjoint servers, possibly within one
    /// facility (dedicated-protection style).
    ServerDisjoint,
}

/// Mapping of one slice: the facility it lives in and, per VNF, the index of
/// the hosting server inside that facility.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceAssignment {
    pub mec: MecId,
    pub servers: Vec<usize>,
}

/// Primary and backup slice mappings of one admitted request.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RequestPlacement {
    pub primary: SliceAssignment,
    pub backup: SliceAssignment,
}

/// A complete deployment: per request, the primary/backup slice mappings
/// (or `None` for a rejected request). All BIP decision variables are
/// derivable views of this structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub mode: Connectivity,
    pub protection: Protection,
    pub assignments: Vec<Option<RequestPlacement>>,
}

impl Placement {
    pub fn empty(requests: usize, mode: Connectivity, protection: Protection) -> Self {
        Placement {
            mode,
            protection,
            assignments: vec![None; requests],
        }
    }

    pub fn admitted(&self) -> impl Iterator<Item = (usize, &RequestPlacement)> {
        self.assignments
            .iter()
            .enumerate()
            .filter_map(|(r, a)| a.as_ref().map(|a| (r, a)))
    }

    pub fn rejected(&self) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter_map(|(r, a)| a.is_none().then_some(r))
            .collect()
    }

    /// q_m: facility `m` hosts at least one slice.
    pub fn mec_used(&self, m: MecId) -> bool {
        self.admitted()
            .any(|(_, a)| a.primary.mec == m || a.backup.mec == m)
    }

    /// u_ms: server `s` of facility `m` hosts at least one VNF.
    pub fn server_used(&self, m: MecId, s: usize) -> bool {
        self.admitted().any(|(_, a)| {
            (a.primary.mec == m && a.primary.servers.contains(&s))
                || (a.backup.mec == m && a.backup.servers.contains(&s))
        })
    }

    /// w^m_{n1 r}: the primary slice of request `r` is served by facility `m`.
    pub fn primary_served_by(&self, r: usize, m: MecId) -> bool {
        matches!(&self.assignments[r], Some(a) if a.primary.mec == m)
    }

    /// x^m_{n2 r}: the backup slice of request `r` is served by facility `m`.
    pub fn backup_served_by(&self, r: usize, m: MecId) -> bool {
        matches!(&self.assignments[r], Some(a) if a.backup.mec == m)
    }

    /// y^{msv}_{n1 r}: VNF `v` of the primary slice of `r` runs on server `s`
    /// of facility `m`.
    pub fn primary_vnf_on(&self, r: usize, m: MecId, s: usize, v: usize) -> bool {
        matches!(&self.assignments[r], Some(a)
            if a.primary.mec == m && a.primary.servers.get(v) == Some(&s))
    }

    /// z^{msv}_{n2 r}: VNF `v` of the backup slice of `r` runs on server `s`
    /// of facility `m`.
    pub fn backup_vnf_on(&self, r: usize, m: MecId, s: usize, v: usize) -> bool {
        matches!(&self.assignments[r], Some(a)
            if a.backup.mec == m && a.backup.servers.get(v) == Some(&s))
    }

    /// Number of facilities hosting at least one slice (Σ q_m).
    pub fn mecs_activated(&self, sites: usize) -> usize {
        (0..sites).filter(|&m| self.mec_used(m)).count()
    }

    /// Number of servers hosting at least one VNF (Σ u_ms).
    pub fn servers_activated(&self, inst: &Instance) -> usize {
        inst.sites
            .iter()
            .enumerate()
            .map(|(m, site)| {
                (0..site.server_count())
                    .filter(|&s| self.server_used(m, s))
                    .count()
            })
            .sum()
    }

    /// Total vCPU load on each server, indexed `[mec][server]`.
    pub fn server_loads(&self, inst: &Instance) -> Vec<Vec<u32>> {
        let mut loads: Vec<Vec<u32>> = inst
            .sites
            .iter()
            .map(|s| vec![0; s.server_count()])
            .collect();
        for (r, a) in self.admitted() {
            for slice in [&a.primary, &a.backup] {
                if slice.mec >= loads.len() {
                    continue;
                }
                for (v, &s) in slice.servers.iter().enumerate() {
                    if s < loads[slice.mec].len() && v < inst.requests[r].vnfs.len() {
                        loads[slice.mec][s] += inst.requests[r].vnfs[v].vcpus;
                    }
                }
            }
        }
        loads
    }

    /// Admitted bandwidth per facility: Σ over attached slices of b^r.
    pub fn bandwidth_loads(&self, inst: &Instance) -> Vec<f64> {
        let mut bw = vec![0.0; inst.sites.len()];
        for (r, a) in self.admitted() {
            if a.primary.mec < bw.len() {
                bw[a.primary.mec] += inst.requests[r].service.bandwidth_mbps;
            }
            if a.backup.mec < bw.len() {
                bw[a.backup.mec] += inst.requests[r].service.bandwidth_mbps;
            }
        }
        bw
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("placement serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
