//! Problem instances and solutions: service catalog, slice requests, MEC
//! facilities, placements, the cost function and the constraint checker.

mod cost;
mod feasibility;
mod placement;
mod requests;

pub use cost::{cost_unchecked, total_cost, CostBreakdown, InfeasiblePlacement};
pub use feasibility::{check_feasibility, Violation};
pub use placement::{Connectivity, Placement, Protection, RequestPlacement, SliceAssignment};
pub use requests::generate_requests;

use serde::{Deserialize, Serialize};

use crate::topology::{DelayMatrix, Network, NodeId};

/// Identifier of an MEC facility: its index in [`Instance::sites`].
pub type MecId = usize;

/// A service class with its bandwidth demand and end-to-end latency budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceType {
    pub name: String,
    pub bandwidth_mbps: f64,
    pub max_delay_ms: f64,
}

impl ServiceType {
    fn new(name: &str, bandwidth_mbps: f64, max_delay_ms: f64) -> Self {
        ServiceType {
            name: name.to_string(),
            bandwidth_mbps,
            max_delay_ms,
        }
    }

    /// The four service classes used throughout the evaluation:
    /// AR/VR (200 Mbps, 2 ms), V2X (100, 3), e-health (50, 5),
    /// 8K TV and gaming (250, 10).
    pub fn catalog() -> Vec<ServiceType> {
        vec![
            ServiceType::new("ar-vr", 200.0, 2.0),
            ServiceType::new("v2x", 100.0, 3.0),
            ServiceType::new("e-health", 50.0, 5.0),
            ServiceType::new("8k-tv-gaming", 250.0, 10.0),
        ]
    }
}

/// One virtual network function of a slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vnf {
    pub vcpus: u32,
    pub processing_delay_ms: f64,
}

/// Per-VNF processing and forwarding latency, 50 µs.
pub const VNF_PROCESSING_DELAY_MS: f64 = 0.05;

/// A slice request: the VNFs to instantiate, the master/secondary base
/// stations the user is attached to, and the requested service class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRequest {
    pub id: usize,
    pub vnfs: Vec<Vnf>,
    pub master: NodeId,
    pub secondary: NodeId,
    pub service: ServiceType,
}

impl SliceRequest {
    /// Total vCPU demand of one slice instance.
    pub fn vcpu_demand(&self) -> u32 {
        self.vnfs.iter().map(|v| v.vcpus).sum()
    }

    /// Summed VNF processing delay of one slice instance.
    pub fn processing_delay_ms(&self) -> f64 {
        self.vnfs.iter().map(|v| v.processing_delay_ms).sum()
    }
}

/// A single edge cloud server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Server {
    pub vcpus: u32,
}

/// Default vCPUs per edge cloud server (28 hyper-threaded cores).
pub const DEFAULT_SERVER_VCPUS: u32 = 56;
/// Default number of servers per MEC facility.
pub const DEFAULT_SERVERS_PER_MEC: usize = 10;
/// Default facility bandwidth in Mbps.
pub const DEFAULT_MEC_BANDWIDTH_MBPS: f64 = 10_000.0;

/// An MEC cloud facility co-located with a base station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MecSite {
    pub host: NodeId,
    pub servers: Vec<Server>,
    pub bandwidth_mbps: f64,
}

impl MecSite {
    /// Facility with the default shape: 10 servers of 56 vCPUs, 10 Gbps.
    pub fn standard(host: NodeId) -> Self {
        MecSite::with_shape(
            host,
            DEFAULT_SERVERS_PER_MEC,
            DEFAULT_SERVER_VCPUS,
            DEFAULT_MEC_BANDWIDTH_MBPS,
        )
    }

    pub fn with_shape(host: NodeId, servers: usize, vcpus: u32, bandwidth_mbps: f64) -> Self {
        MecSite {
            host,
            servers: vec![Server { vcpus }; servers],
            bandwidth_mbps,
        }
    }

    pub fn server_count(&self) -> usize {
        self.servers.len()
    }
}

/// Cost constants and objective weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    /// Operational and maintenance cost per activated MEC facility.
    #[serde(default = "default_mec_cost")]
    pub mec_cost: f64,
    /// Activation cost per edge cloud server.
    #[serde(default = "default_server_cost")]
    pub server_cost: f64,
    /// Forwarding cost per Mbps per millisecond of propagation delay.
    #[serde(default = "default_traffic_cost")]
    pub traffic_cost: f64,
    #[serde(default = "default_alpha")]
    pub alpha_mec: f64,
    #[serde(default = "default_alpha")]
    pub alpha_server: f64,
    #[serde(default = "default_alpha")]
    pub alpha_traffic: f64,
}

fn default_mec_cost() -> f64 {
    100.0
}
fn default_server_cost() -> f64 {
    10.0
}
fn default_traffic_cost() -> f64 {
    1.0
}
fn default_alpha() -> f64 {
    1.0
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            mec_cost: default_mec_cost(),
            server_cost: default_server_cost(),
            traffic_cost: default_traffic_cost(),
            alpha_mec: default_alpha(),
            alpha_server: default_alpha(),
            alpha_traffic: default_alpha(),
        }
    }
}

/// A complete problem instance: the substrate network with its delay matrix,
/// the candidate MEC facilities, and the slice requests to place.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub network: Network,
    pub delays: DelayMatrix,
    pub sites: Vec<MecSite>,
    pub requests: Vec<SliceRequest>,
}

impl Instance {
    pub fn new(
        network: Network,
        delays: DelayMatrix,
        sites: Vec<MecSite>,
        requests: Vec<SliceRequest>,
    ) -> Self {
        Instance {
            network,
            delays,
            sites,
            requests,
        }
    }

    /// Propagation delay from a base station to the host of a facility.
    pub fn delay_to_site(&self, from: NodeId, mec: MecId) -> f64 {
        self.delays.get(from, self.sites[mec].host)
    }

    /// The base station through which a slice of `request` is reached:
    /// the master for primary slices, the secondary for backup slices under
    /// multi-connectivity, and the master for both under single connectivity.
    pub fn attachment(&self, request: usize, backup: bool, mode: Connectivity) -> NodeId {
        let r = &self.requests[request];
        match (backup, mode) {
            (false, _) => r.master,
            (true, Connectivity::Multi) => r.secondary,
            (true, Connectivity::Single) => r.master,
        }
    }

    /// End-to-end delay of serving `request` from `mec` through `attachment`:
    /// propagation plus the summed VNF processing delays.
    pub fn e2e_delay(&self, request: usize, attachment: NodeId, mec: MecId) -> f64 {
        self.delays.get(attachment, self.sites[mec].host)
            + self.requests[request].processing_delay_ms()
    }

    /// Whether a slice of `request` reached through `attachment` satisfies
    /// its latency budget when served from `mec`.
    pub fn latency_ok(&self, request: usize, attachment: NodeId, mec: MecId) -> bool {
        self.e2e_delay(request, attachment, mec)
            <= self.requests[request].service.max_delay_ms + 1e-12
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let inst: Instance = serde_json::from_str(text)?;
        // Network adjacency is skipped during serialization; restore it.
        let network = Network::from_json(&inst.network.to_json())?;
        Ok(Instance { network, ..inst })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{all_pairs_delay, parse_sndlib};

    pub(crate) fn toy_instance() -> Instance {
        let text = "\
NODES (
  A ( 8.00 50.00 )
  B ( 9.00 50.00 )
  C ( 8.50 50.80 )
  D ( 10.00 50.00 )
)
LINKS (
  L1 ( A B ) 0 0 0 0
  L2 ( B C ) 0 0 0 0
  L3 ( A C ) 0 0 0 0
  L4 ( B D ) 0 0 0 0
)
";
        let network = parse_sndlib(text).unwrap();
        let delays = all_pairs_delay(&network).unwrap();
        let sites = vec![
            MecSite::with_shape(NodeId(0), 2, 8, 1_000.0),
            MecSite::with_shape(NodeId(2), 2, 8, 1_000.0),
            MecSite::with_shape(NodeId(3), 2, 8, 1_000.0),
        ];
        Instance::new(network, delays, sites, Vec::new())
    }

    #[test]
    fn e2e_delay_adds_processing_to_propagation() {
        let mut inst = toy_instance();
        inst.requests.push(SliceRequest {
            id: 0,
            vnfs: vec![
                Vnf { vcpus: 1, processing_delay_ms: 0.05 },
                Vnf { vcpus: 1, processing_delay_ms: 0.05 },
                Vnf { vcpus: 1, processing_delay_ms: 0.05 },
            ],
            master: NodeId(1),
            secondary: NodeId(0),
            service: ServiceType::catalog()[0].clone(),
        });
        // Serving from the facility hosted at the master itself leaves only
        // the processing component.
        let at_master_mec = {
            let mut i2 = inst.clone();
            i2.sites.push(MecSite::standard(NodeId(1)));
            i2
        };
        let d = at_master_mec.e2e_delay(0, NodeId(1), 3);
        assert!((d - 0.15).abs() < 1e-12);
        // A zero-VNF hypothetical from the co-located facility is exactly 0.
        let mut no_vnfs = at_master_mec.clone();
        no_vnfs.requests[0].vnfs.clear();
        assert_eq!(no_vnfs.e2e_delay(0, NodeId(1), 3), 0.0);
    }

    #[test]
    fn instance_json_roundtrip() {
        let inst = toy_instance();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.sites, inst.sites);
        assert_eq!(back.network, inst.network);
        assert_eq!(back.delays, inst.delays);
        // Adjacency must be functional after deserialization.
        assert!(!back.network.neighbors(NodeId(0)).is_empty());
    }
}
