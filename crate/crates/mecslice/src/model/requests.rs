//! Seeded random slice-request generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ServiceType, SliceRequest, Vnf, VNF_PROCESSING_DELAY_MS};
use crate::topology::{DelayMatrix, NodeId};

/// Generates `n` slice requests over the nodes of `delays`:
///
/// - master base station uniform over all nodes;
/// - secondary base station: the nearest distinct node by shortest-path
///   delay (ties to the lowest id), modelling dual attachment;
/// - service type uniform over the four-entry catalog;
/// - 2..=5 VNFs, each demanding 1..=4 vCPUs and adding 50 µs of processing.
///
/// Deterministic for a fixed seed.
pub fn generate_requests(n: usize, delays: &DelayMatrix, seed: u64) -> Vec<SliceRequest> {
    let catalog = ServiceType::catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|id| {
            let master = NodeId(rng.random_range(0..delays.node_count()));
            let secondary = delays.nearest_distinct(master);
            let service = catalog[rng.random_range(0..catalog.len())].clone();
            let vnf_count = rng.random_range(2..=5);
            let vnfs = (0..vnf_count)
                .map(|_| Vnf {
                    vcpus: rng.random_range(1..=4),
                    processing_delay_ms: VNF_PROCESSING_DELAY_MS,
                })
                .collect();
            SliceRequest {
                id,
                vnfs,
                master,
                secondary,
                service,
            }
        })
        .collect()
}
