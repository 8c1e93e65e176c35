//! Generate a problem instance: seeded slice requests over Germany50 with
//! seven MEC facilities, then round-trip it through JSON.
//!
//! ```sh
//! cargo run -p mecslice --example build_instance
//! ```

use std::collections::BTreeMap;

use mecslice::model::{generate_requests, Instance, MecSite};
use mecslice::topology::{all_pairs_delay, parse_sndlib, select_mec_sites_with};

fn main() -> anyhow::Result<()> {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/germany50.txt"
    ))?;
    let net = parse_sndlib(&text)?;
    let delays = all_pairs_delay(&net)?;
    let sites: Vec<MecSite> = select_mec_sites_with(&net, &delays, 7, 1)?
        .into_iter()
        .map(MecSite::standard)
        .collect();
    let requests = generate_requests(40, &delays, 1);

    let mut by_service: BTreeMap<String, usize> = BTreeMap::new();
    let mut vnfs = 0usize;
    let mut vcpus = 0u32;
    for r in &requests {
        *by_service.entry(r.service.name.clone()).or_default() += 1;
        vnfs += r.vnfs.len();
        vcpus += r.vcpu_demand();
    }
    println!("40 requests, service mix:");
    for (service, count) in &by_service {
        println!("  {service:<14} {count}");
    }
    println!("  {} VNFs total, {} vCPUs per slice set", vnfs, vcpus);

    let sample = &requests[0];
    println!(
        "request 0: {} via master {} / secondary {}, {} VNFs, budget {} ms",
        sample.service.name,
        net.node(sample.master).name,
        net.node(sample.secondary).name,
        sample.vnfs.len(),
        sample.service.max_delay_ms
    );

    let inst = Instance::new(net, delays, sites, requests);
    let json = inst.to_json();
    let back = Instance::from_json(&json)?;
    assert_eq!(back.requests, inst.requests);
    assert_eq!(back.sites, inst.sites);
    println!("instance JSON round-trips ({} bytes)", json.len());
    Ok(())
}
