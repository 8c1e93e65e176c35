//! Ingest an SNDlib topology, derive the delay matrix, and pick MEC sites.
//!
//! ```sh
//! cargo run -p mecslice --example parse_topology
//! ```

use mecslice::topology::{all_pairs_delay, parse_sndlib, select_mec_sites_with, NodeId};

fn main() -> anyhow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/germany50.txt");
    let text = std::fs::read_to_string(path)?;
    let net = parse_sndlib(&text)?;
    println!("{path}");
    println!("  {} nodes, {} links", net.node_count(), net.link_count());

    let delays = all_pairs_delay(&net)?;
    let mut diameter: f64 = 0.0;
    let mut farthest = (NodeId(0), NodeId(0));
    for a in net.node_ids() {
        for b in net.node_ids() {
            if delays.get(a, b) > diameter {
                diameter = delays.get(a, b);
                farthest = (a, b);
            }
        }
    }
    println!(
        "  propagation diameter {:.3} ms ({} -> {})",
        diameter,
        net.node(farthest.0).name,
        net.node(farthest.1).name
    );

    // Cluster the base stations and place an MEC facility at the most
    // central node of each cluster.
    for k in [3, 5, 7] {
        let sites = select_mec_sites_with(&net, &delays, k, 42)?;
        let names: Vec<&str> = sites.iter().map(|&s| net.node(s).name.as_str()).collect();
        println!("  k = {k}: {}", names.join(", "));
    }

    // Everything is serializable for inspection.
    let json = net.to_json();
    println!("  network JSON: {} bytes", json.len());
    Ok(())
}
