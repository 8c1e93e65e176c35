//! Solve a small instance to proven optimality and compare the greedy
//! heuristic against it.
//!
//! ```sh
//! cargo run -p mecslice --example exact_branch_and_bound
//! ```

use mecslice::model::{cost_unchecked, generate_requests, CostWeights, Instance, MecSite};
use mecslice::solver::{solve_exact, solve_greedy, ExactConfig, UnplaceableAction};
use mecslice::topology::{all_pairs_delay, parse_sndlib, select_mec_sites_with};

fn main() -> anyhow::Result<()> {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/germany50.txt"
    ))?;
    let net = parse_sndlib(&text)?;
    let delays = all_pairs_delay(&net)?;
    let weights = CostWeights::default();

    println!("seed | exact cost | greedy cost | gap    | nodes");
    for seed in 1..=8u64 {
        let sites: Vec<MecSite> = select_mec_sites_with(&net, &delays, 7, seed)?
            .into_iter()
            .map(MecSite::standard)
            .collect();
        let requests = generate_requests(8, &delays, seed);
        let inst = Instance::new(net.clone(), delays.clone(), sites, requests);

        let cfg = ExactConfig {
            unplaceable: UnplaceableAction::Reject,
            ..ExactConfig::default()
        };
        let exact = solve_exact(&inst, &weights, &cfg)?;
        assert!(exact.proven_optimal);
        let greedy = solve_greedy(&inst, &weights);
        let greedy_cost = cost_unchecked(&greedy, &inst, &weights).total;
        println!(
            "{seed:>4} | {:>10.1} | {:>11.1} | {:>5.2}% | {}",
            exact.cost.total,
            greedy_cost,
            100.0 * (greedy_cost / exact.cost.total - 1.0),
            exact.nodes_explored
        );
    }
    Ok(())
}
