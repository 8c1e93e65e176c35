//! Run the genetic algorithm on a 60-request Germany50 instance and watch
//! the best cost tighten generation by generation.
//!
//! ```sh
//! cargo run --release -p mecslice --example run_mga
//! ```

use mecslice::model::{generate_requests, CostWeights, Instance, MecSite};
use mecslice::solver::{solve_greedy, solve_mga, GaConfig};
use mecslice::topology::{all_pairs_delay, parse_sndlib, select_mec_sites_with};

fn main() -> anyhow::Result<()> {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/germany50.txt"
    ))?;
    let net = parse_sndlib(&text)?;
    let delays = all_pairs_delay(&net)?;
    let sites: Vec<MecSite> = select_mec_sites_with(&net, &delays, 7, 4)?
        .into_iter()
        .map(MecSite::standard)
        .collect();
    let requests = generate_requests(60, &delays, 4);
    let inst = Instance::new(net, delays, sites, requests);
    let weights = CostWeights::default();

    let started = std::time::Instant::now();
    let out = solve_mga(&inst, &weights, &GaConfig::with_seed(4))?;
    let elapsed = started.elapsed();

    println!("gen | best      | mean      | worst");
    for g in out.history.iter().step_by(5) {
        println!(
            "{:>3} | {:>9.1} | {:>9.1} | {:>9.1}",
            g.generation, g.best, g.mean, g.worst
        );
    }
    let last = out.history.last().unwrap();
    println!(
        "{:>3} | {:>9.1} | {:>9.1} | {:>9.1}",
        last.generation, last.best, last.mean, last.worst
    );

    let greedy = solve_greedy(&inst, &weights);
    let greedy_cost = mecslice::model::cost_unchecked(&greedy, &inst, &weights).total;
    println!(
        "\nfinal cost {:.1} (greedy seed was {:.1}, improvement {:.2}%) in {elapsed:?}",
        out.cost.total,
        greedy_cost,
        100.0 * (1.0 - out.cost.total / greedy_cost)
    );
    println!(
        "facilities {} / servers {} activated, {} rejected",
        out.placement.mecs_activated(inst.sites.len()),
        out.placement.servers_activated(&inst),
        out.placement.rejected().len()
    );
    Ok(())
}
