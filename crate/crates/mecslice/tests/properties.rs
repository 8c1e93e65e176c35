//! Property tests for the structural invariants: parser round-trips, delay
//! matrix metric laws, cost monotonicity, and feasibility closure of the GA
//! operators.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mecslice::model::{
    check_feasibility, cost_unchecked, generate_requests, CostWeights, Instance, MecSite,
};
use mecslice::solver::{crossover, mga_init, mutate, solve_greedy};
use mecslice::topology::{
    all_pairs_delay, parse_sndlib, select_mec_sites_with, serialize_sndlib, Network, Node, NodeId,
};

fn germany(requests: usize, seed: u64, k: usize) -> Instance {
    let net = parse_sndlib(include_str!("../data/germany50.txt")).unwrap();
    let delays = all_pairs_delay(&net).unwrap();
    let hosts = select_mec_sites_with(&net, &delays, k, seed).unwrap();
    let sites = hosts.into_iter().map(MecSite::standard).collect();
    let reqs = generate_requests(requests, &delays, seed);
    Instance::new(net, delays, sites, reqs)
}

/// Connected random networks: a random tree plus a few extra links, nodes on
/// a jittered grid so no two share coordinates.
fn arb_network() -> impl Strategy<Value = Network> {
    (2usize..20, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let nodes: Vec<Node> = (0..n)
            .map(|i| Node {
                name: format!("N{i}"),
                longitude: (i % 5) as f64 * 1.5 + rng.random_range(0.0..0.5),
                latitude: (i / 5) as f64 * 1.2 + rng.random_range(0.0..0.4) + 40.0,
            })
            .collect();
        let mut links: Vec<(NodeId, NodeId, f64)> = (1..n)
            .map(|i| {
                let parent = rng.random_range(0..i);
                (NodeId(parent), NodeId(i), 0.0)
            })
            .collect();
        for _ in 0..n / 2 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b
                && !links
                    .iter()
                    .any(|(x, y, _)| (x.0 == a && y.0 == b) || (x.0 == b && y.0 == a))
            {
                links.push((NodeId(a), NodeId(b), 0.0));
            }
        }
        for link in &mut links {
            let na = &nodes[link.0 .0];
            let nb = &nodes[link.1 .0];
            link.2 = mecslice::topology::link_delay(
                (na.longitude, na.latitude),
                (nb.longitude, nb.latitude),
            );
        }
        Network::new(nodes, links).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_serialize_parse_is_identity(net in arb_network()) {
        let text = serialize_sndlib(&net);
        let parsed = parse_sndlib(&text).unwrap();
        // Node and link structure round-trips; delays are recomputed from
        // the (two-decimal) serialized coordinates, so compare structure.
        prop_assert_eq!(parsed.node_count(), net.node_count());
        prop_assert_eq!(parsed.link_count(), net.link_count());
        let again = parse_sndlib(&serialize_sndlib(&parsed)).unwrap();
        prop_assert_eq!(&again, &parsed);
        prop_assert_eq!(serialize_sndlib(&again), serialize_sndlib(&parsed));
    }

    #[test]
    fn delay_matrix_is_a_metric(net in arb_network()) {
        let d = all_pairs_delay(&net).unwrap();
        let n = net.node_count();
        for i in 0..n {
            prop_assert_eq!(d.get(NodeId(i), NodeId(i)), 0.0);
            for j in 0..n {
                prop_assert_eq!(d.get(NodeId(i), NodeId(j)), d.get(NodeId(j), NodeId(i)));
                for k in 0..n {
                    prop_assert!(
                        d.get(NodeId(i), NodeId(j))
                            <= d.get(NodeId(i), NodeId(k)) + d.get(NodeId(k), NodeId(j)) + 1e-12
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn removing_a_request_never_raises_cost(seed in 0u64..500, n in 1usize..10) {
        let inst = germany(n, seed, 5);
        let w = CostWeights::default();
        let full = solve_greedy(&inst, &w);
        let full_cost = cost_unchecked(&full, &inst, &w).total;
        for r in 0..n {
            let mut reduced = full.clone();
            reduced.assignments[r] = None;
            let reduced_cost = cost_unchecked(&reduced, &inst, &w).total;
            prop_assert!(reduced_cost <= full_cost + 1e-9);
        }
    }

    #[test]
    fn ga_operators_preserve_full_constraint_set(seed in 0u64..300) {
        let inst = germany(6, seed, 5);
        let w = CostWeights::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pop = mga_init(&inst, &w, 6, &mut rng).unwrap();
        for i in 0..pop.len() {
            for j in 0..pop.len() {
                let (c1, c2) = crossover(&pop[i], &pop[j], &inst, &w);
                prop_assert!(check_feasibility(&c1.to_placement(), &inst).is_empty());
                prop_assert!(check_feasibility(&c2.to_placement(), &inst).is_empty());
                let m = mutate(&c1, &inst, &w, &mut rng);
                prop_assert!(check_feasibility(&m.to_placement(), &inst).is_empty());
                // Anti-affinity specifically, stated once more on the raw
                // assignment.
                for (_, a) in m.to_placement().admitted() {
                    prop_assert!(a.primary.mec != a.backup.mec);
                }
            }
        }
    }
}
