//! Propagation delays: great-circle link delays and all-pairs shortest paths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{Network, NodeId, TopologyError};

/// Default fiber propagation constant in microseconds per kilometre.
pub const DEFAULT_US_PER_KM: f64 = 5.0;

const EARTH_RADIUS_KM: f64 = 6371.0;

/// Great-circle distance between two (longitude, latitude) points in km.
fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lon1, lat1) = (a.0.to_radians(), a.1.to_radians());
    let (lon2, lat2) = (b.0.to_radians(), b.1.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().asin()
}

/// Propagation delay in milliseconds between two coordinates at the default
/// fiber constant.
pub fn link_delay(a: (f64, f64), b: (f64, f64)) -> f64 {
    link_delay_with(a, b, DEFAULT_US_PER_KM)
}

/// Propagation delay in milliseconds at `us_per_km` microseconds per km.
pub fn link_delay_with(a: (f64, f64), b: (f64, f64), us_per_km: f64) -> f64 {
    haversine_km(a, b) * us_per_km / 1000.0
}

/// Shortest-path propagation delay between every ordered node pair, in ms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DelayMatrix {
    pub fn get(&self, from: NodeId, to: NodeId) -> f64 {
        self.values[from.0 * self.n + to.0]
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Node minimizing the delay from `from`, excluding `from` itself.
    /// Ties break toward the lowest node id.
    pub fn nearest_distinct(&self, from: NodeId) -> NodeId {
        let mut best = usize::MAX;
        let mut best_delay = f64::INFINITY;
        for to in 0..self.n {
            if to == from.0 {
                continue;
            }
            let d = self.get(from, NodeId(to));
            if d < best_delay {
                best_delay = d;
                best = to;
            }
        }
        NodeId(best)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("delay matrix serializes")
    }
}

/// Computes shortest-path delays between all node pairs by running Dijkstra
/// from every node over the link-delay weights.
///
/// Fails if the graph is disconnected, listing how many pairs are unreachable.
pub fn all_pairs_delay(net: &Network) -> Result<DelayMatrix, TopologyError> {
    let n = net.node_count();
    let mut values = vec![f64::INFINITY; n * n];
    for src in 0..n {
        let dist = dijkstra(net, NodeId(src));
        values[src * n..(src + 1) * n].copy_from_slice(&dist);
    }
    let unreachable = values.iter().filter(|d| d.is_infinite()).count();
    if unreachable > 0 {
        return Err(TopologyError::Disconnected(unreachable / 2));
    }
    // Sweeps from opposite endpoints sum the same link delays in different
    // orders; pin both directions to the smaller value so the matrix is
    // exactly symmetric.
    for i in 0..n {
        for j in (i + 1)..n {
            let d = values[i * n + j].min(values[j * n + i]);
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    Ok(DelayMatrix { n, values })
}

fn dijkstra(net: &Network, source: NodeId) -> Vec<f64> {
    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    dist[source.0] = 0.0;
    // f64 delays are non-negative, so ordering by the raw bit pattern of the
    // distance is a valid priority.
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    heap.push(Reverse((0u64, source.0)));
    while let Some(Reverse((bits, u))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[u] {
            continue;
        }
        for &(v, w) in net.neighbors(NodeId(u)) {
            let nd = d + w;
            if nd < dist[v.0] {
                dist[v.0] = nd;
                heap.push(Reverse((nd.to_bits(), v.0)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{parse_sndlib, Node};

    fn grid_network(nodes: Vec<Node>, links: Vec<(usize, usize, f64)>) -> Network {
        Network::new(
            nodes,
            links
                .into_iter()
                .map(|(a, b, d)| (NodeId(a), NodeId(b), d))
                .collect(),
        )
        .unwrap()
    }

    fn named(name: &str, lon: f64, lat: f64) -> Node {
        Node {
            name: name.to_string(),
            longitude: lon,
            latitude: lat,
        }
    }

    #[test]
    fn identical_coordinates_give_zero_delay() {
        assert_eq!(link_delay((8.0, 50.0), (8.0, 50.0)), 0.0);
    }

    #[test]
    fn distance_scales_to_milliseconds() {
        // One degree of latitude is ~111.19 km on a 6371 km sphere; pick two
        // points whose great-circle separation is exactly 200 km and 100 km.
        let deg_for_km = |km: f64| km / (EARTH_RADIUS_KM * std::f64::consts::PI / 180.0);
        let d200 = link_delay((0.0, 0.0), (0.0, deg_for_km(200.0)));
        assert!((d200 - 1.0).abs() < 1e-9, "200 km should be 1.0 ms, got {d200}");
        let d100 = link_delay((0.0, 0.0), (0.0, deg_for_km(100.0)));
        assert!((d100 - 0.5).abs() < 1e-9, "100 km should be 0.5 ms, got {d100}");
    }

    #[test]
    fn path_graph_delays_are_additive() {
        // A - B - C with artificial delays 1 and 2.
        let net = grid_network(
            vec![named("A", 0.0, 0.0), named("B", 1.0, 0.0), named("C", 2.0, 0.0)],
            vec![(0, 1, 1.0), (1, 2, 2.0)],
        );
        let d = all_pairs_delay(&net).unwrap();
        assert_eq!(d.get(NodeId(0), NodeId(2)), 3.0);
        assert_eq!(d.get(NodeId(2), NodeId(0)), 3.0);
        for i in 0..3 {
            assert_eq!(d.get(NodeId(i), NodeId(i)), 0.0);
        }
    }

    #[test]
    fn disconnected_graph_reports_unreachable_pairs() {
        let net = grid_network(
            vec![
                named("A", 0.0, 0.0),
                named("B", 1.0, 0.0),
                named("C", 5.0, 5.0),
                named("D", 6.0, 5.0),
            ],
            vec![(0, 1, 1.0), (2, 3, 1.0)],
        );
        match all_pairs_delay(&net) {
            Err(TopologyError::Disconnected(pairs)) => assert_eq!(pairs, 4),
            other => panic!("expected Disconnected, got {other:?}"),
        }
    }

    /// Independent Floyd–Warshall used as an oracle for the Dijkstra sweep.
    #[allow(clippy::needless_range_loop)]
    fn floyd_warshall(net: &Network) -> Vec<Vec<f64>> {
        let n = net.node_count();
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for i in 0..n {
            d[i][i] = 0.0;
        }
        for link in net.links() {
            d[link.a.0][link.b.0] = link.delay_ms;
            d[link.b.0][link.a.0] = link.delay_ms;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn germany50_matches_floyd_warshall_oracle() {
        let text = include_str!("../../data/germany50.txt");
        let net = parse_sndlib(text).unwrap();
        let fast = all_pairs_delay(&net).unwrap();
        let oracle = floyd_warshall(&net);
        for i in 0..net.node_count() {
            for j in 0..net.node_count() {
                let got = fast.get(NodeId(i), NodeId(j));
                assert!(
                    (got - oracle[i][j]).abs() < 1e-9,
                    "pair ({i},{j}): dijkstra {got} vs floyd-warshall {}",
                    oracle[i][j]
                );
            }
        }
    }

    #[test]
    fn matrix_is_symmetric_and_triangle_holds() {
        let text = include_str!("../../data/germany50.txt");
        let net = parse_sndlib(text).unwrap();
        let d = all_pairs_delay(&net).unwrap();
        let n = net.node_count();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d.get(NodeId(i), NodeId(j)), d.get(NodeId(j), NodeId(i)));
            }
        }
        // Triangle inequality over a deterministic sample of triples.
        for i in (0..n).step_by(3) {
            for j in (1..n).step_by(4) {
                for k in (2..n).step_by(5) {
                    let ij = d.get(NodeId(i), NodeId(j));
                    let ik = d.get(NodeId(i), NodeId(k));
                    let kj = d.get(NodeId(k), NodeId(j));
                    assert!(ij <= ik + kj + 1e-12);
                }
            }
        }
    }

    #[test]
    fn nearest_distinct_prefers_lowest_id_on_tie() {
        let net = grid_network(
            vec![named("A", 0.0, 0.0), named("B", 1.0, 0.0), named("C", 2.0, 0.0)],
            vec![(0, 1, 1.0), (1, 2, 1.0)],
        );
        let d = all_pairs_delay(&net).unwrap();
        // B is 1.0 from both A and C; from B both A and C are at 1.0 and the
        // lower id (A) must win.
        assert_eq!(d.nearest_distinct(NodeId(1)), NodeId(0));
    }
}
