//! MEC site selection: k-means over node coordinates, then the node with the
//! highest closeness centrality inside each cluster.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{all_pairs_delay, DelayMatrix, Network, NodeId, TopologyError};

const KMEANS_MAX_ITERATIONS: usize = 100;

/// Selects `k` MEC host nodes: clusters the base stations by coordinates with
/// seeded k-means, then picks the closeness-centrality maximizer per cluster.
///
/// Closeness of a node is the reciprocal of its summed shortest-path delay to
/// every node; ties break toward the lowest node id. Output is sorted by node
/// id and deterministic for a fixed seed.
pub fn select_mec_sites(net: &Network, k: usize, seed: u64) -> Result<Vec<NodeId>, TopologyError> {
    let delays = all_pairs_delay(net)?;
    select_mec_sites_with(net, &delays, k, seed)
}

/// Same as [`select_mec_sites`] but reuses a precomputed delay matrix.
pub fn select_mec_sites_with(
    net: &Network,
    delays: &DelayMatrix,
    k: usize,
    seed: u64,
) -> Result<Vec<NodeId>, TopologyError> {
    let n = net.node_count();
    if k == 0 || k > n {
        return Err(TopologyError::Malformed {
            line: 0,
            section: "site selection",
            detail: format!("k = {k} outside 1..={n}"),
        });
    }

    let points: Vec<(f64, f64)> = net
        .nodes()
        .iter()
        .map(|node| (node.longitude, node.latitude))
        .collect();
    let clusters = kmeans(&points, k, seed);

    let closeness: Vec<f64> = (0..n)
        .map(|i| {
            let total: f64 = (0..n).map(|j| delays.get(NodeId(i), NodeId(j))).sum();
            if total > 0.0 {
                1.0 / total
            } else {
                f64::INFINITY
            }
        })
        .collect();

    let mut sites: Vec<NodeId> = clusters
        .iter()
        .map(|members| {
            let mut best = members[0];
            for &m in members {
                if closeness[m] > closeness[best] || (closeness[m] == closeness[best] && m < best) {
                    best = m;
                }
            }
            NodeId(best)
        })
        .collect();
    sites.sort();
    debug_assert_eq!(sites.len(), k);
    Ok(sites)
}

fn squared(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

/// Plain Lloyd iteration on coordinate space. Initial centroids are k distinct
/// seeded-random points; an emptied cluster is re-seeded with the point
/// farthest from its assigned centroid. Returns the member indices of each
/// cluster (all non-empty).
fn kmeans(points: &[(f64, f64)], k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..points.len()).collect();
    indices.shuffle(&mut rng);
    let mut centroids: Vec<(f64, f64)> = indices[..k].iter().map(|&i| points[i]).collect();

    let mut assignment = vec![0usize; points.len()];
    for _ in 0..KMEANS_MAX_ITERATIONS {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared(*p, *centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if assignment[i] != best {
                assignment[i] = best;
                changed = true;
            }
        }

        // Re-seed empty clusters before recomputing the means.
        loop {
            let mut counts = vec![0usize; k];
            for &a in &assignment {
                counts[a] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else {
                break;
            };
            // Steal from a cluster that keeps at least one member so the
            // number of empty clusters strictly decreases.
            let farthest = (0..points.len())
                .filter(|&i| counts[assignment[i]] >= 2)
                .max_by(|&i, &j| {
                    let di = squared(points[i], centroids[assignment[i]]);
                    let dj = squared(points[j], centroids[assignment[j]]);
                    di.partial_cmp(&dj).unwrap().then(j.cmp(&i))
                })
                .expect("k <= point count guarantees a donor cluster");
            assignment[farthest] = empty;
            changed = true;
        }

        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<usize> = (0..points.len()).filter(|&i| assignment[i] == c).collect();
            let inv = 1.0 / members.len() as f64;
            *centroid = members.iter().fold((0.0, 0.0), |acc, &i| {
                (acc.0 + points[i].0 * inv, acc.1 + points[i].1 * inv)
            });
        }

        if !changed {
            break;
        }
    }

    (0..k)
        .map(|c| (0..points.len()).filter(|&i| assignment[i] == c).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{parse_sndlib, Node};

    fn path_network(coords: &[(f64, f64)]) -> Network {
        let nodes: Vec<Node> = coords
            .iter()
            .enumerate()
            .map(|(i, &(lon, lat))| Node {
                name: format!("N{i}"),
                longitude: lon,
                latitude: lat,
            })
            .collect();
        let links = (0..coords.len() - 1)
            .map(|i| (NodeId(i), NodeId(i + 1), 1.0))
            .collect();
        Network::new(nodes, links).unwrap()
    }

    #[test]
    fn k_equal_to_node_count_selects_everything() {
        let net = path_network(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let sites = select_mec_sites(&net, 4, 7).unwrap();
        assert_eq!(sites, vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]);
    }

    #[test]
    fn k_one_picks_maximum_closeness_node() {
        // Path A-B-C-D with unit delays. Brute-force closeness:
        //   A: 1/(1+2+3) = 1/6,  B: 1/(1+1+2) = 1/4,
        //   C: 1/4 (tie with B), D: 1/6.
        // The tie between B and C breaks to the lower id, B.
        let net = path_network(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let brute: Vec<f64> = {
            let d = all_pairs_delay(&net).unwrap();
            (0..4)
                .map(|i| 1.0 / (0..4).map(|j| d.get(NodeId(i), NodeId(j))).sum::<f64>())
                .collect()
        };
        assert!(brute[1] >= brute[0] && brute[1] >= brute[3] && brute[1] == brute[2]);
        let sites = select_mec_sites(&net, 1, 3).unwrap();
        assert_eq!(sites, vec![NodeId(1)]);
    }

    #[test]
    fn rejects_out_of_range_k() {
        let net = path_network(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(select_mec_sites(&net, 3, 0).is_err());
        assert!(select_mec_sites(&net, 0, 0).is_err());
    }

    #[test]
    fn germany50_selection_is_deterministic_and_distinct() {
        let net = parse_sndlib(include_str!("../../data/germany50.txt")).unwrap();
        let a = select_mec_sites(&net, 7, 42).unwrap();
        let b = select_mec_sites(&net, 7, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 7);
        let mut dedup = a.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 7, "sites must be distinct");
        for site in &a {
            assert!(site.0 < net.node_count());
        }
        // A different seed may pick different sites but still exactly seven.
        let c = select_mec_sites(&net, 7, 43).unwrap();
        assert_eq!(c.len(), 7);
    }
}
