//! Substrate topology: SNDlib ingestion, propagation delays, MEC site selection.

mod delay;
mod sites;

pub use delay::{all_pairs_delay, link_delay, link_delay_with, DelayMatrix, DEFAULT_US_PER_KM};
pub use sites::{select_mec_sites, select_mec_sites_with};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a base station node in its [`Network`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A base station node with its geographic position in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub longitude: f64,
    pub latitude: f64,
}

/// An undirected fiber link with its propagation delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub delay_ms: f64,
}

/// Undirected substrate graph of base stations and backhaul links.
///
/// Invariants enforced at construction: no self-loops, no duplicate links
/// (in either orientation), all link delays strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    nodes: Vec<Node>,
    links: Vec<Link>,
    #[serde(skip)]
    adjacency: Vec<Vec<(NodeId, f64)>>,
}

/// Error raised while ingesting or assembling a topology.
#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("line {line}: malformed {section} entry: {detail}")]
    Malformed {
        line: usize,
        section: &'static str,
        detail: String,
    },
    #[error("line {line}: link references unknown node \"{name}\"")]
    UnknownNode { line: usize, name: String },
    #[error("line {line}: duplicate link between \"{a}\" and \"{b}\"")]
    DuplicateLink { line: usize, a: String, b: String },
    #[error("line {line}: duplicate node \"{name}\"")]
    DuplicateNode { line: usize, name: String },
    #[error("line {line}: self-loop on node \"{name}\"")]
    SelfLoop { line: usize, name: String },
    #[error("line {line}: link between \"{a}\" and \"{b}\" has zero length")]
    ZeroLengthLink { line: usize, a: String, b: String },
    #[error("missing {0} section")]
    MissingSection(&'static str),
    #[error("graph is disconnected: {0} node pairs are unreachable")]
    Disconnected(usize),
    #[error("link endpoint {0} out of range")]
    NodeOutOfRange(usize),
}

impl Network {
    /// Assembles a network from nodes and (a, b, delay) link triples,
    /// validating the structural invariants.
    pub fn new(nodes: Vec<Node>, links: Vec<(NodeId, NodeId, f64)>) -> Result<Self, TopologyError> {
        let mut net = Network {
            nodes,
            links: Vec::with_capacity(links.len()),
            adjacency: Vec::new(),
        };
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        for (a, b, delay_ms) in links {
            if a.0 >= net.nodes.len() {
                return Err(TopologyError::NodeOutOfRange(a.0));
            }
            if b.0 >= net.nodes.len() {
                return Err(TopologyError::NodeOutOfRange(b.0));
            }
            if a == b {
                return Err(TopologyError::SelfLoop {
                    line: 0,
                    name: net.nodes[a.0].name.clone(),
                });
            }
            let key = (a.0.min(b.0), a.0.max(b.0));
            if seen.insert(key, ()).is_some() {
                return Err(TopologyError::DuplicateLink {
                    line: 0,
                    a: net.nodes[a.0].name.clone(),
                    b: net.nodes[b.0].name.clone(),
                });
            }
            if delay_ms <= 0.0 {
                return Err(TopologyError::ZeroLengthLink {
                    line: 0,
                    a: net.nodes[a.0].name.clone(),
                    b: net.nodes[b.0].name.clone(),
                });
            }
            net.links.push(Link { a, b, delay_ms });
        }
        net.rebuild_adjacency();
        Ok(net)
    }

    fn rebuild_adjacency(&mut self) {
        self.adjacency = vec![Vec::new(); self.nodes.len()];
        for link in &self.links {
            self.adjacency[link.a.0].push((link.b, link.delay_ms));
            self.adjacency[link.b.0].push((link.a, link.delay_ms));
        }
        for adj in &mut self.adjacency {
            adj.sort_by_key(|(x, _)| *x);
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Neighbors of `n` with link delays, ordered by node id.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[n.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.name == name).map(NodeId)
    }

    /// Deserializes a network from JSON produced by [`Network::to_json`].
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let mut net: Network = serde_json::from_str(text)?;
        net.rebuild_adjacency();
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }
}

/// Parses an SNDlib native-format document using the default fiber
/// propagation constant of [`DEFAULT_US_PER_KM`] µs/km for link delays.
pub fn parse_sndlib(text: &str) -> Result<Network, TopologyError> {
    parse_sndlib_with(text, DEFAULT_US_PER_KM)
}

/// Parses an SNDlib native-format document, deriving each link delay from the
/// great-circle distance of its endpoints at `us_per_km` microseconds per km.
///
/// Only the NODES and LINKS sections are interpreted; DEMANDS and any other
/// sections are skipped. Comments (`#`) and the `?` header line are ignored.
pub fn parse_sndlib_with(text: &str, us_per_km: f64) -> Result<Network, TopologyError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Nodes,
        Links,
        Skipped,
    }

    let mut section = Section::None;
    let mut nodes: Vec<Node> = Vec::new();
    let mut by_name: HashMap<String, NodeId> = HashMap::new();
    let mut links: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let mut link_lines: Vec<usize> = Vec::new();
    let mut seen_nodes_section = false;
    let mut seen_links_section = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('?') {
            continue;
        }

        if section == Section::None {
            let upper = line.split_whitespace().next().unwrap_or("").to_uppercase();
            if !line.contains('(') {
                return Err(TopologyError::Malformed {
                    line: line_no,
                    section: "header",
                    detail: format!("expected a section opening, got \"{line}\""),
                });
            }
            section = match upper.as_str() {
                "NODES" => {
                    seen_nodes_section = true;
                    Section::Nodes
                }
                "LINKS" => {
                    seen_links_section = true;
                    Section::Links
                }
                _ => Section::Skipped,
            };
            continue;
        }

        if line == ")" {
            section = Section::None;
            continue;
        }

        match section {
            Section::Nodes => {
                let (name, lon, lat) = parse_node_line(line, line_no)?;
                if by_name.contains_key(&name) {
                    return Err(TopologyError::DuplicateNode {
                        line: line_no,
                        name,
                    });
                }
                by_name.insert(name.clone(), NodeId(nodes.len()));
                nodes.push(Node {
                    name,
                    longitude: lon,
                    latitude: lat,
                });
            }
            Section::Links => {
                let (src, dst) = parse_link_line(line, line_no)?;
                let a = *by_name.get(&src).ok_or(TopologyError::UnknownNode {
                    line: line_no,
                    name: src.clone(),
                })?;
                let b = *by_name.get(&dst).ok_or(TopologyError::UnknownNode {
                    line: line_no,
                    name: dst.clone(),
                })?;
                if a == b {
                    return Err(TopologyError::SelfLoop { line: line_no, name: src });
                }
                links.push((a, b, 0.0));
                link_lines.push(line_no);
            }
            Section::Skipped => {}
            Section::None => unreachable!(),
        }
    }

    if !seen_nodes_section {
        return Err(TopologyError::MissingSection("NODES"));
    }
    if !seen_links_section {
        return Err(TopologyError::MissingSection("LINKS"));
    }

    // Delays derive from endpoint coordinates, so they are filled in after
    // the node table is complete.
    for (i, (a, b, delay)) in links.iter_mut().enumerate() {
        let na = &nodes[a.0];
        let nb = &nodes[b.0];
        *delay = link_delay_with(
            (na.longitude, na.latitude),
            (nb.longitude, nb.latitude),
            us_per_km,
        );
        if *delay <= 0.0 {
            return Err(TopologyError::ZeroLengthLink {
                line: link_lines[i],
                a: na.name.clone(),
                b: nb.name.clone(),
            });
        }
    }

    match Network::new(nodes, links) {
        Ok(net) => Ok(net),
        // Re-attach the offending line number for errors detected during
        // assembly (duplicates, self-loops).
        Err(TopologyError::DuplicateLink { a, b, .. }) => {
            let line = *link_lines.last().unwrap_or(&0);
            Err(TopologyError::DuplicateLink { line, a, b })
        }
        Err(e) => Err(e),
    }
}

fn parse_node_line(line: &str, line_no: usize) -> Result<(String, f64, f64), TopologyError> {
    let malformed = |detail: String| TopologyError::Malformed {
        line: line_no,
        section: "NODES",
        detail,
    };
    let spaced = line.replace('(', " ( ").replace(')', " ) ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    if tokens.len() != 5 || tokens[1] != "(" || tokens[4] != ")" {
        return Err(malformed(format!("expected `name ( lon lat )`, got \"{line}\"")));
    }
    let lon: f64 = tokens[2]
        .parse()
        .map_err(|_| malformed(format!("bad longitude \"{}\"", tokens[2])))?;
    let lat: f64 = tokens[3]
        .parse()
        .map_err(|_| malformed(format!("bad latitude \"{}\"", tokens[3])))?;
    if !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
        return Err(malformed(format!("coordinates ({lon}, {lat}) out of range")));
    }
    Ok((tokens[0].to_string(), lon, lat))
}

fn parse_link_line(line: &str, line_no: usize) -> Result<(String, String), TopologyError> {
    let malformed = |detail: String| TopologyError::Malformed {
        line: line_no,
        section: "LINKS",
        detail,
    };
    // Grammar: <id> ( <source> <target> ) <attributes...>
    let spaced = line.replace('(', " ( ").replace(')', " ) ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    if tokens.len() < 5 || tokens[1] != "(" || tokens[4] != ")" {
        return Err(malformed(format!(
            "expected `id ( source target ) ...`, got \"{line}\""
        )));
    }
    Ok((tokens[2].to_string(), tokens[3].to_string()))
}

/// Serializes a network back to SNDlib native format.
///
/// The output is canonical: parsing it again yields an identical [`Network`],
/// and serializing that parse reproduces the same bytes.
pub fn serialize_sndlib(net: &Network) -> String {
    let mut out = String::from("?SNDlib native format; type: network; version: 1.0\n\nNODES (\n");
    for node in net.nodes() {
        out.push_str(&format!(
            "  {} ( {:.2} {:.2} )\n",
            node.name, node.longitude, node.latitude
        ));
    }
    out.push_str(")\n\nLINKS (\n");
    for link in net.links() {
        let a = &net.node(link.a).name;
        let b = &net.node(link.b).name;
        out.push_str(&format!(
            "  {a}_{b} ( {a} {b} ) 0.00 0.00 0.00 0.00 ( 40.00 1380.00 )\n"
        ));
    }
    out.push_str(")\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TOY: &str = "\
?SNDlib native format; type: network; version: 1.0
# toy triangle plus a spur
NODES (
  A ( 8.00 50.00 )
  B ( 9.00 50.00 )
  C ( 8.50 50.80 )
  D ( 10.00 50.00 )
)
LINKS (
  L1 ( A B ) 0.00 0.00 0.00 0.00 ( 40.00 1.00 )
  L2 ( B C ) 0.00 0.00 0.00 0.00 ( 40.00 1.00 )
  L3 ( A C ) 0.00 0.00 0.00 0.00 ( 40.00 1.00 )
  L4 ( B D ) 0.00 0.00 0.00 0.00 ( 40.00 1.00 )
)
DEMANDS (
)
";

    #[test]
    fn parses_minimal_document() {
        let text = "\
NODES (
  X ( 0.0 0.0 )
  Y ( 1.0 0.0 )
)
LINKS (
  L ( X Y ) 0 0 0 0
)
";
        let net = parse_sndlib(text).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.link_count(), 1);
        assert!(net.links()[0].delay_ms > 0.0);
    }

    #[test]
    fn parses_toy_with_comments_and_demands() {
        let net = parse_sndlib(TOY).unwrap();
        assert_eq!(net.node_count(), 4);
        assert_eq!(net.link_count(), 4);
        assert_eq!(net.node_by_name("C"), Some(NodeId(2)));
        assert_eq!(net.neighbors(NodeId(1)).len(), 3);
    }

    #[test]
    fn unknown_node_in_link_names_line() {
        let text = "\
NODES (
  A ( 0.0 0.0 )
  B ( 1.0 0.0 )
)
LINKS (
  L1 ( A B ) 0 0 0 0
  L2 ( A X99 ) 0 0 0 0
)
";
        match parse_sndlib(text) {
            Err(TopologyError::UnknownNode { line, name }) => {
                assert_eq!(line, 7);
                assert_eq!(name, "X99");
            }
            other => panic!("expected UnknownNode, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_link_rejected() {
        let text = "\
NODES (
  A ( 0.0 0.0 )
  B ( 1.0 0.0 )
)
LINKS (
  L1 ( A B ) 0 0 0 0
  L2 ( B A ) 0 0 0 0
)
";
        assert!(matches!(
            parse_sndlib(text),
            Err(TopologyError::DuplicateLink { .. })
        ));
    }

    #[test]
    fn self_loop_rejected() {
        let text = "\
NODES (
  A ( 0.0 0.0 )
)
LINKS (
  L1 ( A A ) 0 0 0 0
)
";
        assert!(matches!(
            parse_sndlib(text),
            Err(TopologyError::SelfLoop { .. })
        ));
    }

    #[test]
    fn missing_links_section_rejected() {
        let text = "NODES (\n  A ( 0.0 0.0 )\n)\n";
        assert!(matches!(
            parse_sndlib(text),
            Err(TopologyError::MissingSection("LINKS"))
        ));
    }

    #[test]
    fn roundtrip_is_stable() {
        let net = parse_sndlib(TOY).unwrap();
        let text1 = serialize_sndlib(&net);
        let net2 = parse_sndlib(&text1).unwrap();
        assert_eq!(net, net2);
        assert_eq!(text1, serialize_sndlib(&net2));
    }

    #[test]
    fn json_roundtrip() {
        let net = parse_sndlib(TOY).unwrap();
        let back = Network::from_json(&net.to_json()).unwrap();
        assert_eq!(net, back);
        assert_eq!(back.neighbors(NodeId(0)).len(), 2);
    }
}
