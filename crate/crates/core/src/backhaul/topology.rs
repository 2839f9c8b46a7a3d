use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::Vec2;
use crate::mobility::RsuSite;

/// Index of a node in [`TopologyGraph::nodes`]. Nodes are stored sorted by
/// their string id, so comparing `NodeId`s compares ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeKind {
    Rsu,
    Core,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Rsu => "rsu",
            NodeKind::Core => "core",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub position: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Seconds.
    pub latency: f64,
    /// Bits per second.
    pub bandwidth: f64,
}

impl Default for LinkParams {
    fn default() -> Self {
        LinkParams { latency: 0.000_12, bandwidth: 1e9 }
    }
}

impl LinkParams {
    /// One-way delay of a `size_bits` frame: propagation plus serialization.
    pub fn delay(&self, size_bits: f64) -> f64 {
        self.latency + size_bits / self.bandwidth
    }
}

/// Undirected link, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub params: LinkParams,
}

impl Link {
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.a == n {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TopologyKind {
    Star,
    Mesh,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Star => "star",
            TopologyKind::Mesh => "mesh",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologyError {
    NoRsus,
    NoCores,
    TooManyCores { cores: usize, rsus: usize },
    MeshTooSmall,
    DuplicateId(String),
    SelfLoop(String),
    DuplicateLink(String, String),
    UnknownNode(String),
    Disconnected,
    InvalidLink(&'static str),
}

impl fmt::Display for TopologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyError::NoRsus => f.write_str("topology needs at least one RSU"),
            TopologyError::NoCores => f.write_str("topology needs at least one core switch"),
            TopologyError::TooManyCores { cores, rsus } => {
                write!(f, "{cores} core switches requested for only {rsus} RSUs")
            }
            TopologyError::MeshTooSmall => f.write_str("mesh topology needs at least 3 RSUs and 2 core switches"),
            TopologyError::DuplicateId(id) => write!(f, "duplicate node id {id}"),
            TopologyError::SelfLoop(id) => write!(f, "self-loop on node {id}"),
            TopologyError::DuplicateLink(a, b) => write!(f, "duplicate link {a}-{b}"),
            TopologyError::UnknownNode(id) => write!(f, "unknown node {id}"),
            TopologyError::Disconnected => f.write_str("topology is not connected"),
            TopologyError::InvalidLink(msg) => write!(f, "invalid link: {msg}"),
        }
    }
}

impl core::error::Error for TopologyError {}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologyGraph {
    nodes: Vec<Node>,
    links: Vec<Link>,
    adjacency: Vec<Vec<(NodeId, usize)>>,
    host_link: LinkParams,
}

impl TopologyGraph {
    /// Builds a graph from explicit nodes and links given by node id.
    /// Rejects self-loops, duplicate links and disconnected graphs.
    pub fn from_parts(
        mut nodes: Vec<Node>,
        links: &[(&str, &str, LinkParams)],
        host_link: LinkParams,
    ) -> Result<TopologyGraph, TopologyError> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(TopologyError::DuplicateId(pair[0].id.clone()));
            }
        }
        let find = |id: &str| {
            nodes
                .binary_search_by(|n| n.id.as_str().cmp(id))
                .map(NodeId)
                .map_err(|_| TopologyError::UnknownNode(String::from(id)))
        };
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(links.len());
        for (a, b, params) in links {
            let (a, b) = (find(a)?, find(b)?);
            if a == b {
                return Err(TopologyError::SelfLoop(nodes[a.0].id.clone()));
            }
            if !(params.latency >= 0.0 && params.bandwidth > 0.0) {
                return Err(TopologyError::InvalidLink("latency must be >= 0 and bandwidth > 0"));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(TopologyError::DuplicateLink(nodes[key.0 .0].id.clone(), nodes[key.1 .0].id.clone()));
            }
            out.push(Link { a: key.0, b: key.1, params: *params });
        }
        out.sort_by_key(|l| (l.a, l.b));
        let graph = Self::assemble(nodes, out, host_link);
        if !graph.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(graph)
    }

    fn assemble(nodes: Vec<Node>, links: Vec<Link>, host_link: LinkParams) -> TopologyGraph {
        let mut adjacency = alloc::vec![Vec::new(); nodes.len()];
        for (i, l) in links.iter().enumerate() {
            adjacency[l.a.0].push((l.b, i));
            adjacency[l.b.0].push((l.a, i));
        }
        for adj in &mut adjacency {
            adj.sort();
        }
        TopologyGraph { nodes, links, adjacency, host_link }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, index: usize) -> &Link {
        &self.links[index]
    }

    /// Access link between a host and its switch.
    pub fn host_link(&self) -> LinkParams {
        self.host_link
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, id: &str) -> Option<NodeId> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok().map(NodeId)
    }

    /// `(neighbor, link index)` pairs, sorted by neighbor.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[n.0]
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<usize> {
        self.adjacency[a.0].iter().find(|(m, _)| *m == b).map(|(_, l)| *l)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn rsu_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|n| self.nodes[n.0].kind == NodeKind::Rsu)
    }

    /// Links as sorted pairs of string ids.
    pub fn edge_set(&self) -> BTreeSet<(String, String)> {
        self.links
            .iter()
            .map(|l| (self.nodes[l.a.0].id.clone(), self.nodes[l.b.0].id.clone()))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = alloc::vec![false; self.nodes.len()];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        while let Some(n) = stack.pop() {
            for (m, _) in &self.adjacency[n] {
                if !seen[m.0] {
                    seen[m.0] = true;
                    stack.push(m.0);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Builds the star- or mesh-like switched topology over `rsus` plus
/// `n_core` core switches.
///
/// Core switches sit at the centroids of a k-means partition of RSU
/// positions (seeded deterministically from the RSUs in id order). Both
/// kinds connect the cores in a full mesh. The star links every RSU to its
/// closest core. The mesh links every RSU to its two closest cores and to
/// its two closest RSUs. Distance ties go to the smaller node id.
pub fn build_topology(
    rsus: &[RsuSite],
    n_core: usize,
    kind: TopologyKind,
    link: LinkParams,
) -> Result<TopologyGraph, TopologyError> {
    if rsus.is_empty() {
        return Err(TopologyError::NoRsus);
    }
    if n_core == 0 {
        return Err(TopologyError::NoCores);
    }
    if n_core > rsus.len() {
        return Err(TopologyError::TooManyCores { cores: n_core, rsus: rsus.len() });
    }
    if kind == TopologyKind::Mesh && (rsus.len() < 3 || n_core < 2) {
        return Err(TopologyError::MeshTooSmall);
    }
    let mut sorted: Vec<&RsuSite> = rsus.iter().collect();
    sorted.sort_by(|a, b| a.rsu_id.cmp(&b.rsu_id));
    let points: Vec<Vec2> = sorted.iter().map(|r| r.position).collect();
    let centroids = kmeans(&points, n_core);

    let mut nodes: Vec<Node> = sorted
        .iter()
        .map(|r| Node { id: r.rsu_id.clone(), kind: NodeKind::Rsu, position: r.position })
        .collect();
    nodes.extend(
        centroids.iter().enumerate().map(|(i, c)| Node { id: alloc::format!("core{i}"), kind: NodeKind::Core, position: *c }),
    );
    let cores: Vec<usize> = (sorted.len()..nodes.len()).collect();
    let rsu_idx: Vec<usize> = (0..sorted.len()).collect();

    let mut edges: BTreeSet<(String, String)> = BTreeSet::new();
    let mut add = |a: &str, b: &str| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        edges.insert((String::from(a), String::from(b)));
    };
    for (i, &a) in cores.iter().enumerate() {
        for &b in &cores[i + 1..] {
            add(&nodes[a].id, &nodes[b].id);
        }
    }
    let (core_links, rsu_links) = match kind {
        TopologyKind::Star => (1, 0),
        TopologyKind::Mesh => (2, 2),
    };
    for &r in &rsu_idx {
        for c in nearest(&nodes, r, &cores, core_links) {
            add(&nodes[r].id, &nodes[c].id);
        }
        for o in nearest(&nodes, r, &rsu_idx, rsu_links) {
            add(&nodes[r].id, &nodes[o].id);
        }
    }
    let links: Vec<(&str, &str, LinkParams)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str(), link)).collect();
    TopologyGraph::from_parts(nodes.clone(), &links, link)
}

/// The `k` candidates closest to `from` (excluding itself), ties by id.
fn nearest(nodes: &[Node], from: usize, candidates: &[usize], k: usize) -> Vec<usize> {
    let origin = nodes[from].position;
    let mut c: Vec<(f64, &str, usize)> = candidates
        .iter()
        .filter(|&&i| i != from)
        .map(|&i| (origin.distance(nodes[i].position), nodes[i].id.as_str(), i))
        .collect();
    c.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    c.into_iter().take(k).map(|(_, _, i)| i).collect()
}

fn kmeans(points: &[Vec2], k: usize) -> Vec<Vec2> {
    // Farthest-point seeding from the first point.
    let mut centroids = alloc::vec![points[0]];
    while centroids.len() < k {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (i, p) in points.iter().enumerate() {
            let d = centroids.iter().map(|c| c.distance(*p)).fold(f64::INFINITY, f64::min);
            if d > best.0 {
                best = (d, i);
            }
        }
        centroids.push(points[best.1]);
    }
    let mut assignment = alloc::vec![usize::MAX; points.len()];
    for _ in 0..100 {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = (f64::INFINITY, 0usize);
            for (j, c) in centroids.iter().enumerate() {
                let d = c.distance(*p);
                if d < best.0 {
                    best = (d, j);
                }
            }
            if assignment[i] != best.1 {
                assignment[i] = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (j, c) in centroids.iter_mut().enumerate() {
            let members: Vec<Vec2> =
                points.iter().zip(&assignment).filter(|(_, a)| **a == j).map(|(p, _)| *p).collect();
            if !members.is_empty() {
                let sum = members.iter().fold(Vec2::ZERO, |acc, p| acc + *p);
                *c = sum * (1.0 / members.len() as f64);
            }
        }
    }
    centroids
}
