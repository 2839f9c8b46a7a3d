use alloc::vec::Vec;

use super::topology::{NodeId, TopologyGraph};
use crate::time::SimTime;

/// All-pairs static shortest paths by total link latency. Equal-latency
/// alternatives are broken by the lexicographically smallest node-id
/// sequence. Latencies are compared at nanosecond resolution so that ties
/// are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Routes {
    paths: Vec<Vec<Option<(u64, Vec<NodeId>)>>>,
}

impl Routes {
    pub fn compute(graph: &TopologyGraph) -> Routes {
        let paths = graph.node_ids().map(|src| single_source(graph, src)).collect();
        Routes { paths }
    }

    /// Switches visited from `from` to `to`, both included.
    pub fn path(&self, from: NodeId, to: NodeId) -> Option<&[NodeId]> {
        self.paths.get(from.0)?.get(to.0)?.as_ref().map(|(_, p)| p.as_slice())
    }

    /// Total link latency of the route, nanoseconds.
    pub fn latency(&self, from: NodeId, to: NodeId) -> Option<SimTime> {
        self.paths.get(from.0)?.get(to.0)?.as_ref().map(|(c, _)| SimTime(*c))
    }
}

pub(crate) fn link_cost(graph: &TopologyGraph, link: usize) -> u64 {
    SimTime::from_secs(graph.link(link).params.latency).nanos()
}

fn single_source(graph: &TopologyGraph, src: NodeId) -> Vec<Option<(u64, Vec<NodeId>)>> {
    let n = graph.len();
    let mut label: Vec<Option<(u64, Vec<NodeId>)>> = alloc::vec![None; n];
    let mut done = alloc::vec![false; n];
    label[src.0] = Some((0, alloc::vec![src]));
    loop {
        let mut pick: Option<usize> = None;
        for i in 0..n {
            if done[i] {
                continue;
            }
            if let Some(cand) = &label[i] {
                if pick.map_or(true, |p| cand < label[p].as_ref().unwrap()) {
                    pick = Some(i);
                }
            }
        }
        let Some(u) = pick else { break };
        done[u] = true;
        let (cost, path) = label[u].clone().unwrap();
        for &(v, link) in graph.neighbors(NodeId(u)) {
            if done[v.0] {
                continue;
            }
            let mut next = path.clone();
            next.push(v);
            let cand = (cost + link_cost(graph, link), next);
            if label[v.0].as_ref().map_or(true, |cur| cand < *cur) {
                label[v.0] = Some(cand);
            }
        }
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backhaul::{LinkParams, Node, NodeKind};
    use crate::geom::Vec2;
    use alloc::string::String;
    use proptest::prelude::*;

    /// Exhaustive simple-path enumeration; the reference for `Routes`.
    fn enumerate_best(g: &TopologyGraph, from: NodeId, to: NodeId) -> Option<(u64, Vec<NodeId>)> {
        fn dfs(
            g: &TopologyGraph,
            at: NodeId,
            to: NodeId,
            cost: u64,
            path: &mut Vec<NodeId>,
            best: &mut Option<(u64, Vec<NodeId>)>,
        ) {
            if at == to {
                let cand = (cost, path.clone());
                if best.as_ref().map_or(true, |b| cand < *b) {
                    *best = Some(cand);
                }
                return;
            }
            for &(next, link) in g.neighbors(at) {
                if path.contains(&next) {
                    continue;
                }
                path.push(next);
                dfs(g, next, to, cost + link_cost(g, link), path, best);
                path.pop();
            }
        }
        let mut best = None;
        dfs(g, from, to, 0, &mut alloc::vec![from], &mut best);
        best
    }

    fn graph_from(n: usize, edges: &[(usize, usize, u8)]) -> Option<TopologyGraph> {
        let nodes: Vec<Node> = (0..n)
            .map(|i| Node { id: alloc::format!("n{i}"), kind: NodeKind::Core, position: Vec2::ZERO })
            .collect();
        let names: Vec<String> = (0..n).map(|i| alloc::format!("n{i}")).collect();
        let mut seen = alloc::collections::BTreeSet::new();
        let mut links = Vec::new();
        for &(a, b, w) in edges {
            let (a, b) = (a % n, b % n);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue;
            }
            // Few distinct latencies so that ties are common.
            let params = LinkParams { latency: f64::from(w % 3 + 1) * 1e-4, bandwidth: 1e9 };
            links.push((names[a].as_str(), names[b].as_str(), params));
        }
        TopologyGraph::from_parts(nodes, &links, LinkParams::default()).ok()
    }

    #[test]
    fn line_graph() {
        let g = graph_from(3, &[(0, 1, 0), (1, 2, 0)]).unwrap();
        let r = Routes::compute(&g);
        assert_eq!(r.path(NodeId(0), NodeId(2)).unwrap(), &[NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(r.latency(NodeId(0), NodeId(2)), Some(SimTime(200_000)));
        assert_eq!(r.path(NodeId(1), NodeId(1)).unwrap(), &[NodeId(1)]);
    }

    #[test]
    fn ties_take_smallest_id_sequence() {
        // Square 0-1-3 and 0-2-3 with equal latency.
        let g = graph_from(4, &[(0, 1, 0), (1, 3, 0), (0, 2, 0), (2, 3, 0)]).unwrap();
        let r = Routes::compute(&g);
        assert_eq!(r.path(NodeId(0), NodeId(3)).unwrap(), &[NodeId(0), NodeId(1), NodeId(3)]);
        assert_eq!(r.path(NodeId(3), NodeId(0)).unwrap(), &[NodeId(3), NodeId(1), NodeId(0)]);
    }

    proptest! {
        #[test]
        fn matches_exhaustive_enumeration(n in 2usize..=8, edges in proptest::collection::vec((0usize..8, 0usize..8, 0u8..3), 1..20)) {
            // Random edges first so they win the dedup; a heavy chain keeps
            // the graph connected.
            let mut all = edges.clone();
            all.extend((0..n - 1).map(|i| (i, i + 1, 2u8)));
            if let Some(g) = graph_from(n, &all) {
                let r = Routes::compute(&g);
                for a in g.node_ids() {
                    for b in g.node_ids() {
                        let best = enumerate_best(&g, a, b).unwrap();
                        prop_assert_eq!(r.path(a, b).unwrap(), best.1.as_slice());
                        prop_assert_eq!(r.latency(a, b).unwrap(), SimTime(best.0));
                    }
                }
            }
        }
    }
}
