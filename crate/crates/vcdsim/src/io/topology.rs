use serde::{Deserialize, Serialize};
use vcdsim_core::TopologyGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub nodes: Vec<NodeDoc>,
    pub links: Vec<LinkDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    pub kind: String,
    pub x_m: f64,
    pub y_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkDoc {
    pub a: String,
    pub b: String,
    pub latency_s: f64,
    pub bandwidth_bps: f64,
}

pub fn topology_json(graph: &TopologyGraph) -> TopologyDoc {
    TopologyDoc {
        nodes: graph
            .nodes()
            .iter()
            .map(|n| NodeDoc { id: n.id.clone(), kind: n.kind.as_str().to_owned(), x_m: n.position.x, y_m: n.position.y })
            .collect(),
        links: graph
            .links()
            .iter()
            .map(|l| LinkDoc {
                a: graph.node(l.a).id.clone(),
                b: graph.node(l.b).id.clone(),
                latency_s: l.params.latency,
                bandwidth_bps: l.params.bandwidth,
            })
            .collect(),
    }
}
