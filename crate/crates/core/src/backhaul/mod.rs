//! Switched backhaul between RSUs and collision detectors: topology
//! construction, static shortest-path routing, and a learning-switch
//! controller whose flow rules expire after an idle timeout.

mod routing;
mod switching;
mod topology;

pub use routing::Routes;
pub use switching::{
    Backhaul, ControllerModel, FlowMatch, FlowRule, ForwardError, HostId, HostRegistry, Packet, Port, RuleTable,
    Traversal,
};
pub use topology::{
    build_topology, LinkParams, Link, Node, NodeId, NodeKind, TopologyError, TopologyGraph, TopologyKind,
};
