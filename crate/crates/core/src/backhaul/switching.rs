use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use super::routing::Routes;
use super::topology::{NodeId, TopologyGraph};
use crate::time::SimTime;

/// Interned host address (a vehicle pseudonym or a detector).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostId(pub u32);

#[derive(Debug, Clone, Default)]
pub struct HostRegistry {
    by_name: BTreeMap<String, HostId>,
    names: Vec<String>,
}

impl HostRegistry {
    pub fn intern(&mut self, name: &str) -> HostId {
        if let Some(id) = self.by_name.get(name) {
            return *id;
        }
        let id = HostId(self.names.len() as u32);
        self.names.push(String::from(name));
        self.by_name.insert(String::from(name), id);
        id
    }

    pub fn name(&self, id: HostId) -> &str {
        &self.names[id.0 as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub src: HostId,
    pub dst: HostId,
    pub size_bits: f64,
}

/// Where a rule sends matching traffic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// The switch's local host port (RSU radio side, or a detector).
    Host,
    Link(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowRule {
    pub out_port: Port,
    pub last_used: SimTime,
}

/// What a flow rule matches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowMatch {
    /// Destination host only; every switch a packet crosses learns a rule
    /// towards its source.
    #[default]
    Destination,
    /// Source and destination host, like an exact-match learning switch;
    /// every switch a packet crosses learns the reverse flow.
    Flow,
}

/// Per-switch forwarding rules. Keys are `(switch, source, destination)`
/// with the source set to [`HostId::ANY`] for destination-only rules.
#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    rules: BTreeMap<(NodeId, HostId, HostId), FlowRule>,
}

impl HostId {
    /// Wildcard source of a destination-only rule.
    pub const ANY: HostId = HostId(u32::MAX);
}

impl RuleTable {
    pub fn get(&self, switch: NodeId, dst: HostId) -> Option<&FlowRule> {
        self.rules.get(&(switch, HostId::ANY, dst))
    }

    pub fn get_flow(&self, switch: NodeId, src: HostId, dst: HostId) -> Option<&FlowRule> {
        self.rules.get(&(switch, src, dst))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules_at(&self, switch: NodeId) -> usize {
        self.rules.range((switch, HostId(0), HostId(0))..=(switch, HostId::ANY, HostId::ANY)).count()
    }

    /// Removes every rule idle for longer than `idle_timeout` at `now`.
    pub fn purge(&mut self, now: SimTime, idle_timeout: SimTime) {
        self.rules.retain(|_, r| now.saturating_sub(r.last_used) <= idle_timeout);
    }

    /// Looks up a live rule and refreshes it. A rule idle for longer than
    /// `idle_timeout` counts as purged.
    fn hit(&mut self, key: (NodeId, HostId, HostId), now: SimTime, idle_timeout: SimTime) -> bool {
        match self.rules.get_mut(&key) {
            Some(rule) if now.saturating_sub(rule.last_used) <= idle_timeout => {
                rule.last_used = rule.last_used.max(now);
                true
            }
            _ => false,
        }
    }

    fn install(&mut self, key: (NodeId, HostId, HostId), out_port: Port, now: SimTime) {
        let entry = self.rules.entry(key).or_insert(FlowRule { out_port, last_used: now });
        entry.out_port = out_port;
        entry.last_used = entry.last_used.max(now);
    }
}

/// SDN controller running a learning switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerModel {
    /// Seconds added to a packet each time a switch asks the controller.
    pub service_latency: f64,
    pub rule_idle_timeout: f64,
    /// Ratio between the slowest and fastest packet-in service; 1 means
    /// every detour costs exactly `service_latency`.
    pub jitter_spread: f64,
}

impl Default for ControllerModel {
    fn default() -> Self {
        Self::fast()
    }
}

impl ControllerModel {
    /// Lightweight controller profile.
    pub fn fast() -> Self {
        ControllerModel { service_latency: 0.000_5, rule_idle_timeout: 10.0, jitter_spread: 1.0 }
    }

    /// Heavier, more variable controller profile.
    pub fn heavy() -> Self {
        ControllerModel { service_latency: 0.001_5, rule_idle_timeout: 10.0, jitter_spread: 4.0 }
    }

    pub fn validate(&self) -> Result<(), ForwardError> {
        if !(self.service_latency >= 0.0) {
            return Err(ForwardError::InvalidController("service latency must be non-negative"));
        }
        if !(self.rule_idle_timeout > 0.0) {
            return Err(ForwardError::InvalidController("rule idle timeout must be positive"));
        }
        if !(self.jitter_spread >= 1.0) {
            return Err(ForwardError::InvalidController("jitter spread must be at least 1"));
        }
        Ok(())
    }

    /// Latency of one packet-in, drawn uniformly between
    /// `service_latency / sqrt(spread)` and `service_latency * sqrt(spread)`.
    fn detour<R: Rng + ?Sized>(&self, rng: &mut R) -> SimTime {
        if self.jitter_spread <= 1.0 || self.service_latency == 0.0 {
            return SimTime::from_secs(self.service_latency);
        }
        let root = libm::sqrt(self.jitter_spread);
        let lo = self.service_latency / root;
        let hi = self.service_latency * root;
        SimTime::from_secs(rng.gen_range(lo..=hi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForwardError {
    Unreachable { from: String, to: String },
    InvalidController(&'static str),
}

impl fmt::Display for ForwardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForwardError::Unreachable { from, to } => write!(f, "no route from {from} to {to}"),
            ForwardError::InvalidController(msg) => write!(f, "invalid controller model: {msg}"),
        }
    }
}

impl core::error::Error for ForwardError {}

/// Outcome of pushing one packet through the backhaul.
#[derive(Debug, Clone, PartialEq)]
pub struct Traversal {
    pub departure: SimTime,
    pub arrival: SimTime,
    pub hops: Vec<NodeId>,
    pub controller_detours: u32,
    /// Total time spent waiting on the controller.
    pub controller_time: SimTime,
    /// Switch that dropped the packet because it hit its per-second cap.
    pub dropped_at: Option<NodeId>,
}

impl Traversal {
    pub fn delivered(&self) -> bool {
        self.dropped_at.is_none()
    }
}

/// Mutable state of the switched network during a run.
#[derive(Debug, Clone)]
pub struct Backhaul {
    graph: TopologyGraph,
    routes: Routes,
    controller: ControllerModel,
    idle_timeout: SimTime,
    rules: RuleTable,
    flow_match: FlowMatch,
    switch_cap: Option<u32>,
    load: BTreeMap<NodeId, (u64, u32)>,
    total_detours: u64,
}

impl Backhaul {
    pub fn new(graph: TopologyGraph, controller: ControllerModel) -> Result<Backhaul, ForwardError> {
        controller.validate()?;
        let routes = Routes::compute(&graph);
        Ok(Backhaul {
            idle_timeout: SimTime::from_secs(controller.rule_idle_timeout),
            graph,
            routes,
            controller,
            rules: RuleTable::default(),
            flow_match: FlowMatch::Destination,
            switch_cap: None,
            load: BTreeMap::new(),
            total_detours: 0,
        })
    }

    /// Caps how many packets a switch accepts per simulated second; the
    /// excess is dropped.
    pub fn with_switch_cap(mut self, cap: Option<u32>) -> Self {
        self.switch_cap = cap;
        self
    }

    pub fn with_flow_match(mut self, flow_match: FlowMatch) -> Self {
        self.flow_match = flow_match;
        self
    }

    pub fn graph(&self) -> &TopologyGraph {
        &self.graph
    }

    pub fn routes(&self) -> &Routes {
        &self.routes
    }

    pub fn rules(&self) -> &RuleTable {
        &self.rules
    }

    pub fn controller(&self) -> &ControllerModel {
        &self.controller
    }

    pub fn total_detours(&self) -> u64 {
        self.total_detours
    }

    pub fn purge_rules(&mut self, now: SimTime) {
        self.rules.purge(now, self.idle_timeout);
    }

    /// Sends `packet` from the host attached at `ingress` to the host
    /// attached at `egress`, departing at `departure`.
    ///
    /// The packet crosses the host access link, every switch on the static
    /// route and the far access link. Each switch without a live rule for the
    /// destination asks the controller, which adds a detour and installs the
    /// rule. Every switch also learns (or refreshes) a rule back to the
    /// source, so replies find their path warm.
    pub fn forward<R: Rng + ?Sized>(
        &mut self,
        packet: &Packet,
        ingress: NodeId,
        egress: NodeId,
        departure: SimTime,
        rng: &mut R,
    ) -> Result<Traversal, ForwardError> {
        let path: Vec<NodeId> = self
            .routes
            .path(ingress, egress)
            .ok_or_else(|| ForwardError::Unreachable {
                from: self.graph.node(ingress).id.clone(),
                to: self.graph.node(egress).id.clone(),
            })?
            .to_vec();
        let access = SimTime::from_secs(self.graph.host_link().delay(packet.size_bits));
        let mut t = departure + access;
        let mut detours = 0u32;
        let mut controller_time = SimTime::ZERO;
        let mut in_port = Port::Host;
        for (i, &sw) in path.iter().enumerate() {
            if !self.admit(sw, t) {
                self.total_detours += u64::from(detours);
                return Ok(Traversal {
                    departure,
                    arrival: t,
                    hops: path[..=i].to_vec(),
                    controller_detours: detours,
                    controller_time,
                    dropped_at: Some(sw),
                });
            }
            let out_link = path.get(i + 1).map(|next| self.graph.link_between(sw, *next).expect("route uses a link"));
            let out_port = out_link.map_or(Port::Host, Port::Link);
            let (forward, learned) = match self.flow_match {
                FlowMatch::Destination => ((sw, HostId::ANY, packet.dst), (sw, HostId::ANY, packet.src)),
                FlowMatch::Flow => ((sw, packet.src, packet.dst), (sw, packet.dst, packet.src)),
            };
            if !self.rules.hit(forward, t, self.idle_timeout) {
                let wait = self.controller.detour(rng);
                t = t + wait;
                controller_time = controller_time + wait;
                detours += 1;
                self.rules.install(forward, out_port, t);
            }
            self.rules.install(learned, in_port, t);
            if let Some(link) = out_link {
                t = t + SimTime::from_secs(self.graph.link(link).params.delay(packet.size_bits));
                in_port = Port::Link(link);
            }
        }
        t = t + access;
        self.total_detours += u64::from(detours);
        Ok(Traversal { departure, arrival: t, hops: path, controller_detours: detours, controller_time, dropped_at: None })
    }

    fn admit(&mut self, sw: NodeId, t: SimTime) -> bool {
        let Some(cap) = self.switch_cap else { return true };
        let second = t.nanos() / SimTime::NANOS_PER_SEC;
        let slot = self.load.entry(sw).or_insert((second, 0));
        if slot.0 != second {
            *slot = (second, 0);
        }
        if slot.1 >= cap {
            return false;
        }
        slot.1 += 1;
        true
    }
}
