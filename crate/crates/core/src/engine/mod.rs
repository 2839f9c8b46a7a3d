//! Discrete-event run of the whole beacon lifecycle:
//! vehicle -> air -> RSU -> backhaul -> detector -> backhaul -> RSU -> air
//! -> vehicle.

mod energy;
mod event;
mod metrics;
mod record;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

pub use energy::{EnergyAccount, EnergyEntity};
pub use event::{EventKind, EventQueue, SimEvent};
pub use metrics::{summarize, ComponentStats, DetectorStats, MetricsSummary, COMPONENT_NAMES};
pub use record::{classify, BeaconRecord, Outcome};

use crate::backhaul::{Backhaul, ControllerModel, FlowMatch, ForwardError, HostId, HostRegistry, NodeId, Packet, TopologyGraph};
use crate::collision::{detect, processing_cost, Beacon, BeaconWindow, CollisionError, DetectorParams};
use crate::mobility::{beacon_schedule, covering_rsu, BeaconSample, EmissionPlan, RsuSite, Trace};
use crate::placement::PlacementConfig;
use crate::radio::{access_delay, injected_delay, DelayFile, MissingDelayPolicy, RadioError, WaveParams};
use crate::rngs;
use crate::time::SimTime;

/// How uplink air delays are obtained.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum RadioMode {
    #[default]
    Model,
    /// Per-beacon uplink delays from a file; downlinks still use the model.
    Inject { file: DelayFile, policy: MissingDelayPolicy },
}

/// Cost units charged to the non-detector entities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCosts {
    /// Per beacon relayed and per reply delivered by an RSU host.
    pub rsu_per_packet: f64,
    pub controller_per_detour: f64,
    pub overhead_per_second: f64,
}

impl Default for EnergyCosts {
    fn default() -> Self {
        EnergyCosts { rsu_per_packet: 0.2, controller_per_detour: 1.0, overhead_per_second: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub detector: DetectorParams,
    pub wave: WaveParams,
    pub emission: EmissionPlan,
    pub radio: RadioMode,
    /// Probability that an uplink beacon is lost on the air.
    pub air_loss: f64,
    /// Vehicle-to-vehicle reply deadline, seconds.
    pub deadline: f64,
    pub beacon_bits: f64,
    pub reply_bits: f64,
    /// Seconds the run continues after the last beacon is generated.
    pub drain: f64,
    /// Packets per second a switch accepts before dropping.
    pub switch_cap: Option<u32>,
    pub flow_match: FlowMatch,
    /// Beacons a vehicle sends from one network source address before
    /// switching to a fresh one; `None` keeps one address per vehicle.
    /// Detectors still identify vehicles by the id carried in the beacon.
    pub address_rotation: Option<u32>,
    pub energy: EnergyCosts,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            detector: DetectorParams::default(),
            wave: WaveParams::default(),
            emission: EmissionPlan::default(),
            radio: RadioMode::Model,
            air_loss: 0.0,
            deadline: 0.020,
            beacon_bits: 2_400.0,
            reply_bits: 800.0,
            drain: 1.0,
            switch_cap: None,
            flow_match: FlowMatch::Destination,
            address_rotation: None,
            energy: EnergyCosts::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Scenario<'a> {
    pub trace: &'a Trace,
    pub rsus: &'a [RsuSite],
    pub topology: &'a TopologyGraph,
    pub controller: ControllerModel,
    pub placement: &'a PlacementConfig,
    pub params: &'a SimParams,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    EmptyPlacement,
    UnknownPlacementNode(usize),
    RsuNotInTopology(String),
    InvalidParams(&'static str),
    Collision(CollisionError),
    Radio(RadioError),
    Forward(ForwardError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::EmptyPlacement => f.write_str("placement has no detectors"),
            SimError::UnknownPlacementNode(i) => write!(f, "placement references node #{i} outside the topology"),
            SimError::RsuNotInTopology(id) => write!(f, "RSU {id} has no switch in the topology"),
            SimError::InvalidParams(msg) => write!(f, "invalid simulation parameters: {msg}"),
            SimError::Collision(e) => e.fmt(f),
            SimError::Radio(e) => e.fmt(f),
            SimError::Forward(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SimError {}

impl From<CollisionError> for SimError {
    fn from(e: CollisionError) -> Self {
        SimError::Collision(e)
    }
}

impl From<RadioError> for SimError {
    fn from(e: RadioError) -> Self {
        SimError::Radio(e)
    }
}

impl From<ForwardError> for SimError {
    fn from(e: ForwardError) -> Self {
        SimError::Forward(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub records: Vec<BeaconRecord>,
    pub energy: EnergyAccount,
    pub summary: MetricsSummary,
}

/// Timestamps of one beacon's journey.
#[derive(Debug, Clone, Default)]
struct Flight {
    rsu: Option<usize>,
    detector: Option<usize>,
    t_gen: SimTime,
    at_rsu: Option<SimTime>,
    at_detector: Option<SimTime>,
    processed: Option<SimTime>,
    reply_at_rsu: Option<SimTime>,
    at_vehicle: Option<SimTime>,
    alerts: u32,
}

struct Detector {
    node: NodeId,
    host: HostId,
    window: BeaconWindow,
    queue: VecDeque<usize>,
    busy: bool,
    pseudonyms: BTreeSet<String>,
    pending_alerts: BTreeMap<String, u32>,
    stats: DetectorStats,
}

struct Rsu<'a> {
    site: &'a RsuSite,
    node: NodeId,
    detector: usize,
}

/// Simulates every beacon of the trace and classifies it.
///
/// Each RSU is served by the detector with the lowest route latency from
/// its switch (smallest node id on ties). Detectors are FIFO single
/// servers whose service time grows with the number of vehicles in their
/// recent-beacon window. Beacons whose reply has not reached the vehicle by
/// `drain` seconds after the last beacon are lost.
pub fn run(scenario: &Scenario<'_>) -> Result<SimOutput, SimError> {
    let Scenario { trace, rsus, topology, controller, placement, params, seed } = *scenario;
    params.detector.validate()?;
    params.wave.validate()?;
    if !(params.deadline >= 0.0 && params.drain >= 0.0 && (0.0..=1.0).contains(&params.air_loss)) {
        return Err(SimError::InvalidParams("deadline and drain must be >= 0, air_loss within [0, 1]"));
    }
    if params.address_rotation == Some(0) {
        return Err(SimError::InvalidParams("address_rotation must be at least 1"));
    }
    if placement.is_empty() {
        return Err(SimError::EmptyPlacement);
    }
    if let Some(bad) = placement.nodes().iter().find(|n| n.0 >= topology.len()) {
        return Err(SimError::UnknownPlacementNode(bad.0));
    }

    let mut backhaul = Backhaul::new(topology.clone(), controller)?
        .with_switch_cap(params.switch_cap)
        .with_flow_match(params.flow_match);
    let mut hosts = HostRegistry::default();
    let mut detectors: Vec<Detector> = placement
        .nodes()
        .iter()
        .map(|&node| {
            let node_id = topology.node(node).id.clone();
            Detector {
                node,
                host: hosts.intern(&alloc::format!("detector@{node_id}")),
                window: BeaconWindow::new(params.detector.timeout),
                queue: VecDeque::new(),
                busy: false,
                pseudonyms: BTreeSet::new(),
                pending_alerts: BTreeMap::new(),
                stats: DetectorStats { node_id, ..Default::default() },
            }
        })
        .collect();
    let mut sites: Vec<Rsu<'_>> = Vec::with_capacity(rsus.len());
    for site in rsus {
        let node = topology.find(&site.rsu_id).ok_or_else(|| SimError::RsuNotInTopology(site.rsu_id.clone()))?;
        let detector = (0..detectors.len())
            .min_by_key(|&d| (backhaul.routes().latency(node, detectors[d].node), detectors[d].node))
            .expect("placement is non-empty");
        if backhaul.routes().latency(node, detectors[detector].node).is_none() {
            return Err(SimError::Forward(ForwardError::Unreachable {
                from: site.rsu_id.clone(),
                to: detectors[detector].stats.node_id.clone(),
            }));
        }
        sites.push(Rsu { site, node, detector });
    }

    let samples: Vec<BeaconSample> = beacon_schedule(trace, &params.emission);
    let mut flights: Vec<Flight> = Vec::with_capacity(samples.len());
    let mut pseudonym_hosts: Vec<HostId> = Vec::with_capacity(samples.len());
    let mut queue = EventQueue::new();
    for (i, s) in samples.iter().enumerate() {
        let t_gen = SimTime::from_secs(s.t_gen);
        flights.push(Flight { t_gen, ..Default::default() });
        let address = match params.address_rotation {
            None => hosts.intern(&s.vehicle_id),
            Some(k) => hosts.intern(&alloc::format!("{}#{}", s.vehicle_id, s.seq / u64::from(k))),
        };
        pseudonym_hosts.push(address);
        queue.schedule(t_gen, EventKind::BeaconGen, i);
    }
    let horizon = flights.iter().map(|f| f.t_gen).max().unwrap_or(SimTime::ZERO) + SimTime::from_secs(params.drain);

    let mut radio_rng = rngs::stream(seed, rngs::RADIO);
    let mut controller_rng = rngs::stream(seed, rngs::CONTROLLER);
    let mut energy = EnergyAccount::new();
    let mut purged_second = 0u64;
    let deadline = params.deadline;

    while let Some(ev) = queue.pop() {
        if ev.fire_time > horizon {
            break;
        }
        let now = ev.fire_time;
        let i = ev.beacon;
        match ev.kind {
            EventKind::BeaconGen => {
                let second = now.nanos() / SimTime::NANOS_PER_SEC;
                if second > purged_second {
                    backhaul.purge_rules(now);
                    purged_second = second;
                }
                let sample = &samples[i];
                let Some(site) = covering_rsu(sample.position, rsus) else { continue };
                let r = sites.iter().position(|s| core::ptr::eq(s.site, site)).expect("site list mirrors rsus");
                flights[i].rsu = Some(r);
                flights[i].detector = Some(sites[r].detector);
                if params.air_loss > 0.0 && radio_rng.gen::<f64>() < params.air_loss {
                    continue;
                }
                let delay = match &params.radio {
                    RadioMode::Model => access_delay(now.as_secs(), &params.wave, &mut radio_rng),
                    RadioMode::Inject { file, policy } => injected_delay(
                        file,
                        &sample.vehicle_id,
                        sample.seq,
                        *policy,
                        now.as_secs(),
                        &params.wave,
                        &mut radio_rng,
                    )?,
                };
                queue.schedule(now + SimTime::from_secs(delay), EventKind::RsuIngress, i);
            }
            EventKind::RsuIngress => {
                flights[i].at_rsu = Some(now);
                let r = flights[i].rsu.expect("covered");
                let d = sites[r].detector;
                energy.charge(EnergyEntity::RsuHost(sites[r].site.rsu_id.clone()), params.energy.rsu_per_packet);
                let packet = Packet { src: pseudonym_hosts[i], dst: detectors[d].host, size_bits: params.beacon_bits };
                let hop = backhaul.forward(&packet, sites[r].node, detectors[d].node, now, &mut controller_rng)?;
                energy.charge(EnergyEntity::Controller, f64::from(hop.controller_detours) * params.energy.controller_per_detour);
                if hop.delivered() {
                    queue.schedule(hop.arrival, EventKind::DetectorArrival, i);
                }
            }
            EventKind::DetectorArrival => {
                flights[i].at_detector = Some(now);
                let d = flights[i].detector.expect("routed");
                detectors[d].queue.push_back(i);
                if !detectors[d].busy {
                    start_service(&mut detectors[d], &samples, &mut flights, &mut queue, &mut energy, params, now)?;
                }
            }
            EventKind::DetectorDone => {
                flights[i].processed = Some(now);
                let d = flights[i].detector.expect("routed");
                let r = flights[i].rsu.expect("covered");
                let packet = Packet { src: detectors[d].host, dst: pseudonym_hosts[i], size_bits: params.reply_bits };
                let hop = backhaul.forward(&packet, detectors[d].node, sites[r].node, now, &mut controller_rng)?;
                energy.charge(EnergyEntity::Controller, f64::from(hop.controller_detours) * params.energy.controller_per_detour);
                if hop.delivered() {
                    queue.schedule(hop.arrival, EventKind::ReplyAtRsu, i);
                }
                detectors[d].busy = false;
                if !detectors[d].queue.is_empty() {
                    start_service(&mut detectors[d], &samples, &mut flights, &mut queue, &mut energy, params, now)?;
                }
            }
            EventKind::ReplyAtRsu => {
                flights[i].reply_at_rsu = Some(now);
                let r = flights[i].rsu.expect("covered");
                energy.charge(EnergyEntity::RsuHost(sites[r].site.rsu_id.clone()), params.energy.rsu_per_packet);
                let delay = access_delay(now.as_secs(), &params.wave, &mut radio_rng);
                queue.schedule(now + SimTime::from_secs(delay), EventKind::ReplyAtVehicle, i);
            }
            EventKind::ReplyAtVehicle => {
                flights[i].at_vehicle = Some(now);
            }
        }
    }
    energy.charge(EnergyEntity::Overhead, horizon.as_secs() * params.energy.overhead_per_second);

    let records: Vec<BeaconRecord> = samples
        .iter()
        .zip(&flights)
        .map(|(s, f)| {
            let between = |a: Option<SimTime>, b: Option<SimTime>| match (a, b) {
                (Some(a), Some(b)) => Some(b - a),
                _ => None,
            };
            let total = f.at_vehicle.map(|t| t - f.t_gen);
            let outcome = match f.rsu {
                None => Outcome::Uncovered,
                Some(_) => classify(total.map_or(f64::NAN, SimTime::as_secs), total.is_some(), deadline),
            };
            BeaconRecord {
                vehicle_id: s.vehicle_id.clone(),
                seq: s.seq,
                t_gen: f.t_gen,
                rsu_id: f.rsu.map(|r| sites[r].site.rsu_id.clone()),
                detector_id: f.detector.map(|d| detectors[d].stats.node_id.clone()),
                d_air_up: between(Some(f.t_gen), f.at_rsu),
                d_up: between(f.at_rsu, f.at_detector),
                d_proc: between(f.at_detector, f.processed),
                d_down: between(f.processed, f.reply_at_rsu),
                d_air_down: between(f.reply_at_rsu, f.at_vehicle),
                total,
                outcome,
                alerts: f.alerts,
            }
        })
        .collect();
    let stats: Vec<DetectorStats> = detectors
        .into_iter()
        .map(|d| DetectorStats { distinct_pseudonyms: d.pseudonyms.len() as u64, ..d.stats })
        .collect();
    let summary = summarize(&records, &energy, &stats, backhaul.total_detours());
    Ok(SimOutput { records, energy, summary })
}

fn start_service(
    det: &mut Detector,
    samples: &[BeaconSample],
    flights: &mut [Flight],
    queue: &mut EventQueue,
    energy: &mut EnergyAccount,
    params: &SimParams,
    now: SimTime,
) -> Result<(), SimError> {
    let Some(i) = det.queue.pop_front() else { return Ok(()) };
    let s = &samples[i];
    let t_now = now.as_secs();
    det.window.prune(t_now);
    let watched = det.window.neighbors_of(&s.vehicle_id);
    let cost = processing_cost(watched, &params.detector);
    let beacon = Beacon::new(s.vehicle_id.clone(), s.position, s.velocity, flights[i].t_gen.as_secs());
    let hits = detect(&beacon, &mut det.window, &params.detector, t_now)?;
    let mut alerts = hits.len() as u32;
    if let Some(pending) = det.pending_alerts.remove(&s.vehicle_id) {
        alerts += pending;
    }
    for hit in hits {
        *det.pending_alerts.entry(hit.other).or_insert(0) += 1;
    }
    flights[i].alerts = alerts;
    det.pseudonyms.insert(s.vehicle_id.clone());
    det.stats.beacons += 1;
    det.stats.watched_sum += watched as u64;
    det.stats.cost += cost;
    energy.charge(EnergyEntity::Detector(det.stats.node_id.clone()), cost);
    det.busy = true;
    queue.schedule(now + SimTime::from_secs(params.detector.service_time(cost)), EventKind::DetectorDone, i);
    Ok(())
}
