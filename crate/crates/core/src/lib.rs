//! Discrete-event core of a vehicular collision-detection simulator.
//!
//! Vehicles send one beacon per second over a WAVE radio hop to a road-side
//! unit (RSU), which relays it across an SDN-controlled switched backhaul to
//! a collision detector. The detector runs a closest-point-of-approach check
//! against the beacons it has seen recently and replies along the reverse
//! path. Every beacon ends up as a [`BeaconRecord`] with its delay broken
//! into air, uplink, processing and downlink components.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, configuration and
//! the command line live in the `vcdsim` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod backhaul;
pub mod collision;
pub mod engine;
pub mod geom;
pub mod mobility;
pub mod placement;
pub mod radio;
pub mod rngs;
pub mod time;

pub use backhaul::{
    build_topology, Backhaul, ControllerModel, ForwardError, LinkParams, NodeId, NodeKind,
    Packet, TopologyError, TopologyGraph, TopologyKind, Traversal,
};
pub use collision::{
    cpa_pair, detect, processing_cost, Beacon, BeaconWindow, CollisionError, CollisionPrediction,
    CpaOutcome, DetectorParams,
};
pub use engine::{
    classify, run, summarize, BeaconRecord, EnergyAccount, EnergyEntity, MetricsSummary, Outcome,
    Scenario, SimError, SimOutput, SimParams,
};
pub use geom::Vec2;
pub use mobility::{covering_rsu, synth_trace, Bounds, RsuSite, Trace, TraceError, VehicleState};
pub use placement::{
    place_rsus, refine, refine_step, success_fractions, Evaluation, Evaluator, MoveRule,
    IterationLog, PlacementConfig, PlacementError, RefineError, RefineOutcome, RefinementState,
    SimEvaluator, StepOutcome,
};
pub use radio::{access_delay, injected_delay, DelayFile, MissingDelayPolicy, RadioError, WaveParams};
pub use time::SimTime;
