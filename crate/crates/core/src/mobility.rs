//! Vehicle mobility: traces, synthetic trace generation, RSU coverage and
//! the per-vehicle beacon schedule.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::Rng;

use crate::geom::Vec2;
use crate::rngs::{self, fnv1a, mix64};

/// Trace maximum speed, 70.1 km/h.
pub const DEFAULT_MAX_SPEED: f64 = 19.5;
pub const DEFAULT_COVERAGE_RADIUS: f64 = 255.0;

/// Per-second probability that a synthetic vehicle turns at a junction.
const TURN_PROBABILITY: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub vehicle_id: String,
    pub time: f64,
    pub position: Vec2,
    pub velocity: Vec2,
}

/// Axis-aligned rectangle, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Vec2,
    pub max: Vec2,
}

impl Bounds {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Bounds { min, max }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.width() > 0.0 && self.height() > 0.0)
    }

    /// Smallest box containing every point, or `None` for an empty iterator.
    pub fn enclosing(points: impl IntoIterator<Item = Vec2>) -> Option<Bounds> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = Bounds::new(first, first);
        for p in it {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceError {
    Duplicate { vehicle_id: String, time: f64 },
    OutOfBounds { vehicle_id: String, time: f64 },
    NegativeTime { vehicle_id: String, time: f64 },
    NonFinite { vehicle_id: String, time: f64 },
    SpeedLimit { vehicle_id: String, time: f64, speed: f64 },
    InvalidConfig(&'static str),
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::Duplicate { vehicle_id, time } => {
                write!(f, "duplicate state for vehicle {vehicle_id} at t={time}")
            }
            TraceError::OutOfBounds { vehicle_id, time } => {
                write!(f, "vehicle {vehicle_id} at t={time} lies outside the trace bounds")
            }
            TraceError::NegativeTime { vehicle_id, time } => {
                write!(f, "vehicle {vehicle_id} has negative time {time}")
            }
            TraceError::NonFinite { vehicle_id, time } => {
                write!(f, "vehicle {vehicle_id} at t={time} has a non-finite field")
            }
            TraceError::SpeedLimit { vehicle_id, time, speed } => {
                write!(f, "vehicle {vehicle_id} at t={time} moves at {speed} m/s, above the limit")
            }
            TraceError::InvalidConfig(msg) => write!(f, "invalid trace configuration: {msg}"),
        }
    }
}

impl core::error::Error for TraceError {}

/// Time-ordered vehicle states over a rectangular region.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    duration: f64,
    states: Vec<VehicleState>,
    bounds: Bounds,
}

impl Trace {
    /// Validates and sorts `states` by `(time, vehicle_id)`.
    pub fn new(mut states: Vec<VehicleState>, bounds: Bounds) -> Result<Trace, TraceError> {
        for s in &states {
            if !(s.time.is_finite() && s.position.is_finite() && s.velocity.is_finite()) {
                return Err(TraceError::NonFinite { vehicle_id: s.vehicle_id.clone(), time: s.time });
            }
            if s.time < 0.0 {
                return Err(TraceError::NegativeTime { vehicle_id: s.vehicle_id.clone(), time: s.time });
            }
            if !bounds.contains(s.position) {
                return Err(TraceError::OutOfBounds { vehicle_id: s.vehicle_id.clone(), time: s.time });
            }
        }
        states.sort_by(|a, b| a.time.total_cmp(&b.time).then_with(|| a.vehicle_id.cmp(&b.vehicle_id)));
        for pair in states.windows(2) {
            if pair[0].time == pair[1].time && pair[0].vehicle_id == pair[1].vehicle_id {
                return Err(TraceError::Duplicate {
                    vehicle_id: pair[0].vehicle_id.clone(),
                    time: pair[0].time,
                });
            }
        }
        let duration = states.iter().map(|s| s.time).fold(0.0, f64::max);
        Ok(Trace { duration, states, bounds })
    }

    pub fn empty(bounds: Bounds) -> Trace {
        Trace { duration: 0.0, states: Vec::new(), bounds }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn states(&self) -> &[VehicleState] {
        &self.states
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Fails on the first state whose speed exceeds `max_speed`.
    pub fn check_speed(&self, max_speed: f64) -> Result<(), TraceError> {
        for s in &self.states {
            let speed = s.velocity.norm();
            if speed > max_speed {
                return Err(TraceError::SpeedLimit { vehicle_id: s.vehicle_id.clone(), time: s.time, speed });
            }
        }
        Ok(())
    }

    /// States grouped per vehicle, each group in time order. Groups are
    /// ordered by vehicle id.
    pub fn by_vehicle(&self) -> Vec<(&str, Vec<&VehicleState>)> {
        let mut groups: alloc::collections::BTreeMap<&str, Vec<&VehicleState>> = Default::default();
        for s in &self.states {
            groups.entry(s.vehicle_id.as_str()).or_default().push(s);
        }
        groups.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsuSite {
    pub rsu_id: String,
    pub position: Vec2,
    pub coverage_radius: f64,
}

impl RsuSite {
    pub fn new(rsu_id: impl Into<String>, position: Vec2, coverage_radius: f64) -> Self {
        RsuSite { rsu_id: rsu_id.into(), position, coverage_radius }
    }

    pub fn covers(&self, p: Vec2) -> bool {
        self.position.distance(p) <= self.coverage_radius
    }
}

/// Nearest RSU whose disc contains `position`; equal distances go to the
/// smallest `rsu_id`.
pub fn covering_rsu<'a>(position: Vec2, rsus: &'a [RsuSite]) -> Option<&'a RsuSite> {
    let mut best: Option<(&RsuSite, f64)> = None;
    for rsu in rsus {
        let d = rsu.position.distance(position);
        if d > rsu.coverage_radius {
            continue;
        }
        best = match best {
            Some((cur, cd)) if cd < d || (cd == d && cur.rsu_id <= rsu.rsu_id) => Some((cur, cd)),
            _ => Some((rsu, d)),
        };
    }
    best.map(|(r, _)| r)
}

/// Random-waypoint-free synthetic mobility: each vehicle drives straight at
/// constant speed, turns by ±90° now and then, and bounces off the region
/// border. One state per vehicle per second for `t = 0..=duration`.
pub fn synth_trace(
    seed: u64,
    n_vehicles: usize,
    duration: u32,
    bounds: Bounds,
    speed_range: (f64, f64),
) -> Result<Trace, TraceError> {
    if bounds.is_degenerate() || !bounds.min.is_finite() || !bounds.max.is_finite() {
        return Err(TraceError::InvalidConfig("bounds have zero area"));
    }
    let (lo, hi) = speed_range;
    if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
        return Err(TraceError::InvalidConfig("speed range must satisfy 0 <= min <= max"));
    }
    let mut rng = rngs::stream(seed, rngs::TRACE);
    let width = id_width(n_vehicles);
    let mut states = Vec::with_capacity(n_vehicles * (duration as usize + 1));
    for i in 0..n_vehicles {
        let id = alloc::format!("v{i:0width$}");
        let mut pos = Vec2::new(
            bounds.min.x + rng.gen::<f64>() * bounds.width(),
            bounds.min.y + rng.gen::<f64>() * bounds.height(),
        );
        let mut heading = rng.gen::<f64>() * 2.0 * PI;
        let speed = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        for t in 0..=duration {
            if t > 0 && rng.gen::<f64>() < TURN_PROBABILITY {
                heading += if rng.gen::<bool>() { PI / 2.0 } else { -PI / 2.0 };
            }
            let mut vel = Vec2::new(speed * libm::cos(heading), speed * libm::sin(heading));
            let next = pos + vel;
            if next.x < bounds.min.x || next.x > bounds.max.x {
                vel.x = -vel.x;
            }
            if next.y < bounds.min.y || next.y > bounds.max.y {
                vel.y = -vel.y;
            }
            heading = libm::atan2(vel.y, vel.x);
            states.push(VehicleState { vehicle_id: id.clone(), time: f64::from(t), position: pos, velocity: vel });
            pos = clamp(pos + vel, bounds);
        }
    }
    Trace::new(states, bounds)
}

fn id_width(n: usize) -> usize {
    let mut width = 1;
    let mut m = n.saturating_sub(1);
    while m >= 10 {
        m /= 10;
        width += 1;
    }
    width.max(4)
}

fn clamp(p: Vec2, b: Bounds) -> Vec2 {
    Vec2::new(p.x.clamp(b.min.x, b.max.x), p.y.clamp(b.min.y, b.max.y))
}

/// When within each second a vehicle's application hands its beacon to the
/// radio.
///
/// The offset is hashed from the vehicle id: the hash picks one of the
/// `1 / slot_length` sync intervals of the second, and a position inside
/// the first `window` seconds of it. With `window == slot_length` offsets
/// are spread uniformly over the whole second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionPlan {
    pub period: f64,
    pub slot_length: f64,
    pub window: f64,
}

impl Default for EmissionPlan {
    fn default() -> Self {
        EmissionPlan { period: 1.0, slot_length: 0.100, window: 0.025 }
    }
}

impl EmissionPlan {
    pub fn offset(&self, vehicle_id: &str) -> f64 {
        let h = mix64(fnv1a(vehicle_id.as_bytes()));
        let slots = libm::floor(self.period / self.slot_length + 1e-9).max(1.0) as u64;
        let slot = (h & 0xffff_ffff) % slots;
        let frac = (h >> 32) as f64 / 4_294_967_296.0;
        let offset = slot as f64 * self.slot_length + frac * self.window.min(self.slot_length);
        offset.min(self.period * (1.0 - f64::EPSILON))
    }
}

/// One beacon as sampled from the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct BeaconSample {
    pub vehicle_id: String,
    pub seq: u64,
    pub t_gen: f64,
    pub position: Vec2,
    pub velocity: Vec2,
}

/// Beacon schedule for a whole trace, sorted by `(t_gen, vehicle_id)`.
///
/// A vehicle emits at `first_seen + offset + k * period` while that instant
/// does not pass its last trace state. Each beacon carries the trace state
/// nearest in time (earlier state on ties).
pub fn beacon_schedule(trace: &Trace, plan: &EmissionPlan) -> Vec<BeaconSample> {
    let mut out = Vec::new();
    for (id, states) in trace.by_vehicle() {
        let first = states[0].time;
        let last = states[states.len() - 1].time;
        let offset = plan.offset(id);
        let mut cursor = 0usize;
        let mut seq = 0u64;
        loop {
            let t = first + offset + seq as f64 * plan.period;
            if t > last {
                break;
            }
            while cursor + 1 < states.len()
                && libm::fabs(states[cursor + 1].time - t) < libm::fabs(states[cursor].time - t)
            {
                cursor += 1;
            }
            let s = states[cursor];
            out.push(BeaconSample {
                vehicle_id: String::from(id),
                seq,
                t_gen: t,
                position: s.position,
                velocity: s.velocity,
            });
            seq += 1;
        }
    }
    out.sort_by(|a, b| a.t_gen.total_cmp(&b.t_gen).then_with(|| a.vehicle_id.cmp(&b.vehicle_id)));
    out
}
