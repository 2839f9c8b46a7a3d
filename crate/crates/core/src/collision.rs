//! Closest-point-of-approach collision detection over the set of beacons a
//! detector received recently, and the detector's processing-cost model.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct Beacon {
    /// Temporary source address; the only sender identity a detector sees.
    pub pseudonym: String,
    pub x0: Vec2,
    pub v: Vec2,
    pub t_gen: f64,
}

impl Beacon {
    pub fn new(pseudonym: impl Into<String>, x0: Vec2, v: Vec2, t_gen: f64) -> Self {
        Beacon { pseudonym: pseudonym.into(), x0, v, t_gen }
    }

    fn check(&self) -> Result<(), CollisionError> {
        if self.pseudonym.is_empty() {
            return Err(CollisionError::EmptyPseudonym);
        }
        if !(self.x0.is_finite() && self.v.is_finite() && self.t_gen.is_finite()) {
            return Err(CollisionError::NonFinite { pseudonym: self.pseudonym.clone() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CollisionError {
    NonFinite { pseudonym: String },
    EmptyPseudonym,
    InvalidParams(&'static str),
}

impl fmt::Display for CollisionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollisionError::NonFinite { pseudonym } => write!(f, "beacon from {pseudonym} has non-finite fields"),
            CollisionError::EmptyPseudonym => f.write_str("beacon has an empty pseudonym"),
            CollisionError::InvalidParams(msg) => write!(f, "invalid detector parameters: {msg}"),
        }
    }
}

impl core::error::Error for CollisionError {}

/// A vehicle the current one is predicted to pass within `d_min` of.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionPrediction {
    pub other: String,
    /// Seconds from now until closest approach.
    pub t_star: f64,
    /// Separation at closest approach, meters.
    pub d_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CpaOutcome {
    /// Closest approach lies in the future (or now).
    Approaching { t_star: f64, d_star: f64 },
    /// Closest approach was in the past; the vehicles are moving apart.
    Diverging { t_star: f64 },
    /// Identical velocities: the separation never changes.
    Parallel { d_star: f64 },
}

/// Closest point of approach of two constant-velocity trajectories.
///
/// With `dx = a.x0 - b.x0` and `dv = a.v - b.v` the squared separation is
/// `D(t) = |dv|² t² + 2 (dx·dv) t + |dx|²`, minimised at
/// `t* = -(dx·dv) / |dv|²`.
pub fn cpa_pair(a: &Beacon, b: &Beacon) -> Result<CpaOutcome, CollisionError> {
    for beacon in [a, b] {
        if !(beacon.x0.is_finite() && beacon.v.is_finite()) {
            return Err(CollisionError::NonFinite { pseudonym: beacon.pseudonym.clone() });
        }
    }
    let dx = a.x0 - b.x0;
    let dv = a.v - b.v;
    let dv2 = dv.norm_sq();
    if dv2 == 0.0 {
        return Ok(CpaOutcome::Parallel { d_star: dx.norm() });
    }
    let dxdv = dx.dot(dv);
    let t_star = -dxdv / dv2;
    if t_star < 0.0 {
        return Ok(CpaOutcome::Diverging { t_star });
    }
    let d2 = dv2 * t_star * t_star + 2.0 * dxdv * t_star + dx.norm_sq();
    Ok(CpaOutcome::Approaching { t_star, d_star: libm::sqrt(d2.max(0.0)) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Alert threshold on the predicted minimum separation, meters.
    pub d_min: f64,
    /// Beacons older than this many seconds leave the window.
    pub timeout: f64,
    pub cost_base: f64,
    pub cost_per_neighbor: f64,
    /// Service seconds per cost unit.
    pub seconds_per_cost: f64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        // 100 watched vehicles cost 10.5 units, about 1 ms of service.
        DetectorParams { d_min: 5.0, timeout: 1.0, cost_base: 0.5, cost_per_neighbor: 0.1, seconds_per_cost: 1e-4 }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<(), CollisionError> {
        if !(self.d_min > 0.0) {
            return Err(CollisionError::InvalidParams("d_min must be positive"));
        }
        if !(self.timeout > 0.0) {
            return Err(CollisionError::InvalidParams("timeout must be positive"));
        }
        if !(self.cost_base >= 0.0 && self.cost_per_neighbor >= 0.0 && self.seconds_per_cost >= 0.0) {
            return Err(CollisionError::InvalidParams("cost parameters must be non-negative"));
        }
        Ok(())
    }

    pub fn service_time(&self, cost: f64) -> f64 {
        cost * self.seconds_per_cost
    }
}

/// Cost units spent checking one beacon against `window_size` others.
pub fn processing_cost(window_size: usize, params: &DetectorParams) -> f64 {
    params.cost_base + params.cost_per_neighbor * window_size as f64
}

/// Recently received beacons, at most one per pseudonym.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BeaconWindow {
    entries: BTreeMap<String, Beacon>,
    timeout: f64,
}

impl BeaconWindow {
    pub fn new(timeout: f64) -> Self {
        BeaconWindow { entries: BTreeMap::new(), timeout }
    }

    pub fn timeout(&self) -> f64 {
        self.timeout
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, pseudonym: &str) -> bool {
        self.entries.contains_key(pseudonym)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Beacon> {
        self.entries.values()
    }

    /// Drops entries generated more than `timeout` seconds before `t_now`.
    pub fn prune(&mut self, t_now: f64) {
        let timeout = self.timeout;
        self.entries.retain(|_, b| t_now - b.t_gen <= timeout);
    }

    /// Number of entries a beacon from `pseudonym` is compared against.
    pub fn neighbors_of(&self, pseudonym: &str) -> usize {
        self.entries.len() - usize::from(self.entries.contains_key(pseudonym))
    }

    /// Inserts `beacon` unless the window already holds a newer one from the
    /// same pseudonym.
    pub fn insert(&mut self, beacon: Beacon) {
        match self.entries.get_mut(&beacon.pseudonym) {
            Some(existing) if existing.t_gen > beacon.t_gen => {}
            Some(existing) => *existing = beacon,
            None => {
                self.entries.insert(beacon.pseudonym.clone(), beacon);
            }
        }
    }
}

/// Checks `current` against every other pseudonym in `window` and returns
/// the predicted collisions, ordered by pseudonym.
///
/// The window is pruned to `t_now` first. `current` is then inserted if it
/// is itself still fresh at `t_now`. Pairs with identical velocities alert
/// when their constant separation is within `d_min`, reported with
/// `t_star = 0`.
pub fn detect(
    current: &Beacon,
    window: &mut BeaconWindow,
    params: &DetectorParams,
    t_now: f64,
) -> Result<Vec<CollisionPrediction>, CollisionError> {
    current.check()?;
    window.prune(t_now);
    let mut hits = Vec::new();
    for other in window.entries() {
        if other.pseudonym == current.pseudonym {
            continue;
        }
        let (t_star, d_star) = match cpa_pair(current, other)? {
            CpaOutcome::Approaching { t_star, d_star } => (t_star, d_star),
            CpaOutcome::Parallel { d_star } => (0.0, d_star),
            CpaOutcome::Diverging { .. } => continue,
        };
        if d_star <= params.d_min {
            hits.push(CollisionPrediction { other: other.pseudonym.clone(), t_star, d_star });
        }
    }
    if t_now - current.t_gen <= window.timeout {
        window.insert(current.clone());
    }
    Ok(hits)
}
