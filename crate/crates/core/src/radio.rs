//! Vehicle <-> RSU air-time delay.
//!
//! The built-in model follows IEEE 1609.4 alternating channel access: the
//! radio spends the first `cch_duration` of every `sync_interval` on the
//! control channel, where all beacons go. A beacon that cannot finish
//! transmitting before the control interval ends waits for the next one.
//! A bounded uniform jitter stands in for CSMA contention.
//!
//! Measured delays can replace the model through a [`DelayFile`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub sync_interval: f64,
    pub cch_duration: f64,
    pub data_rate: f64,
    pub payload_bits: f64,
    pub max_contention: f64,
}

impl Default for WaveParams {
    fn default() -> Self {
        WaveParams {
            sync_interval: 0.100,
            cch_duration: 0.050,
            data_rate: 6_000_000.0,
            payload_bits: 2_400.0,
            max_contention: 0.002,
        }
    }
}

impl WaveParams {
    pub fn tx_time(&self) -> f64 {
        self.payload_bits / self.data_rate
    }

    pub fn validate(&self) -> Result<(), RadioError> {
        if !(self.cch_duration > 0.0 && self.cch_duration <= self.sync_interval) {
            return Err(RadioError::InvalidParams("need 0 < cch_duration <= sync_interval"));
        }
        if !(self.data_rate > 0.0 && self.payload_bits >= 0.0) {
            return Err(RadioError::InvalidParams("data rate must be positive"));
        }
        if !(self.tx_time() < self.cch_duration) {
            return Err(RadioError::InvalidParams("a beacon must fit in one control-channel interval"));
        }
        if !(self.max_contention >= 0.0) {
            return Err(RadioError::InvalidParams("max_contention must be non-negative"));
        }
        Ok(())
    }

    /// Largest delay the model can return.
    pub fn max_delay(&self) -> f64 {
        self.sync_interval - self.cch_duration + 2.0 * self.tx_time() + self.max_contention
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadioError {
    MissingDelay { vehicle_id: String, seq: u64 },
    NegativeDelay { vehicle_id: String, seq: u64 },
    InvalidParams(&'static str),
}

impl fmt::Display for RadioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadioError::MissingDelay { vehicle_id, seq } => {
                write!(f, "no injected delay for vehicle {vehicle_id} beacon {seq}")
            }
            RadioError::NegativeDelay { vehicle_id, seq } => {
                write!(f, "negative injected delay for vehicle {vehicle_id} beacon {seq}")
            }
            RadioError::InvalidParams(msg) => write!(f, "invalid WAVE parameters: {msg}"),
        }
    }
}

impl core::error::Error for RadioError {}

/// Air delay of a frame handed to the radio at `t_gen`.
pub fn access_delay<R: Rng + ?Sized>(t_gen: f64, params: &WaveParams, rng: &mut R) -> f64 {
    let tx = params.tx_time();
    let phase = t_gen.max(0.0) % params.sync_interval;
    let wait = if phase + tx <= params.cch_duration { 0.0 } else { params.sync_interval - phase };
    let jitter = if params.max_contention > 0.0 { rng.gen_range(0.0..=params.max_contention) } else { 0.0 };
    wait + tx + jitter
}

/// What to do when a beacon has no entry in the delay file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingDelayPolicy {
    #[default]
    Strict,
    /// Use [`access_delay`] instead.
    Fallback,
}

/// Per-beacon uplink delays, keyed by vehicle id and beacon sequence number.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DelayFile {
    entries: BTreeMap<(String, u64), f64>,
}

impl DelayFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, vehicle_id: impl Into<String>, seq: u64, delay: f64) -> Result<(), RadioError> {
        let vehicle_id = vehicle_id.into();
        if !(delay >= 0.0 && delay.is_finite()) {
            return Err(RadioError::NegativeDelay { vehicle_id, seq });
        }
        self.entries.insert((vehicle_id, seq), delay);
        Ok(())
    }

    pub fn get(&self, vehicle_id: &str, seq: u64) -> Option<f64> {
        self.entries.get(&(String::from(vehicle_id), seq)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64, f64)> {
        self.entries.iter().map(|((id, seq), d)| (id.as_str(), *seq, *d))
    }
}

/// Injected delay for beacon `seq` of `vehicle_id`, falling back to the
/// channel model at `t_gen` when the policy allows it.
pub fn injected_delay<R: Rng + ?Sized>(
    file: &DelayFile,
    vehicle_id: &str,
    seq: u64,
    policy: MissingDelayPolicy,
    t_gen: f64,
    params: &WaveParams,
    rng: &mut R,
) -> Result<f64, RadioError> {
    match (file.get(vehicle_id, seq), policy) {
        (Some(d), _) => Ok(d),
        (None, MissingDelayPolicy::Fallback) => Ok(access_delay(t_gen, params, rng)),
        (None, MissingDelayPolicy::Strict) => {
            Err(RadioError::MissingDelay { vehicle_id: String::from(vehicle_id), seq })
        }
    }
}
