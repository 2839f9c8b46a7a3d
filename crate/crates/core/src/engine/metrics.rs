use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::energy::EnergyAccount;
use super::record::{BeaconRecord, Outcome};

pub const COMPONENT_NAMES: [&str; 6] = ["d_air_up", "d_up", "d_proc", "d_down", "d_air_down", "total"];

/// What one detector did during a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectorStats {
    pub node_id: String,
    pub beacons: u64,
    pub distinct_pseudonyms: u64,
    /// Sum over processed beacons of the window size it was checked against.
    pub watched_sum: u64,
    pub cost: f64,
}

impl DetectorStats {
    /// Mean number of vehicles watched while processing a beacon.
    pub fn mean_watched(&self) -> f64 {
        if self.beacons == 0 {
            0.0
        } else {
            self.watched_sum as f64 / self.beacons as f64
        }
    }

    pub fn cost_per_beacon(&self) -> f64 {
        if self.beacons == 0 {
            0.0
        } else {
            self.cost / self.beacons as f64
        }
    }
}

/// Mean and sorted samples (seconds) of one delay component over replied
/// beacons.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComponentStats {
    pub name: &'static str,
    pub mean: f64,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsSummary {
    pub generated: u64,
    pub success: u64,
    pub late: u64,
    pub lost: u64,
    pub uncovered: u64,
    pub components: Vec<ComponentStats>,
    pub detectors: Vec<DetectorStats>,
    pub controller_detours: u64,
    pub controller_cost: f64,
    /// Cost units per entity kind (`detector`, `rsu-host`, `controller`,
    /// `overhead`).
    pub energy_by_kind: BTreeMap<String, f64>,
}

impl MetricsSummary {
    pub fn covered(&self) -> u64 {
        self.success + self.late + self.lost
    }

    /// Successes over covered beacons; 1 when nothing was covered.
    pub fn success_fraction(&self) -> f64 {
        match self.covered() {
            0 => 1.0,
            c => self.success as f64 / c as f64,
        }
    }

    pub fn component(&self, name: &str) -> Option<&ComponentStats> {
        self.components.iter().find(|c| c.name == name)
    }
}

/// Aggregates a run: outcome counts, per-component delay distributions,
/// per-detector load and cost, and controller cost.
pub fn summarize(
    records: &[BeaconRecord],
    energy: &EnergyAccount,
    detectors: &[DetectorStats],
    controller_detours: u64,
) -> MetricsSummary {
    let mut s = MetricsSummary { generated: records.len() as u64, ..Default::default() };
    let mut samples: [Vec<f64>; 6] = Default::default();
    for r in records {
        match r.outcome {
            Outcome::Success => s.success += 1,
            Outcome::Late => s.late += 1,
            Outcome::Lost => s.lost += 1,
            Outcome::Uncovered => s.uncovered += 1,
        }
        if !r.outcome.replied() {
            continue;
        }
        let values = [r.d_air_up, r.d_up, r.d_proc, r.d_down, r.d_air_down, r.total];
        for (bucket, v) in samples.iter_mut().zip(values) {
            if let Some(v) = v {
                bucket.push(v.as_secs());
            }
        }
    }
    s.components = COMPONENT_NAMES
        .iter()
        .zip(samples)
        .map(|(name, mut values)| {
            let mean = if values.is_empty() { 0.0 } else { values.iter().sum::<f64>() / values.len() as f64 };
            values.sort_by(f64::total_cmp);
            ComponentStats { name, mean, samples: values }
        })
        .collect();
    s.detectors = detectors.to_vec();
    s.controller_detours = controller_detours;
    s.controller_cost = energy.total_of("controller");
    for kind in ["detector", "rsu-host", "controller", "overhead"] {
        s.energy_by_kind.insert(String::from(kind), energy.total_of(kind));
    }
    s
}
