use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use vcdsim_core::MetricsSummary;

/// What was simulated, so `report` can group runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub n: usize,
    pub topology: String,
    pub controller: String,
    pub placement: String,
    pub seed: u64,
    pub deadline_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub mean_s: f64,
    pub count: u64,
    /// Sorted ascending; the empirical CDF.
    pub samples_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorDoc {
    pub node_id: String,
    pub beacons: u64,
    pub watched_vehicles: u64,
    pub mean_watched: f64,
    pub cost: f64,
    pub cost_per_beacon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub meta: RunMeta,
    pub generated: u64,
    pub success: u64,
    pub late: u64,
    pub lost: u64,
    pub uncovered: u64,
    pub success_fraction: f64,
    pub components: BTreeMap<String, ComponentDoc>,
    pub detectors: Vec<DetectorDoc>,
    pub controller_detours: u64,
    pub controller_cost: f64,
    pub energy: BTreeMap<String, f64>,
}

impl SummaryDoc {
    pub fn new(meta: RunMeta, s: &MetricsSummary) -> Self {
        SummaryDoc {
            meta,
            generated: s.generated,
            success: s.success,
            late: s.late,
            lost: s.lost,
            uncovered: s.uncovered,
            success_fraction: s.success_fraction(),
            components: s
                .components
                .iter()
                .map(|c| {
                    let doc = ComponentDoc { mean_s: c.mean, count: c.samples.len() as u64, samples_s: c.samples.clone() };
                    (c.name.to_owned(), doc)
                })
                .collect(),
            detectors: s
                .detectors
                .iter()
                .map(|d| DetectorDoc {
                    node_id: d.node_id.clone(),
                    beacons: d.beacons,
                    watched_vehicles: d.distinct_pseudonyms,
                    mean_watched: d.mean_watched(),
                    cost: d.cost,
                    cost_per_beacon: d.cost_per_beacon(),
                })
                .collect(),
            controller_detours: s.controller_detours,
            controller_cost: s.controller_cost,
            energy: s.energy_by_kind.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
