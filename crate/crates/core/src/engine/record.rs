use alloc::string::String;

use crate::time::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Success,
    Late,
    Lost,
    /// No RSU covered the vehicle; the beacon never entered the network.
    Uncovered,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Late => "late",
            Outcome::Lost => "lost",
            Outcome::Uncovered => "uncovered",
        }
    }

    pub fn parse(s: &str) -> Option<Outcome> {
        Some(match s {
            "success" => Outcome::Success,
            "late" => Outcome::Late,
            "lost" => Outcome::Lost,
            "uncovered" => Outcome::Uncovered,
            _ => return None,
        })
    }

    pub fn replied(self) -> bool {
        matches!(self, Outcome::Success | Outcome::Late)
    }

    pub fn covered(self) -> bool {
        self != Outcome::Uncovered
    }
}

/// Success if a reply came back within `deadline`, late if it came back
/// after it, lost if it never came back.
pub fn classify(total: f64, replied: bool, deadline: f64) -> Outcome {
    match (replied, total <= deadline) {
        (false, _) => Outcome::Lost,
        (true, true) => Outcome::Success,
        (true, false) => Outcome::Late,
    }
}

/// Fate of one beacon. Delay components are `None` for legs the beacon
/// never completed.
#[derive(Debug, Clone, PartialEq)]
pub struct BeaconRecord {
    pub vehicle_id: String,
    pub seq: u64,
    pub t_gen: SimTime,
    pub rsu_id: Option<String>,
    pub detector_id: Option<String>,
    /// Vehicle to RSU.
    pub d_air_up: Option<SimTime>,
    /// RSU to detector.
    pub d_up: Option<SimTime>,
    /// Queueing plus service inside the detector.
    pub d_proc: Option<SimTime>,
    /// Detector back to RSU.
    pub d_down: Option<SimTime>,
    /// RSU to vehicle.
    pub d_air_down: Option<SimTime>,
    pub total: Option<SimTime>,
    pub outcome: Outcome,
    pub alerts: u32,
}

impl BeaconRecord {
    pub fn components(&self) -> [Option<SimTime>; 5] {
        [self.d_air_up, self.d_up, self.d_proc, self.d_down, self.d_air_down]
    }
}
