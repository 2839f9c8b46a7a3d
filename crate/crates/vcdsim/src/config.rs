//! Flat `key = value` experiment configuration.
//!
//! Blank lines and text after `#` are ignored. Paths in a config file are
//! relative to the file's directory. `--set key=value` overrides win over
//! the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use vcdsim_core::backhaul::FlowMatch;
use vcdsim_core::engine::{EnergyCosts, RadioMode};
use vcdsim_core::mobility::{EmissionPlan, DEFAULT_MAX_SPEED};
use vcdsim_core::{Bounds, ControllerModel, MissingDelayPolicy, MoveRule, SimParams, TopologyKind, Vec2};

use crate::error::{Error, Result};

/// Every accepted key with its default (empty: no default).
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "1"),
    ("trace_file", ""),
    ("trace_bounds", ""),
    ("synth_vehicles", "500"),
    ("synth_duration", "60"),
    ("synth_width", "3000"),
    ("synth_height", "3000"),
    ("synth_speed_min", "5"),
    ("synth_speed_max", "19.5"),
    ("max_speed", "19.5"),
    ("rsu_file", ""),
    ("rsu_count", "20"),
    ("rsu_grid", "8"),
    ("rsu_radius", "255"),
    ("topology", "star"),
    ("cores", "4"),
    ("link_latency", "0.00012"),
    ("link_bandwidth", "1e9"),
    ("controller", "fast"),
    ("controller_latency", ""),
    ("controller_jitter", ""),
    ("rule_timeout", "10"),
    ("switch_cap", ""),
    ("flow_match", "dst"),
    ("address_rotation", ""),
    ("placement", ""),
    ("refine_n", ""),
    ("refine_iters", "30"),
    ("refine_rule", "literal"),
    ("radio", "model"),
    ("delay_file", ""),
    ("missing_delay", "strict"),
    ("sync_interval", "0.1"),
    ("cch_duration", "0.05"),
    ("data_rate", "6e6"),
    ("beacon_bits", "2400"),
    ("reply_bits", "800"),
    ("max_contention", "0.002"),
    ("air_loss", "0"),
    ("emission_window", "0.025"),
    ("deadline", "0.02"),
    ("drain", "1"),
    ("d_min", "5"),
    ("window_timeout", "1"),
    ("cost_base", "0.5"),
    ("cost_per_neighbor", "0.1"),
    ("seconds_per_cost", "0.0001"),
    ("energy_rsu_packet", "0.2"),
    ("energy_controller_detour", "1"),
    ("energy_overhead_per_s", "50"),
    ("output", "out"),
];

const PATH_KEYS: [&str; 4] = ["trace_file", "rsu_file", "delay_file", "output"];

/// Raw key/value pairs before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, mut v) = (k.trim().to_owned(), v.trim().to_owned());
            check_key(&k)?;
            if let (Some(dir), true) = (base_dir, PATH_KEYS.contains(&k.as_str())) {
                if !v.is_empty() && Path::new(&v).is_relative() {
                    v = dir.join(&v).to_string_lossy().into_owned();
                }
            }
            if values.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("line {}: `{k}` set twice", i + 1)));
            }
        }
        Ok(RawConfig { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent())
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let k = k.trim();
        check_key(k)?;
        self.values.insert(k.to_owned(), v.trim().to_owned());
        Ok(())
    }

    fn given(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.given(key).unwrap_or_else(|| default_of(key));
        raw.parse().map_err(|_| Error::Config(format!("bad value for {key}: `{raw}`")))
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.given(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| Error::Config(format!("bad value for {key}: `{raw}`"))),
        }
    }

    fn any_given(&self, prefix: &str) -> Option<&str> {
        self.values.iter().find(|(k, v)| k.starts_with(prefix) && !v.is_empty()).map(|(k, _)| k.as_str())
    }
}

fn check_key(k: &str) -> Result<()> {
    if KEYS.iter().any(|(name, _)| *name == k) {
        Ok(())
    } else {
        Err(Error::Config(format!("unknown key `{k}`")))
    }
}

fn default_of(key: &str) -> &'static str {
    KEYS.iter().find(|(k, _)| *k == key).map_or("", |(_, d)| d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    File { path: PathBuf, bounds: Option<Bounds> },
    Synth { vehicles: usize, duration: u32, bounds: Bounds, speed: (f64, f64) },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RsuSource {
    File(PathBuf),
    /// Greedy choice among the centers of a `grid` x `grid` lattice over the
    /// trace bounds.
    Greedy { count: usize, grid: usize, radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlacementMode {
    Explicit(Vec<String>),
    Refine { n: usize, iterations: usize, rule: MoveRule },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub trace: TraceSource,
    pub max_speed: f64,
    pub rsus: RsuSource,
    pub topology: TopologyKind,
    pub cores: usize,
    pub link: vcdsim_core::LinkParams,
    pub controller_name: String,
    pub controller: ControllerModel,
    pub placement: Option<PlacementMode>,
    /// Simulation knobs. With `radio = inject` the delay file is loaded
    /// later from `delay_file`.
    pub params: SimParams,
    pub delay_file: Option<(PathBuf, MissingDelayPolicy)>,
    pub output: PathBuf,
}

impl ScenarioConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let trace = match (raw.given("trace_file"), raw.any_given("synth_")) {
            (Some(_), Some(k)) => return Err(Error::Config(format!("trace_file and {k} are both set"))),
            (Some(path), None) => TraceSource::File {
                path: PathBuf::from(path),
                bounds: raw.opt::<String>("trace_bounds")?.map(|b| parse_bounds(&b)).transpose()?,
            },
            (None, _) => {
                let (w, h): (f64, f64) = (raw.get("synth_width")?, raw.get("synth_height")?);
                TraceSource::Synth {
                    vehicles: raw.get("synth_vehicles")?,
                    duration: raw.get("synth_duration")?,
                    bounds: Bounds::new(Vec2::ZERO, Vec2::new(w, h)),
                    speed: (raw.get("synth_speed_min")?, raw.get("synth_speed_max")?),
                }
            }
        };
        let greedy = ["rsu_count", "rsu_grid", "rsu_radius"].into_iter().find(|k| raw.given(k).is_some());
        let rsus = match (raw.given("rsu_file"), greedy) {
            (Some(_), Some(k)) => return Err(Error::Config(format!("rsu_file and {k} are both set"))),
            (Some(path), None) => RsuSource::File(PathBuf::from(path)),
            (None, _) => RsuSource::Greedy {
                count: raw.get("rsu_count")?,
                grid: raw.get("rsu_grid")?,
                radius: raw.get("rsu_radius")?,
            },
        };
        let refine_keys = raw.given("refine_n").is_some();
        let placement = match (raw.given("placement"), refine_keys) {
            (Some(_), true) => return Err(Error::Config("placement and refine_n are both set".into())),
            (Some(list), false) => Some(PlacementMode::Explicit(
                list.split('+').map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()).collect(),
            )),
            (None, true) => Some(PlacementMode::Refine {
                n: raw.get("refine_n")?,
                iterations: raw.get("refine_iters")?,
                rule: match raw.get::<String>("refine_rule")?.as_str() {
                    "literal" => MoveRule::Literal,
                    "inverted" => MoveRule::Inverted,
                    other => return Err(Error::Config(format!("refine_rule must be literal or inverted, got `{other}`"))),
                },
            }),
            (None, false) => None,
        };
        let topology = match raw.get::<String>("topology")?.as_str() {
            "star" => TopologyKind::Star,
            "mesh" => TopologyKind::Mesh,
            other => return Err(Error::Config(format!("topology must be star or mesh, got `{other}`"))),
        };
        let controller_name: String = raw.get("controller")?;
        let mut controller = match controller_name.as_str() {
            "fast" => ControllerModel::fast(),
            "heavy" => ControllerModel::heavy(),
            other => return Err(Error::Config(format!("controller must be fast or heavy, got `{other}`"))),
        };
        if let Some(l) = raw.opt("controller_latency")? {
            controller.service_latency = l;
        }
        if let Some(j) = raw.opt("controller_jitter")? {
            controller.jitter_spread = j;
        }
        controller.rule_idle_timeout = raw.get("rule_timeout")?;

        let mut params = SimParams::default();
        params.detector.d_min = raw.get("d_min")?;
        params.detector.timeout = raw.get("window_timeout")?;
        params.detector.cost_base = raw.get("cost_base")?;
        params.detector.cost_per_neighbor = raw.get("cost_per_neighbor")?;
        params.detector.seconds_per_cost = raw.get("seconds_per_cost")?;
        params.wave.sync_interval = raw.get("sync_interval")?;
        params.wave.cch_duration = raw.get("cch_duration")?;
        params.wave.data_rate = raw.get("data_rate")?;
        params.beacon_bits = raw.get("beacon_bits")?;
        params.wave.payload_bits = params.beacon_bits;
        params.reply_bits = raw.get("reply_bits")?;
        params.wave.max_contention = raw.get("max_contention")?;
        params.air_loss = raw.get("air_loss")?;
        params.emission = EmissionPlan {
            slot_length: params.wave.sync_interval,
            window: raw.get("emission_window")?,
            ..EmissionPlan::default()
        };
        params.deadline = raw.get("deadline")?;
        params.drain = raw.get("drain")?;
        params.switch_cap = raw.opt("switch_cap")?;
        params.flow_match = match raw.get::<String>("flow_match")?.as_str() {
            "dst" => FlowMatch::Destination,
            "flow" => FlowMatch::Flow,
            other => return Err(Error::Config(format!("flow_match must be dst or flow, got `{other}`"))),
        };
        params.address_rotation = raw.opt("address_rotation")?;
        if params.address_rotation == Some(0) {
            return Err(Error::Config("address_rotation must be at least 1".into()));
        }
        params.energy = EnergyCosts {
            rsu_per_packet: raw.get("energy_rsu_packet")?,
            controller_per_detour: raw.get("energy_controller_detour")?,
            overhead_per_second: raw.get("energy_overhead_per_s")?,
        };
        let delay_file = match raw.get::<String>("radio")?.as_str() {
            "model" => None,
            "inject" => {
                let path = raw
                    .given("delay_file")
                    .ok_or_else(|| Error::Config("radio = inject needs delay_file".into()))?;
                let policy = match raw.get::<String>("missing_delay")?.as_str() {
                    "strict" => MissingDelayPolicy::Strict,
                    "fallback" => MissingDelayPolicy::Fallback,
                    other => return Err(Error::Config(format!("missing_delay must be strict or fallback, got `{other}`"))),
                };
                Some((PathBuf::from(path), policy))
            }
            other => return Err(Error::Config(format!("radio must be model or inject, got `{other}`"))),
        };
        if delay_file.is_none() {
            params.radio = RadioMode::Model;
        }
        params.detector.validate().map_err(|e| Error::Config(e.to_string()))?;
        params.wave.validate().map_err(|e| Error::Config(e.to_string()))?;

        let config = ScenarioConfig {
            seed: raw.get("seed")?,
            trace,
            max_speed: raw.opt("max_speed")?.unwrap_or(DEFAULT_MAX_SPEED),
            rsus,
            topology,
            cores: raw.get("cores")?,
            link: vcdsim_core::LinkParams { latency: raw.get("link_latency")?, bandwidth: raw.get("link_bandwidth")? },
            controller_name,
            controller,
            placement,
            params,
            delay_file,
            output: PathBuf::from(raw.get::<String>("output")?),
        };
        if let RsuSource::Greedy { radius, .. } = config.rsus {
            if !(radius > 0.0) {
                return Err(Error::Config("rsu_radius must be positive".into()));
            }
        }
        Ok(config)
    }

    pub fn topology_name(&self) -> &'static str {
        match self.topology {
            TopologyKind::Star => "star",
            TopologyKind::Mesh => "mesh",
        }
    }
}

fn parse_bounds(s: &str) -> Result<Bounds> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("trace_bounds must be `xmin,ymin,xmax,ymax`, got `{s}`")))?;
    match v[..] {
        [x0, y0, x1, y1] => Ok(Bounds::new(Vec2::new(x0, y0), Vec2::new(x1, y1))),
        _ => Err(Error::Config(format!("trace_bounds must be `xmin,ymin,xmax,ymax`, got `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::from_raw(&RawConfig::parse(text, None)?)
    }

    #[test]
    fn defaults() {
        let c = cfg("").unwrap();
        assert_eq!(c.seed, 1);
        assert!(matches!(c.trace, TraceSource::Synth { vehicles: 500, duration: 60, .. }));
        assert!(matches!(c.rsus, RsuSource::Greedy { count: 20, grid: 8, .. }));
        assert_eq!(c.topology, TopologyKind::Star);
        assert_eq!(c.controller, ControllerModel::fast());
        assert_eq!(c.params, SimParams::default());
        assert_eq!(c.placement, None);
    }

    #[test]
    fn comments_overrides_and_paths() {
        let mut raw = RawConfig::parse(
            "# experiment\nseed = 7 # trailing\ntopology=mesh\ntrace_file = t.csv\nplacement = core0 + r01\n",
            Some(Path::new("/exp")),
        )
        .unwrap();
        raw.set("controller=heavy").unwrap();
        raw.set("seed=9").unwrap();
        let c = ScenarioConfig::from_raw(&raw).unwrap();
        assert_eq!((c.seed, c.topology, c.controller_name.as_str()), (9, TopologyKind::Mesh, "heavy"));
        assert_eq!(c.trace, TraceSource::File { path: PathBuf::from("/exp/t.csv"), bounds: None });
        assert_eq!(c.placement, Some(PlacementMode::Explicit(vec!["core0".into(), "r01".into()])));
    }

    #[test]
    fn rejects_conflicts_and_junk() {
        assert!(cfg("trace_file = a.csv\nsynth_vehicles = 3\n").is_err());
        assert!(cfg("rsu_file = r.csv\nrsu_count = 3\n").is_err());
        assert!(cfg("placement = core0\nrefine_n = 2\n").is_err());
        assert!(cfg("colour = blue\n").is_err());
        assert!(cfg("seed = x\n").is_err());
        assert!(cfg("seed = 1\nseed = 2\n").is_err());
        assert!(cfg("just words\n").is_err());
        assert!(cfg("topology = ring\n").is_err());
        assert!(cfg("radio = inject\n").is_err());
        assert!(cfg("d_min = -1\n").is_err());
        assert!(cfg("trace_file = a\ntrace_bounds = 1,2,3\n").is_err());
        assert!(cfg("").unwrap().params.switch_cap.is_none());
        assert_eq!(cfg("switch_cap = 30").unwrap().params.switch_cap, Some(30));
        let p = cfg("flow_match = flow\naddress_rotation = 1").unwrap().params;
        assert_eq!((p.flow_match, p.address_rotation), (FlowMatch::Flow, Some(1)));
        assert!(cfg("flow_match = src").is_err());
        assert!(cfg("address_rotation = 0").is_err());
    }

    #[test]
    fn every_default_parses() {
        let mut text = String::new();
        for (k, v) in KEYS {
            if !v.is_empty() && !k.starts_with("synth_") && !k.starts_with("rsu_") {
                text.push_str(&format!("{k} = {v}\n"));
            }
        }
        assert_eq!(cfg(&text).unwrap(), cfg("").unwrap());
    }
}
