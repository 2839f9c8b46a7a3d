//! Turns a [`ScenarioConfig`] into inputs for the core and runs them.

use std::fs;
use std::path::{Path, PathBuf};

use vcdsim_core::engine::RadioMode;
use vcdsim_core::{
    build_topology, place_rsus, refine, run, synth_trace, Bounds, PlacementConfig, RefineError, RefineOutcome,
    RsuSite, Scenario, SimError, SimEvaluator, SimOutput, SimParams, TopologyGraph, Trace, Vec2,
};

use crate::config::{PlacementMode, RsuSource, ScenarioConfig, TraceSource};
use crate::error::{Error, Result};
use crate::io::{self, RunMeta, SummaryDoc};

pub fn load_trace(cfg: &ScenarioConfig) -> Result<Trace> {
    match &cfg.trace {
        TraceSource::Synth { vehicles, duration, bounds, speed } => synth_trace(cfg.seed, *vehicles, *duration, *bounds, *speed)
            .map_err(|e| Error::Config(e.to_string())),
        TraceSource::File { path, bounds } => {
            let name = path.display().to_string();
            let trace = io::parse_trace(io::open(path)?, &name, *bounds)?;
            trace.check_speed(cfg.max_speed).map_err(|e| Error::Trace { file: name, source: e })?;
            Ok(trace)
        }
    }
}

/// Centers of a `grid` x `grid` lattice of equal cells over `bounds`, row
/// by row.
pub fn candidate_grid(bounds: Bounds, grid: usize) -> Vec<Vec2> {
    let (w, h) = (bounds.width() / grid as f64, bounds.height() / grid as f64);
    (0..grid * grid)
        .map(|i| Vec2::new(bounds.min.x + w * (0.5 + (i % grid) as f64), bounds.min.y + h * (0.5 + (i / grid) as f64)))
        .collect()
}

pub fn load_rsus(cfg: &ScenarioConfig, trace: &Trace) -> Result<Vec<RsuSite>> {
    match &cfg.rsus {
        RsuSource::File(path) => io::parse_rsus(io::open(path)?, &path.display().to_string()),
        RsuSource::Greedy { count, grid, radius } => {
            Ok(place_rsus(trace, &candidate_grid(trace.bounds(), *grid), *count, *radius)?)
        }
    }
}

/// Everything a run needs, loaded once.
pub struct World {
    pub trace: Trace,
    pub rsus: Vec<RsuSite>,
    pub graph: TopologyGraph,
    pub params: SimParams,
}

impl World {
    pub fn load(cfg: &ScenarioConfig) -> Result<World> {
        let trace = load_trace(cfg)?;
        let rsus = load_rsus(cfg, &trace)?;
        let graph = build_topology(&rsus, cfg.cores, cfg.topology, cfg.link)?;
        let mut params = cfg.params.clone();
        if let Some((path, policy)) = &cfg.delay_file {
            let file = io::parse_delays(io::open(path)?, &path.display().to_string())?;
            params.radio = RadioMode::Inject { file, policy: *policy };
        }
        Ok(World { trace, rsus, graph, params })
    }

    pub fn simulate(&self, cfg: &ScenarioConfig, placement: &PlacementConfig) -> Result<SimOutput> {
        Ok(run(&Scenario {
            trace: &self.trace,
            rsus: &self.rsus,
            topology: &self.graph,
            controller: cfg.controller,
            placement,
            params: &self.params,
            seed: cfg.seed,
        })?)
    }

    pub fn refine(&self, cfg: &ScenarioConfig, n: usize, iterations: usize, rule: vcdsim_core::MoveRule) -> Result<RefineOutcome> {
        let mut evaluator = SimEvaluator {
            trace: &self.trace,
            rsus: &self.rsus,
            topology: &self.graph,
            controller: cfg.controller,
            params: &self.params,
            seed: cfg.seed,
        };
        refine(n, &self.graph, &mut evaluator, iterations, cfg.seed, rule).map_err(|e| match e {
            RefineError::Placement(p) => Error::Placement(p),
            RefineError::Evaluation(s) => Error::Sim(s),
        })
    }

    pub fn summary(&self, cfg: &ScenarioConfig, placement: &PlacementConfig, out: &SimOutput) -> SummaryDoc {
        let meta = RunMeta {
            n: placement.len(),
            topology: cfg.topology_name().to_owned(),
            controller: cfg.controller_name.clone(),
            placement: placement.label(&self.graph),
            seed: cfg.seed,
            deadline_s: self.params.deadline,
        };
        SummaryDoc::new(meta, &out.summary)
    }
}

fn explicit(world: &World, ids: &[String]) -> Result<PlacementConfig> {
    if ids.is_empty() {
        return Err(Error::Sim(SimError::EmptyPlacement));
    }
    PlacementConfig::from_ids(&world.graph, ids).map_err(|e| Error::Config(e.to_string()))
}

/// Files written by [`run_to_dir`] and [`refine_to_dir`].
#[derive(Debug, Clone, PartialEq)]
pub struct Written {
    pub files: Vec<PathBuf>,
    pub summary: Option<SummaryDoc>,
    pub best: Option<String>,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_refinement(dir: &Path, world: &World, outcome: &RefineOutcome, files: &mut Vec<PathBuf>) -> Result<String> {
    let log = dir.join("refine_log.csv");
    io::create_with(&log, |w| io::write_refine_log(w, outcome, &world.graph))?;
    let best = outcome.best.label(&world.graph);
    let best_path = dir.join("best_placement.txt");
    fs::write(&best_path, format!("{best}\n")).map_err(|e| Error::io(&best_path, e))?;
    files.push(log);
    files.push(best_path);
    Ok(best)
}

/// One simulation: `records.csv`, `summary.json` and `topology.json`. In
/// refine mode the placement is refined first and the best one is run;
/// the refinement log is written too.
pub fn run_to_dir(cfg: &ScenarioConfig, dir: &Path) -> Result<Written> {
    let mode = cfg.placement.as_ref().ok_or_else(|| Error::Config("no placement: set `placement` or `refine_n`".into()))?;
    let world = World::load(cfg)?;
    ensure_dir(dir)?;
    let mut files = Vec::new();
    let (placement, best) = match mode {
        PlacementMode::Explicit(ids) => (explicit(&world, ids)?, None),
        PlacementMode::Refine { n, iterations, rule } => {
            let outcome = world.refine(cfg, *n, *iterations, *rule)?;
            let best = write_refinement(dir, &world, &outcome, &mut files)?;
            (outcome.best, Some(best))
        }
    };
    let out = world.simulate(cfg, &placement)?;
    let summary = world.summary(cfg, &placement, &out);

    let records = dir.join("records.csv");
    io::create_with(&records, |w| io::write_records(w, &out.records))?;
    let summary_path = dir.join("summary.json");
    fs::write(&summary_path, summary.to_json()).map_err(|e| Error::io(&summary_path, e))?;
    let topo = dir.join("topology.json");
    let mut text = serde_json::to_string_pretty(&io::topology_json(&world.graph)).map_err(|e| Error::Json(e.to_string()))?;
    text.push('\n');
    fs::write(&topo, text).map_err(|e| Error::io(&topo, e))?;
    files.extend([records, summary_path, topo]);
    Ok(Written { files, summary: Some(summary), best })
}

/// Placement refinement only: `refine_log.csv` and `best_placement.txt`.
pub fn refine_to_dir(cfg: &ScenarioConfig, dir: &Path) -> Result<Written> {
    let Some(PlacementMode::Refine { n, iterations, rule }) = &cfg.placement else {
        return Err(Error::Config("refine needs `refine_n`".into()));
    };
    let world = World::load(cfg)?;
    ensure_dir(dir)?;
    let outcome = world.refine(cfg, *n, *iterations, *rule)?;
    let mut files = Vec::new();
    let best = write_refinement(dir, &world, &outcome, &mut files)?;
    Ok(Written { files, summary: None, best: Some(best) })
}
