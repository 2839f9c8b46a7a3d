//! Where to put RSUs and collision detectors.
//!
//! RSUs are sited greedily by how many not-yet-covered vehicles each
//! candidate location would cover. Detectors are placed by an iterative
//! refinement: simulate, score every switch by the success fraction of the
//! RSUs around it, move one detector from the best-scoring holder to the
//! worst-scoring free switch, and mutate randomly whenever a move would
//! revisit a configuration already tried.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::backhaul::{ControllerModel, NodeId, NodeKind, TopologyGraph};
use crate::engine::{run, BeaconRecord, Outcome, Scenario, SimError, SimParams};
use crate::geom::Vec2;
use crate::mobility::{RsuSite, Trace};
use crate::rngs;

/// Random single-detector moves tried before looking further afield.
pub const MUTATION_ATTEMPTS: usize = 64;
/// Up to this many configurations are enumerated when searching for an
/// untried one.
const ENUMERATION_LIMIT: u128 = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum PlacementError {
    TooManyRsus { requested: usize, candidates: usize },
    InvalidSize { n: usize, nodes: usize },
    UnknownNode(String),
    DuplicateNode(String),
    InvalidRadius,
    NoIterations,
}

impl fmt::Display for PlacementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlacementError::TooManyRsus { requested, candidates } => {
                write!(f, "{requested} RSUs requested but only {candidates} candidate locations")
            }
            PlacementError::InvalidSize { n, nodes } => {
                write!(f, "cannot place {n} detectors on {nodes} switches")
            }
            PlacementError::UnknownNode(id) => write!(f, "unknown switch {id}"),
            PlacementError::DuplicateNode(id) => write!(f, "switch {id} listed twice"),
            PlacementError::InvalidRadius => f.write_str("coverage radius must be positive"),
            PlacementError::NoIterations => f.write_str("refinement needs at least one iteration"),
        }
    }
}

impl core::error::Error for PlacementError {}

/// Switches hosting a collision detector, kept sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlacementConfig {
    nodes: Vec<NodeId>,
}

impl PlacementConfig {
    pub fn new(mut nodes: Vec<NodeId>, graph: &TopologyGraph) -> Result<PlacementConfig, PlacementError> {
        nodes.sort();
        for n in &nodes {
            if n.0 >= graph.len() {
                return Err(PlacementError::UnknownNode(alloc::format!("#{}", n.0)));
            }
        }
        for pair in nodes.windows(2) {
            if pair[0] == pair[1] {
                return Err(PlacementError::DuplicateNode(graph.node(pair[0]).id.clone()));
            }
        }
        Ok(PlacementConfig { nodes })
    }

    pub fn from_ids<S: AsRef<str>>(graph: &TopologyGraph, ids: &[S]) -> Result<PlacementConfig, PlacementError> {
        let nodes = ids
            .iter()
            .map(|id| graph.find(id.as_ref()).ok_or_else(|| PlacementError::UnknownNode(String::from(id.as_ref()))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(nodes, graph)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }

    /// Node ids joined by `+`, e.g. `core0+r03`.
    pub fn label(&self, graph: &TopologyGraph) -> String {
        let ids: Vec<&str> = self.nodes.iter().map(|n| graph.node(*n).id.as_str()).collect();
        ids.join("+")
    }

    /// The configuration with the detector at `from` moved to `to`.
    pub fn moved(&self, from: NodeId, to: NodeId) -> PlacementConfig {
        let mut nodes: Vec<NodeId> = self.nodes.iter().map(|&n| if n == from { to } else { n }).collect();
        nodes.sort();
        nodes.dedup();
        PlacementConfig { nodes }
    }
}

/// Greedy RSU siting. Each round picks the candidate covering the most
/// vehicles not yet covered by earlier picks (smallest index on ties). A
/// vehicle counts as covered by a candidate if any of its trace states lies
/// within `radius`. RSU ids are `r00`, `r01`, ... in pick order.
pub fn place_rsus(trace: &Trace, candidates: &[Vec2], n_rsus: usize, radius: f64) -> Result<Vec<RsuSite>, PlacementError> {
    if n_rsus > candidates.len() {
        return Err(PlacementError::TooManyRsus { requested: n_rsus, candidates: candidates.len() });
    }
    if !(radius > 0.0) {
        return Err(PlacementError::InvalidRadius);
    }
    let vehicles = trace.by_vehicle();
    let coverage: Vec<Vec<usize>> = candidates
        .iter()
        .map(|c| {
            vehicles
                .iter()
                .enumerate()
                .filter(|(_, (_, states))| states.iter().any(|s| s.position.distance(*c) <= radius))
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    let mut covered = alloc::vec![false; vehicles.len()];
    let mut chosen = alloc::vec![false; candidates.len()];
    let width = if n_rsus > 100 { 3 } else { 2 };
    let mut out = Vec::with_capacity(n_rsus);
    for k in 0..n_rsus {
        let mut best: Option<(usize, usize)> = None;
        for (c, vs) in coverage.iter().enumerate() {
            if chosen[c] {
                continue;
            }
            let score = vs.iter().filter(|&&v| !covered[v]).count();
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((c, score));
            }
        }
        let (c, _) = best.expect("n_rsus <= candidates");
        chosen[c] = true;
        for &v in &coverage[c] {
            covered[v] = true;
        }
        out.push(RsuSite::new(alloc::format!("r{k:0width$}"), candidates[c], radius));
    }
    Ok(out)
}

/// Per RSU, the share of covered beacons answered within the deadline.
/// RSUs that saw no beacons score 1.
pub fn success_fractions<S: AsRef<str>>(records: &[BeaconRecord], rsu_ids: &[S]) -> BTreeMap<String, f64> {
    let mut counts: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for r in records {
        if let (Some(id), true) = (r.rsu_id.as_deref(), r.outcome.covered()) {
            let e = counts.entry(id).or_default();
            e.1 += 1;
            if r.outcome == Outcome::Success {
                e.0 += 1;
            }
        }
    }
    rsu_ids
        .iter()
        .map(|id| {
            let id = id.as_ref();
            let f = match counts.get(id) {
                Some(&(ok, total)) if total > 0 => ok as f64 / total as f64,
                _ => 1.0,
            };
            (String::from(id), f)
        })
        .collect()
}

/// Result of simulating one placement.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub fractions: BTreeMap<String, f64>,
    /// Overall success fraction.
    pub objective: f64,
}

/// Scores a detector placement.
pub trait Evaluator {
    type Error;
    fn evaluate(&mut self, config: &PlacementConfig) -> Result<Evaluation, Self::Error>;
}

/// Evaluates placements by running the full simulation.
pub struct SimEvaluator<'a> {
    pub trace: &'a Trace,
    pub rsus: &'a [RsuSite],
    pub topology: &'a TopologyGraph,
    pub controller: ControllerModel,
    pub params: &'a SimParams,
    pub seed: u64,
}

impl Evaluator for SimEvaluator<'_> {
    type Error = SimError;

    fn evaluate(&mut self, config: &PlacementConfig) -> Result<Evaluation, SimError> {
        let out = run(&Scenario {
            trace: self.trace,
            rsus: self.rsus,
            topology: self.topology,
            controller: self.controller,
            placement: config,
            params: self.params,
            seed: self.seed,
        })?;
        let ids: Vec<&str> = self.rsus.iter().map(|r| r.rsu_id.as_str()).collect();
        Ok(Evaluation {
            fractions: success_fractions(&out.records, &ids),
            objective: out.summary.success_fraction(),
        })
    }
}

/// Which holder gives up its detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MoveRule {
    /// The holder whose neighborhood scores highest.
    #[default]
    Literal,
    /// The holder whose neighborhood scores lowest.
    Inverted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementState {
    pub current: PlacementConfig,
    pub visited: BTreeSet<PlacementConfig>,
    pub iteration: usize,
    pub best: Option<(PlacementConfig, f64)>,
}

impl RefinementState {
    pub fn new(initial: PlacementConfig) -> Self {
        let mut visited = BTreeSet::new();
        visited.insert(initial.clone());
        RefinementState { current: initial, visited, iteration: 0, best: None }
    }

    /// Records `objective` for the current configuration; keeps the first
    /// configuration reaching the best value.
    pub fn observe(&mut self, objective: f64) {
        if self.best.as_ref().map_or(true, |(_, b)| objective > *b) {
            self.best = Some((self.current.clone(), objective));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Moved { mutated: bool },
    /// Every configuration of this size has been tried.
    Exhausted,
}

/// Mean success fraction of the RSUs adjacent to `node`, plus `node` itself
/// when it is an RSU switch. Switches with no such RSU score 1.
pub fn switch_score(graph: &TopologyGraph, node: NodeId, fractions: &BTreeMap<String, f64>) -> f64 {
    let fraction = |n: NodeId| fractions.get(&graph.node(n).id).copied().unwrap_or(1.0);
    let mut sum = 0.0;
    let mut count = 0usize;
    if graph.node(node).kind == NodeKind::Rsu {
        sum += fraction(node);
        count += 1;
    }
    for &(m, _) in graph.neighbors(node) {
        if graph.node(m).kind == NodeKind::Rsu {
            sum += fraction(m);
            count += 1;
        }
    }
    if count == 0 {
        1.0
    } else {
        sum / count as f64
    }
}

/// One refinement move from `state.current`, given its evaluation.
pub fn refine_step<R: Rng + ?Sized>(
    state: &mut RefinementState,
    graph: &TopologyGraph,
    eval: &Evaluation,
    rule: MoveRule,
    rng: &mut R,
) -> StepOutcome {
    state.observe(eval.objective);
    let holders: Vec<NodeId> = state.current.nodes().to_vec();
    let free: Vec<NodeId> = graph.node_ids().filter(|n| !state.current.contains(*n)).collect();
    if free.is_empty() {
        return StepOutcome::Exhausted;
    }
    let score = |n: NodeId| switch_score(graph, n, &eval.fractions);
    // Strict comparisons keep the smallest node id on ties.
    let pick = |nodes: &[NodeId], better: &dyn Fn(f64, f64) -> bool| {
        let mut best = nodes[0];
        let mut best_score = score(best);
        for &n in &nodes[1..] {
            let s = score(n);
            if better(s, best_score) {
                best = n;
                best_score = s;
            }
        }
        best
    };
    let source = match rule {
        MoveRule::Literal => pick(&holders, &|a, b| a > b),
        MoveRule::Inverted => pick(&holders, &|a, b| a < b),
    };
    let target = pick(&free, &|a, b| a < b);
    let proposal = state.current.moved(source, target);

    let (next, mutated) = if !state.visited.contains(&proposal) {
        (proposal, false)
    } else {
        match mutate(state, &holders, &free, graph.len(), rng) {
            Some(c) => (c, true),
            None => return StepOutcome::Exhausted,
        }
    };
    state.visited.insert(next.clone());
    state.current = next;
    state.iteration += 1;
    StepOutcome::Moved { mutated }
}

/// Moves a random detector to a random free switch until the result is
/// untried. After [`MUTATION_ATTEMPTS`] failures it picks uniformly among
/// all untried configurations, and gives up only when none is left.
fn mutate<R: Rng + ?Sized>(
    state: &RefinementState,
    holders: &[NodeId],
    free: &[NodeId],
    n_nodes: usize,
    rng: &mut R,
) -> Option<PlacementConfig> {
    for _ in 0..MUTATION_ATTEMPTS {
        let from = *holders.choose(rng)?;
        let to = *free.choose(rng)?;
        let c = state.current.moved(from, to);
        if !state.visited.contains(&c) {
            return Some(c);
        }
    }
    let k = holders.len();
    let total = binomial(n_nodes as u128, k as u128);
    if state.visited.len() as u128 >= total {
        return None;
    }
    if total <= ENUMERATION_LIMIT {
        let untried: Vec<PlacementConfig> = combinations(n_nodes, k)
            .into_iter()
            .map(|nodes| PlacementConfig { nodes })
            .filter(|c| !state.visited.contains(c))
            .collect();
        return untried.choose(rng).cloned();
    }
    let all: Vec<NodeId> = (0..n_nodes).map(NodeId).collect();
    for _ in 0..10_000 {
        let mut nodes: Vec<NodeId> = all.choose_multiple(rng, k).copied().collect();
        nodes.sort();
        let c = PlacementConfig { nodes };
        if !state.visited.contains(&c) {
            return Some(c);
        }
    }
    None
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<NodeId>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(NodeId(i));
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// One row of the refinement log.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    pub config: PlacementConfig,
    pub objective: f64,
    /// Whether this configuration came from a random mutation.
    pub mutated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineOutcome {
    pub best: PlacementConfig,
    pub best_objective: f64,
    pub log: Vec<IterationLog>,
    /// The loop stopped because every configuration had been tried.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefineError<E> {
    Placement(PlacementError),
    Evaluation(E),
}

impl<E: fmt::Display> fmt::Display for RefineError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefineError::Placement(e) => e.fmt(f),
            RefineError::Evaluation(e) => e.fmt(f),
        }
    }
}

impl<E: fmt::Debug + fmt::Display> core::error::Error for RefineError<E> {}

/// Runs the evaluate -> score -> move loop for `n` detectors, starting from
/// a random configuration, for at most `max_iters` evaluations.
pub fn refine<E: Evaluator>(
    n: usize,
    graph: &TopologyGraph,
    evaluator: &mut E,
    max_iters: usize,
    seed: u64,
    rule: MoveRule,
) -> Result<RefineOutcome, RefineError<E::Error>> {
    if n == 0 || n > graph.len() {
        return Err(RefineError::Placement(PlacementError::InvalidSize { n, nodes: graph.len() }));
    }
    if max_iters == 0 {
        return Err(RefineError::Placement(PlacementError::NoIterations));
    }
    let mut rng = rngs::stream(seed, rngs::REFINEMENT);
    let all: Vec<NodeId> = graph.node_ids().collect();
    let initial: Vec<NodeId> = all.choose_multiple(&mut rng, n).copied().collect();
    let mut state = RefinementState::new(PlacementConfig::new(initial, graph).map_err(RefineError::Placement)?);
    let mut log = Vec::new();
    let mut mutated = false;
    let mut exhausted = false;
    loop {
        let eval = evaluator.evaluate(&state.current).map_err(RefineError::Evaluation)?;
        log.push(IterationLog { iteration: state.iteration, config: state.current.clone(), objective: eval.objective, mutated });
        state.observe(eval.objective);
        if log.len() >= max_iters {
            break;
        }
        match refine_step(&mut state, graph, &eval, rule, &mut rng) {
            StepOutcome::Moved { mutated: m } => mutated = m,
            StepOutcome::Exhausted => {
                exhausted = true;
                break;
            }
        }
    }
    let (best, best_objective) = state.best.expect("at least one evaluation");
    Ok(RefineOutcome { best, best_objective, log, exhausted })
}
