//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line to stderr
//! and then asserts.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use vcdsim::config::{RawConfig, ScenarioConfig};
use vcdsim::scenario::World;
use vcdsim_core::backhaul::{HostRegistry, Node};
use vcdsim_core::mobility::{beacon_schedule, EmissionPlan};
use vcdsim_core::rngs;
use vcdsim_core::*;

/// Writes straight to stderr so the line survives the test harness's
/// output capture.
fn verdict(n: u32, name: &str, result: Result<String, String>) {
    let (status, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2} {status}  {name}: {detail}");
    if let Err(detail) = result {
        panic!("criterion {n} failed: {detail}");
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(text: &str) -> ScenarioConfig {
    ScenarioConfig::from_raw(&RawConfig::parse(text, None).unwrap()).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

const STEP: f64 = 0.001;
const HORIZON: f64 = 120.0;

/// Closest approach found by evaluating the separation every millisecond
/// over `[0, HORIZON]`: (time, distance).
fn stepped_min(a: &Beacon, b: &Beacon) -> (f64, f64) {
    let (dx, dy) = (a.x0.x - b.x0.x, a.x0.y - b.x0.y);
    let (vx, vy) = (a.v.x - b.v.x, a.v.y - b.v.y);
    let steps = (HORIZON / STEP).round() as usize;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=steps {
        let t = i as f64 * STEP;
        let d2 = (dx + vx * t).powi(2) + (dy + vy * t).powi(2);
        if d2 < best.1 {
            best = (i, d2);
        }
    }
    (best.0 as f64 * STEP, best.1.sqrt())
}

fn random_beacon<R: Rng>(rng: &mut R, id: String) -> Beacon {
    let pos = Vec2::new(rng.gen_range(-500.0..=500.0), rng.gen_range(-500.0..=500.0));
    let speed = rng.gen_range(0.0..=20.0);
    let heading = rng.gen_range(0.0..std::f64::consts::TAU);
    Beacon::new(id, pos, Vec2::new(speed * heading.cos(), speed * heading.sin()), 0.0)
}

/// A beacon steered to pass within 10 m of `target`'s path in the first
/// minute, so that windows contain real alerts.
fn aimed_beacon<R: Rng>(rng: &mut R, id: String, target: &Beacon) -> Beacon {
    let t = rng.gen_range(0.0..60.0);
    let meet = target.x0 + target.v * t + Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
    let speed = rng.gen_range(0.0..=20.0);
    let heading = rng.gen_range(0.0..std::f64::consts::TAU);
    let v = Vec2::new(speed * heading.cos(), speed * heading.sin());
    Beacon::new(id, meet - v * t, v, 0.0)
}

#[test]
fn c01_cpa_matches_time_stepping() {
    let result = (|| {
        let mut rng = rngs::stream(101, "acceptance-cpa");
        let start = Instant::now();
        let (mut interior, mut diverging) = (0, 0);
        for i in 0..10_000 {
            let a = random_beacon(&mut rng, format!("a{i}"));
            let b = random_beacon(&mut rng, format!("b{i}"));
            let (t_o, d_o) = stepped_min(&a, &b);
            match cpa_pair(&a, &b).map_err(|e| e.to_string())? {
                CpaOutcome::Approaching { t_star, d_star } if t_star < HORIZON => {
                    if t_star > STEP {
                        interior += 1;
                        ensure((d_star - d_o).abs() <= 0.05 && (t_star - t_o).abs() <= STEP, || {
                            format!("pair {i}: analytic ({t_star}, {d_star}) vs stepped ({t_o}, {d_o})")
                        })?;
                    }
                }
                CpaOutcome::Approaching { .. } => {}
                CpaOutcome::Diverging { .. } => {
                    diverging += 1;
                    ensure(t_o == 0.0, || format!("pair {i}: diverging but stepped minimum at {t_o}"))?;
                }
                CpaOutcome::Parallel { d_star } => {
                    ensure((d_star - d_o).abs() <= 0.05, || format!("pair {i}: parallel {d_star} vs {d_o}"))?;
                }
            }
        }
        let elapsed = start.elapsed();
        ensure(interior > 1_000, || format!("only {interior} interior minima"))?;
        ensure(elapsed < Duration::from_secs(10), || format!("took {}", secs(elapsed)))?;
        Ok(format!("{interior} interior minima and {diverging} diverging pairs agree, {}", secs(elapsed)))
    })();
    verdict(1, "CPA vs 1 ms time stepping", result);
}

#[test]
fn c02_detect_matches_oracle_sets() {
    let result = (|| {
        let params = DetectorParams::default();
        let mut rng = rngs::stream(102, "acceptance-detect");
        let start = Instant::now();
        let mut detect_time = Duration::ZERO;
        let (mut alerts, mut excluded) = (0, 0);
        for w in 0..500 {
            let current = random_beacon(&mut rng, "current".into());
            let mut window = BeaconWindow::new(params.timeout);
            let mut others = Vec::new();
            for j in 0..rng.gen_range(0..=50) {
                let id = format!("v{j:02}");
                let b = if rng.gen_bool(0.4) { aimed_beacon(&mut rng, id, &current) } else { random_beacon(&mut rng, id) };
                others.push(b.clone());
                window.insert(b);
            }
            let mut expected = BTreeSet::new();
            let mut boundary = BTreeSet::new();
            for b in &others {
                let (t_o, d_o) = stepped_min(&current, b);
                let past_horizon = matches!(cpa_pair(&current, b), Ok(CpaOutcome::Approaching { t_star, .. }) if t_star > HORIZON);
                // A minimum at t = 0 within range means the pair is already
                // touching; whether it is still closing is a sub-step question.
                let touching_now = t_o == 0.0 && d_o <= params.d_min + 0.05;
                if (d_o - params.d_min).abs() <= 0.05 || past_horizon || touching_now {
                    boundary.insert(b.pseudonym.clone());
                } else if d_o <= params.d_min {
                    expected.insert(b.pseudonym.clone());
                }
            }
            let t = Instant::now();
            let hits = detect(&current, &mut window, &params, 0.0).map_err(|e| e.to_string())?;
            detect_time += t.elapsed();
            let got: BTreeSet<String> =
                hits.into_iter().map(|p| p.other).filter(|p| !boundary.contains(p)).collect();
            ensure(got == expected, || format!("window {w}: detect {got:?} vs oracle {expected:?}"))?;
            alerts += got.len();
            excluded += boundary.len();
        }
        let elapsed = start.elapsed();
        ensure(alerts >= 100, || format!("only {alerts} alerts; oracle comparison is too easy"))?;
        ensure(detect_time < Duration::from_secs(10), || format!("detect took {}", secs(detect_time)))?;
        Ok(format!(
            "500 windows agree ({alerts} alerts, {excluded} boundary pairs excluded), detect {} / total {}",
            secs(detect_time),
            secs(elapsed)
        ))
    })();
    verdict(2, "detect vs oracle", result);
}

fn three_switch_line() -> TopologyGraph {
    let nodes: Vec<Node> = (0..3)
        .map(|i| Node { id: format!("s{i}"), kind: NodeKind::Core, position: Vec2::new(f64::from(i), 0.0) })
        .collect();
    let link = LinkParams::default();
    TopologyGraph::from_parts(nodes, &[("s0", "s1", link), ("s1", "s2", link)], link).unwrap()
}

#[test]
fn c03_learning_switch_contract() {
    let result = (|| {
        let controller = ControllerModel::fast();
        let mut bh = Backhaul::new(three_switch_line(), controller).map_err(|e| e.to_string())?;
        let mut hosts = HostRegistry::default();
        let mut rng = rngs::stream(103, rngs::CONTROLLER);
        let p = Packet { src: hosts.intern("vehicle"), dst: hosts.intern("detector"), size_bits: 2_400.0 };
        let (from, to) = (NodeId(0), NodeId(2));
        let first = bh.forward(&p, from, to, SimTime::ZERO, &mut rng).map_err(|e| e.to_string())?;
        let second = bh.forward(&p, from, to, first.arrival, &mut rng).map_err(|e| e.to_string())?;
        let idle = second.arrival + SimTime::from_secs(controller.rule_idle_timeout) + SimTime(1);
        let third = bh.forward(&p, from, to, idle, &mut rng).map_err(|e| e.to_string())?;
        let got = [first.controller_detours, second.controller_detours, third.controller_detours];
        ensure(got == [3, 0, 3], || format!("detours {got:?}, want [3, 0, 3]"))?;
        Ok(format!("detours cold/warm/expired = {got:?}"))
    })();
    verdict(3, "learning-switch contract", result);
}

/// Twenty varied scenarios for the per-record invariants.
fn random_scenarios() -> Vec<(String, World, ScenarioConfig, PlacementConfig)> {
    let mut rng = rngs::stream(45, "acceptance-scenarios");
    (0..20)
        .map(|i| {
            let side = rng.gen_range(800.0..2000.0);
            let rsus = rng.gen_range(4..10);
            let mut text = format!(
                "seed = {i}\nsynth_vehicles = {}\nsynth_duration = {}\nsynth_width = {side}\nsynth_height = {side}\n\
                 rsu_count = {rsus}\nrsu_grid = 5\ncores = {}\ntopology = {}\ncontroller = {}\nair_loss = {}\n",
                rng.gen_range(5..60),
                rng.gen_range(5..25),
                rng.gen_range(2..4),
                if rng.gen_bool(0.5) { "star" } else { "mesh" },
                if rng.gen_bool(0.5) { "fast" } else { "heavy" },
                if rng.gen_bool(0.3) { 0.1 } else { 0.0 },
            );
            if rng.gen_bool(0.25) {
                text.push_str("switch_cap = 20\n");
            }
            if rng.gen_bool(0.25) {
                text.push_str("flow_match = flow\naddress_rotation = 3\n");
            }
            let cfg = config(&text);
            let world = World::load(&cfg).unwrap();
            let n = rng.gen_range(1..=3);
            let chosen: Vec<NodeId> = rand::seq::index::sample(&mut rng, world.graph.len(), n)
                .into_iter()
                .map(NodeId)
                .collect();
            let placement = PlacementConfig::new(chosen, &world.graph).unwrap();
            (format!("scenario {i}"), world, cfg, placement)
        })
        .collect()
}

#[test]
fn c04_delay_components_sum_to_total() {
    let result = (|| {
        let mut checked = 0;
        for (name, world, cfg, placement) in random_scenarios() {
            let out = world.simulate(&cfg, &placement).map_err(|e| e.to_string())?;
            for r in out.records.iter().filter(|r| r.outcome.replied()) {
                let parts = [r.d_air_up, r.d_up, r.d_proc, r.d_down, r.d_air_down];
                let sum: Option<u64> = parts.iter().map(|p| p.map(SimTime::nanos)).sum();
                ensure(sum.is_some() && sum == r.total.map(SimTime::nanos), || {
                    format!("{name}: {} beacon {} components {parts:?} total {:?}", r.vehicle_id, r.seq, r.total)
                })?;
                checked += 1;
            }
        }
        ensure(checked > 500, || format!("only {checked} replied beacons"))?;
        Ok(format!("{checked} replied beacons decompose exactly"))
    })();
    verdict(4, "delay decomposition", result);
}

#[test]
fn c05_outcomes_are_conserved() {
    let result = (|| {
        let mut kinds = BTreeSet::new();
        for (name, world, cfg, placement) in random_scenarios() {
            let s = world.simulate(&cfg, &placement).map_err(|e| e.to_string())?.summary;
            ensure(s.success + s.late + s.lost + s.uncovered == s.generated, || {
                format!("{name}: {} + {} + {} + {} != {}", s.success, s.late, s.lost, s.uncovered, s.generated)
            })?;
            for (kind, count) in [("success", s.success), ("late", s.late), ("lost", s.lost), ("uncovered", s.uncovered)] {
                if count > 0 {
                    kinds.insert(kind);
                }
            }
        }
        Ok(format!("20 scenarios conserve beacons; outcomes seen: {kinds:?}"))
    })();
    verdict(5, "conservation", result);
}

/// Late plus lost over covered beacons.
fn miss_fraction(s: &MetricsSummary) -> f64 {
    if s.covered() == 0 {
        0.0
    } else {
        (s.late + s.lost) as f64 / s.covered() as f64
    }
}

#[test]
fn c06_second_detector_absorbs_the_load() {
    let result = (|| {
        let cfg = config("");
        let world = World::load(&cfg).map_err(|e| e.to_string())?;
        let mut rows = Vec::new();
        for n in [1, 2] {
            let outcome = world.refine(&cfg, n, 30, MoveRule::Literal).map_err(|e| e.to_string())?;
            let start = Instant::now();
            let out = world.simulate(&cfg, &outcome.best).map_err(|e| e.to_string())?;
            let elapsed = start.elapsed();
            ensure(elapsed < Duration::from_secs(60), || format!("n={n} run took {}", secs(elapsed)))?;
            rows.push((n, outcome.best.label(&world.graph), out.summary, elapsed));
        }
        let (one, two) = (&rows[0].2, &rows[1].2);
        let detail = format!(
            "n=1 {} success {:.4} miss {:.4}; n=2 {} success {:.4} miss {:.4}; run {} / {}",
            rows[0].1,
            one.success_fraction(),
            miss_fraction(one),
            rows[1].1,
            two.success_fraction(),
            miss_fraction(two),
            secs(rows[0].3),
            secs(rows[1].3)
        );
        ensure(two.success_fraction() > one.success_fraction(), || detail.clone())?;
        ensure(miss_fraction(two) < 0.2 * miss_fraction(one), || detail.clone())?;
        Ok(detail)
    })();
    verdict(6, "detector count trend", result);
}

#[test]
fn c07_mesh_uplinks_are_no_slower_than_star() {
    let result = (|| {
        let mut means = BTreeMap::new();
        for topology in ["star", "mesh"] {
            let cfg = config(&format!("topology = {topology}\nplacement = core0+core2"));
            let world = World::load(&cfg).map_err(|e| e.to_string())?;
            let placement = PlacementConfig::from_ids(&world.graph, &["core0", "core2"]).map_err(|e| e.to_string())?;
            let out = world.simulate(&cfg, &placement).map_err(|e| e.to_string())?;
            means.insert(topology, out.summary.component("d_up").map_or(f64::NAN, |c| c.mean));
        }
        let detail = format!("mean d_up star {:.6}s, mesh {:.6}s", means["star"], means["mesh"]);
        ensure(means["mesh"] <= means["star"], || detail.clone())?;
        Ok(detail)
    })();
    verdict(7, "topology trend", result);
}

#[test]
fn c08_replies_beat_beacons_on_the_backhaul() {
    let result = (|| {
        let cfg = config("flow_match = flow\naddress_rotation = 1\nsynth_duration = 30\nplacement = core0+core2");
        ensure(cfg.controller.service_latency >= 0.0005, || "controller latency below 0.5 ms".into())?;
        let world = World::load(&cfg).map_err(|e| e.to_string())?;
        let placement = PlacementConfig::from_ids(&world.graph, &["core0", "core2"]).map_err(|e| e.to_string())?;
        let s = world.simulate(&cfg, &placement).map_err(|e| e.to_string())?.summary;
        let mean = |name| s.component(name).map_or(f64::NAN, |c| c.mean);
        let (up, down, proc) = (mean("d_up"), mean("d_down"), mean("d_proc"));
        let detail = format!("mean d_up {up:.6}s, d_down {down:.6}s, d_proc {proc:.6}s, {} detours", s.controller_detours);
        ensure(down < up, || detail.clone())?;
        Ok(detail)
    })();
    verdict(8, "direction asymmetry", result);
}

#[test]
fn c09_detector_cost_is_linear_in_watched_vehicles() {
    let result = (|| {
        let cfg = config("synth_duration = 30\nplacement = core0+core1+core2+core3+r03+r11");
        let world = World::load(&cfg).map_err(|e| e.to_string())?;
        let ids = ["core0", "core1", "core2", "core3", "r03", "r11"];
        let placement = PlacementConfig::from_ids(&world.graph, &ids).map_err(|e| e.to_string())?;
        let s = world.simulate(&cfg, &placement).map_err(|e| e.to_string())?.summary;
        let points: Vec<(f64, f64)> =
            s.detectors.iter().filter(|d| d.beacons > 0).map(|d| (d.mean_watched(), d.cost_per_beacon())).collect();
        ensure(points.len() >= 5, || format!("only {} detectors served beacons", points.len()))?;
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
        ensure(sxx > 0.0, || "every detector watched the same number of vehicles".into())?;
        let slope = sxy / sxx;
        let residual: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
        let r2 = 1.0 - residual / syy;
        let detail = format!("{} detectors, slope {slope:.4}, R^2 {r2:.6}", points.len());
        ensure(r2 >= 0.99, || detail.clone())?;
        Ok(detail)
    })();
    verdict(9, "energy linearity", result);
}

/// Deterministic objective: weighted closeness in hops of every RSU to its
/// nearest detector, plus a small fixed per-node bias that breaks ties.
struct ToyObjective<'a> {
    graph: &'a TopologyGraph,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl ToyObjective<'_> {
    fn hops_from(&self, from: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.graph.len()];
        let mut frontier = vec![from];
        dist[from.0] = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for n in frontier {
                for &(m, _) in self.graph.neighbors(n) {
                    if dist[m.0] == usize::MAX {
                        dist[m.0] = dist[n.0] + 1;
                        next.push(m);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    fn score(&self, nodes: &[NodeId]) -> f64 {
        let closeness: f64 = self
            .graph
            .rsu_nodes()
            .map(|r| {
                let hops = self.hops_from(r);
                let nearest = nodes.iter().map(|n| hops[n.0]).min().unwrap();
                self.weights[r.0] / (1.0 + nearest as f64)
            })
            .sum();
        closeness + nodes.iter().map(|n| self.bias[n.0]).sum::<f64>()
    }
}

impl Evaluator for ToyObjective<'_> {
    type Error = ();

    fn evaluate(&mut self, config: &PlacementConfig) -> Result<Evaluation, ()> {
        Ok(Evaluation { fractions: BTreeMap::new(), objective: self.score(config.nodes()) })
    }
}

#[test]
fn c10_refinement_finds_the_enumerated_optimum() {
    let result = (|| {
        let rsus: Vec<RsuSite> = (0..5)
            .map(|i| RsuSite::new(format!("r{i}"), Vec2::new(f64::from(i) * 400.0, f64::from(i % 2) * 300.0), 255.0))
            .collect();
        let graph = build_topology(&rsus, 2, TopologyKind::Mesh, LinkParams::default()).map_err(|e| e.to_string())?;
        let mut rng = rngs::stream(110, "acceptance-toy");
        let mut runs = 0;
        for objective in 0..5 {
            let mut toy = ToyObjective {
                graph: &graph,
                weights: (0..graph.len()).map(|_| rng.gen_range(1.0..10.0)).collect(),
                bias: (0..graph.len()).map(|_| rng.gen_range(0.0..0.01)).collect(),
            };
            let mut optimum = f64::NEG_INFINITY;
            for a in 0..graph.len() {
                for b in a + 1..graph.len() {
                    optimum = optimum.max(toy.score(&[NodeId(a), NodeId(b)]));
                }
            }
            for seed in 0..10 {
                let out = refine(2, &graph, &mut toy, 32, seed, MoveRule::Literal).map_err(|_| "refine failed".to_string())?;
                ensure(out.best_objective == optimum, || {
                    format!("objective {objective} seed {seed}: refine {} vs enumeration {optimum}", out.best_objective)
                })?;
                runs += 1;
            }
        }
        Ok(format!("{runs} refinements over {} nodes reach the optimum of all pairs", graph.len()))
    })();
    verdict(10, "placement oracle", result);
}

fn files_in(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn c11_repeated_invocations_are_byte_identical() {
    let result = (|| {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let base = "seed = 7\nsynth_vehicles = 60\nsynth_duration = 20\nsynth_width = 1500\nsynth_height = 1500\n\
                    rsu_count = 6\nrsu_grid = 5\ncores = 2\ncontroller = heavy\n";
        let cases = [
            ("run", format!("{base}placement = core0+r02\n")),
            ("run", format!("{base}refine_n = 2\nrefine_iters = 4\n")),
            ("refine", format!("{base}refine_n = 2\nrefine_iters = 6\nrefine_rule = inverted\n")),
        ];
        let mut compared = 0;
        for (i, (command, text)) in cases.iter().enumerate() {
            let cfg_path = tmp.path().join(format!("case{i}.cfg"));
            fs::write(&cfg_path, text).map_err(|e| e.to_string())?;
            let mut outputs = Vec::new();
            for attempt in 0..2 {
                let out = tmp.path().join(format!("case{i}-{attempt}"));
                let status = Command::new(env!("CARGO_BIN_EXE_vcdsim"))
                    .arg(command)
                    .arg("-c")
                    .arg(&cfg_path)
                    .arg("-o")
                    .arg(&out)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(status.status.success(), || {
                    format!("case {i}: {}", String::from_utf8_lossy(&status.stderr))
                })?;
                outputs.push(files_in(&out));
            }
            ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("case {i}: outputs differ"))?;
            compared += outputs[0].len();
        }
        Ok(format!("{compared} files identical across repeated run/refine invocations"))
    })();
    verdict(11, "determinism", result);
}

#[test]
fn c12_access_delays_stay_in_bounds() {
    let result = (|| {
        let wave = WaveParams::default();
        let trace = synth_trace(12, 500, 20, Bounds::new(Vec2::ZERO, Vec2::new(3000.0, 3000.0)), (5.0, 19.5))
            .map_err(|e| e.to_string())?;
        let schedule = beacon_schedule(&trace, &EmissionPlan::default());
        ensure(schedule.len() >= 10_000, || format!("only {} beacons scheduled", schedule.len()))?;
        let mut rng = rngs::stream(12, rngs::RADIO);
        let (lo, hi) = (wave.tx_time(), 0.050 + wave.tx_time() + wave.max_contention);
        let mut worst: f64 = 0.0;
        for b in schedule.iter().take(10_000) {
            let d = access_delay(b.t_gen, &wave, &mut rng);
            ensure((lo..=hi).contains(&d), || format!("beacon at {} got delay {d}", b.t_gen))?;
            worst = worst.max(d);
        }
        let mut any_phase_worst: f64 = 0.0;
        for _ in 0..10_000 {
            let t = rng.gen_range(0.0..60.0);
            let d = access_delay(t, &wave, &mut rng);
            ensure(d >= lo && d <= wave.max_delay(), || format!("t {t} got delay {d}"))?;
            any_phase_worst = any_phase_worst.max(d);
        }
        Ok(format!(
            "10000 scheduled beacons within [{lo}, {hi}] (max {worst:.6}); \
             10000 arbitrary-phase frames within [{lo}, {:.6}] (max {any_phase_worst:.6})",
            wave.max_delay()
        ))
    })();
    verdict(12, "WAVE access-delay bounds", result);
}
