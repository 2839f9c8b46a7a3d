use std::collections::BTreeMap;

use proptest::prelude::*;
use vcdsim::io::{emit_trace, parse_trace, ComponentDoc, RunMeta, SummaryDoc};
use vcdsim::report::Report;
use vcdsim_core::{synth_trace, Bounds, Trace, Vec2, VehicleState};

fn emitted(trace: &Trace) -> Vec<u8> {
    let mut buf = Vec::new();
    emit_trace(&mut buf, trace).unwrap();
    buf
}

#[test]
fn synthetic_trace_round_trips() {
    let bounds = Bounds::new(Vec2::ZERO, Vec2::new(2000.0, 2000.0));
    let trace = synth_trace(9, 10, 10, bounds, (5.0, 19.5)).unwrap();
    assert!(trace.states().len() >= 100);
    let text = emitted(&trace);
    let back = parse_trace(text.as_slice(), "t.csv", Some(bounds)).unwrap();
    assert_eq!(back, trace);
    assert_eq!(emitted(&back), text);
}

fn summary(n: usize, topology: &str, controller: &str, counts: [u64; 4], mean: f64, samples: u64) -> SummaryDoc {
    let [success, late, lost, uncovered] = counts;
    SummaryDoc {
        meta: RunMeta {
            n,
            topology: topology.into(),
            controller: controller.into(),
            placement: "core0".into(),
            seed: 1,
            deadline_s: 0.02,
        },
        generated: success + late + lost + uncovered,
        success,
        late,
        lost,
        uncovered,
        success_fraction: 0.0,
        components: BTreeMap::from([(
            "total".to_owned(),
            ComponentDoc { mean_s: mean, count: samples, samples_s: vec![mean; samples as usize] },
        )]),
        detectors: Vec::new(),
        controller_detours: 0,
        controller_cost: 1.0,
        energy: BTreeMap::from([("overhead".to_owned(), 2.0)]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_rows_round_trip(rows in prop::collection::vec(
        (0u32..50, 0usize..4, -1e4f64..1e4, -1e4f64..1e4, -30f64..30.0, -30f64..30.0), 1..40)
    ) {
        let mut seen = std::collections::BTreeSet::new();
        let states: Vec<VehicleState> = rows
            .into_iter()
            .filter(|(t, v, ..)| seen.insert((*t, *v)))
            .map(|(t, v, x, y, vx, vy)| VehicleState {
                time: f64::from(t) * 0.5,
                vehicle_id: format!("veh{v}"),
                position: Vec2::new(x, y),
                velocity: Vec2::new(vx, vy),
            })
            .collect();
        let bounds = Bounds::new(Vec2::new(-1e4, -1e4), Vec2::new(1e4, 1e4));
        let trace = Trace::new(states, bounds).unwrap();
        let back = parse_trace(emitted(&trace).as_slice(), "p.csv", Some(bounds)).unwrap();
        prop_assert_eq!(back, trace);
    }

    #[test]
    fn report_totals_are_input_sums(runs in prop::collection::vec(
        (1usize..4, prop::bool::ANY, [0u64..50, 0u64..50, 0u64..50, 0u64..50], 0.0f64..0.1, 0u64..20), 1..12)
    ) {
        let docs: Vec<SummaryDoc> = runs
            .iter()
            .map(|(n, mesh, counts, mean, k)| summary(*n, if *mesh { "mesh" } else { "star" }, "fast", *counts, *mean, *k))
            .collect();
        let report = Report::aggregate(&docs);
        prop_assert_eq!(report.rows.values().map(|r| r.runs).sum::<u64>(), docs.len() as u64);
        for ((n, topo, _), row) in &report.rows {
            let group: Vec<&SummaryDoc> = docs.iter().filter(|d| d.meta.n == *n && &d.meta.topology == topo).collect();
            prop_assert_eq!(row.runs, group.len() as u64);
            prop_assert_eq!(row.generated, group.iter().map(|d| d.generated).sum::<u64>());
            prop_assert_eq!(row.success, group.iter().map(|d| d.success).sum::<u64>());
            prop_assert_eq!(row.late, group.iter().map(|d| d.late).sum::<u64>());
            prop_assert_eq!(row.lost, group.iter().map(|d| d.lost).sum::<u64>());
            prop_assert_eq!(row.uncovered, group.iter().map(|d| d.uncovered).sum::<u64>());
            let samples: u64 = group.iter().map(|d| d.components["total"].count).sum();
            let weighted: f64 = group.iter().map(|d| d.components["total"].mean_s * d.components["total"].count as f64).sum();
            let expected = if samples == 0 { 0.0 } else { weighted / samples as f64 };
            prop_assert!((row.mean("total") - expected).abs() < 1e-12);
            prop_assert!((row.total_energy - 2.0 * group.len() as f64).abs() < 1e-9);
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        prop_assert_eq!(String::from_utf8(csv).unwrap().lines().count(), report.rows.len() + 1);
    }
}
