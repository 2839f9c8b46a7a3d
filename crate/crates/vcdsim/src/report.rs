//! Comparison tables over many run summaries, one row per
//! (detector count, topology, controller).

use std::collections::BTreeMap;
use std::io::Write;

use vcdsim_core::engine::COMPONENT_NAMES;

use crate::error::{Error, Result};
use crate::io::SummaryDoc;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportRow {
    pub runs: u64,
    pub generated: u64,
    pub success: u64,
    pub late: u64,
    pub lost: u64,
    pub uncovered: u64,
    /// Per component: sum of samples and sample count.
    pub component_sums: BTreeMap<String, (f64, u64)>,
    pub detector_cost: f64,
    pub controller_cost: f64,
    pub total_energy: f64,
}

impl ReportRow {
    pub fn success_fraction(&self) -> f64 {
        match self.success + self.late + self.lost {
            0 => 1.0,
            c => self.success as f64 / c as f64,
        }
    }

    pub fn mean(&self, component: &str) -> f64 {
        match self.component_sums.get(component) {
            Some(&(sum, n)) if n > 0 => sum / n as f64,
            _ => 0.0,
        }
    }
}

pub type ReportKey = (usize, String, String);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: BTreeMap<ReportKey, ReportRow>,
}

impl Report {
    pub fn aggregate<'a>(summaries: impl IntoIterator<Item = &'a SummaryDoc>) -> Report {
        let mut rows: BTreeMap<ReportKey, ReportRow> = BTreeMap::new();
        for s in summaries {
            let key = (s.meta.n, s.meta.topology.clone(), s.meta.controller.clone());
            let row = rows.entry(key).or_default();
            row.runs += 1;
            row.generated += s.generated;
            row.success += s.success;
            row.late += s.late;
            row.lost += s.lost;
            row.uncovered += s.uncovered;
            for (name, c) in &s.components {
                let e = row.component_sums.entry(name.clone()).or_default();
                e.0 += c.mean_s * c.count as f64;
                e.1 += c.count;
            }
            row.detector_cost += s.detectors.iter().map(|d| d.cost).sum::<f64>();
            row.controller_cost += s.controller_cost;
            row.total_energy += s.energy.values().sum::<f64>();
        }
        Report { rows }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["n", "topology", "controller", "runs", "generated", "success", "late", "lost", "uncovered", "success_fraction"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(COMPONENT_NAMES.iter().map(|c| format!("mean_{c}_s")));
        header.extend(["detector_cost", "controller_cost", "total_energy"].map(String::from));
        let wrap = |e: csv::Error| Error::io("<report>", std::io::Error::other(e));
        w.write_record(&header).map_err(wrap)?;
        for ((n, topo, ctrl), row) in &self.rows {
            let mut rec = vec![
                n.to_string(),
                topo.clone(),
                ctrl.clone(),
                row.runs.to_string(),
                row.generated.to_string(),
                row.success.to_string(),
                row.late.to_string(),
                row.lost.to_string(),
                row.uncovered.to_string(),
                format!("{:.6}", row.success_fraction()),
            ];
            rec.extend(COMPONENT_NAMES.iter().map(|c| format!("{:.9}", row.mean(c))));
            rec.extend([row.detector_cost, row.controller_cost, row.total_energy].map(|v| format!("{v:.6}")));
            w.write_record(&rec).map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::io("<report>", e))
    }
}
