use std::io::Write;

use vcdsim_core::{RefineOutcome, TopologyGraph};

use super::{write_err, writer};
use crate::error::{Error, Result};

pub fn write_refine_log<W: Write>(out: W, outcome: &RefineOutcome, graph: &TopologyGraph) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["iteration", "config", "objective", "mutated"]).map_err(write_err)?;
    for row in &outcome.log {
        w.write_record([
            row.iteration.to_string(),
            row.config.label(graph),
            format!("{:.9}", row.objective),
            row.mutated.to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}
