use std::io::{Read, Write};

use vcdsim_core::{RsuSite, Vec2};

use super::{check_header, csv_error, field, line_of, reader, write_err, writer};
use crate::error::{Error, Result};

pub const RSU_HEADER: [&str; 4] = ["rsu_id", "x_m", "y_m", "radius_m"];

pub fn parse_rsus<R: Read>(input: R, file: &str) -> Result<Vec<RsuSite>> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, e))?.clone();
    check_header(file, &header, &RSU_HEADER)?;
    let mut out: Vec<RsuSite> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(file, e))?;
        let id = rec.get(0).unwrap_or("").trim();
        if id.is_empty() {
            return Err(Error::parse(file, line_of(&rec), "empty rsu_id"));
        }
        if out.iter().any(|r| r.rsu_id == id) {
            return Err(Error::parse(file, line_of(&rec), format!("duplicate rsu_id {id}")));
        }
        let pos = Vec2::new(field(file, &rec, 1, "x_m")?, field(file, &rec, 2, "y_m")?);
        let radius: f64 = field(file, &rec, 3, "radius_m")?;
        if !(radius > 0.0 && radius.is_finite()) || !pos.is_finite() {
            return Err(Error::parse(file, line_of(&rec), "radius must be positive and coordinates finite"));
        }
        out.push(RsuSite::new(id, pos, radius));
    }
    Ok(out)
}

pub fn write_rsus<W: Write>(out: W, rsus: &[RsuSite]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(RSU_HEADER).map_err(write_err)?;
    for r in rsus {
        w.write_record([
            r.rsu_id.clone(),
            r.position.x.to_string(),
            r.position.y.to_string(),
            r.coverage_radius.to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}
