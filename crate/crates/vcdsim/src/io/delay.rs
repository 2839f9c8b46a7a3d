use std::io::{Read, Write};

use vcdsim_core::DelayFile;

use super::{check_header, csv_error, field, line_of, reader, write_err, writer};
use crate::error::{Error, Result};

pub const DELAY_HEADER: [&str; 3] = ["vehicle_id", "seq", "delay_s"];

pub fn parse_delays<R: Read>(input: R, file: &str) -> Result<DelayFile> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, e))?.clone();
    check_header(file, &header, &DELAY_HEADER)?;
    let mut out = DelayFile::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(file, e))?;
        let id = rec.get(0).unwrap_or("").trim().to_owned();
        let seq: u64 = field(file, &rec, 1, "seq")?;
        let delay: f64 = field(file, &rec, 2, "delay_s")?;
        if out.get(&id, seq).is_some() {
            return Err(Error::parse(file, line_of(&rec), format!("duplicate entry ({id}, {seq})")));
        }
        out.insert(id, seq, delay).map_err(|e| Error::parse(file, line_of(&rec), e.to_string()))?;
    }
    Ok(out)
}

pub fn write_delays<W: Write>(out: W, delays: &DelayFile) -> Result<()> {
    let mut w = writer(out);
    w.write_record(DELAY_HEADER).map_err(write_err)?;
    for (id, seq, d) in delays.iter() {
        w.write_record([id.to_owned(), seq.to_string(), d.to_string()]).map_err(write_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}
