//! File formats. Every writer is deterministic: identical inputs give
//! byte-identical output.

mod delay;
mod records;
mod refine_log;
mod rsu;
mod summary;
mod topology;
mod trace;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub use delay::{parse_delays, write_delays};
pub use records::{parse_records, write_records, RECORD_HEADER};
pub use refine_log::write_refine_log;
pub use rsu::{parse_rsus, write_rsus};
pub use summary::{ComponentDoc, DetectorDoc, RunMeta, SummaryDoc};
pub use topology::{topology_json, TopologyDoc};
pub use trace::{emit_trace, parse_trace};

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Writes `path` through `f`, flushing before returning.
pub fn create_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn check_header(file: &str, got: &csv::StringRecord, want: &[&str]) -> Result<()> {
    if got.iter().ne(want.iter().copied()) {
        return Err(Error::parse(file, 1, format!("expected header `{}`", want.join(","))));
    }
    Ok(())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(file: &str, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(file, line, e.to_string())
}

fn field<T: std::str::FromStr>(file: &str, record: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let raw = record.get(i).unwrap_or("");
    raw.trim().parse().map_err(|_| Error::parse(file, line_of(record), format!("bad {name} `{raw}`")))
}

fn reader<R: std::io::Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(r)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn write_err(e: csv::Error) -> Error {
    Error::io("<output>", std::io::Error::other(e))
}
