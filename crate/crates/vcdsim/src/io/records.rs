use std::io::{Read, Write};

use vcdsim_core::{BeaconRecord, Outcome, SimTime};

use super::{check_header, csv_error, field, line_of, reader, write_err, writer};
use crate::error::{Error, Result};

pub const RECORD_HEADER: [&str; 12] = [
    "vehicle_id",
    "seq",
    "rsu_id",
    "detector_id",
    "d_air_up_s",
    "d_up_s",
    "d_proc_s",
    "d_down_s",
    "d_air_down_s",
    "total_s",
    "outcome",
    "alerts",
];

/// Times are written with 9 fractional digits, i.e. exact nanoseconds.
/// Missing values are empty fields.
pub fn write_records<W: Write>(out: W, records: &[BeaconRecord]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(RECORD_HEADER).map_err(write_err)?;
    let time = |t: Option<SimTime>| t.map(|t| t.to_string()).unwrap_or_default();
    for r in records {
        let [a, b, c, d, e] = r.components();
        w.write_record([
            r.vehicle_id.clone(),
            r.seq.to_string(),
            r.rsu_id.clone().unwrap_or_default(),
            r.detector_id.clone().unwrap_or_default(),
            time(a),
            time(b),
            time(c),
            time(d),
            time(e),
            time(r.total),
            r.outcome.as_str().to_owned(),
            r.alerts.to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

/// Reads back a records file. `t_gen` is not stored and comes back as 0.
pub fn parse_records<R: Read>(input: R, file: &str) -> Result<Vec<BeaconRecord>> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, e))?.clone();
    check_header(file, &header, &RECORD_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(file, e))?;
        let line = line_of(&rec);
        let text = |i: usize| rec.get(i).unwrap_or("").to_owned();
        let opt = |i: usize| Some(text(i)).filter(|s| !s.is_empty());
        let time = |i: usize| -> Result<Option<SimTime>> {
            match opt(i) {
                None => Ok(None),
                Some(s) => parse_secs(&s)
                    .map(Some)
                    .ok_or_else(|| Error::parse(file, line, format!("bad {} `{s}`", RECORD_HEADER[i]))),
            }
        };
        let outcome = Outcome::parse(&text(10)).ok_or_else(|| Error::parse(file, line, "bad outcome"))?;
        out.push(BeaconRecord {
            vehicle_id: text(0),
            seq: field(file, &rec, 1, "seq")?,
            t_gen: SimTime::ZERO,
            rsu_id: opt(2),
            detector_id: opt(3),
            d_air_up: time(4)?,
            d_up: time(5)?,
            d_proc: time(6)?,
            d_down: time(7)?,
            d_air_down: time(8)?,
            total: time(9)?,
            outcome,
            alerts: field(file, &rec, 11, "alerts")?,
        });
    }
    Ok(out)
}

/// Exact parse of a non-negative decimal with at most 9 fractional digits.
fn parse_secs(s: &str) -> Option<SimTime> {
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 9 || whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let secs: u64 = whole.parse().ok()?;
    let nanos: u64 = if frac.is_empty() { 0 } else { format!("{frac:0<9}").parse().ok()? };
    secs.checked_mul(SimTime::NANOS_PER_SEC)?.checked_add(nanos).map(SimTime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seconds_round_trip_exactly() {
        for ns in [0u64, 1, 999_999_999, 1_000_000_000, 1_836_400, 12_345_678_901] {
            let t = SimTime(ns);
            assert_eq!(parse_secs(&t.to_string()), Some(t));
        }
        assert_eq!(parse_secs("0.5"), Some(SimTime(500_000_000)));
        assert_eq!(parse_secs("-1"), None);
        assert_eq!(parse_secs("0.0000000001"), None);
    }
}
