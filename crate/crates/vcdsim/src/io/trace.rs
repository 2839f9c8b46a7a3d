use std::io::{Read, Write};

use vcdsim_core::{Bounds, Trace, TraceError, Vec2, VehicleState};

use super::{check_header, csv_error, field, line_of, reader, write_err, writer};
use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 6] = ["time_s", "vehicle_id", "x_m", "y_m", "vx_mps", "vy_mps"];

/// Reads a trace CSV. States must lie inside `bounds` when given; without
/// it the trace gets the smallest box around its positions.
pub fn parse_trace<R: Read>(input: R, file: &str, bounds: Option<Bounds>) -> Result<Trace> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, e))?.clone();
    check_header(file, &header, &TRACE_HEADER)?;
    let mut states = Vec::new();
    let mut lines = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(file, e))?;
        let id = rec.get(1).unwrap_or("").trim();
        if id.is_empty() {
            return Err(Error::parse(file, line_of(&rec), "empty vehicle_id"));
        }
        states.push(VehicleState {
            vehicle_id: id.to_owned(),
            time: field(file, &rec, 0, "time_s")?,
            position: Vec2::new(field(file, &rec, 2, "x_m")?, field(file, &rec, 3, "y_m")?),
            velocity: Vec2::new(field(file, &rec, 4, "vx_mps")?, field(file, &rec, 5, "vy_mps")?),
        });
        lines.push(line_of(&rec));
    }
    let bounds = bounds
        .or_else(|| Bounds::enclosing(states.iter().map(|s| s.position)))
        .unwrap_or(Bounds::new(Vec2::ZERO, Vec2::ZERO));
    let located = |vehicle: &str, time: f64| {
        states
            .iter()
            .zip(&lines)
            .filter(|(s, _)| s.vehicle_id == vehicle && s.time == time)
            .map(|(_, l)| *l)
            .last()
    };
    match Trace::new(states.clone(), bounds) {
        Ok(t) => Ok(t),
        Err(e) => {
            let line = match &e {
                TraceError::Duplicate { vehicle_id, time }
                | TraceError::OutOfBounds { vehicle_id, time }
                | TraceError::NegativeTime { vehicle_id, time }
                | TraceError::NonFinite { vehicle_id, time }
                | TraceError::SpeedLimit { vehicle_id, time, .. } => located(vehicle_id, *time),
                TraceError::InvalidConfig(_) => None,
            };
            match line {
                Some(line) => Err(Error::parse(file, line, e.to_string())),
                None => Err(Error::Trace { file: file.to_owned(), source: e }),
            }
        }
    }
}

/// Writes `trace` in the CSV format read by [`parse_trace`]. Numbers use
/// the shortest representation that parses back to the same value.
pub fn emit_trace<W: Write>(out: W, trace: &Trace) -> Result<()> {
    let mut w = writer(out);
    w.write_record(TRACE_HEADER).map_err(write_err)?;
    for s in trace.states() {
        w.write_record([
            s.time.to_string(),
            s.vehicle_id.clone(),
            s.position.x.to_string(),
            s.position.y.to_string(),
            s.velocity.x.to_string(),
            s.velocity.y.to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        let t = parse_trace("time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n".as_bytes(), "t.csv", None).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.duration(), 0.0);
    }

    #[test]
    fn one_row() {
        let src = "time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n0,A,10,20,5,0\n";
        let t = parse_trace(src.as_bytes(), "t.csv", None).unwrap();
        assert_eq!(t.states().len(), 1);
        let s = &t.states()[0];
        assert_eq!((s.position, s.velocity), (Vec2::new(10.0, 20.0), Vec2::new(5.0, 0.0)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n0,A,1,1,0,0\n1,A,x,1,0,0\n";
        let e = parse_trace(bad.as_bytes(), "t.csv", None).unwrap_err().to_string();
        assert!(e.starts_with("t.csv:3:"), "{e}");

        let dup = "time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n0,A,1,1,0,0\n0,B,1,1,0,0\n0,A,2,2,0,0\n";
        let e = parse_trace(dup.as_bytes(), "t.csv", None).unwrap_err().to_string();
        assert!(e.starts_with("t.csv:4:") && e.contains("duplicate"), "{e}");

        let box10 = Bounds::new(Vec2::ZERO, Vec2::new(10.0, 10.0));
        let oob = "time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n0,A,1,1,0,0\n1,A,11,1,0,0\n";
        let e = parse_trace(oob.as_bytes(), "t.csv", Some(box10)).unwrap_err().to_string();
        assert!(e.starts_with("t.csv:3:") && e.contains("outside"), "{e}");

        let short = "time_s,vehicle_id,x_m,y_m,vx_mps,vy_mps\n0,A,1,1,0\n";
        assert!(parse_trace(short.as_bytes(), "t.csv", None).is_err());
        let header = "t,vehicle_id,x_m,y_m,vx_mps,vy_mps\n";
        assert!(parse_trace(header.as_bytes(), "t.csv", None).unwrap_err().to_string().contains(":1:"));
    }
}
