use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub time: f64,
    pub lorry: u64,
    pub event: &'static str,
    pub station: &'static str,
}

/// Writes `timestamp,lorry_id,event,station` rows.
pub fn write_trace<W: Write>(records: &[TraceRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["timestamp", "lorry_id", "event", "station"])?;
    for r in records {
        w.write_record([
            format!("{:.6}", r.time),
            r.lorry.to_string(),
            r.event.to_string(),
            r.station.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
