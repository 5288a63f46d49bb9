use std::fmt::Write;

use super::{EntanglementRecord, FourPartyReport};
use crate::Result;

pub const RECORD_CSV_HEADER: &str = "t,bond,entropy_nats,light_cone_valid";

/// One row per `(t, bond)`, times in recorded order.
pub fn record_to_csv(record: &EntanglementRecord) -> String {
    let mut out = String::from(RECORD_CSV_HEADER);
    out.push('\n');
    for ((t, profile), valid) in record.times.iter().zip(&record.profiles).zip(&record.light_cone_valid) {
        for (bond, s) in profile.iter().enumerate() {
            let _ = writeln!(out, "{t},{bond},{s:?},{valid}");
        }
    }
    out
}

/// Flat JSON object with the report's field names.
pub fn report_to_json(report: &FourPartyReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = EntanglementRecord {
            q: 2,
            times: vec![0, 1],
            profiles: vec![vec![0.0, 0.5], vec![0.25, 1.0]],
            light_cone_valid: vec![true, false],
        };
        let csv = record_to_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], RECORD_CSV_HEADER);
        assert_eq!(lines[1], "0,0,0.0,true");
        assert_eq!(lines[4], "1,1,1.0,false");
        assert_eq!(lines.len(), 5);
    }
}
