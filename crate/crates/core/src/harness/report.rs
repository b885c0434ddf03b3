use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TrialTable;
use crate::error::{BenchError, Result};

pub const CSV_COLUMNS: [&str; 10] = [
    "problem",
    "solver",
    "seed",
    "best_value",
    "objective_gap",
    "location_gap",
    "feasible",
    "evals",
    "wall_ms",
    "noise_policy",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(BenchError::usage(format!("unknown format `{other}`; use csv or json"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    problem: &'a str,
    solver: &'a str,
    seed: u64,
    best_value: f64,
    objective_gap: f64,
    location_gap: Option<f64>,
    feasible: bool,
    evals: usize,
    wall_ms: f64,
    noise_policy: &'a str,
}

/// Serializes a table. CSV carries one row per trial under [`CSV_COLUMNS`];
/// JSON holds the full records plus aggregates.
pub fn emit_report(table: &TrialTable, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_COLUMNS)?;
            for r in &table.records {
                w.serialize(CsvRow {
                    problem: &r.problem,
                    solver: &r.solver,
                    seed: r.seed,
                    best_value: r.best_value,
                    objective_gap: r.objective_gap,
                    location_gap: r.location_gap,
                    feasible: r.feasible,
                    evals: r.evals,
                    wall_ms: r.wall_ms,
                    noise_policy: &r.noise_policy,
                })?;
            }
            w.into_inner().map_err(|e| BenchError::Io(e.into_error()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(table)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::TrialRecord;
    use crate::problem::{Direction, OptimumKind};

    fn record(seed: u64) -> TrialRecord {
        TrialRecord {
            problem: "f3".into(),
            solver: "de".into(),
            trial: seed as usize,
            seed,
            best_point: vec![1.0, 0.0],
            best_path: None,
            best_value: 1.0000001,
            objective_gap: 1e-7,
            location_gap: Some(1e-7),
            curve_l2: None,
            in_region: None,
            feasible: true,
            feasibility: None,
            evals: 10_000,
            evals_to_success: Some(4_000),
            wall_ms: 12.5,
            noise_policy: "none".into(),
            success: true,
            error: None,
        }
    }

    fn table(n: u64) -> TrialTable {
        TrialTable::new(
            "f3",
            "de",
            Direction::Minimize,
            OptimumKind::PointSet,
            1e-3,
            1e-2,
            (0..n).map(record).collect(),
        )
    }

    #[test]
    fn empty_table_is_header_only() {
        let out = String::from_utf8(emit_report(&table(0), Format::Csv).unwrap()).unwrap();
        assert_eq!(out, format!("{}\n", CSV_COLUMNS.join(",")));
    }

    #[test]
    fn ten_records_eleven_lines() {
        let out = String::from_utf8(emit_report(&table(10), Format::Csv).unwrap()).unwrap();
        assert_eq!(out.lines().count(), 11);
        assert_eq!(out.lines().nth(1).unwrap(), "f3,de,0,1.0000001,1e-7,1e-7,true,10000,12.5,none");
    }

    #[test]
    fn json_round_trip() {
        let t = table(1);
        let bytes = emit_report(&t, Format::Json).unwrap();
        let back: TrialTable = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.records[0], record(0));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("xml".parse::<Format>(), Err(BenchError::Usage(_))));
    }
}
