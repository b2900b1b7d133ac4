use std::path::Path;

use super::SweepRow;
use crate::error::{Error, Result};
use crate::gann::{FITNESS_CAP, MAX_TOLERABLE_ERROR};

pub const REPORT_HEADER: [&str; 13] = [
    "input",
    "hidden",
    "output",
    "Pc",
    "Pm",
    "M",
    "E",
    "F",
    "elapsed_cycles",
    "cycle_limit",
    "elapsed_seconds",
    "stop_reason",
    "accuracy_pct",
];

/// The `F` column: `1/E (decimal)`, or `converged (1000000)` when the error
/// is below the tolerance.
pub fn format_fitness(error: f64) -> String {
    if error < MAX_TOLERABLE_ERROR {
        format!("converged ({FITNESS_CAP})")
    } else {
        format!("1/{error} ({:.6})", 1.0 / error)
    }
}

fn record(row: &SweepRow) -> [String; 13] {
    [
        row.inputs.to_string(),
        row.hidden.to_string(),
        row.outputs.to_string(),
        row.crossover_rate.to_string(),
        row.mutation_rate.to_string(),
        row.population_size.to_string(),
        row.error.to_string(),
        format_fitness(row.error),
        row.elapsed_cycles.to_string(),
        row.cycle_limit.to_string(),
        row.elapsed_seconds
            .map(|s| s.to_string())
            .unwrap_or_default(),
        row.stop_reason.to_string(),
        row.accuracy_pct.to_string(),
    ]
}

/// Serializes rows as CSV text with a header line.
pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::InvalidInput(
            "a report needs at least one row".into(),
        ));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_HEADER)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn emit_report(rows: &[SweepRow], path: &Path) -> Result<()> {
    let text = to_csv(rows)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    line: usize,
) -> std::result::Result<T, String> {
    let raw = rec.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| format!("line {line}: bad {} value {raw:?}", REPORT_HEADER[i]))
}

/// Parses text produced by [`to_csv`].
pub fn parse_report(text: &str) -> std::result::Result<Vec<SweepRow>, String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(REPORT_HEADER.iter().copied()) {
        return Err(format!(
            "unexpected header {:?}",
            header.iter().collect::<Vec<_>>()
        ));
    }
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| e.to_string())?;
        let seconds = match rec.get(10).unwrap_or("") {
            "" => None,
            _ => Some(field(&rec, 10, line)?),
        };
        let row = SweepRow {
            inputs: field(&rec, 0, line)?,
            hidden: field(&rec, 1, line)?,
            outputs: field(&rec, 2, line)?,
            crossover_rate: field(&rec, 3, line)?,
            mutation_rate: field(&rec, 4, line)?,
            population_size: field(&rec, 5, line)?,
            error: field(&rec, 6, line)?,
            elapsed_cycles: field(&rec, 8, line)?,
            cycle_limit: field(&rec, 9, line)?,
            elapsed_seconds: seconds,
            stop_reason: field(&rec, 11, line)?,
            accuracy_pct: field(&rec, 12, line)?,
        };
        if rec.get(7) != Some(format_fitness(row.error).as_str()) {
            return Err(format!("line {line}: F column does not match E"));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("report has no rows".into());
    }
    Ok(rows)
}

pub fn read_report(path: &Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_report(&text).map_err(|m| Error::format(path, m))
}
