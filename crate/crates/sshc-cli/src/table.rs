//! Table and number formatting for machine-readable output.
//!
//! CSV fields use '.' as the decimal separator, no thousands grouping,
//! and scientific notation for magnitudes below 1e-3 or at or above
//! 1e6. Values print with shortest-round-trip precision, so the same
//! table always serializes to the same bytes.

use std::io::Write;

use sshc::{CellValue, SweepTable};

use crate::CliError;

/// Marker emitted for infeasible sweep cells.
pub const INFEASIBLE: &str = "infeasible";

/// Formats one numeric field.
pub fn fmt_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let magnitude = x.abs();
    if !(1e-3..1e6).contains(&magnitude) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn cell_to_string(cell: &CellValue) -> String {
    match cell {
        CellValue::Value(v) => fmt_number(*v),
        CellValue::Infeasible => INFEASIBLE.to_string(),
    }
}

/// Writes a header plus rows of preformatted fields as CSV.
pub fn write_csv<W: Write>(
    writer: W,
    columns: &[String],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer
        .write_record(columns)
        .map_err(|e| CliError::invalid(format!("cannot write CSV: {e}")))?;
    for row in rows {
        csv_writer
            .write_record(row)
            .map_err(|e| CliError::invalid(format!("cannot write CSV: {e}")))?;
    }
    csv_writer
        .flush()
        .map_err(|e| CliError::invalid(format!("cannot write CSV: {e}")))?;
    Ok(())
}

/// Renders a sweep table as CSV text.
pub fn sweep_table_csv(table: &SweepTable) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| {
            row.axis_values
                .iter()
                .map(|v| fmt_number(*v))
                .chain(row.cells.iter().map(cell_to_string))
                .collect()
        })
        .collect();
    let mut buffer = Vec::new();
    write_csv(&mut buffer, &table.columns, &rows)?;
    String::from_utf8(buffer).map_err(|e| CliError::invalid(format!("non-UTF8 CSV: {e}")))
}

/// Renders a sweep table as a JSON array of row objects, preserving
/// column order.
pub fn sweep_table_json(table: &SweepTable) -> String {
    use serde_json::{Map, Number, Value};
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut object = Map::new();
            for (name, value) in table.columns.iter().zip(
                row.axis_values
                    .iter()
                    .map(|v| CellValue::Value(*v))
                    .chain(row.cells.iter().copied()),
            ) {
                let json_value = match value {
                    CellValue::Value(v) => Number::from_f64(v)
                        .map(Value::Number)
                        .unwrap_or(Value::Null),
                    CellValue::Infeasible => Value::String(INFEASIBLE.to_string()),
                };
                object.insert(name.clone(), json_value);
            }
            Value::Object(object)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(rows)).expect("valid JSON");
    text.push('\n');
    text
}

/// Engineering-prefix rendering for human-readable reports.
pub fn fmt_si(value: f64, unit: &str) -> String {
    if value == 0.0 {
        return format!("0 {unit}");
    }
    if !value.is_finite() {
        return format!("{value} {unit}");
    }
    const PREFIXES: [(f64, &str); 8] = [
        (1e-15, "f"),
        (1e-12, "p"),
        (1e-9, "n"),
        (1e-6, "\u{00b5}"),
        (1e-3, "m"),
        (1.0, ""),
        (1e3, "k"),
        (1e6, "M"),
    ];
    let magnitude = value.abs();
    let mut scale = PREFIXES[0];
    for candidate in PREFIXES {
        if magnitude >= candidate.0 {
            scale = candidate;
        }
    }
    format!("{:.4} {}{}", value / scale.0, scale.1, unit)
}
