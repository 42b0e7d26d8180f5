//! CSV input and output (UTF-8, comma-separated, RFC 4180 quoting).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use adcminer_core::Dataset;

use crate::error::{Phase, RunError};

/// Reads a dataset. Without a header, columns are named `c0`, `c1`, ...
/// Cells equal to `null_token` are nulls.
pub fn read_csv<R: Read>(reader: R, has_header: bool, null_token: &str) -> Result<Dataset, RunError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let names: Vec<String> = if has_header {
        match records.next() {
            Some(rec) => rec
                .map_err(|source| RunError::Csv {
                    phase: Phase::Load,
                    source,
                })?
                .iter()
                .map(str::to_string)
                .collect(),
            None => Vec::new(),
        }
    } else {
        Vec::new()
    };
    for rec in records {
        let rec = rec.map_err(|source| RunError::Csv {
            phase: Phase::Load,
            source,
        })?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    let names = if has_header {
        names
    } else {
        let width = rows.first().map_or(0, Vec::len);
        (0..width).map(|c| format!("c{c}")).collect()
    };
    Dataset::from_records(names, &rows, null_token).map_err(RunError::core(Phase::Load))
}

pub fn load_csv(path: &Path, has_header: bool, null_token: &str) -> Result<Dataset, RunError> {
    let file = File::open(path).map_err(RunError::io(Phase::Load))?;
    read_csv(file, has_header, null_token)
}

/// Writes `d` with a header row; nulls become `null_token`.
pub fn write_csv<W: Write>(d: &Dataset, writer: W, null_token: &str) -> Result<(), RunError> {
    let csv_err = |source| RunError::Csv {
        phase: Phase::Output,
        source,
    };
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((0..d.column_count()).map(|c| d.column_name(c)))
        .map_err(csv_err)?;
    for rec in d.to_records(null_token) {
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(RunError::io(Phase::Output))
}
