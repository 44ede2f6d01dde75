//! CSV reading and writing.
//!
//! The header must be exactly the nine column names in canonical order.
//! LF and CRLF line endings are accepted; LF is emitted.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{Column, Dataset, FeatureRow, Sample, Source, N_FEATURES};
use crate::error::{Error, Result};

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let samples = read_samples(file)?;
    Dataset::new(samples, Source::File(path.to_path_buf()))
}

/// Reads a dataset from any reader; the source is recorded as derived.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    Dataset::new(read_samples(reader)?, Source::Derived)
}

pub fn write_csv<W: Write>(d: &Dataset, mut w: W) -> std::io::Result<()> {
    let header: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
    writeln!(w, "{}", header.join(","))?;
    for s in d.samples() {
        let cells: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn save_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(d, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Rows for prediction: the eight features, plus targets when the
/// file carries the target column.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub rows: Vec<FeatureRow>,
    pub targets: Option<Vec<f64>>,
}

pub fn load_feature_table(path: impl AsRef<Path>) -> Result<FeatureTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_feature_table(file)
}

/// Accepts either the full canonical header or the canonical header
/// without `akron_abrasion`.
pub fn read_feature_table<R: Read>(reader: R) -> Result<FeatureTable> {
    let mut rdr = reader_builder().from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let with_target = header.first().map(String::as_str) == Some(Column::TARGET.name());
    let expected: Vec<&str> = if with_target {
        Column::ALL.iter().map(|c| c.name()).collect()
    } else {
        Column::FEATURES.iter().map(|c| c.name()).collect()
    };
    check_header(&header, &expected)?;

    let mut rows = Vec::new();
    let mut targets = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let values = parse_record(&record?, i + 1, &expected)?;
        let offset = usize::from(with_target);
        let mut f = [0.0; N_FEATURES];
        f.copy_from_slice(&values[offset..]);
        rows.push(FeatureRow(f));
        if with_target {
            targets.push(values[0]);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(FeatureTable {
        rows,
        targets: with_target.then_some(targets),
    })
}

fn reader_builder() -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.has_headers(true).flexible(true).trim(csv::Trim::All);
    b
}

fn read_samples<R: Read>(reader: R) -> Result<Vec<Sample>> {
    let mut rdr = reader_builder().from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let expected: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
    check_header(&header, &expected)?;

    let mut samples = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let values = parse_record(&record?, i + 1, &expected)?;
        let mut v = [0.0; 9];
        v.copy_from_slice(&values);
        samples.push(Sample::from_values(v));
    }
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(samples)
}

fn check_header(found: &[String], expected: &[&str]) -> Result<()> {
    if found
        .iter()
        .map(String::as_str)
        .eq(expected.iter().copied())
    {
        return Ok(());
    }
    let mut problems = Vec::new();
    for want in expected {
        if !found.iter().any(|f| f == want) {
            problems.push(format!("missing column `{want}`"));
        }
    }
    for got in found {
        if !expected.contains(&got.as_str()) {
            problems.push(format!("unexpected column `{got}`"));
        }
    }
    if problems.is_empty() {
        problems.push(format!(
            "columns out of order, expected `{}`",
            expected.join(",")
        ));
    }
    Err(Error::Schema(problems.join("; ")))
}

fn parse_record(record: &csv::StringRecord, row: usize, columns: &[&str]) -> Result<Vec<f64>> {
    if record.len() != columns.len() {
        return Err(Error::Schema(format!(
            "row {row} has {} fields, expected {}",
            record.len(),
            columns.len()
        )));
    }
    record
        .iter()
        .zip(columns)
        .map(|(cell, col)| {
            cell.parse::<f64>().map_err(|_| Error::Parse {
                row,
                column: (*col).to_owned(),
                value: cell.to_owned(),
            })
        })
        .collect()
}
