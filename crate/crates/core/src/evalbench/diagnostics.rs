//! Predicted/actual/residual tables per trial and partition.
//!
//! Each file holds `sample_index,actual,predicted,residual`, which is enough
//! to draw predicted-vs-actual, residual-vs-actual and residual-vs-predicted
//! scatter plots.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::trials::{DiagnosticRow, TrialResult};
use crate::error::{Error, Result};

pub const DIAGNOSTICS_CSV_HEADER: &str = "sample_index,actual,predicted,residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Train,
    Test,
}

impl Partition {
    pub fn name(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Test => "test",
        }
    }
}

pub fn diagnostics_file_name(result: &TrialResult, partition: Partition) -> String {
    format!(
        "{}_seed{}_{}.csv",
        result.model.slug(),
        result.seed,
        partition.name()
    )
}

pub fn write_rows<W: Write>(rows: &[DiagnosticRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{DIAGNOSTICS_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.sample, r.actual, r.predicted, r.residual
        )?;
    }
    w.flush()
}

/// Writes a train and a test file per result into `dir`, creating it if needed.
/// Returns the written paths in result order, train before test.
pub fn export_diagnostics(results: &[TrialResult], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if results.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(2 * results.len());
    for r in results {
        for (partition, rows) in [
            (Partition::Train, &r.train_rows),
            (Partition::Test, &r.test_rows),
        ] {
            let path = dir.join(diagnostics_file_name(r, partition));
            let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
            write_rows(rows, BufWriter::new(file)).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
