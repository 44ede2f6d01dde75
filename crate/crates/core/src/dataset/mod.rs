//! SSBR composite records: the embedded reference table, CSV I/O,
//! record validation and min-max scaling.

mod builtin;
mod io;
mod normalize;
mod validate;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::builtin_dataset;
pub use io::{
    load_csv, load_feature_table, read_csv, read_feature_table, save_csv, write_csv, FeatureTable,
};
pub use normalize::{fit_normalizer, ColumnRange, NormalizationSpec};
pub use validate::{validate, Finding, ValidationReport};

/// Number of feature columns in a [`Sample`].
pub const N_FEATURES: usize = 8;

/// One column of the dataset. The declaration order is the canonical CSV order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    AkronAbrasion,
    ShoreAHardness,
    Modulus100,
    Modulus300,
    ModulusRatio,
    TensileStrength,
    ElongationAtBreak,
    TearStrength,
    PermanentSet,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::AkronAbrasion,
        Column::ShoreAHardness,
        Column::Modulus100,
        Column::Modulus300,
        Column::ModulusRatio,
        Column::TensileStrength,
        Column::ElongationAtBreak,
        Column::TearStrength,
        Column::PermanentSet,
    ];

    pub const FEATURES: [Column; N_FEATURES] = [
        Column::ShoreAHardness,
        Column::Modulus100,
        Column::Modulus300,
        Column::ModulusRatio,
        Column::TensileStrength,
        Column::ElongationAtBreak,
        Column::TearStrength,
        Column::PermanentSet,
    ];

    pub const TARGET: Column = Column::AkronAbrasion;

    pub fn name(self) -> &'static str {
        match self {
            Column::AkronAbrasion => "akron_abrasion",
            Column::ShoreAHardness => "shore_a_hardness",
            Column::Modulus100 => "modulus_100",
            Column::Modulus300 => "modulus_300",
            Column::ModulusRatio => "modulus_ratio",
            Column::TensileStrength => "tensile_strength",
            Column::ElongationAtBreak => "elongation_at_break",
            Column::TearStrength => "tear_strength",
            Column::PermanentSet => "permanent_set",
        }
    }

    /// Position within [`Column::FEATURES`], `None` for the target.
    pub fn feature_index(self) -> Option<usize> {
        Column::FEATURES.iter().position(|&c| c == self)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown column `{s}`")))
    }
}

/// The eight raw feature values of one record, in [`Column::FEATURES`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRow(pub [f64; N_FEATURES]);

impl FeatureRow {
    /// Value of a feature column. Panics if `column` is the target.
    pub fn get(&self, column: Column) -> f64 {
        let idx = column
            .feature_index()
            .unwrap_or_else(|| panic!("{column} is not a feature column"));
        self.0[idx]
    }
}

/// One SSBR composite record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Akron abrasion, cm³ per 1.61 km. The regression target.
    pub akron_abrasion: f64,
    pub shore_a_hardness: f64,
    /// MPa
    pub modulus_100: f64,
    /// MPa
    pub modulus_300: f64,
    /// modulus_300 / modulus_100, as recorded (not recomputed).
    pub modulus_ratio: f64,
    /// MPa
    pub tensile_strength: f64,
    /// %
    pub elongation_at_break: f64,
    /// kN/m
    pub tear_strength: f64,
    /// %
    pub permanent_set: f64,
}

impl Sample {
    /// Builds a sample from values in [`Column::ALL`] order.
    pub fn from_values(v: [f64; 9]) -> Self {
        Sample {
            akron_abrasion: v[0],
            shore_a_hardness: v[1],
            modulus_100: v[2],
            modulus_300: v[3],
            modulus_ratio: v[4],
            tensile_strength: v[5],
            elongation_at_break: v[6],
            tear_strength: v[7],
            permanent_set: v[8],
        }
    }

    pub fn from_parts(target: f64, features: &FeatureRow) -> Self {
        let mut v = [0.0; 9];
        v[0] = target;
        v[1..].copy_from_slice(&features.0);
        Sample::from_values(v)
    }

    pub fn values(&self) -> [f64; 9] {
        [
            self.akron_abrasion,
            self.shore_a_hardness,
            self.modulus_100,
            self.modulus_300,
            self.modulus_ratio,
            self.tensile_strength,
            self.elongation_at_break,
            self.tear_strength,
            self.permanent_set,
        ]
    }

    pub fn value(&self, column: Column) -> f64 {
        match column {
            Column::AkronAbrasion => self.akron_abrasion,
            Column::ShoreAHardness => self.shore_a_hardness,
            Column::Modulus100 => self.modulus_100,
            Column::Modulus300 => self.modulus_300,
            Column::ModulusRatio => self.modulus_ratio,
            Column::TensileStrength => self.tensile_strength,
            Column::ElongationAtBreak => self.elongation_at_break,
            Column::TearStrength => self.tear_strength,
            Column::PermanentSet => self.permanent_set,
        }
    }

    pub fn target(&self) -> f64 {
        self.akron_abrasion
    }

    pub fn features(&self) -> FeatureRow {
        let v = self.values();
        let mut f = [0.0; N_FEATURES];
        f.copy_from_slice(&v[1..]);
        FeatureRow(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
    /// Produced in memory, e.g. a subset of another dataset.
    Derived,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Builtin => f.write_str("builtin"),
            Source::File(p) => write!(f, "{}", p.display()),
            Source::Derived => f.write_str("derived"),
        }
    }
}

/// An ordered, non-empty collection of samples.
#[derive(Debug, Clone)]
pub struct Dataset {
    samples: Vec<Sample>,
    source: Source,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, source: Source) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Dataset { samples, source })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.samples.iter().map(Sample::target).collect()
    }

    /// Samples at the given (0-based) indices, in the order given.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let samples = indices
            .iter()
            .map(|&i| {
                self.samples.get(i).copied().ok_or_else(|| {
                    Error::InvalidSplit(format!(
                        "index {i} out of range for {} samples",
                        self.len()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples, Source::Derived)
    }
}

impl PartialEq for Dataset {
    /// Datasets compare by content; provenance is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
    }
}

/// Which feature columns a model consumes. Defaults to all eight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Column>", into = "Vec<Column>")]
pub struct FeatureSet(Vec<Column>);

impl FeatureSet {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Schema("feature set is empty".into()));
        }
        let mut seen = Vec::with_capacity(columns.len());
        for &c in &columns {
            if c.feature_index().is_none() {
                return Err(Error::Schema(format!("`{c}` is the target, not a feature")));
            }
            if seen.contains(&c) {
                return Err(Error::Schema(format!("duplicate feature column `{c}`")));
            }
            seen.push(c);
        }
        Ok(FeatureSet(columns))
    }

    pub fn all() -> Self {
        FeatureSet(Column::FEATURES.to_vec())
    }

    /// All features except the listed ones, in canonical order.
    pub fn excluding(excluded: &[Column]) -> Result<Self> {
        FeatureSet::new(
            Column::FEATURES
                .iter()
                .copied()
                .filter(|c| !excluded.contains(c))
                .collect(),
        )
    }

    pub fn columns(&self) -> &[Column] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for FeatureSet {
    fn default() -> Self {
        FeatureSet::all()
    }
}

impl TryFrom<Vec<Column>> for FeatureSet {
    type Error = Error;

    fn try_from(v: Vec<Column>) -> Result<Self> {
        FeatureSet::new(v)
    }
}

impl From<FeatureSet> for Vec<Column> {
    fn from(f: FeatureSet) -> Self {
        f.0
    }
}
