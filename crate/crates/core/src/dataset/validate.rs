use std::fmt;

use super::{Column, Dataset, Sample};

/// Upper sanity bound on Akron abrasion, cm³.
pub const MAX_ABRASION: f64 = 10.0;

/// Allowed gap between the recorded ratio column and modulus_300 / modulus_100.
/// Inputs carry one decimal, so small disagreements are rounding.
pub const RATIO_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    /// 1-based sample number, matching table numbering.
    pub sample: usize,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sample {}: {}", self.sample, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} error(s), {} warning(s)",
            self.errors.len(),
            self.warnings.len()
        )?;
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn validate(d: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, s) in d.samples().iter().enumerate() {
        check_sample(i + 1, s, &mut report);
    }
    report
}

fn check_sample(number: usize, s: &Sample, report: &mut ValidationReport) {
    let mut sound = true;
    for c in Column::ALL {
        let v = s.value(c);
        if !v.is_finite() {
            report.errors.push(Finding {
                sample: number,
                message: format!("{c} is not finite ({v})"),
            });
            sound = false;
        } else if v <= 0.0 {
            report.errors.push(Finding {
                sample: number,
                message: format!("{c} must be strictly positive, got {v}"),
            });
            sound = false;
        }
    }
    if s.akron_abrasion.is_finite() && s.akron_abrasion >= MAX_ABRASION {
        report.errors.push(Finding {
            sample: number,
            message: format!(
                "akron_abrasion {} exceeds sanity bound {MAX_ABRASION}",
                s.akron_abrasion
            ),
        });
    }
    if sound {
        let computed = s.modulus_300 / s.modulus_100;
        if (s.modulus_ratio - computed).abs() > RATIO_TOLERANCE {
            report.warnings.push(Finding {
                sample: number,
                message: format!(
                    "modulus_ratio {} disagrees with modulus_300/modulus_100 = {}/{} = {:.4}",
                    s.modulus_ratio, s.modulus_300, s.modulus_100, computed
                ),
            });
        }
    }
}
