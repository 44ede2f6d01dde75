use abrasion_core::dataset::{Column, FeatureSet};
use abrasion_core::grnn::{self, DEFAULT_GRID_POINTS};
use anyhow::{bail, Context, Result};

/// `1-10`, `3`, `1,4,7-9`
pub fn seeds(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u64 = lo
                    .trim()
                    .parse()
                    .with_context(|| format!("bad seed range {part:?}"))?;
                let hi: u64 = hi
                    .trim()
                    .parse()
                    .with_context(|| format!("bad seed range {part:?}"))?;
                if hi < lo {
                    bail!("empty seed range {part:?}");
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().with_context(|| format!("bad seed {part:?}"))?),
        }
    }
    if out.is_empty() {
        bail!("no seeds given");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `lo:hi:n`, log-spaced and inclusive.
pub fn sigma_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let (lo, hi, n) = match parts.as_slice() {
        [lo, hi, n] => (lo.parse::<f64>()?, hi.parse::<f64>()?, n.parse::<usize>()?),
        [lo, hi] => (lo.parse::<f64>()?, hi.parse::<f64>()?, DEFAULT_GRID_POINTS),
        _ => bail!("sigma grid must look like lo:hi:n, got {s:?}"),
    };
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) || n == 0 {
        bail!("sigma grid needs 0 < lo <= hi and n >= 1, got {s:?}");
    }
    Ok(if lo == hi {
        vec![lo]
    } else {
        grnn::sigma_grid(lo, hi, n)
    })
}

pub fn feature_set(exclude: Option<&str>) -> Result<FeatureSet> {
    let Some(list) = exclude else {
        return Ok(FeatureSet::all());
    };
    let cols = list
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| c.parse::<Column>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FeatureSet::excluding(&cols)?)
}
