use rand::seq::SliceRandom;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{seeded, Stream};

/// A train/test partition of dataset row indices (0-based, ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Uniform random partition holding out `n_test` rows.
pub fn split(d: &Dataset, n_test: usize, seed: u64) -> Result<SplitIndices> {
    split_len(d.len(), n_test, seed)
}

pub fn split_len(n: usize, n_test: usize, seed: u64) -> Result<SplitIndices> {
    if n_test == 0 || n_test >= n {
        return Err(Error::InvalidSplit(format!(
            "test size must be between 1 and {}, got {n_test}",
            n.saturating_sub(1)
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded(seed, Stream::Split));
    let mut test = order[..n_test].to_vec();
    let mut train = order[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok(SplitIndices { train, test, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::builtin_dataset;
    use proptest::prelude::*;

    #[test]
    fn builtin_split_sizes() {
        let s = split(&builtin_dataset(), 5, 1).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (18, 5));
        assert_eq!(s, split(&builtin_dataset(), 5, 1).unwrap());
        assert_ne!(s.test, split(&builtin_dataset(), 5, 2).unwrap().test);
    }

    #[test]
    fn bad_sizes_rejected() {
        let d = builtin_dataset();
        assert!(matches!(split(&d, 23, 1), Err(Error::InvalidSplit(_))));
        assert!(matches!(split(&d, 0, 1), Err(Error::InvalidSplit(_))));
    }

    proptest! {
        #[test]
        fn exact_partition(n in 2usize..60, frac in 0.0f64..1.0, seed in any::<u64>()) {
            let n_test = 1 + ((n - 2) as f64 * frac) as usize;
            let s = split_len(n, n_test, seed).unwrap();
            prop_assert_eq!(s.test.len(), n_test);
            prop_assert_eq!(s.train.len(), n - n_test);
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }
}
