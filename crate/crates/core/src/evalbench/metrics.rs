use crate::error::{Error, Result};

/// Root mean squared difference between predictions and actual values.
pub fn rmse(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch(predicted.len(), actual.len()));
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !predicted.iter().chain(actual).all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let sse: f64 = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok((sse / predicted.len() as f64).sqrt())
}

/// Sample standard deviation (n − 1 denominator); zero for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = crate::numeric::mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::builtin_dataset;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(rmse(&[0.1, 0.2], &[0.1, 0.2]).unwrap(), 0.0);
        assert!((rmse(&[0.1, 0.3], &[0.2, 0.2]).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            rmse(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(matches!(rmse(&[], &[]), Err(Error::EmptyInput)));
        assert!(matches!(rmse(&[f64::NAN], &[1.0]), Err(Error::NonFinite)));
    }

    #[test]
    fn mean_predictor_on_builtin() {
        let t = builtin_dataset().targets();
        let m = t.iter().sum::<f64>() / t.len() as f64;
        let r = rmse(&vec![m; t.len()], &t).unwrap();
        assert!((r - 0.083_656_964_519_790_02).abs() < 1e-12);
    }

    #[test]
    fn std_examples() {
        assert_eq!(sample_std(&[3.0]), 0.0);
        assert!((sample_std(&[1.0, 3.0]) - 2f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn symmetric_and_permutation_equivariant(
            pairs in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..30),
            rot in 0usize..30,
        ) {
            let p: Vec<f64> = pairs.iter().map(|x| x.0).collect();
            let a: Vec<f64> = pairs.iter().map(|x| x.1).collect();
            let r = rmse(&p, &a).unwrap();
            prop_assert_eq!(r, rmse(&a, &p).unwrap());
            let k = rot % p.len();
            let mut p2 = p.clone();
            let mut a2 = a.clone();
            p2.rotate_left(k);
            a2.rotate_left(k);
            prop_assert!((r - rmse(&p2, &a2).unwrap()).abs() <= 1e-12 * r.max(1.0));
        }
    }
}
