use super::{Dataset, Sample, Source};

/// Reference measurements for 23 SSBR composites, in [`super::Column::ALL`] order.
const TABLE: [[f64; 9]; 23] = [
    [0.18, 62.0, 2.1, 11.5, 5.5, 18.1, 417.0, 38.3, 12.0],
    [0.21, 62.0, 2.1, 10.7, 5.1, 17.5, 427.0, 41.8, 12.0],
    [0.22, 70.0, 2.0, 10.8, 5.4, 15.5, 456.0, 47.2, 12.0],
    [0.29, 64.0, 2.6, 11.2, 4.3, 16.7, 405.0, 40.3, 12.0],
    [0.31, 64.0, 2.4, 10.1, 4.2, 15.7, 414.0, 41.9, 12.0],
    [0.13, 67.0, 1.5, 7.6, 5.1, 24.3, 698.0, 53.6, 20.0],
    [0.13, 63.0, 1.4, 8.3, 5.9, 25.3, 680.0, 57.0, 20.0],
    [0.09, 70.0, 1.7, 8.9, 5.2, 22.0, 628.0, 42.3, 20.0],
    [0.08, 63.0, 1.5, 9.3, 6.2, 20.4, 568.0, 42.0, 16.0],
    [0.10, 71.0, 2.5, 12.3, 4.9, 21.5, 475.0, 40.6, 20.0],
    [0.17, 69.0, 2.3, 10.6, 4.6, 17.2, 470.0, 46.5, 12.0],
    [0.07, 65.0, 2.4, 11.7, 4.9, 27.6, 502.0, 53.0, 16.0],
    [0.16, 70.0, 2.5, 12.1, 4.8, 20.1, 421.0, 49.1, 12.0],
    [0.34, 60.0, 1.4, 5.9, 4.2, 16.6, 557.0, 41.7, 16.0],
    [0.18, 60.0, 1.8, 12.0, 6.7, 18.8, 405.0, 36.5, 8.0],
    [0.20, 60.0, 1.9, 12.7, 6.7, 20.1, 357.0, 34.0, 12.0],
    [0.23, 60.0, 1.9, 12.9, 6.8, 19.4, 397.0, 34.3, 16.0],
    [0.26, 62.0, 2.1, 12.6, 6.0, 16.0, 336.0, 33.3, 12.0],
    [0.35, 62.0, 1.5, 9.2, 6.1, 16.9, 475.0, 32.2, 20.0],
    [0.29, 67.0, 1.9, 10.1, 5.3, 19.6, 328.0, 44.8, 16.0],
    [0.34, 64.0, 1.8, 6.7, 4.5, 19.9, 577.0, 35.0, 10.0],
    [0.19, 61.0, 2.4, 12.1, 5.0, 18.7, 427.0, 45.1, 16.0],
    [0.21, 63.0, 2.7, 12.5, 4.6, 19.2, 436.0, 49.0, 16.0],
];

/// The 23-sample reference dataset, in table order.
pub fn builtin_dataset() -> Dataset {
    let samples = TABLE.iter().map(|row| Sample::from_values(*row)).collect();
    Dataset::new(samples, Source::Builtin).expect("builtin table is non-empty")
}
