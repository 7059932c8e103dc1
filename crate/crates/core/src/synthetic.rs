//! Seeded synthetic datasets for tests, demos and smoke runs.

use rand::Rng;

use crate::data::Dataset;
use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::seed;

/// Two Gaussian-ish blobs (uniform noise around ±`separation`/2 on every axis).
pub fn two_clusters<T: Scalar>(
    n_per_class: usize,
    dims: usize,
    separation: f64,
    seed_value: u64,
) -> Result<Dataset<T>> {
    let mut rng = seed::rng_from(seed_value);
    let n = 2 * n_per_class;
    let mut data = Vec::with_capacity(n * dims);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = (i % 2) as u8;
        let centre = if label == 1 {
            separation / 2.0
        } else {
            -separation / 2.0
        };
        data.extend((0..dims).map(|_| T::of(centre + rng.random_range(-1.0..1.0))));
        labels.push(label);
    }
    Dataset::from_parts("two-clusters", Matrix::from_vec(n, dims, data)?, labels)
}

/// Binary indicator features in the style of permission/API-call tables:
/// each feature fires with a class-specific probability, and the first
/// `informative` features carry most of the signal.
pub fn indicator_table<T: Scalar>(
    n_benign: usize,
    n_malware: usize,
    n_features: usize,
    informative: usize,
    seed_value: u64,
) -> Result<Dataset<T>> {
    let mut rng = seed::rng_from(seed_value);
    let rates: Vec<(f64, f64)> = (0..n_features)
        .map(|j| {
            let base: f64 = rng.random_range(0.02..0.3);
            if j < informative {
                let lift = rng.random_range(0.25..0.6);
                if j % 2 == 0 {
                    (base, (base + lift).min(0.95))
                } else {
                    ((base + lift).min(0.95), base)
                }
            } else {
                (base, base)
            }
        })
        .collect();
    let n = n_benign + n_malware;
    let mut data = Vec::with_capacity(n * n_features);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = u8::from(i >= n_benign);
        for &(p0, p1) in &rates {
            let p = if label == 1 { p1 } else { p0 };
            data.push(if rng.random_bool(p) {
                T::one()
            } else {
                T::zero()
            });
        }
        labels.push(label);
    }
    Dataset::from_parts(
        "indicator-table",
        Matrix::from_vec(n, n_features, data)?,
        labels,
    )
}
