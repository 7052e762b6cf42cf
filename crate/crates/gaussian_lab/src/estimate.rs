use eigenlocus_model::Eigenlocus;
use kernel_core::LabeledSample;
use rayon::prelude::*;

use crate::{sample_test_set, GaussianClassSpec, Result};

/// Misclassification fraction of `classify` on an already drawn dataset.
/// Evaluation is data-parallel; the error count is an integer sum, so the
/// result does not depend on the parallel schedule.
pub fn error_rate_on<F>(classify: F, samples: &[LabeledSample]) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(!samples.is_empty(), "cannot score an empty dataset");
    let errors: u64 = samples
        .par_iter()
        .map(|p| u64::from(classify(&p.features) != p.label))
        .sum();
    errors as f64 / samples.len() as f64
}

/// Misclassification fraction of `classify` over a fresh balanced test draw
/// (stream 1 of `seed`), with the binomial standard error
/// sqrt(r (1 - r) / n_test). Requires n_test >= 1000 so the normal
/// approximation behind the reported std is meaningful.
pub fn estimate_error_rate<F>(
    classify: F,
    spec1: &GaussianClassSpec,
    spec2: &GaussianClassSpec,
    n_test: usize,
    seed: u64,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(n_test >= 1000, "test draws below 1000 points are too noisy");
    let ds = sample_test_set(spec1, spec2, n_test, seed)?;
    let r = error_rate_on(classify, &ds.samples);
    Ok((r, (r * (1.0 - r) / n_test as f64).sqrt()))
}

/// Fraction of the training set retained as extreme points.
pub fn extreme_fraction(m: &Eigenlocus, n_train: usize) -> f64 {
    assert!(n_train > 0, "training set size must be positive");
    m.len() as f64 / n_train as f64
}
