use kernel_core::LabeledSample;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{GaussianClassSpec, Result};

/// A labeled draw from a pair of Gaussian class specs, reproducible from its
/// seed. Class +1 samples come first, then class -1.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub samples: Vec<LabeledSample>,
    pub seed: u64,
    pub n_per_class: (usize, usize),
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn draw(
    spec1: &GaussianClassSpec,
    spec2: &GaussianClassSpec,
    n1: usize,
    n2: usize,
    seed: u64,
    stream: u64,
) -> Result<Dataset> {
    crate::oracle::BayesOracle::new(spec1, spec2)?; // dimension check
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut samples = Vec::with_capacity(n1 + n2);
    for (spec, n, label) in [(spec1, n1, 1.0), (spec2, n2, -1.0)] {
        let l = spec.chol_l();
        let mean = spec.mean_vec();
        let d = spec.dim();
        for _ in 0..n {
            let z = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
            let x = mean + &l * z;
            samples.push(LabeledSample::new(x.as_slice().to_vec(), label));
        }
    }
    Ok(Dataset {
        samples,
        seed,
        n_per_class: (n1, n2),
    })
}

/// Draw `n1` class +1 and `n2` class -1 samples by the Cholesky transform of
/// a seeded standard-normal stream (training stream 0). Deterministic per
/// seed.
pub fn sample_dataset(
    spec1: &GaussianClassSpec,
    spec2: &GaussianClassSpec,
    n1: usize,
    n2: usize,
    seed: u64,
) -> Result<Dataset> {
    draw(spec1, spec2, n1, n2, seed, 0)
}

/// Draw a balanced test set of `n_test` points total (evaluation stream 1,
/// so it never overlaps [`sample_dataset`] for the same seed). Odd counts
/// put the extra point in class +1.
pub fn sample_test_set(
    spec1: &GaussianClassSpec,
    spec2: &GaussianClassSpec,
    n_test: usize,
    seed: u64,
) -> Result<Dataset> {
    let n2 = n_test / 2;
    draw(spec1, spec2, n_test - n2, n2, seed, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mean: [f64; 2], cov: [[f64; 2]; 2]) -> GaussianClassSpec {
        GaussianClassSpec::new(mean.to_vec(), cov.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn standard_normal_sample_mean_is_near_zero() {
        let s = spec([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]);
        let ds = sample_dataset(&s, &s, 100_000, 0, 7).unwrap();
        let mut mean = [0.0_f64; 2];
        for p in &ds.samples {
            mean[0] += p.features[0];
            mean[1] += p.features[1];
        }
        for m in mean {
            assert!((m / 100_000.0).abs() < 0.02);
        }
    }

    #[test]
    fn seed_reuse_reproduces_the_dataset_bitwise() {
        let s1 = spec([3.0, 0.25], [[0.95, 0.45], [0.45, 0.35]]);
        let s2 = spec([3.0, -0.25], [[0.95, 0.45], [0.45, 0.35]]);
        let a = sample_dataset(&s1, &s2, 50, 40, 123).unwrap();
        let b = sample_dataset(&s1, &s2, 50, 40, 123).unwrap();
        assert_eq!(a.len(), 90);
        for (p, q) in a.samples.iter().zip(&b.samples) {
            assert_eq!(p.label, q.label);
            for (u, v) in p.features.iter().zip(&q.features) {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
    }

    #[test]
    fn train_and_test_streams_are_disjoint() {
        let s = spec([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]);
        let train = sample_dataset(&s, &s, 10, 10, 5).unwrap();
        let test = sample_test_set(&s, &s, 20, 5).unwrap();
        let same = train
            .samples
            .iter()
            .zip(&test.samples)
            .all(|(p, q)| p.features == q.features);
        assert!(!same);
    }

    #[test]
    fn labels_and_counts_follow_the_spec_order() {
        let s1 = spec([1.0, 13.0], [[0.65, 0.25], [0.25, 0.45]]);
        let s2 = spec([6.0, 22.0], [[0.65, 0.25], [0.25, 0.45]]);
        let ds = sample_test_set(&s1, &s2, 31, 9).unwrap();
        assert_eq!(ds.n_per_class, (16, 15));
        assert!(ds.samples[..16].iter().all(|p| p.label == 1.0));
        assert!(ds.samples[16..].iter().all(|p| p.label == -1.0));
    }
}
