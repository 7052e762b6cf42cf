use rayon::prelude::*;

use crate::kernel::{eval_kernel, KernelSpec};
use crate::{Error, Result};

/// Default slack budget C when none is requested and n > d.
pub const C_DEFAULT: f64 = 50.0;

/// A feature vector with its class label (+1 or -1).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: f64,
}

impl LabeledSample {
    pub fn new(features: Vec<f64>, label: f64) -> Self {
        LabeledSample { features, label }
    }
}

/// The regularized, label-signed kernel matrix Q with
/// Q[i][j] = y_i y_j k(x_i, x_j) + epsilon when i = j.
///
/// Entries are stored row-major. Construction computes each entry from the
/// raw samples, so Q[i][j] and Q[j][i] come out bitwise equal (the kernel
/// accumulates in the same index order either way round).
#[derive(Debug, Clone)]
pub struct GramMatrix {
    n: usize,
    epsilon: f64,
    labels: Vec<f64>,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Row-major entry buffer of length n*n.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn diag_max(&self) -> f64 {
        (0..self.n)
            .map(|i| self.get(i, i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// out = Q v, each component accumulated left to right.
    pub fn matvec_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        for i in 0..self.n {
            let row = self.row(i);
            let mut acc = 0.0;
            for j in 0..self.n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.matvec_into(v, &mut out);
        out
    }
}

/// Pick the ridge term when the caller has no opinion: 1/C with C = 50 for
/// overdetermined data (n > d), and 0 (hard constraint, C infinite) when
/// n <= d and the Gram matrix already has full effective rank.
pub fn default_epsilon(n: usize, d: usize) -> f64 {
    if n > d {
        1.0 / C_DEFAULT
    } else {
        0.0
    }
}

fn validate(samples: &[LabeledSample], epsilon: f64) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if epsilon < 0.0 {
        return Err(Error::NegativeRidge(epsilon));
    }
    for (index, s) in samples.iter().enumerate() {
        if s.label != 1.0 && s.label != -1.0 {
            return Err(Error::InvalidLabel {
                index,
                value: s.label,
            });
        }
    }
    let pos = samples.iter().filter(|s| s.label == 1.0).count();
    if pos == 0 || pos == samples.len() {
        return Err(Error::SingleClass(samples.len()));
    }
    Ok(())
}

/// Build Q = eps*I + D_y K D_y from labeled samples. Rows are filled in
/// parallel; every entry is computed independently from the raw data (no
/// cross-row accumulation), so the result does not depend on the schedule.
pub fn build_gram(
    samples: &[LabeledSample],
    spec: KernelSpec,
    epsilon: f64,
) -> Result<GramMatrix> {
    validate(samples, epsilon)?;
    let n = samples.len();
    let mut entries = vec![0.0; n * n];
    entries
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| {
            let si = &samples[i];
            for j in 0..n {
                let sj = &samples[j];
                let mut v = si.label * sj.label * eval_kernel(spec, &si.features, &sj.features);
                if i == j {
                    v += epsilon;
                }
                row[j] = v;
            }
        });
    Ok(GramMatrix {
        n,
        epsilon,
        labels: samples.iter().map(|s| s.label).collect(),
        entries,
    })
}
