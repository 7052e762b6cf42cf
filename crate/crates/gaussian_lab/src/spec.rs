use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::{Error, Result};

/// One class of a two-class Gaussian problem: a mean vector and a symmetric
/// positive-definite covariance. The Cholesky factor is computed once at
/// construction, so a value of this type always admits sampling and a
/// well-defined inverse.
#[derive(Debug, Clone)]
pub struct GaussianClassSpec {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl GaussianClassSpec {
    /// `covariance` is given in row-major rows. Symmetry is checked to a
    /// relative 1e-9 and the matrix must be positive definite.
    pub fn new(mean: Vec<f64>, covariance: Vec<Vec<f64>>) -> Result<Self> {
        let d = mean.len();
        let rows = covariance.len();
        let cols = covariance.first().map_or(0, |r| r.len());
        if rows != d || covariance.iter().any(|r| r.len() != d) {
            return Err(Error::CovarianceShape { d, rows, cols });
        }
        let mut scale = 0.0_f64;
        for r in &covariance {
            for v in r {
                scale = scale.max(v.abs());
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let (a, b) = (covariance[i][j], covariance[j][i]);
                if (a - b).abs() > 1e-9 * scale.max(1.0) {
                    return Err(Error::AsymmetricCovariance { i, j, a, b });
                }
            }
        }
        let covariance = DMatrix::from_fn(d, d, |i, j| covariance[i][j]);
        let chol = Cholesky::new(covariance.clone()).ok_or(Error::NotPositiveDefinite)?;
        Ok(Self {
            mean: DVector::from_vec(mean),
            covariance,
            chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Lower-triangular Cholesky factor L with covariance = L L'.
    pub(crate) fn chol_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub(crate) fn inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }

    /// ln det of the covariance, from the Cholesky diagonal.
    pub(crate) fn log_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
    }

    pub(crate) fn mean_vec(&self) -> &DVector<f64> {
        &self.mean
    }
}
