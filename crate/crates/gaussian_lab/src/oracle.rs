use nalgebra::{DMatrix, DVector};

use crate::{Error, GaussianClassSpec, Result};

/// The closed-form likelihood-ratio discriminant for a pair of Gaussian
/// classes, with the inverses, log determinants and constant terms
/// precomputed so that per-point evaluation is two matrix-vector products.
///
/// The discriminant is
///
/// ```text
/// d(x) = x'S1x - 2x'S1u1 + u1'S1u1 - ln|C1|
///      - x'S2x + 2x'S2u2 - u2'S2u2 + ln|C2|
/// ```
///
/// with Si the inverse covariance of class i, and class 1 is assigned
/// when d(x) <= 0 (class-1 terms enter with positive sign, so small
/// class-1 Mahalanobis distance drives d negative).
#[derive(Debug, Clone)]
pub struct BayesOracle {
    inv1: DMatrix<f64>,
    inv2: DMatrix<f64>,
    /// 2 (S1 u1 - S2 u2), the fixed projection axis of the cross terms.
    s2_axis: DVector<f64>,
    /// u1'S1u1 - u2'S2u2 + ln|C2| - ln|C1|.
    constant: f64,
    dim: usize,
}

/// The discriminant split into its two signed projections and the constant
/// rest: `discriminant = onto_difference_axis - onto_mean_axis + constant`.
/// `onto_difference_axis` is the signed magnitude of x along
/// (S1 - S2) x and `onto_mean_axis` the one along 2 (S1 u1 - S2 u2).
#[derive(Debug, Clone, Copy)]
pub struct BayesProjection {
    pub onto_difference_axis: f64,
    pub onto_mean_axis: f64,
    pub constant: f64,
}

impl BayesProjection {
    pub fn total(&self) -> f64 {
        self.onto_difference_axis - self.onto_mean_axis + self.constant
    }
}

impl BayesOracle {
    pub fn new(spec1: &GaussianClassSpec, spec2: &GaussianClassSpec) -> Result<Self> {
        if spec1.dim() != spec2.dim() {
            return Err(Error::DimensionMismatch(spec1.dim(), spec2.dim()));
        }
        let inv1 = spec1.inverse();
        let inv2 = spec2.inverse();
        let a1 = &inv1 * spec1.mean_vec();
        let a2 = &inv2 * spec2.mean_vec();
        let m1 = spec1.mean_vec().dot(&a1);
        let m2 = spec2.mean_vec().dot(&a2);
        let constant = (m1 - m2) + (spec2.log_det() - spec1.log_det());
        Ok(Self {
            s2_axis: 2.0 * (a1 - a2),
            inv1,
            inv2,
            constant,
            dim: spec1.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn discriminant(&self, x: &[f64]) -> f64 {
        self.projection(x).total()
    }

    /// The two signed projection magnitudes plus the constant rest.
    pub fn projection(&self, x: &[f64]) -> BayesProjection {
        assert_eq!(x.len(), self.dim, "probe point has wrong dimension");
        let xv = DVector::from_column_slice(x);
        let q1 = xv.dot(&(&self.inv1 * &xv));
        let q2 = xv.dot(&(&self.inv2 * &xv));
        BayesProjection {
            onto_difference_axis: q1 - q2,
            onto_mean_axis: self.s2_axis.dot(&xv),
            constant: self.constant,
        }
    }

    /// +1.0 when the discriminant assigns class 1 (d <= 0), else -1.0.
    pub fn classify(&self, x: &[f64]) -> f64 {
        if self.discriminant(x) <= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// One-shot form of [`BayesOracle::discriminant`]. Prefer constructing the
/// oracle once when evaluating many points.
pub fn bayes_discriminant(
    spec1: &GaussianClassSpec,
    spec2: &GaussianClassSpec,
    x: &[f64],
) -> Result<f64> {
    Ok(BayesOracle::new(spec1, spec2)?.discriminant(x))
}
