use nalgebra::{DMatrix, DVector};

use crate::gram::GramMatrix;
use crate::{Error, Result};

/// Dominant eigenpair of Q by power iteration. The start vector is a fixed
/// sine ramp, sin(1), sin(2), ..., normalized; it is deterministic and,
/// unlike the all-ones vector, never aligns with the +/-1 label structure
/// these matrices carry (ones is an exact subdominant eigenvector of a
/// two-point Gram matrix). Returns once ||Q v - lambda v|| <= tol * lambda.
pub fn principal_eigpair(g: &GramMatrix, tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>)> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = g.n();
    let mut v: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).sin()).collect();
    let norm0: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm0);
    let mut w = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iterations in 1..=max_iter {
        g.matvec_into(&v, &mut w);
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        if lambda > 0.0 {
            let r2: f64 = v
                .iter()
                .zip(&w)
                .map(|(vi, wi)| {
                    let d = wi - lambda * vi;
                    d * d
                })
                .sum();
            residual = r2.sqrt();
            if residual <= tol * lambda {
                return Ok((lambda, v));
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            // ones lies in the null space; nudge off it deterministically
            v.iter_mut().enumerate().for_each(|(i, x)| {
                *x = if i == 0 { 1.0 } else { 0.0 };
            });
            continue;
        }
        for i in 0..n {
            v[i] = w[i] / norm;
        }
        let _ = iterations;
    }
    Err(Error::EigNonConvergence {
        residual,
        iterations: max_iter,
    })
}

/// Residual of the principal-axes expansion |x'Qx - sum_i lambda_i (v_i'x)^2|
/// over the full eigenbasis of a dense symmetric matrix (row-major entries).
/// A correct decomposition drives this to roundoff relative to |x'Qx|.
pub fn principal_axes_identity_check(entries: &[f64], n: usize, x: &[f64]) -> f64 {
    assert_eq!(entries.len(), n * n, "matrix buffer is not n*n");
    assert_eq!(x.len(), n, "vector length does not match matrix side");
    let q = DMatrix::from_row_slice(n, n, entries);
    let xv = DVector::from_column_slice(x);
    let quad = (xv.transpose() * &q * &xv)[(0, 0)];
    let eig = q.symmetric_eigen();
    let mut expansion = 0.0;
    for k in 0..n {
        let proj = eig.eigenvectors.column(k).dot(&xv);
        expansion += eig.eigenvalues[k] * proj * proj;
    }
    (quad - expansion).abs()
}
