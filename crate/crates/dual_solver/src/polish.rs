use nalgebra::{DMatrix, DVector};

use kernel_core::GramMatrix;

/// Solve the equality-constrained KKT system on the current active set:
///
///   [ Q_AA  y_A ] [psi_A ]   [1]
///   [ y_A'   0  ] [lam0  ] = [0]
///
/// dropping negative components and admitting the worst inactive violator
/// until the candidate is a genuine KKT point. Returns the full-length psi
/// and lam0, or None when the system is inconsistent (an unbounded problem
/// has no such point) or the move budget runs out.
pub fn active_polish(
    gram: &GramMatrix,
    y: &[f64],
    psi: &[f64],
    tol: f64,
    thresh: f64,
    max_moves: usize,
) -> Option<(Vec<f64>, f64)> {
    let n = y.len();
    let mx = psi.iter().cloned().fold(0.0_f64, f64::max);
    if mx <= 0.0 {
        return None;
    }
    let mut active: Vec<bool> = psi.iter().map(|&p| p > thresh * mx).collect();

    for _ in 0..max_moves {
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let k = idx.len();
        if k < 2
            || !idx.iter().any(|&i| y[i] > 0.0)
            || !idx.iter().any(|&i| y[i] < 0.0)
        {
            return None;
        }
        let mut m = DMatrix::zeros(k + 1, k + 1);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = gram.get(i, j);
            }
            m[(a, k)] = y[i];
            m[(k, a)] = y[i];
        }
        let mut rhs = DVector::zeros(k + 1);
        for a in 0..k {
            rhs[a] = 1.0;
        }
        let svd = m.clone().svd(true, true);
        let sv_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
        let cutoff = sv_max * (k + 1) as f64 * f64::EPSILON;
        let sol = svd.solve(&rhs, cutoff).ok()?;
        let residual = (&m * &sol - &rhs).abs().max();
        if residual > 1e-6 {
            return None; // inconsistent system, e.g. an unbounded direction
        }
        let lam0 = sol[k];
        let mut psi_a: Vec<f64> = (0..k).map(|a| sol[a]).collect();

        let worst_neg = psi_a.iter().cloned().filter(|&v| v < 0.0).fold(0.0, f64::min);
        if worst_neg < 0.0 {
            if worst_neg.abs() < 1e-12 {
                psi_a.iter_mut().for_each(|v| *v = v.max(0.0));
            } else {
                for (a, &i) in idx.iter().enumerate() {
                    if psi_a[a] < 0.0 {
                        active[i] = false;
                    }
                }
                continue;
            }
        }

        let mut cand = vec![0.0; n];
        for (a, &i) in idx.iter().enumerate() {
            cand[i] = psi_a[a];
        }
        let qc = gram.matvec(&cand);
        let mut worst = f64::NEG_INFINITY;
        let mut worst_i = None;
        for i in 0..n {
            if !active[i] {
                let v = 1.0 - qc[i] - lam0 * y[i];
                if v > worst {
                    worst = v;
                    worst_i = Some(i);
                }
            }
        }
        if let Some(i) = worst_i {
            if worst > tol {
                active[i] = true; // admit the worst violator and retry
                continue;
            }
        }
        return Some((cand, lam0));
    }
    None
}
