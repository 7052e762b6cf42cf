use kernel_core::GramMatrix;

use crate::polish::active_polish;
use crate::problem::{DualProblem, DualSolution, ExtremeSet, EXTREME_THRESHOLD_DEFAULT};
use crate::project::project_onto_constraints;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Stationarity checks and polish attempts run on this cadence once the
/// iterate has had time to identify a face.
const CHECK_EVERY: usize = 400;
const WARMUP: usize = 800;
/// Consecutive zero-ascent projections tolerated while growing the step.
const MAX_STALLS: usize = 3;
/// An iterate past either cap certifies the dual is running off to infinity
/// (possible when epsilon = 0 and the data are not separable).
const PSI_CAP: f64 = 1e8;
const OBJECTIVE_CAP: f64 = 1e18;
const POLISH_MAX_MOVES: usize = 500;
/// After this many consecutive inconsistent active-set solves, stop paying
/// for polish attempts; the problem is behaving like an unbounded one.
const POLISH_REJECT_LIMIT: usize = 3;

/// Combined KKT residual at psi with gradient g = 1 - Q psi: the worst of
/// the active-set stationarity deviation and the inactive-set violation,
/// with lam0 fit by least squares over the active set. None when nothing is
/// active.
fn kkt_stat(y: &[f64], psi: &[f64], g: &[f64]) -> Option<f64> {
    let mx = psi.iter().cloned().fold(0.0_f64, f64::max);
    if mx <= 0.0 {
        return None;
    }
    let cut = EXTREME_THRESHOLD_DEFAULT * mx;
    let mut count = 0usize;
    let mut lam0 = 0.0;
    for i in 0..y.len() {
        if psi[i] > cut {
            lam0 += y[i] * g[i];
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    lam0 /= count as f64;
    let mut worst = 0.0_f64;
    for i in 0..y.len() {
        let dev = g[i] - lam0 * y[i];
        if psi[i] > cut {
            worst = worst.max(dev.abs());
        } else {
            worst = worst.max(dev.max(0.0));
        }
    }
    Some(worst)
}

fn finish(
    gram: &GramMatrix,
    y: &[f64],
    psi: Vec<f64>,
    iterations: usize,
    converged: bool,
) -> DualSolution {
    let qp = gram.matvec(&psi);
    let sum: f64 = psi.iter().sum();
    let quad: f64 = psi.iter().zip(&qp).map(|(a, b)| a * b).sum();
    let g: Vec<f64> = qp.iter().map(|v| 1.0 - v).collect();
    let stationarity = kkt_stat(y, &psi, &g).unwrap_or(f64::INFINITY);
    let feasibility: f64 = psi.iter().zip(y).map(|(a, b)| a * b).sum::<f64>().abs();
    DualSolution {
        psi,
        objective: sum - 0.5 * quad,
        kkt_stationarity: stationarity,
        kkt_feasibility: feasibility,
        iterations,
        converged,
    }
}

/// Maximize 1'psi - psi'Q psi/2 over {psi >= 0, psi'y = 0}.
///
/// Projected gradient ascent with Barzilai-Borwein steps: each iteration
/// projects a gradient trial point exactly onto the constraint set, then
/// takes the exact maximizer of the quadratic along the resulting segment
/// (one matrix-vector product per iteration). When progress stalls or on a
/// fixed cadence, an active-set equality solve tries to finish the problem;
/// its result is accepted only when it is a verified KKT point that does not
/// decrease the objective. Non-convergence (including a genuinely unbounded
/// dual, which trips an iterate-size cap) returns the best iterate with
/// `converged = false`. Deterministic for fixed inputs.
pub fn solve_dual(p: &DualProblem, tol: f64, max_iter: usize) -> DualSolution {
    solve_dual_inner(p, tol, max_iter, None)
}

/// As [`solve_dual`], additionally recording the objective value after every
/// accepted step (index 0 holds the starting value). Exposed so tests can
/// assert per-iteration monotonicity.
pub fn solve_dual_traced(p: &DualProblem, tol: f64, max_iter: usize) -> (DualSolution, Vec<f64>) {
    let mut trace = Vec::new();
    let sol = solve_dual_inner(p, tol, max_iter, Some(&mut trace));
    (sol, trace)
}

fn solve_dual_inner(
    p: &DualProblem,
    tol: f64,
    max_iter: usize,
    mut trace: Option<&mut Vec<f64>>,
) -> DualSolution {
    assert!(tol > 0.0, "tolerance must be positive");
    let gram = p.gram();
    let y = p.labels();
    let n = p.n();

    let mut psi = project_onto_constraints(&vec![1.0 / n as f64; n], y);
    let qp = gram.matvec(&psi);
    let mut g: Vec<f64> = qp.iter().map(|v| 1.0 - v).collect();
    let mut f = {
        let sum: f64 = psi.iter().sum();
        let quad: f64 = psi.iter().zip(&qp).map(|(a, b)| a * b).sum();
        sum - 0.5 * quad
    };
    if let Some(t) = trace.as_deref_mut() {
        t.push(f);
    }

    let alpha0 = 1.0 / gram.diag_max().max(1e-12);
    let mut alpha = alpha0;
    let mut stalls = 0usize;
    let mut polish_rejects = 0usize;
    let mut it = 0usize;

    // polish outcome: None = system inconsistent / no candidate;
    // Some((psi, g, f, is_kkt)) = accepted monotone candidate
    type Polished = (Vec<f64>, Vec<f64>, f64, bool);
    let attempt_polish = |psi_cur: &[f64], f_cur: f64, tol: f64| -> Option<Polished> {
        let (cand, _lam0) = active_polish(
            gram,
            y,
            psi_cur,
            tol,
            EXTREME_THRESHOLD_DEFAULT,
            POLISH_MAX_MOVES,
        )?;
        let qc = gram.matvec(&cand);
        let sum: f64 = cand.iter().sum();
        let quad: f64 = cand.iter().zip(&qc).map(|(a, b)| a * b).sum();
        let fc = sum - 0.5 * quad;
        if fc < f_cur - 1e-12 * f_cur.abs().max(1.0) {
            return None; // would break objective monotonicity
        }
        let gc: Vec<f64> = qc.iter().map(|v| 1.0 - v).collect();
        let ok = kkt_stat(y, &cand, &gc).map(|s| s <= tol).unwrap_or(false);
        Some((cand, gc, fc, ok))
    };

    while it < max_iter {
        it += 1;
        let z: Vec<f64> = psi
            .iter()
            .zip(&g)
            .map(|(pi, gi)| pi + alpha * gi)
            .collect();
        let trial = project_onto_constraints(&z, y);
        let d: Vec<f64> = trial.iter().zip(&psi).map(|(t, p)| t - p).collect();
        let gd: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();

        if gd <= 0.0 {
            if let Some(stat) = kkt_stat(y, &psi, &g) {
                if stat <= tol {
                    return finish(gram, y, psi, it, true);
                }
            }
            if polish_rejects < POLISH_REJECT_LIMIT {
                match attempt_polish(&psi, f, tol) {
                    Some((pc, gc, fc, ok)) => {
                        psi = pc;
                        g = gc;
                        f = fc;
                        if let Some(t) = trace.as_deref_mut() {
                            t.push(f);
                        }
                        if ok {
                            return finish(gram, y, psi, it, true);
                        }
                    }
                    None => polish_rejects += 1,
                }
            }
            stalls += 1;
            if stalls > MAX_STALLS {
                return finish(gram, y, psi, it, false);
            }
            alpha = alpha0 * 10.0_f64.powi(stalls as i32);
            continue;
        }

        let qd = gram.matvec(&d);
        let dqd: f64 = d.iter().zip(&qd).map(|(a, b)| a * b).sum();
        // exact maximizer of the quadratic along psi + t*d over t in [0,1];
        // nonpositive curvature means the segment ascends all the way
        let t = if dqd <= 0.0 { 1.0 } else { (gd / dqd).min(1.0) };

        let mut sy = 0.0;
        let mut ss = 0.0;
        for i in 0..n {
            let si = t * d[i];
            let yi = t * qd[i]; // g - g_new = t * Q d
            sy += si * yi;
            ss += si * si;
            psi[i] += si;
            g[i] -= yi;
        }
        f += t * gd - 0.5 * t * t * dqd;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(f);
        }
        alpha = if sy > 1e-300 {
            (ss / sy).clamp(1e-12, 1e12)
        } else {
            1e6
        };

        let psi_max = psi.iter().cloned().fold(0.0_f64, f64::max);
        if psi_max > PSI_CAP || f > OBJECTIVE_CAP {
            return finish(gram, y, psi, it, false); // running off along a recession direction
        }

        if it % CHECK_EVERY == 0 && it >= WARMUP {
            if let Some(stat) = kkt_stat(y, &psi, &g) {
                if stat <= tol {
                    return finish(gram, y, psi, it, true);
                }
            }
            if polish_rejects < POLISH_REJECT_LIMIT {
                match attempt_polish(&psi, f, tol) {
                    Some((pc, _, fc, true)) => {
                        if let Some(t) = trace.as_deref_mut() {
                            t.push(fc);
                        }
                        return finish(gram, y, pc, it, true);
                    }
                    Some(_) => {}
                    None => polish_rejects += 1,
                }
            }
        }
    }
    finish(gram, y, psi, it, false)
}

/// KKT residual triple at an arbitrary solution: active-set stationarity
/// |(Q psi)_i + lam0 y_i - 1| in the infinity norm, equality feasibility
/// |psi'y|, and inactive complementarity max(0, 1 - lam0 y_i - (Q psi)_i).
/// The active set is psi_i above the relative cutoff, and lam0 is the
/// least-squares fit over it.
pub fn kkt_residuals(p: &DualProblem, s: &DualSolution) -> Result<(f64, f64, f64)> {
    let y = p.labels();
    let psi = &s.psi;
    assert_eq!(psi.len(), y.len(), "solution and problem sizes differ");
    let mx = psi.iter().cloned().fold(0.0_f64, f64::max);
    let cut = EXTREME_THRESHOLD_DEFAULT * mx;
    let qp = p.gram().matvec(psi);
    let g: Vec<f64> = qp.iter().map(|v| 1.0 - v).collect();

    let active: Vec<usize> = (0..y.len()).filter(|&i| mx > 0.0 && psi[i] > cut).collect();
    if active.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let lam0: f64 =
        active.iter().map(|&i| y[i] * g[i]).sum::<f64>() / active.len() as f64;
    let mut stationarity = 0.0_f64;
    for &i in &active {
        stationarity = stationarity.max((g[i] - lam0 * y[i]).abs());
    }
    let mut complementarity = 0.0_f64;
    for i in 0..y.len() {
        if psi[i] <= cut {
            complementarity = complementarity.max((g[i] - lam0 * y[i]).max(0.0));
        }
    }
    let feasibility: f64 = psi.iter().zip(y).map(|(a, b)| a * b).sum::<f64>().abs();
    Ok((stationarity, feasibility, complementarity))
}

/// Partition the training indices into extreme vectors (psi above
/// threshold * max psi) and the rest, split by class. An all-zero psi gives
/// an empty set, which callers should treat as a degenerate model.
pub fn extract_extreme_set(
    s: &DualSolution,
    labels: &[f64],
    threshold: f64,
) -> Result<ExtremeSet> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::BadThreshold(threshold));
    }
    assert_eq!(s.psi.len(), labels.len(), "solution and label sizes differ");
    let mx = s.psi.iter().cloned().fold(0.0_f64, f64::max);
    let cut = threshold * mx;
    let mut indices = Vec::new();
    let mut side1 = Vec::new();
    let mut side2 = Vec::new();
    for i in 0..s.psi.len() {
        if mx > 0.0 && s.psi[i] > cut {
            indices.push(i);
            if labels[i] > 0.0 {
                side1.push(i);
            } else {
                side2.push(i);
            }
        }
    }
    Ok(ExtremeSet {
        indices,
        side1,
        side2,
        threshold,
    })
}

/// Infinity-norm residual of the active-set system Q_AA psi_A = 1 - lam0 y_A
/// (the discrete form of psi living in the span Q carves out). Requires a
/// ridge (so Q is invertible) and a converged solution.
pub fn lagrangian_relation_check(p: &DualProblem, s: &DualSolution) -> Result<f64> {
    if p.gram().epsilon() <= 0.0 || !s.converged {
        return Err(Error::RelationPrecondition);
    }
    let y = p.labels();
    let psi = &s.psi;
    let mx = psi.iter().cloned().fold(0.0_f64, f64::max);
    let cut = EXTREME_THRESHOLD_DEFAULT * mx;
    let active: Vec<usize> = (0..y.len()).filter(|&i| mx > 0.0 && psi[i] > cut).collect();
    if active.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let qp = p.gram().matvec(psi);
    let lam0: f64 = active
        .iter()
        .map(|&i| y[i] * (1.0 - qp[i]))
        .sum::<f64>()
        / active.len() as f64;
    let mut residual = 0.0_f64;
    for &i in &active {
        // (Q psi)_i restricted to A equals the full product here because
        // inactive entries of psi are numerically zero
        residual = residual.max((qp[i] - (1.0 - lam0 * y[i])).abs());
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kernel_core::{build_gram, KernelSpec, LabeledSample};

    fn two_point_problem(eps: f64) -> DualProblem {
        let samples = vec![
            LabeledSample::new(vec![1.0, 0.0], 1.0),
            LabeledSample::new(vec![-1.0, 0.0], -1.0),
        ];
        let gram = build_gram(&samples, KernelSpec::Linear, eps).unwrap();
        DualProblem::from_gram(gram).unwrap()
    }

    #[test]
    fn two_point_hard_solution() {
        let p = two_point_problem(0.0);
        let s = solve_dual(&p, 1e-10, 10_000);
        assert!(s.converged);
        assert!((s.psi[0] - 0.5).abs() <= 1e-8, "{:?}", s.psi);
        assert!((s.psi[1] - 0.5).abs() <= 1e-8);
        assert!((s.objective - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn two_point_ridge_solution() {
        let p = two_point_problem(0.02);
        let s = solve_dual(&p, 1e-10, 10_000);
        let expect = 1.0 / 2.02;
        assert!(s.converged);
        assert!((s.psi[0] - expect).abs() <= 1e-8);
        assert!((s.psi[1] - expect).abs() <= 1e-8);
    }

    #[test]
    fn psi_mass_decreases_with_ridge() {
        let mut last = f64::INFINITY;
        for eps in [0.0, 0.5, 2.0, 10.0] {
            let p = two_point_problem(eps);
            let s = solve_dual(&p, 1e-10, 10_000);
            assert!(s.converged);
            let mass: f64 = s.psi.iter().sum();
            assert!(mass < last + 1e-12, "mass {mass} at eps {eps}");
            last = mass;
        }
    }

    #[test]
    fn objective_matches_recomputation() {
        let p = two_point_problem(0.02);
        let s = solve_dual(&p, 1e-10, 10_000);
        let qp = p.gram().matvec(&s.psi);
        let direct: f64 = s.psi.iter().sum::<f64>()
            - 0.5 * s.psi.iter().zip(&qp).map(|(a, b)| a * b).sum::<f64>();
        assert!((s.objective - direct).abs() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn kkt_residuals_at_exact_solution() {
        let p = two_point_problem(0.0);
        let s = solve_dual(&p, 1e-10, 10_000);
        let (stat, feas, comp) = kkt_residuals(&p, &s).unwrap();
        assert!(stat <= 1e-10, "{stat}");
        assert!(feas <= 1e-15);
        assert!(comp <= 1e-15);
    }

    #[test]
    fn kkt_residuals_empty_active_set_errors() {
        let p = two_point_problem(0.0);
        let s = DualSolution {
            psi: vec![0.0, 0.0],
            objective: 0.0,
            kkt_stationarity: f64::INFINITY,
            kkt_feasibility: 0.0,
            iterations: 0,
            converged: false,
        };
        assert!(matches!(kkt_residuals(&p, &s), Err(Error::EmptyActiveSet)));
    }

    #[test]
    fn kkt_stationarity_grows_linearly_under_perturbation() {
        let p = two_point_problem(0.0);
        let mut s = solve_dual(&p, 1e-12, 10_000);
        let (stat0, _, _) = kkt_residuals(&p, &s).unwrap();
        s.psi[0] += 1e-3;
        let (stat1, _, _) = kkt_residuals(&p, &s).unwrap();
        // Q row norm is O(1) here, so the residual moves by about 1e-3
        assert!(stat1 > stat0 + 1e-4, "{stat0} -> {stat1}");
        assert!(stat1 < 1e-2);
    }

    #[test]
    fn extreme_set_partition() {
        let labels = [1.0, -1.0];
        let s = DualSolution {
            psi: vec![0.5, 0.5],
            objective: 0.5,
            kkt_stationarity: 0.0,
            kkt_feasibility: 0.0,
            iterations: 1,
            converged: true,
        };
        let es = extract_extreme_set(&s, &labels, 1e-6).unwrap();
        assert_eq!(es.l1(), 1);
        assert_eq!(es.l2(), 1);

        let s0 = DualSolution {
            psi: vec![0.5, 0.0],
            ..s.clone()
        };
        let es0 = extract_extreme_set(&s0, &labels, 1e-6).unwrap();
        assert_eq!(es0.indices, vec![0]);

        assert!(matches!(
            extract_extreme_set(&s, &labels, 1.5),
            Err(Error::BadThreshold(_))
        ));
    }

    #[test]
    fn lagrangian_relation_two_point_ridge() {
        let p = two_point_problem(0.02);
        let s = solve_dual(&p, 1e-10, 10_000);
        let r = lagrangian_relation_check(&p, &s).unwrap();
        assert!(r <= 1e-8, "{r}");
    }

    #[test]
    fn lagrangian_relation_rejects_hard_problem() {
        let p = two_point_problem(0.0);
        let s = solve_dual(&p, 1e-10, 10_000);
        assert!(matches!(
            lagrangian_relation_check(&p, &s),
            Err(Error::RelationPrecondition)
        ));
    }
}
