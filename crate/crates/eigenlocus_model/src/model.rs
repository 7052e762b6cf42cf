use dual_solver::{
    extract_extreme_set, solve_dual, DualProblem, DualSolution, ExtremeSet,
    DEFAULT_MAX_ITER, DEFAULT_TOL, EXTREME_THRESHOLD_DEFAULT,
};
use kernel_core::{build_gram, eval_kernel, KernelSpec, LabeledSample};

use crate::{Error, Result};

/// The trained classifier. Only extreme points (nonzero scale factors) are
/// retained; the discriminant is
///
///   d(s) = sum_i y_i psi_i k(x_i, s) + kappa0.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenlocus {
    pub kernel: KernelSpec,
    /// Slack budget the model was trained with (infinite = hard equality).
    pub c: f64,
    pub extreme_points: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub psi: Vec<f64>,
    pub xi: Vec<f64>,
    pub kappa0: f64,
    pub l1: usize,
    pub l2: usize,
}

impl Eigenlocus {
    pub fn len(&self) -> usize {
        self.extreme_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extreme_points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.extreme_points.first().map(|p| p.len()).unwrap_or(0)
    }

    /// Kernel expansion of d(s) without the offset.
    pub fn raw_projection(&self, s: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            acc += self.labels[i] * self.psi[i] * eval_kernel(self.kernel, &self.extreme_points[i], s);
        }
        acc
    }

    /// ||kappa||^2 by kernel expansion over the stored points.
    pub fn kappa_norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            for j in 0..self.len() {
                acc += self.labels[i]
                    * self.labels[j]
                    * self.psi[i]
                    * self.psi[j]
                    * eval_kernel(self.kernel, &self.extreme_points[i], &self.extreme_points[j]);
            }
        }
        acc
    }

    /// Gram block of the per-side components: (kappa1.kappa1, kappa1.kappa2,
    /// kappa2.kappa2), where side 1 collects the +1-labeled points.
    pub fn side_products(&self) -> (f64, f64, f64) {
        let mut k11 = 0.0;
        let mut k12 = 0.0;
        let mut k22 = 0.0;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let v = self.psi[i]
                    * self.psi[j]
                    * eval_kernel(self.kernel, &self.extreme_points[i], &self.extreme_points[j]);
                match (self.labels[i] > 0.0, self.labels[j] > 0.0) {
                    (true, true) => k11 += v,
                    (false, false) => k22 += v,
                    (true, false) => k12 += v,
                    (false, true) => {} // counted once via the (true,false) pair
                }
            }
        }
        // k12 accumulated only ordered (side1, side2) pairs, which is the
        // full bilinear form kappa1'kappa2 already
        (k11, k12, k22)
    }
}

/// Keep the extreme points from the dual solution and package them as a
/// classifier; the offset is filled in via [`compute_locus_offset`].
pub fn assemble_eigenaxis(
    samples: &[LabeledSample],
    dual: &DualSolution,
    extreme: &ExtremeSet,
    kernel: KernelSpec,
    c: f64,
) -> Result<Eigenlocus> {
    if extreme.side1.is_empty() || extreme.side2.is_empty() {
        return Err(Error::OneSidedExtremeSet {
            l1: extreme.l1(),
            l2: extreme.l2(),
        });
    }
    let mut points = Vec::with_capacity(extreme.l());
    let mut labels = Vec::with_capacity(extreme.l());
    let mut psi = Vec::with_capacity(extreme.l());
    let mut xi = Vec::with_capacity(extreme.l());
    for &i in &extreme.indices {
        points.push(samples[i].features.clone());
        labels.push(samples[i].label);
        psi.push(dual.psi[i]);
        xi.push(if c.is_finite() { dual.psi[i] / c } else { 0.0 });
    }
    let mut m = Eigenlocus {
        kernel,
        c,
        extreme_points: points,
        labels,
        psi,
        xi,
        kappa0: 0.0,
        l1: extreme.l1(),
        l2: extreme.l2(),
    };
    m.kappa0 = compute_locus_offset(&m);
    Ok(m)
}

/// The offset kappa0 = (1/l) sum_i y_i (1 - xi_i) - ((1/l) sum_i k_xi) . kappa.
/// The first term is the expected-likelihood difference over the extreme set;
/// the second centers the projection on the average of the extreme points'
/// kernel images.
pub fn compute_locus_offset(m: &Eigenlocus) -> f64 {
    let l = m.len() as f64;
    let delta: f64 = (0..m.len())
        .map(|i| m.labels[i] * (1.0 - m.xi[i]))
        .sum::<f64>()
        / l;
    let mean_projection: f64 = (0..m.len())
        .map(|i| m.raw_projection(&m.extreme_points[i]))
        .sum::<f64>()
        / l;
    delta - mean_projection
}

/// d(s) = sum_i y_i psi_i k(x_i, s) + kappa0. Pure; panics on dimension
/// mismatch (kernel evaluation checks it).
pub fn discriminant_value(m: &Eigenlocus, s: &[f64]) -> f64 {
    m.raw_projection(s) + m.kappa0
}

/// The centered-projection form of the same discriminant,
/// d(s) = (k_s - (1/l) sum k_xi) . kappa + (1/l) sum y_i (1 - xi_i);
/// algebraically identical to [`discriminant_value`], kept as a self-check.
pub fn discriminant_value_mean_form(m: &Eigenlocus, s: &[f64]) -> f64 {
    let l = m.len() as f64;
    let delta: f64 = (0..m.len())
        .map(|i| m.labels[i] * (1.0 - m.xi[i]))
        .sum::<f64>()
        / l;
    let mean_projection: f64 = (0..m.len())
        .map(|i| m.raw_projection(&m.extreme_points[i]))
        .sum::<f64>()
        / l;
    m.raw_projection(s) - mean_projection + delta
}

/// Sign rule: +1 when d(s) >= 0, else -1. A value of exactly zero goes to
/// the +1 class.
pub fn classify(m: &Eigenlocus, s: &[f64]) -> f64 {
    if discriminant_value(m, s) >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// End-to-end training with explicit solver settings. Returns the model and
/// the dual solution it came from (for convergence metadata).
pub fn train_with_options(
    samples: &[LabeledSample],
    kernel: KernelSpec,
    c: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Eigenlocus, DualSolution)> {
    let epsilon = if c.is_finite() { 1.0 / c } else { 0.0 };
    let gram = build_gram(samples, kernel, epsilon)?;
    let labels = gram.labels().to_vec();
    let problem = DualProblem::new(gram, c)?;
    let solution = solve_dual(&problem, tol, max_iter);
    let extreme = extract_extreme_set(&solution, &labels, EXTREME_THRESHOLD_DEFAULT)?;
    let model = assemble_eigenaxis(samples, &solution, &extreme, kernel, c)?;
    Ok((model, solution))
}

/// End-to-end training with default solver settings.
pub fn train(samples: &[LabeledSample], kernel: KernelSpec, c: f64) -> Result<Eigenlocus> {
    train_with_options(samples, kernel, c, DEFAULT_TOL, DEFAULT_MAX_ITER).map(|(m, _)| m)
}
