use kernel_core::GramMatrix;

use crate::{Error, Result};

/// Relative cutoff (fraction of max psi) separating extreme vectors from
/// numerically-zero scale factors.
pub const EXTREME_THRESHOLD_DEFAULT: f64 = 1e-6;

/// The dual QP data: regularized Gram matrix, labels, and the slack budget C.
/// C and the ridge term are two views of the same knob, C * epsilon = 1;
/// C = infinity pairs with epsilon = 0 (hard equality, no slack).
#[derive(Debug, Clone)]
pub struct DualProblem {
    gram: GramMatrix,
    labels: Vec<f64>,
    c: f64,
}

impl DualProblem {
    pub fn new(gram: GramMatrix, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositiveC(c));
        }
        let epsilon = gram.epsilon();
        if c.is_finite() {
            if (c * epsilon - 1.0).abs() > 1e-12 {
                return Err(Error::InconsistentRegularization { c, epsilon });
            }
        } else if epsilon != 0.0 {
            return Err(Error::InconsistentRegularization { c, epsilon });
        }
        let labels = gram.labels().to_vec();
        Ok(DualProblem { gram, labels, c })
    }

    /// Derive C from the ridge already present on the Gram matrix.
    pub fn from_gram(gram: GramMatrix) -> Result<Self> {
        let c = if gram.epsilon() > 0.0 {
            1.0 / gram.epsilon()
        } else {
            f64::INFINITY
        };
        DualProblem::new(gram, c)
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Slack values xi_i = psi_i / C; identically zero when C is infinite.
    pub fn slack_variables(&self, psi: &[f64]) -> Vec<f64> {
        if self.c.is_finite() {
            psi.iter().map(|p| p / self.c).collect()
        } else {
            vec![0.0; psi.len()]
        }
    }
}

/// Solver output: the scale factors psi plus convergence bookkeeping.
/// `objective` is recomputed from the returned psi, not carried from the
/// iteration, so it always matches 1'psi - psi'Q psi/2.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub psi: Vec<f64>,
    pub objective: f64,
    pub kkt_stationarity: f64,
    pub kkt_feasibility: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Indices of the extreme vectors (psi above threshold * max psi), split by
/// class side.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeSet {
    pub indices: Vec<usize>,
    pub side1: Vec<usize>,
    pub side2: Vec<usize>,
    pub threshold: f64,
}

impl ExtremeSet {
    pub fn l1(&self) -> usize {
        self.side1.len()
    }

    pub fn l2(&self) -> usize {
        self.side2.len()
    }

    pub fn l(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}
