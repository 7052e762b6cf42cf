//! Solver for the Wolfe-dual eigenenergy QP
//!
//!   maximize  1'psi - psi' Q psi / 2
//!   subject to  psi' y = 0,  psi >= 0
//!
//! via projected gradient ascent with Barzilai-Borwein steps, exact
//! projection onto the constraint set, and an active-set polish that
//! finishes the problem once the iterate has identified the right face.

mod polish;
mod problem;
mod project;
mod solver;

pub use problem::{DualProblem, DualSolution, ExtremeSet, EXTREME_THRESHOLD_DEFAULT};
pub use project::project_onto_constraints;
pub use solver::{
    extract_extreme_set, kkt_residuals, lagrangian_relation_check, solve_dual, solve_dual_traced,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("labels on the problem do not match the Gram matrix labels")]
    LabelMismatch,
    #[error("C = {c} and epsilon = {epsilon} are inconsistent: C*epsilon must be 1")]
    InconsistentRegularization { c: f64, epsilon: f64 },
    #[error("C must be positive, got {0}")]
    NonPositiveC(f64),
    #[error("extreme-set threshold must lie in (0,1), got {0}")]
    BadThreshold(f64),
    #[error("active set is empty (all psi at zero)")]
    EmptyActiveSet,
    #[error("active-set block is singular or inconsistent (residual {residual:.3e})")]
    SingularActiveBlock { residual: f64 },
    #[error("lagrangian relation requires epsilon > 0 and a converged solution")]
    RelationPrecondition,
    #[error(transparent)]
    Gram(#[from] kernel_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
