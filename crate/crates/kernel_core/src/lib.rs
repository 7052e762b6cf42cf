//! Kernel evaluation, regularized Gram matrices, and dense symmetric
//! eigen-utilities for the eigenlocus classifier stack.

mod eig;
mod gram;
mod kernel;

pub use eig::{principal_axes_identity_check, principal_eigpair};
pub use gram::{build_gram, default_epsilon, GramMatrix, LabeledSample, C_DEFAULT};
pub use kernel::{eval_kernel, KernelSpec, GAMMA_BAND, GAMMA_DEFAULT};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty sample set")]
    EmptyInput,
    #[error("all {0} samples carry the same label; need at least one per class")]
    SingleClass(usize),
    #[error("label at index {index} is {value}; labels must be +1 or -1")]
    InvalidLabel { index: usize, value: f64 },
    #[error("ridge term must be nonnegative, got {0}")]
    NegativeRidge(f64),
    #[error("power iteration did not converge in {iterations} steps (residual {residual:.3e})")]
    EigNonConvergence { residual: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
