//! The trained classifier: a difference of two directed kernel combinations
//! (one per class side) plus an offset, assembled from the dual solution.
//! Includes level-set tracing, one-vs-rest multiclass, and model files.

mod model;
mod multiclass;
mod serialize;
mod trace;

pub use model::{
    assemble_eigenaxis, classify, compute_locus_offset, discriminant_value,
    discriminant_value_mean_form, train, train_with_options, Eigenlocus,
};
pub use multiclass::{classify_multiclass, train_multiclass, MulticlassModel};
pub use serialize::{load_model, save_model, MODEL_FORMAT_VERSION};
pub use trace::{trace_level_sets, GridSpec, LevelSetTrace};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("extreme set is empty or one-sided (l1={l1}, l2={l2}); boundary undefined")]
    OneSidedExtremeSet { l1: usize, l2: usize },
    #[error("level tracing requires 2-D features, model has dimension {0}")]
    NotTwoDimensional(usize),
    #[error("grid resolution must be at least 16, got {0}")]
    ResolutionTooCoarse(usize),
    #[error("class {0} has no samples")]
    MissingClass(usize),
    #[error("multiclass training needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("model file version {found:?} is not supported (expected {expected})")]
    VersionMismatch { found: String, expected: &'static str },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Solver(#[from] dual_solver::Error),
    #[error(transparent)]
    Gram(#[from] kernel_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
