use kernel_core::{KernelSpec, LabeledSample};

use crate::model::{discriminant_value, train, Eigenlocus};
use crate::{Error, Result};

/// One-vs-rest ensemble: models[k] separates class k+1 from everything else.
#[derive(Debug, Clone)]
pub struct MulticlassModel {
    pub models: Vec<Eigenlocus>,
}

impl MulticlassModel {
    pub fn class_count(&self) -> usize {
        self.models.len()
    }
}

/// Train M one-vs-rest binary models from class-indexed data (classes are
/// 1..=M). Every class must appear at least once.
pub fn train_multiclass(
    points: &[Vec<f64>],
    classes: &[usize],
    kernel: KernelSpec,
    c: f64,
) -> Result<MulticlassModel> {
    assert_eq!(points.len(), classes.len(), "points and classes differ in length");
    let m = classes.iter().copied().max().unwrap_or(0);
    if m < 2 {
        return Err(Error::TooFewClasses(m));
    }
    for k in 1..=m {
        if !classes.contains(&k) {
            return Err(Error::MissingClass(k));
        }
    }
    let mut models = Vec::with_capacity(m);
    for k in 1..=m {
        let samples: Vec<LabeledSample> = points
            .iter()
            .zip(classes)
            .map(|(p, &cls)| LabeledSample::new(p.clone(), if cls == k { 1.0 } else { -1.0 }))
            .collect();
        models.push(train(&samples, kernel, c)?);
    }
    Ok(MulticlassModel { models })
}

/// Argmax of the per-class discriminants; ties go to the lowest class index.
/// Returns a class in 1..=M.
pub fn classify_multiclass(model: &MulticlassModel, s: &[f64]) -> usize {
    let mut best_class = 1;
    let mut best_value = f64::NEG_INFINITY;
    for (k, m) in model.models.iter().enumerate() {
        let d = discriminant_value(m, s);
        if d > best_value {
            best_value = d;
            best_class = k + 1;
        }
    }
    best_class
}
