use std::fmt::Write as _;
use std::path::Path;

use eigenlocus_model::{
    classify, discriminant_value, load_model, save_model, train_with_options,
};
use equilibrium_laws::{full_report, model_gram};
use kernel_core::KernelSpec;

use crate::{Error, Result};

const SOLVER_TOL: f64 = 1e-8;
const SOLVER_MAX_ITER: usize = 100_000;

/// Train on a labeled CSV and save the model. Reports convergence and the
/// retained extreme-point count on stdout; a non-convergent solve still
/// saves the best iterate but says so.
pub fn train_cmd(data: &Path, kernel: KernelSpec, c: f64, out: &Path) -> Result<()> {
    let samples = gaussian_lab::read_dataset(data)?;
    let (model, solution) = train_with_options(&samples, kernel, c, SOLVER_TOL, SOLVER_MAX_ITER)?;
    save_model(&model, out)?;
    println!(
        "trained on {} samples: {} extreme points ({} / {}), objective {:.6}, {}",
        samples.len(),
        model.len(),
        model.l1,
        model.l2,
        solution.objective,
        if solution.converged {
            format!("converged in {} iterations", solution.iterations)
        } else {
            format!("NOT converged after {} iterations", solution.iterations)
        }
    );
    println!("model written to {}", out.display());
    Ok(())
}

/// Read numeric CSV rows of width d (features) or d+1 (features plus a
/// label column, which is ignored).
fn read_probe_rows(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parsed: Option<Vec<f64>> =
            fields.iter().map(|f| f.trim().parse::<f64>().ok()).collect();
        match parsed {
            None if idx == 0 => continue, // header
            None => {
                return Err(Error::Config(format!(
                    "{}: line {} is not numeric",
                    path.display(),
                    idx + 1
                )))
            }
            Some(mut values) => {
                if values.len() == dim + 1 {
                    values.pop();
                } else if values.len() != dim {
                    return Err(Error::Config(format!(
                        "{}: line {} has {} columns, the model expects {} features",
                        path.display(),
                        idx + 1,
                        values.len(),
                        dim
                    )));
                }
                rows.push(values);
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Config(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Classify a CSV of probe points with a saved model, writing
/// `x1,..,xd,predicted_label,discriminant_value` to `out` (stdout when
/// absent).
pub fn classify_cmd(model_path: &Path, data: &Path, out: Option<&Path>) -> Result<()> {
    let model = load_model(model_path)?;
    let rows = read_probe_rows(data, model.dim())?;
    let mut text = String::new();
    let mut header: Vec<String> = (1..=model.dim()).map(|i| format!("x{i}")).collect();
    header.push("predicted_label".into());
    header.push("discriminant_value".into());
    let _ = writeln!(text, "{}", header.join(","));
    for x in &rows {
        let mut cells: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
        cells.push(format!("{}", classify(&model, x)));
        cells.push(format!("{}", discriminant_value(&model, x)));
        let _ = writeln!(text, "{}", cells.join(","));
    }
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("predictions written to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Print the equilibrium report of a saved model as an aligned table plus
/// JSON. With a labeled dataset the table gains that data's error rate.
pub fn report_cmd(model_path: &Path, data: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let model = load_model(model_path)?;
    let gram = model_gram(&model)?;
    let report = full_report(&model, &gram);

    let mut json = serde_json::Map::new();
    json.insert("kernel".into(), model.kernel.family_name().into());
    json.insert("c".into(), model.c.into());
    json.insert("kappa0".into(), model.kappa0.into());
    json.insert("extreme_points".into(), (model.len() as u64).into());
    for (name, value) in report.fields() {
        json.insert(name.into(), value.into());
    }

    println!(
        "model: {} kernel, C = {}, {} extreme points ({} + {}), kappa0 = {:.6}",
        model.kernel.family_name(),
        model.c,
        model.len(),
        model.l1,
        model.l2,
        model.kappa0
    );
    println!("{:<22} {:>14}", "law", "residual");
    for (name, value) in report.fields() {
        println!("{name:<22} {value:>14.6e}");
    }
    if let Some(path) = data {
        let samples = gaussian_lab::read_dataset(path)?;
        let rate = gaussian_lab::error_rate_on(|x| classify(&model, x), &samples);
        println!("{:<22} {rate:>14.6}", "error_rate_on_data");
        json.insert("error_rate_on_data".into(), rate.into());
    }

    let json_text = serde_json::to_string_pretty(&serde_json::Value::Object(json))?;
    match out {
        Some(path) => {
            std::fs::write(path, format!("{json_text}\n"))?;
            println!("report written to {}", path.display());
        }
        None => println!("{json_text}"),
    }
    Ok(())
}
