use std::fmt::Write as _;
use std::path::Path;

use kernel_core::KernelSpec;

use crate::model::Eigenlocus;
use crate::{Error, Result};

/// First line of every model file. Bump on breaking format changes.
pub const MODEL_FORMAT_VERSION: &str = "eigenlocus/1";

/// Plain-text model file. Layout (one key per line, floats in shortest
/// round-trip decimal form so reload is bit-exact):
///
/// ```text
/// eigenlocus/1
/// kernel gaussian
/// gamma 0.05
/// c 50
/// kappa0 -0.123
/// points <count> <dim>
/// <label> <psi> <xi> <x_1> ... <x_dim>     (count rows)
/// ```
///
/// The `gamma` line is present only for gaussian kernels. `c inf` encodes an
/// infinite slack budget.
pub fn save_model(m: &Eigenlocus, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(MODEL_FORMAT_VERSION);
    out.push('\n');
    writeln!(out, "kernel {}", m.kernel.family_name()).unwrap();
    if let KernelSpec::Gaussian { gamma } = m.kernel {
        writeln!(out, "gamma {gamma}").unwrap();
    }
    writeln!(out, "c {}", m.c).unwrap();
    writeln!(out, "kappa0 {}", m.kappa0).unwrap();
    writeln!(out, "points {} {}", m.len(), m.dim()).unwrap();
    for i in 0..m.len() {
        write!(out, "{} {} {}", m.labels[i], m.psi[i], m.xi[i]).unwrap();
        for v in &m.extreme_points[i] {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn bad(line: usize, what: impl Into<String>) -> Error {
    Error::ModelFormat(format!("line {line}: {}", what.into()))
}

fn parse_f64(line: usize, token: &str, field: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| bad(line, format!("cannot parse {field} from {token:?}")))
}

pub fn load_model(path: &Path) -> Result<Eigenlocus> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, version) = lines
        .next()
        .ok_or_else(|| bad(1, "empty file"))?;
    if version.trim() != MODEL_FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version.trim().to_string(),
            expected: MODEL_FORMAT_VERSION,
        });
    }

    let mut kernel_family: Option<String> = None;
    let mut gamma: Option<f64> = None;
    let mut c: Option<f64> = None;
    let mut kappa0: Option<f64> = None;
    let mut counts: Option<(usize, usize)> = None;
    let mut rows: Vec<(f64, f64, f64, Vec<f64>)> = Vec::new();

    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap();
        if counts.is_none() {
            let rest: Vec<&str> = tokens.collect();
            match key {
                "kernel" => {
                    kernel_family =
                        Some(rest.first().ok_or_else(|| bad(line_no, "kernel missing family"))?.to_string());
                }
                "gamma" => {
                    gamma = Some(parse_f64(
                        line_no,
                        rest.first().ok_or_else(|| bad(line_no, "gamma missing value"))?,
                        "gamma",
                    )?);
                }
                "c" => {
                    c = Some(parse_f64(
                        line_no,
                        rest.first().ok_or_else(|| bad(line_no, "c missing value"))?,
                        "c",
                    )?);
                }
                "kappa0" => {
                    kappa0 = Some(parse_f64(
                        line_no,
                        rest.first().ok_or_else(|| bad(line_no, "kappa0 missing value"))?,
                        "kappa0",
                    )?);
                }
                "points" => {
                    if rest.len() != 2 {
                        return Err(bad(line_no, "points expects <count> <dim>"));
                    }
                    let count = rest[0]
                        .parse::<usize>()
                        .map_err(|_| bad(line_no, "bad point count"))?;
                    let dim = rest[1]
                        .parse::<usize>()
                        .map_err(|_| bad(line_no, "bad dimension"))?;
                    counts = Some((count, dim));
                }
                other => return Err(bad(line_no, format!("unknown key {other:?}"))),
            }
        } else {
            let (_, dim) = counts.unwrap();
            let mut values = Vec::with_capacity(dim + 3);
            values.push(parse_f64(line_no, key, "label")?);
            for t in tokens {
                values.push(parse_f64(line_no, t, "point row value")?);
            }
            if values.len() != dim + 3 {
                return Err(bad(
                    line_no,
                    format!("point row has {} values, expected {}", values.len(), dim + 3),
                ));
            }
            let label = values[0];
            if label != 1.0 && label != -1.0 {
                return Err(bad(line_no, format!("label must be +/-1, got {label}")));
            }
            rows.push((label, values[1], values[2], values[3..].to_vec()));
        }
    }

    let (count, _dim) = counts.ok_or_else(|| bad(0, "missing points header"))?;
    if rows.len() != count {
        return Err(Error::ModelFormat(format!(
            "expected {count} point rows, found {} (file truncated?)",
            rows.len()
        )));
    }
    let family = kernel_family.ok_or_else(|| bad(0, "missing kernel line"))?;
    let kernel = match family.as_str() {
        "linear" => KernelSpec::Linear,
        "poly2" => KernelSpec::Poly2,
        "gaussian" => KernelSpec::Gaussian {
            gamma: gamma.ok_or_else(|| bad(0, "gaussian kernel missing gamma"))?,
        },
        other => return Err(Error::ModelFormat(format!("unknown kernel family {other:?}"))),
    };
    let c = c.ok_or_else(|| bad(0, "missing c line"))?;
    let kappa0 = kappa0.ok_or_else(|| bad(0, "missing kappa0 line"))?;

    let l1 = rows.iter().filter(|r| r.0 > 0.0).count();
    let l2 = rows.len() - l1;
    Ok(Eigenlocus {
        kernel,
        c,
        extreme_points: rows.iter().map(|r| r.3.clone()).collect(),
        labels: rows.iter().map(|r| r.0).collect(),
        psi: rows.iter().map(|r| r.1).collect(),
        xi: rows.iter().map(|r| r.2).collect(),
        kappa0,
        l1,
        l2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{discriminant_value, train};
    use kernel_core::LabeledSample;

    fn two_point_model() -> Eigenlocus {
        let samples = vec![
            LabeledSample::new(vec![1.0, 0.25], 1.0),
            LabeledSample::new(vec![-1.0, -0.5], -1.0),
        ];
        train(&samples, KernelSpec::gaussian(0.05), 50.0).unwrap()
    }

    #[test]
    fn round_trip_is_bitwise_on_probes() {
        let m = two_point_model();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        for i in 0..100 {
            let s = [(i as f64) * 0.07 - 3.5, ((i * 37) % 100) as f64 * 0.06 - 3.0];
            let a = discriminant_value(&m, &s);
            let b = discriminant_value(&back, &s);
            assert_eq!(a.to_bits(), b.to_bits(), "probe {i}: {a} vs {b}");
        }
    }

    #[test]
    fn truncated_file_is_a_structured_error() {
        let m = two_point_model();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        save_model(&m, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let cut: String = text.lines().take(6).collect::<Vec<_>>().join("\n");
        std::fs::write(&path, cut).unwrap();
        match load_model(&path) {
            Err(Error::ModelFormat(msg)) => assert!(msg.contains("truncated"), "{msg}"),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn version_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        std::fs::write(&path, "eigenlocus/9\nkernel linear\n").unwrap();
        assert!(matches!(
            load_model(&path),
            Err(Error::VersionMismatch { .. })
        ));
    }

    #[test]
    fn infinite_c_survives_round_trip() {
        let samples = vec![
            LabeledSample::new(vec![1.0, 0.0], 1.0),
            LabeledSample::new(vec![-1.0, 0.0], -1.0),
        ];
        let m = train(&samples, KernelSpec::Linear, f64::INFINITY).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert!(back.c.is_infinite());
        assert_eq!(back.xi, m.xi);
    }
}
