use std::path::Path;

use kernel_core::LabeledSample;

use crate::{Error, Result};

/// Write samples as CSV with header `x1,..,xd,label`. Floats use the
/// shortest round-trip form, so a read back is bitwise faithful.
pub fn write_dataset(path: &Path, samples: &[LabeledSample]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = samples[0].features.len();
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for p in samples {
        let mut row: Vec<String> = p.features.iter().map(|v| format!("{v}")).collect();
        row.push(format!("{}", p.label));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a `features..., label` CSV. A first row that does not parse as
/// numbers is treated as a header. Labels must be +1 or -1.
pub fn read_dataset(path: &Path) -> Result<Vec<LabeledSample>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)?;
    let mut samples = Vec::new();
    let mut width = None;
    for (idx, record) in r.records().enumerate() {
        let record = record?;
        let line = idx + 1;
        let mut values = Vec::with_capacity(record.len());
        let mut parse_failed = None;
        for field in record.iter() {
            match field.trim().parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) => {
                    parse_failed = Some(field.to_string());
                    break;
                }
            }
        }
        if let Some(field) = parse_failed {
            if idx == 0 {
                continue; // header row
            }
            return Err(Error::BadField { line, field });
        }
        if values.len() < 2 {
            return Err(Error::RaggedRow {
                line,
                expected: 2,
                got: values.len(),
            });
        }
        let expected = *width.get_or_insert(values.len());
        if values.len() != expected {
            return Err(Error::RaggedRow {
                line,
                expected,
                got: values.len(),
            });
        }
        let label = values.pop().unwrap();
        if label != 1.0 && label != -1.0 {
            return Err(Error::BadLabel { line, value: label });
        }
        samples.push(LabeledSample::new(values, label));
    }
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        let samples = vec![
            LabeledSample::new(vec![0.1 + 0.2, -3.5e-13], 1.0),
            LabeledSample::new(vec![std::f64::consts::PI, 1.0 / 3.0], -1.0),
        ];
        write_dataset(&path, &samples).unwrap();
        let back = read_dataset(&path).unwrap();
        assert_eq!(back.len(), 2);
        for (p, q) in samples.iter().zip(&back) {
            assert_eq!(p.label, q.label);
            for (u, v) in p.features.iter().zip(&q.features) {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
    }

    #[test]
    fn headerless_files_are_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        std::fs::write(&path, "1.5,2.5,1\n-0.5,0.25,-1\n").unwrap();
        let back = read_dataset(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].features, vec![1.5, 2.5]);
    }

    #[test]
    fn bad_rows_are_reported_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "x1,x2,label\n1.0,2.0,1\n1.0,oops,-1\n").unwrap();
        match read_dataset(&path) {
            Err(Error::BadField { line: 3, field }) => assert_eq!(field, "oops"),
            other => panic!("unexpected: {other:?}"),
        }
        let path2 = dir.path().join("badlabel.csv");
        std::fs::write(&path2, "1.0,2.0,3\n").unwrap();
        assert!(matches!(
            read_dataset(&path2),
            Err(Error::BadLabel { line: 1, value }) if value == 3.0
        ));
    }
}
