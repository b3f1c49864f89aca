//! CSV ingestion and emission for estimation datasets.
//!
//! Expected shape: a header row, one response column named `y`, every other
//! column a numeric predictor; rows are observations. Decimal points only,
//! scientific notation accepted, no thousands separators.

use anyhow::{bail, Context, Result};
use ndarray::{Array1, Array2};
use std::path::Path;
use varsigma::Dataset;

pub struct CsvData {
    pub dataset: Dataset,
    /// Predictor column names in file order.
    pub predictors: Vec<String>,
}

pub fn read_dataset(path: &Path) -> Result<CsvData> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot open input CSV {}", path.display()))?;
    let headers: Vec<String> = reader
        .headers()
        .context("input CSV has no header row")?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let y_col = headers.iter().position(|h| h == "y").with_context(|| {
        format!(
            "input CSV must contain a response column named \"y\" (found: {})",
            headers.join(", ")
        )
    })?;
    let predictors: Vec<String> =
        headers.iter().enumerate().filter(|(i, _)| *i != y_col).map(|(_, h)| h.clone()).collect();
    if predictors.is_empty() {
        bail!("input CSV has no predictor columns (only \"y\")");
    }

    let mut y = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ri, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("cannot read data row {}", ri + 1))?;
        if record.len() != headers.len() {
            bail!(
                "data row {} has {} fields but the header has {}",
                ri + 1,
                record.len(),
                headers.len()
            );
        }
        let mut row = Vec::with_capacity(predictors.len());
        for (ci, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().with_context(|| {
                format!(
                    "data row {}, column \"{}\": cannot parse {:?} as a number",
                    ri + 1,
                    headers[ci],
                    field
                )
            })?;
            if ci == y_col {
                y.push(value);
            } else {
                row.push(value);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("input CSV contains a header but no data rows");
    }

    let n = rows.len();
    let p = predictors.len();
    let mut x = Array2::zeros((n, p));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            x[[i, j]] = v;
        }
    }
    let dataset = Dataset::new(Array1::from_vec(y), x)
        .context("input data failed validation")?;
    Ok(CsvData { dataset, predictors })
}

/// Writes a dataset in the shape `estimate` ingests: header `y,x1,...,xp`.
pub fn write_dataset(path: &Path, y: &Array1<f64>, x: &Array2<f64>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut header = vec!["y".to_string()];
    header.extend((1..=x.ncols()).map(|j| format!("x{j}")));
    writer.write_record(&header)?;
    for i in 0..x.nrows() {
        let mut record = Vec::with_capacity(x.ncols() + 1);
        record.push(y[i].to_string());
        for j in 0..x.ncols() {
            record.push(x[[i, j]].to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}
