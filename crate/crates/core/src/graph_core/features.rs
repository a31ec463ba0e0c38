use std::path::Path;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Node feature matrix `X` (n × d) with its column-stacked vector view.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix(DenseMatrix);

impl FeatureMatrix {
    pub fn new(x: DenseMatrix) -> Self {
        FeatureMatrix(x)
    }

    pub fn from_vec(x: &[f64], n: usize, d: usize) -> Result<Self> {
        DenseMatrix::unvec(x, n, d).map(FeatureMatrix)
    }

    pub fn nodes(&self) -> usize {
        self.0.rows()
    }

    pub fn dim(&self) -> usize {
        self.0.cols()
    }

    pub fn vec(&self) -> Vec<f64> {
        self.0.vec()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }

    /// Headerless CSV with one row per node.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| csv_error(path, 0, e))?;
        let mut data = Vec::new();
        let mut width = None;
        let mut rows = 0;
        for (idx, record) in reader.records().enumerate() {
            let line = idx + 1;
            let record = record.map_err(|e| csv_error(path, line, e))?;
            match width {
                None => width = Some(record.len()),
                Some(w) if w != record.len() => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line,
                        msg: format!("expected {w} columns, found {}", record.len()),
                    })
                }
                _ => {}
            }
            for field in record.iter() {
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("invalid number {field:?}"),
                })?;
                data.push(v);
            }
            rows += 1;
        }
        let cols = width.unwrap_or(0);
        DenseMatrix::new(rows, cols, data).map(FeatureMatrix)
    }
}

fn csv_error(path: &Path, line: usize, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("{other:?}"),
        },
    }
}
