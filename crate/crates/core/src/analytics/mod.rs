//! Cross-model analysis: rank correlations, boxplot summaries, k-means with
//! silhouette model selection, multiple correspondence analysis, and the
//! item-parameter cluster reports.

pub mod boxplot;
pub mod cluster;
pub mod item_report;
pub mod mca;
pub mod spearman;

use std::path::Path;

use crate::error::{Error, Result};

pub use boxplot::{boxplot_stats, FiveNumberSummary};
pub use cluster::{kmeans, silhouette_scan, ClusterAssignment, SilhouetteScan};
pub use item_report::{item_param_threshold_report, median_icc_curves, IccCurve, ItemParamReport};
pub use mca::{mca, McaResult};
pub use spearman::{correlation_matrix, spearman, CorrelationMatrix};

/// A generic numeric table with named rows (datasets) and columns
/// (properties); the input to clustering and binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyTable {
    pub row_names: Vec<String>,
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PropertyTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    /// Load a property CSV: header row, first column row names, remaining
    /// columns numeric.
    pub fn read_csv(path: &Path) -> Result<PropertyTable> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?
            .clone();
        if headers.len() < 2 {
            return Err(Error::Analytics(format!(
                "{}: property tables need a name column plus data",
                path.display()
            )));
        }
        let column_names: Vec<String> = headers.iter().skip(1).map(|s| s.to_string()).collect();
        let mut row_names = Vec::new();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?;
            row_names.push(record.get(0).unwrap_or("").to_string());
            let mut row = Vec::with_capacity(column_names.len());
            for field in record.iter().skip(1) {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Analytics(format!(
                        "{}: non-numeric property cell '{field}'",
                        path.display()
                    ))
                })?;
                row.push(v);
            }
            if row.len() != column_names.len() {
                return Err(Error::Analytics(format!(
                    "{}: ragged property row",
                    path.display()
                )));
            }
            rows.push(row);
        }
        Ok(PropertyTable {
            row_names,
            column_names,
            rows,
        })
    }
}
