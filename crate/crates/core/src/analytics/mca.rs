//! Multiple correspondence analysis of an h/s property table via the
//! indicator matrix: correspondence analysis of the complete disjunctive
//! table, principal coordinates for rows (datasets) and columns (property
//! categories).

use std::path::Path;

use nalgebra::DMatrix;

use crate::dataset::{BinaryPropertyTable, HsSymbol};
use crate::error::{Error, Result};
use crate::io;

/// Principal coordinates and inertias of the correspondence analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct McaResult {
    pub row_names: Vec<String>,
    /// One label per retained indicator column, e.g. `class_entropy=h`.
    pub column_labels: Vec<String>,
    /// n_rows x n_components principal coordinates.
    pub row_coords: Vec<Vec<f64>>,
    /// n_categories x n_components principal coordinates.
    pub col_coords: Vec<Vec<f64>>,
    /// Decreasing, non-negative component inertias.
    pub inertias: Vec<f64>,
}

/// Run MCA on the binarized table. Categories that never occur are dropped
/// with a warning.
pub fn mca(table: &BinaryPropertyTable) -> Result<McaResult> {
    let n = table.row_names.len();
    let p = table.column_names.len();
    if n < 2 || p < 2 {
        return Err(Error::Analytics(format!(
            "mca needs at least 2 rows and 2 properties, got {n}x{p}"
        )));
    }

    // complete disjunctive indicator matrix: two categories per property
    let mut labels = Vec::with_capacity(2 * p);
    let mut indicator = vec![vec![0.0f64; 2 * p]; n];
    for (j, prop) in table.column_names.iter().enumerate() {
        labels.push(format!("{prop}=h"));
        labels.push(format!("{prop}=s"));
        for (i, row) in table.cells.iter().enumerate() {
            match row[j] {
                HsSymbol::H => indicator[i][2 * j] = 1.0,
                HsSymbol::S => indicator[i][2 * j + 1] = 1.0,
            }
        }
    }

    // drop empty categories
    let mut keep = Vec::new();
    for j in 0..2 * p {
        let mass: f64 = indicator.iter().map(|r| r[j]).sum();
        if mass > 0.0 {
            keep.push(j);
        } else {
            log::warn!("mca: dropping empty category '{}'", labels[j]);
        }
    }
    let column_labels: Vec<String> = keep.iter().map(|&j| labels[j].clone()).collect();
    let m = keep.len();

    let total = (n * p) as f64;
    let freq = DMatrix::from_fn(n, m, |i, j| indicator[i][keep[j]] / total);
    let row_mass: Vec<f64> = (0..n).map(|i| freq.row(i).sum()).collect();
    let col_mass: Vec<f64> = (0..m).map(|j| freq.column(j).sum()).collect();

    // standardized residuals S = D_r^{-1/2} (F - r c^T) D_c^{-1/2}
    let s = DMatrix::from_fn(n, m, |i, j| {
        (freq[(i, j)] - row_mass[i] * col_mass[j]) / (row_mass[i] * col_mass[j]).sqrt()
    });

    let svd = s.clone().svd(true, true);
    let u = svd
        .u
        .ok_or_else(|| Error::Analytics("svd produced no left vectors".into()))?;
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Analytics("svd produced no right vectors".into()))?;

    // order components by decreasing singular value
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let n_comp = order.len();
    let inertias: Vec<f64> = order
        .iter()
        .map(|&k| svd.singular_values[k] * svd.singular_values[k])
        .collect();

    let mut row_coords = vec![vec![0.0; n_comp]; n];
    for i in 0..n {
        for (c, &k) in order.iter().enumerate() {
            row_coords[i][c] = u[(i, k)] * svd.singular_values[k] / row_mass[i].sqrt();
        }
    }
    let mut col_coords = vec![vec![0.0; n_comp]; m];
    for j in 0..m {
        for (c, &k) in order.iter().enumerate() {
            col_coords[j][c] = vt[(k, j)] * svd.singular_values[k] / col_mass[j].sqrt();
        }
    }

    Ok(McaResult {
        row_names: table.row_names.clone(),
        column_labels,
        row_coords,
        col_coords,
        inertias,
    })
}

impl McaResult {
    /// Write row and column coordinates on components 0 and 1 plus inertias.
    pub fn write_csv(&self, rows_path: &Path, cols_path: &Path) -> Result<()> {
        let comp = |coords: &Vec<f64>, k: usize| coords.get(k).copied().unwrap_or(0.0);
        let mut records = vec![vec![
            "dataset".to_string(),
            "component_0".to_string(),
            "component_1".to_string(),
        ]];
        for (name, coords) in self.row_names.iter().zip(&self.row_coords) {
            records.push(vec![
                name.clone(),
                io::fmt_f64(comp(coords, 0)),
                io::fmt_f64(comp(coords, 1)),
            ]);
        }
        io::write_csv(rows_path, &records)?;

        let mut records = vec![vec![
            "category".to_string(),
            "component_0".to_string(),
            "component_1".to_string(),
        ]];
        for (label, coords) in self.column_labels.iter().zip(&self.col_coords) {
            records.push(vec![
                label.clone(),
                io::fmt_f64(comp(coords, 0)),
                io::fmt_f64(comp(coords, 1)),
            ]);
        }
        io::write_csv(cols_path, &records)
    }
}
