//! Tabular datasets: CSV loading, stratified splitting, meta-properties, and
//! the h/s binarization of property tables.
//!
//! Only binary classification problems are supported. Symbolic and binary
//! columns are stored as category ids (assigned in sorted order of the raw
//! values), so every column exposes an `f64` view that models and
//! perturbations can consume uniformly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// How a column's raw values were interpreted at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    /// All cells parse as finite numbers and more than two distinct values.
    Numeric,
    /// Non-numeric with more than two distinct values; stored as category ids.
    Symbolic,
    /// At most two distinct values; stored as category ids 0/1.
    Binary,
}

impl ColumnKind {
    pub fn parse(s: &str) -> Option<ColumnKind> {
        match s {
            "numeric" => Some(ColumnKind::Numeric),
            "symbolic" => Some(ColumnKind::Symbolic),
            "binary" => Some(ColumnKind::Binary),
            _ => None,
        }
    }
}

/// One attribute column. `values` holds raw numbers for numeric columns and
/// category ids for symbolic/binary columns; `categories` maps id -> raw label
/// and is empty for numeric columns.
#[derive(Debug, Clone)]
pub struct AttributeColumn {
    pub name: String,
    pub kind: ColumnKind,
    pub values: Vec<f64>,
    pub categories: Vec<String>,
}

impl AttributeColumn {
    /// Number of distinct raw values (category count for non-numeric columns).
    pub fn distinct_count(&self) -> usize {
        match self.kind {
            ColumnKind::Numeric => {
                let mut v: Vec<u64> = self.values.iter().map(|x| x.to_bits()).collect();
                v.sort_unstable();
                v.dedup();
                v.len()
            }
            _ => self.categories.len(),
        }
    }
}

/// A loaded binary-classification dataset.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<AttributeColumn>,
    /// Class ids, one per row; only 0 and 1 occur.
    pub labels: Vec<u8>,
}

impl Dataset {
    /// Validate the structural invariants and return the dataset.
    pub fn new(name: String, columns: Vec<AttributeColumn>, labels: Vec<u8>) -> Result<Dataset> {
        let ds = Dataset {
            name,
            columns,
            labels,
        };
        ds.validate()?;
        Ok(ds)
    }

    fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        let mut seen = BTreeMap::new();
        for col in &self.columns {
            if col.name.is_empty() {
                return Err(Error::EmptyColumnName);
            }
            if seen.insert(col.name.clone(), ()).is_some() {
                return Err(Error::DuplicateColumn(col.name.clone()));
            }
            if col.values.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "column '{}' has {} values, expected {}",
                    col.name,
                    col.values.len(),
                    n
                )));
            }
            if col.kind == ColumnKind::Binary && col.categories.len() > 2 {
                return Err(Error::InvalidDataset(format!(
                    "binary column '{}' has {} categories",
                    col.name,
                    col.categories.len()
                )));
            }
            if col.kind == ColumnKind::Numeric && col.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "numeric column '{}' contains a non-finite value",
                    col.name
                )));
            }
        }
        if self.labels.iter().any(|&l| l > 1) {
            return Err(Error::InvalidDataset(
                "labels must be 0 or 1".to_string(),
            ));
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.labels.len()
    }

    pub fn feature_count(&self) -> usize {
        self.columns.len()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn column_kinds(&self) -> Vec<ColumnKind> {
        self.columns.iter().map(|c| c.kind).collect()
    }

    /// Row-major attribute matrix view.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.row_count();
        let f = self.feature_count();
        let mut rows = vec![vec![0.0; f]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, &v) in col.values.iter().enumerate() {
                rows[i][j] = v;
            }
        }
        rows
    }

    /// Copy of the dataset without the given column (used by leave-one-out
    /// retraining).
    pub fn drop_column(&self, index: usize) -> Result<Dataset> {
        if index >= self.feature_count() {
            return Err(Error::InvalidDataset(format!(
                "drop_column index {index} out of range"
            )));
        }
        let mut columns = self.columns.clone();
        columns.remove(index);
        Dataset::new(self.name.clone(), columns, self.labels.clone())
    }

    /// Dataset restricted to the given row indices (kept in the given order).
    fn take_rows(&self, indices: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|c| AttributeColumn {
                name: c.name.clone(),
                kind: c.kind,
                values: indices.iter().map(|&i| c.values[i]).collect(),
                categories: c.categories.clone(),
            })
            .collect();
        Dataset {
            name: self.name.clone(),
            columns,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// Optional kind overrides for [`load_csv`], keyed by column name.
pub type SchemaHints = BTreeMap<String, ColumnKind>;

/// Load an RFC-4180 CSV with a header row into a [`Dataset`].
///
/// Column kinds are inferred per column: at most two distinct raw values makes
/// a column binary; otherwise all-numeric cells make it numeric; anything else
/// is symbolic. Rows containing an empty cell are dropped (a count is logged).
/// The label column must end up with exactly two distinct values.
pub fn load_csv(path: &Path, label_column: &str, hints: &SchemaHints) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_string())
        .collect();

    let mut seen = BTreeMap::new();
    for h in &headers {
        if h.is_empty() {
            return Err(Error::EmptyColumnName);
        }
        if seen.insert(h.clone(), ()).is_some() {
            return Err(Error::DuplicateColumn(h.clone()));
        }
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::ColumnNotFound(label_column.to_string()))?;

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    let mut dropped = 0usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        if record.len() != headers.len() {
            return Err(Error::InvalidDataset(format!(
                "data row {} has {} fields, expected {}",
                row_idx,
                record.len(),
                headers.len()
            )));
        }
        if record.iter().any(|f| f.is_empty()) {
            dropped += 1;
            continue;
        }
        for (j, field) in record.iter().enumerate() {
            cells[j].push(field.to_string());
        }
    }
    if dropped > 0 {
        log::warn!(
            "{}: dropped {dropped} row(s) with missing cells",
            path.display()
        );
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "dataset".to_string());
    from_cells(name, &headers, cells, label_idx, hints)
}

/// Build a dataset from in-memory string cells; shared by `load_csv` and tests.
fn from_cells(
    name: String,
    headers: &[String],
    cells: Vec<Vec<String>>,
    label_idx: usize,
    hints: &SchemaHints,
) -> Result<Dataset> {
    let labels = encode_labels(&headers[label_idx], &cells[label_idx])?;

    let mut columns = Vec::new();
    for (j, header) in headers.iter().enumerate() {
        if j == label_idx {
            continue;
        }
        columns.push(infer_column(header, &cells[j], hints.get(header).copied())?);
    }
    Dataset::new(name, columns, labels)
}

fn encode_labels(column: &str, raw: &[String]) -> Result<Vec<u8>> {
    let mut distinct: Vec<&String> = raw.iter().collect();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != 2 {
        return Err(Error::NonBinaryLabel {
            column: column.to_string(),
            distinct: distinct.len(),
        });
    }
    let ordered = order_categories(&distinct);
    Ok(raw
        .iter()
        .map(|v| if *v == *ordered[0] { 0 } else { 1 })
        .collect())
}

/// Sorted category order: numeric when every value parses as a finite number,
/// lexicographic otherwise. Keeps 0/1 columns stored as 0/1.
fn order_categories<'a>(distinct: &[&'a String]) -> Vec<&'a String> {
    let mut ordered: Vec<&String> = distinct.to_vec();
    let numeric: Option<Vec<f64>> = ordered
        .iter()
        .map(|s| parse_finite(s))
        .collect::<Option<Vec<_>>>();
    match numeric {
        Some(_) => ordered.sort_by(|a, b| {
            parse_finite(a)
                .unwrap()
                .partial_cmp(&parse_finite(b).unwrap())
                .unwrap()
                .then_with(|| a.cmp(b))
        }),
        None => ordered.sort(),
    }
    ordered
}

fn parse_finite(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn infer_column(name: &str, raw: &[String], hint: Option<ColumnKind>) -> Result<AttributeColumn> {
    let mut distinct: Vec<&String> = raw.iter().collect();
    distinct.sort();
    distinct.dedup();

    let kind = match hint {
        Some(k) => k,
        None => {
            if distinct.len() <= 2 {
                ColumnKind::Binary
            } else if distinct.iter().all(|s| parse_finite(s).is_some()) {
                ColumnKind::Numeric
            } else {
                ColumnKind::Symbolic
            }
        }
    };

    match kind {
        ColumnKind::Numeric => {
            let mut values = Vec::with_capacity(raw.len());
            for (i, s) in raw.iter().enumerate() {
                match parse_finite(s) {
                    Some(v) => values.push(v),
                    None => {
                        return Err(Error::UnparseableCell {
                            row: i,
                            column: name.to_string(),
                            value: s.clone(),
                        })
                    }
                }
            }
            Ok(AttributeColumn {
                name: name.to_string(),
                kind,
                values,
                categories: Vec::new(),
            })
        }
        ColumnKind::Symbolic | ColumnKind::Binary => {
            if kind == ColumnKind::Binary && distinct.len() > 2 {
                return Err(Error::InvalidDataset(format!(
                    "column '{name}' hinted binary but has {} distinct values",
                    distinct.len()
                )));
            }
            let ordered = order_categories(&distinct);
            let index: BTreeMap<&String, usize> = ordered
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i))
                .collect();
            let values = raw.iter().map(|s| index[&s] as f64).collect();
            Ok(AttributeColumn {
                name: name.to_string(),
                kind,
                values,
                categories: ordered.iter().map(|s| s.to_string()).collect(),
            })
        }
    }
}

/// Stratified train/test split, deterministic for a fixed seed.
///
/// Row order within each partition follows the original dataset order. Errors
/// if either class would end up empty on either side.
pub fn split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidDataset(format!(
            "test_fraction must lie in (0,1), got {test_fraction}"
        )));
    }
    let n = ds.row_count();
    if n < 10 {
        return Err(Error::TooFewRows(n));
    }
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = (0..n).filter(|&i| ds.labels[i] == class).collect();
        if members.is_empty() {
            return Err(Error::EmptyClassInSplit(class));
        }
        let n_c = members.len();
        let n_test = (test_fraction * n_c as f64).round() as usize;
        if n_test == 0 || n_test == n_c {
            return Err(Error::EmptyClassInSplit(class));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (class as u64 + 1));
        members.shuffle(&mut rng);
        test_idx.extend_from_slice(&members[..n_test]);
        train_idx.extend_from_slice(&members[n_test..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((ds.take_rows(&train_idx), ds.take_rows(&test_idx)))
}

/// Names of the 15 dataset meta-properties, in canonical export order.
pub const PROPERTY_NAMES: [&str; 15] = [
    "number_of_features",
    "number_of_instances",
    "dimensionality",
    "percentage_of_binary_features",
    "std_nominal_distinct_values",
    "mean_nominal_distinct_values",
    "class_entropy",
    "autocorrelation",
    "number_of_numeric_features",
    "number_of_symbolic_features",
    "number_of_binary_features",
    "percentage_of_symbolic_features",
    "percentage_of_numeric_features",
    "majority_class_percentage",
    "minority_class_percentage",
];

/// The 15 meta-properties describing one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVector {
    pub number_of_features: f64,
    pub number_of_instances: f64,
    pub dimensionality: f64,
    pub percentage_of_binary_features: f64,
    pub std_nominal_distinct_values: f64,
    pub mean_nominal_distinct_values: f64,
    pub class_entropy: f64,
    pub autocorrelation: f64,
    pub number_of_numeric_features: f64,
    pub number_of_symbolic_features: f64,
    pub number_of_binary_features: f64,
    pub percentage_of_symbolic_features: f64,
    pub percentage_of_numeric_features: f64,
    pub majority_class_percentage: f64,
    pub minority_class_percentage: f64,
}

impl PropertyVector {
    /// Values in [`PROPERTY_NAMES`] order.
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.number_of_features,
            self.number_of_instances,
            self.dimensionality,
            self.percentage_of_binary_features,
            self.std_nominal_distinct_values,
            self.mean_nominal_distinct_values,
            self.class_entropy,
            self.autocorrelation,
            self.number_of_numeric_features,
            self.number_of_symbolic_features,
            self.number_of_binary_features,
            self.percentage_of_symbolic_features,
            self.percentage_of_numeric_features,
            self.majority_class_percentage,
            self.minority_class_percentage,
        ]
    }
}

/// Binary entropy in bits of a 0/1 label vector.
pub fn class_entropy_bits(labels: &[u8]) -> f64 {
    let n = labels.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p1 = labels.iter().filter(|&&l| l == 1).count() as f64 / n;
    let mut h = 0.0;
    for p in [p1, 1.0 - p1] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Compute the 15 meta-properties of a dataset.
///
/// Autocorrelation is the fraction of consecutive row pairs (in stored order)
/// with equal labels; nominal distinct-value statistics are taken over
/// symbolic columns only and are 0 when there are none.
pub fn meta_features(ds: &Dataset) -> PropertyVector {
    let f = ds.feature_count() as f64;
    let n = ds.row_count() as f64;

    let n_numeric = ds
        .columns
        .iter()
        .filter(|c| c.kind == ColumnKind::Numeric)
        .count() as f64;
    let n_symbolic = ds
        .columns
        .iter()
        .filter(|c| c.kind == ColumnKind::Symbolic)
        .count() as f64;
    let n_binary = ds
        .columns
        .iter()
        .filter(|c| c.kind == ColumnKind::Binary)
        .count() as f64;

    let nominal_counts: Vec<f64> = ds
        .columns
        .iter()
        .filter(|c| c.kind == ColumnKind::Symbolic)
        .map(|c| c.distinct_count() as f64)
        .collect();
    let (mean_nominal, std_nominal) = if nominal_counts.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = nominal_counts.iter().sum::<f64>() / nominal_counts.len() as f64;
        let var = nominal_counts
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / nominal_counts.len() as f64;
        (mean, var.sqrt())
    };

    let autocorrelation = if ds.row_count() >= 2 {
        let equal = ds
            .labels
            .windows(2)
            .filter(|w| w[0] == w[1])
            .count() as f64;
        equal / (n - 1.0)
    } else {
        0.0
    };

    let p1 = ds.labels.iter().filter(|&&l| l == 1).count() as f64 / n;
    let majority = p1.max(1.0 - p1) * 100.0;
    let minority = p1.min(1.0 - p1) * 100.0;

    let pct = |count: f64| if f > 0.0 { 100.0 * count / f } else { 0.0 };

    PropertyVector {
        number_of_features: f,
        number_of_instances: n,
        dimensionality: if n > 0.0 { f / n } else { 0.0 },
        percentage_of_binary_features: pct(n_binary),
        std_nominal_distinct_values: std_nominal,
        mean_nominal_distinct_values: mean_nominal,
        class_entropy: class_entropy_bits(&ds.labels),
        autocorrelation,
        number_of_numeric_features: n_numeric,
        number_of_symbolic_features: n_symbolic,
        number_of_binary_features: n_binary,
        percentage_of_symbolic_features: pct(n_symbolic),
        percentage_of_numeric_features: pct(n_numeric),
        majority_class_percentage: majority,
        minority_class_percentage: minority,
    }
}

/// The h/s symbol of one binarized property cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HsSymbol {
    /// Equal to or above the column average.
    H,
    /// Below the column average.
    S,
}

impl HsSymbol {
    pub fn as_str(self) -> &'static str {
        match self {
            HsSymbol::H => "h",
            HsSymbol::S => "s",
        }
    }
}

/// A property table with every numeric cell replaced by its h/s symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPropertyTable {
    pub row_names: Vec<String>,
    pub column_names: Vec<String>,
    pub cells: Vec<Vec<HsSymbol>>,
}

/// Binarize a generic numeric table: h iff the cell is >= its column mean.
pub fn binarize_numeric_table(
    row_names: &[String],
    column_names: &[String],
    rows: &[Vec<f64>],
) -> Result<BinaryPropertyTable> {
    if rows.len() < 2 {
        return Err(Error::Analytics(format!(
            "binarization needs at least 2 rows, got {}",
            rows.len()
        )));
    }
    let cols = column_names.len();
    if rows.iter().any(|r| r.len() != cols) || row_names.len() != rows.len() {
        return Err(Error::Analytics(
            "binarization input shapes disagree".to_string(),
        ));
    }
    let means: Vec<f64> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64)
        .collect();
    let cells = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(&means)
                .map(|(&v, &m)| if v >= m { HsSymbol::H } else { HsSymbol::S })
                .collect()
        })
        .collect();
    Ok(BinaryPropertyTable {
        row_names: row_names.to_vec(),
        column_names: column_names.to_vec(),
        cells,
    })
}

/// Binarize a list of named property vectors into an h/s table.
pub fn binarize_properties(table: &[(String, PropertyVector)]) -> Result<BinaryPropertyTable> {
    let row_names: Vec<String> = table.iter().map(|(n, _)| n.clone()).collect();
    let column_names: Vec<String> = PROPERTY_NAMES.iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<f64>> = table.iter().map(|(_, p)| p.to_vec()).collect();
    binarize_numeric_table(&row_names, &column_names, &rows)
}

/// Write a property table (one row per dataset, 15 named columns) as CSV.
pub fn write_property_csv(path: &Path, table: &[(String, PropertyVector)]) -> Result<()> {
    let mut records = Vec::new();
    let mut header = vec!["dataset".to_string()];
    header.extend(PROPERTY_NAMES.iter().map(|s| s.to_string()));
    records.push(header);
    for (name, props) in table {
        let mut row = vec![name.clone()];
        row.extend(props.to_vec().iter().map(|v| io::fmt_f64(*v)));
        records.push(row);
    }
    io::write_csv(path, &records)
}

/// Write a binarized property table as CSV of h/s symbols.
pub fn write_binarized_csv(path: &Path, table: &BinaryPropertyTable) -> Result<()> {
    let mut records = Vec::new();
    let mut header = vec!["dataset".to_string()];
    header.extend(table.column_names.iter().cloned());
    records.push(header);
    for (name, row) in table.row_names.iter().zip(&table.cells) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|s| s.as_str().to_string()));
        records.push(rec);
    }
    io::write_csv(path, &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    fn write_temp_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    pub(crate) fn toy_dataset(n_per_class: usize) -> Dataset {
        // alternating labels, x1 separates classes, x2 is constant-ish noise
        let mut labels = Vec::new();
        let mut x1 = Vec::new();
        let mut x2 = Vec::new();
        for i in 0..2 * n_per_class {
            let y = (i % 2) as u8;
            labels.push(y);
            x1.push(if y == 0 { i as f64 } else { 1000.0 + i as f64 });
            x2.push((i % 7) as f64);
        }
        Dataset::new(
            "toy".to_string(),
            vec![
                AttributeColumn {
                    name: "x1".to_string(),
                    kind: ColumnKind::Numeric,
                    values: x1,
                    categories: vec![],
                },
                AttributeColumn {
                    name: "x2".to_string(),
                    kind: ColumnKind::Numeric,
                    values: x2,
                    categories: vec![],
                },
            ],
            labels,
        )
        .unwrap()
    }

    #[test]
    fn load_csv_basic_types() {
        let f = write_temp_csv("x1,x2,y\n1.5,0.2,yes\n2.5,0.3,no\n3.5,0.4,yes\n");
        let ds = load_csv(f.path(), "y", &SchemaHints::new()).unwrap();
        assert_eq!(ds.feature_count(), 2);
        assert_eq!(ds.columns[0].kind, ColumnKind::Numeric);
        assert_eq!(ds.columns[1].kind, ColumnKind::Numeric);
        // labels sorted lexicographically: no=0, yes=1
        assert_eq!(ds.labels, vec![1, 0, 1]);
    }

    #[test]
    fn load_csv_non_binary_label_errors() {
        let f = write_temp_csv("x,y\n1,a\n2,b\n3,c\n");
        let err = load_csv(f.path(), "y", &SchemaHints::new()).unwrap_err();
        assert!(matches!(err, Error::NonBinaryLabel { .. }));
    }

    #[test]
    fn load_csv_zero_one_column_is_binary() {
        let f = write_temp_csv("x,z,y\n0,5,a\n1,6,b\n0,7,a\n1,8,b\n");
        let ds = load_csv(f.path(), "y", &SchemaHints::new()).unwrap();
        assert_eq!(ds.columns[0].kind, ColumnKind::Binary);
        assert_eq!(ds.columns[0].values, vec![0.0, 1.0, 0.0, 1.0]);
        assert_eq!(ds.columns[1].kind, ColumnKind::Numeric);
    }

    #[test]
    fn load_csv_symbolic_ids_are_sorted() {
        let f = write_temp_csv("c,y\nred,0\ngreen,1\nblue,0\nred,1\n");
        let ds = load_csv(f.path(), "y", &SchemaHints::new()).unwrap();
        assert_eq!(ds.columns[0].kind, ColumnKind::Symbolic);
        assert_eq!(ds.columns[0].categories, vec!["blue", "green", "red"]);
        assert_eq!(ds.columns[0].values, vec![2.0, 1.0, 0.0, 2.0]);
    }

    #[test]
    fn load_csv_drops_rows_with_missing_cells() {
        let f = write_temp_csv("x,y\n1,0\n,1\n3,1\n4,0\n");
        let ds = load_csv(f.path(), "y", &SchemaHints::new()).unwrap();
        assert_eq!(ds.row_count(), 3);
    }

    #[test]
    fn schema_hints_override_inference() {
        let f = write_temp_csv("x,y\n1.5,0\n2.5,1\n3.5,0\n");
        let mut hints = SchemaHints::new();
        hints.insert("x".to_string(), ColumnKind::Symbolic);
        let ds = load_csv(f.path(), "y", &hints).unwrap();
        assert_eq!(ds.columns[0].kind, ColumnKind::Symbolic);
        assert_eq!(ds.columns[0].categories, vec!["1.5", "2.5", "3.5"]);
    }

    #[test]
    fn numeric_hint_on_text_column_is_unparseable() {
        let f = write_temp_csv("x,y\nred,0\ngreen,1\nblue,0\n");
        let mut hints = SchemaHints::new();
        hints.insert("x".to_string(), ColumnKind::Numeric);
        let err = load_csv(f.path(), "y", &hints).unwrap_err();
        assert!(matches!(err, Error::UnparseableCell { .. }));
    }

    #[test]
    fn load_csv_duplicate_columns_error() {
        let f = write_temp_csv("x,x,y\n1,2,0\n3,4,1\n");
        let err = load_csv(f.path(), "y", &SchemaHints::new()).unwrap_err();
        assert!(matches!(err, Error::DuplicateColumn(_)));
    }

    #[test]
    fn load_csv_missing_file_errors() {
        let err = load_csv(Path::new("/nonexistent/x.csv"), "y", &SchemaHints::new());
        assert!(err.is_err());
    }

    #[test]
    fn split_is_stratified_and_deterministic() {
        let ds = toy_dataset(50);
        let (tr, te) = split(&ds, 0.3, 42).unwrap();
        assert_eq!(tr.row_count(), 70);
        assert_eq!(te.row_count(), 30);
        assert_eq!(tr.labels.iter().filter(|&&l| l == 1).count(), 35);
        assert_eq!(te.labels.iter().filter(|&&l| l == 1).count(), 15);
        let (tr2, te2) = split(&ds, 0.3, 42).unwrap();
        assert_eq!(tr.labels, tr2.labels);
        assert_eq!(tr.columns[0].values, tr2.columns[0].values);
        assert_eq!(te.labels, te2.labels);
        assert_eq!(te.columns[0].values, te2.columns[0].values);
    }

    #[test]
    fn split_rejects_tiny_datasets() {
        let ds = toy_dataset(2);
        assert!(matches!(split(&ds, 0.3, 1), Err(Error::TooFewRows(4))));
    }

    #[test]
    fn split_partitions_are_disjoint_and_cover() {
        let ds = toy_dataset(20);
        let (tr, te) = split(&ds, 0.25, 7).unwrap();
        let mut all: Vec<f64> = tr.columns[0]
            .values
            .iter()
            .chain(te.columns[0].values.iter())
            .cloned()
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut orig = ds.columns[0].values.clone();
        orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(all, orig);
    }

    #[test]
    fn entropy_balanced_is_one_bit() {
        assert_abs_diff_eq!(class_entropy_bits(&[0, 1, 0, 1]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(class_entropy_bits(&[1, 1, 1]), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_75_25() {
        // -0.75*log2(0.75) - 0.25*log2(0.25) = 0.8112781244591328
        let labels = [1, 1, 1, 0];
        assert_abs_diff_eq!(
            class_entropy_bits(&labels),
            0.8112781244591328,
            epsilon = 1e-12
        );
    }

    #[test]
    fn meta_features_counts_and_percentages() {
        let ds = toy_dataset(10);
        let p = meta_features(&ds);
        assert_eq!(p.number_of_features, 2.0);
        assert_eq!(p.number_of_instances, 20.0);
        assert_abs_diff_eq!(p.dimensionality, 0.1, epsilon = 1e-12);
        assert_eq!(p.number_of_numeric_features, 2.0);
        assert_eq!(p.number_of_symbolic_features, 0.0);
        assert_eq!(p.number_of_binary_features, 0.0);
        assert_abs_diff_eq!(
            p.majority_class_percentage + p.minority_class_percentage,
            100.0,
            epsilon = 1e-9
        );
        // alternating labels: no consecutive pair matches
        assert_abs_diff_eq!(p.autocorrelation, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.class_entropy, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn meta_features_single_class_degenerate() {
        let mut ds = toy_dataset(10);
        ds.labels = vec![1; 20];
        let p = meta_features(&ds);
        assert_eq!(p.class_entropy, 0.0);
        assert_eq!(p.majority_class_percentage, 100.0);
        assert_abs_diff_eq!(p.autocorrelation, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn binarize_thresholds_at_mean_with_ties_high() {
        let rows = vec![vec![1.0], vec![3.0]];
        let t = binarize_numeric_table(
            &["a".into(), "b".into()],
            &["p".into()],
            &rows,
        )
        .unwrap();
        assert_eq!(t.cells, vec![vec![HsSymbol::S], vec![HsSymbol::H]]);

        let rows = vec![vec![2.0], vec![2.0]];
        let t = binarize_numeric_table(
            &["a".into(), "b".into()],
            &["p".into()],
            &rows,
        )
        .unwrap();
        assert_eq!(t.cells, vec![vec![HsSymbol::H], vec![HsSymbol::H]]);

        let rows = vec![vec![10.0], vec![20.0], vec![30.0]];
        let t = binarize_numeric_table(
            &["a".into(), "b".into(), "c".into()],
            &["p".into()],
            &rows,
        )
        .unwrap();
        assert_eq!(
            t.cells,
            vec![vec![HsSymbol::S], vec![HsSymbol::H], vec![HsSymbol::H]]
        );
    }

    #[test]
    fn binarize_needs_two_rows() {
        let rows = vec![vec![1.0]];
        assert!(binarize_numeric_table(&["a".into()], &["p".into()], &rows).is_err());
    }
}
