//! The twelve input variations and the respondent plan that drives the loop
//! of models.
//!
//! A respondent is one perturbed variant of the model's test input: the plan
//! lists which attribute sets receive which variation, respondent 0 always
//! being the untouched original. All statistics a variation needs (mean, std,
//! min, max) come from the training split so the perturbation itself never
//! leaks test information.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnKind, Dataset};
use crate::error::{Error, Result};
use crate::io;

/// The twelve ways a column can be disturbed. Codes are stable for
/// serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationKind {
    IndexPermutation,
    AdditiveNoise,
    SetZero,
    RescaleOffScale,
    SortAscending,
    SortDescending,
    ReverseIndex,
    Binning,
    Negate,
    ReplaceMean,
    ReplaceStd,
    Standardize,
}

impl VariationKind {
    pub const ALL: [VariationKind; 12] = [
        VariationKind::IndexPermutation,
        VariationKind::AdditiveNoise,
        VariationKind::SetZero,
        VariationKind::RescaleOffScale,
        VariationKind::SortAscending,
        VariationKind::SortDescending,
        VariationKind::ReverseIndex,
        VariationKind::Binning,
        VariationKind::Negate,
        VariationKind::ReplaceMean,
        VariationKind::ReplaceStd,
        VariationKind::Standardize,
    ];

    pub fn code(self) -> u8 {
        Self::ALL.iter().position(|&k| k == self).unwrap() as u8
    }

    pub fn from_code(code: u8) -> Option<VariationKind> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            VariationKind::IndexPermutation => "index_permutation",
            VariationKind::AdditiveNoise => "additive_noise",
            VariationKind::SetZero => "set_zero",
            VariationKind::RescaleOffScale => "rescale_off_scale",
            VariationKind::SortAscending => "sort_ascending",
            VariationKind::SortDescending => "sort_descending",
            VariationKind::ReverseIndex => "reverse_index",
            VariationKind::Binning => "binning",
            VariationKind::Negate => "negate",
            VariationKind::ReplaceMean => "replace_mean",
            VariationKind::ReplaceStd => "replace_std",
            VariationKind::Standardize => "standardize",
        }
    }

    pub fn parse(s: &str) -> Option<VariationKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Kinds that compute with the column values rather than rearranging
    /// them; these fall back to index permutation on symbolic columns.
    pub fn requires_arithmetic(self) -> bool {
        matches!(
            self,
            VariationKind::AdditiveNoise
                | VariationKind::RescaleOffScale
                | VariationKind::Binning
                | VariationKind::Negate
                | VariationKind::ReplaceMean
                | VariationKind::ReplaceStd
                | VariationKind::Standardize
        )
    }
}

/// One respondent: the attribute set to disturb and the variation to apply.
/// `kind == None` (always respondent 0) is the unmodified original model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RespondentSpec {
    pub respondent_id: usize,
    /// Sorted column indices; empty for the original model.
    pub attribute_set: Vec<usize>,
    pub kind: Option<VariationKind>,
    pub seed: u64,
}

/// The ordered respondent population for one explain run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RespondentPlan {
    pub specs: Vec<RespondentSpec>,
    pub attribute_count: usize,
    pub kind_count: usize,
    pub max_arity: usize,
}

/// Expected plan size: 1 + v*f singletons (+ v*C(f,2) pairs at arity 2).
pub fn plan_size(f: usize, v: usize, max_arity: usize) -> usize {
    let pairs = if max_arity >= 2 { f * (f - 1) / 2 } else { 0 };
    1 + v * f + v * pairs
}

/// Build the deterministic respondent plan: original first, then singletons
/// ordered by (kind, attribute), then pairs by (kind, lexicographic pair).
/// Per-respondent seed is `base_seed XOR respondent_id`.
pub fn build_plan(
    f: usize,
    kinds: &[VariationKind],
    max_arity: usize,
    base_seed: u64,
) -> Result<RespondentPlan> {
    if f == 0 {
        return Err(Error::InvalidPlan("attribute count must be >= 1".into()));
    }
    if !(1..=2).contains(&max_arity) {
        return Err(Error::InvalidPlan(format!(
            "max_arity must be 1 or 2, got {max_arity}"
        )));
    }
    if kinds.is_empty() {
        return Err(Error::InvalidPlan("no variation kinds given".into()));
    }
    let mut dedup = kinds.to_vec();
    dedup.sort();
    dedup.dedup();
    if dedup.len() != kinds.len() {
        return Err(Error::InvalidPlan("duplicate variation kinds".into()));
    }

    let mut specs = Vec::with_capacity(plan_size(f, kinds.len(), max_arity));
    let push = |attribute_set: Vec<usize>, kind: Option<VariationKind>, specs: &mut Vec<RespondentSpec>| {
        let id = specs.len();
        specs.push(RespondentSpec {
            respondent_id: id,
            attribute_set,
            kind,
            seed: base_seed ^ id as u64,
        });
    };

    push(Vec::new(), None, &mut specs);
    for &kind in kinds {
        for a in 0..f {
            push(vec![a], Some(kind), &mut specs);
        }
    }
    if max_arity >= 2 {
        for &kind in kinds {
            for a in 0..f {
                for b in (a + 1)..f {
                    push(vec![a, b], Some(kind), &mut specs);
                }
            }
        }
    }
    Ok(RespondentPlan {
        specs,
        attribute_count: f,
        kind_count: kinds.len(),
        max_arity,
    })
}

/// Training-split statistics one column's variations depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// True for symbolic columns, where arithmetic variations fall back to
    /// index permutation.
    pub symbolic: bool,
}

/// Compute per-column stats from the training split.
pub fn column_stats(train: &Dataset) -> Vec<ColumnStats> {
    train
        .columns
        .iter()
        .map(|col| {
            let n = col.values.len().max(1) as f64;
            let mean = col.values.iter().sum::<f64>() / n;
            let var = col.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let min = col.values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = col.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            ColumnStats {
                mean,
                std: var.sqrt(),
                min: if min.is_finite() { min } else { 0.0 },
                max: if max.is_finite() { max } else { 0.0 },
                symbolic: col.kind == ColumnKind::Symbolic,
            }
        })
        .collect()
}

const BIN_COUNT: usize = 10;

fn column_rng(seed: u64, column: usize) -> ChaCha8Rng {
    // splitmix-style spreading so per-column streams are independent of the
    // order columns are processed in
    ChaCha8Rng::seed_from_u64(seed ^ (column as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Apply one respondent's variation to a copy of the attribute matrix.
/// Columns outside the attribute set are returned bit-exactly unchanged.
pub fn apply_variation(
    rows: &[Vec<f64>],
    spec: &RespondentSpec,
    stats: &[ColumnStats],
) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = rows.to_vec();
    let kind = match spec.kind {
        None => return out,
        Some(k) => k,
    };
    if out.is_empty() {
        return out;
    }
    for &col in &spec.attribute_set {
        let effective = if stats[col].symbolic && kind.requires_arithmetic() {
            log::warn!(
                "respondent {}: {} is not defined on symbolic column {}, using index_permutation",
                spec.respondent_id,
                kind.name(),
                col
            );
            VariationKind::IndexPermutation
        } else {
            kind
        };
        apply_to_column(&mut out, col, effective, &stats[col], spec.seed);
    }
    out
}

fn apply_to_column(
    rows: &mut [Vec<f64>],
    col: usize,
    kind: VariationKind,
    st: &ColumnStats,
    seed: u64,
) {
    let n = rows.len();
    let mut column: Vec<f64> = rows.iter().map(|r| r[col]).collect();
    match kind {
        VariationKind::IndexPermutation => {
            let mut rng = column_rng(seed, col);
            column.shuffle(&mut rng);
        }
        VariationKind::AdditiveNoise => {
            let mut rng = column_rng(seed, col);
            if st.std > 0.0 {
                let normal = Normal::new(0.0, st.std).expect("std > 0");
                for v in column.iter_mut() {
                    *v += normal.sample(&mut rng);
                }
            }
        }
        VariationKind::SetZero => {
            column.iter_mut().for_each(|v| *v = 0.0);
        }
        VariationKind::RescaleOffScale => {
            // map onto [0,1], or onto [1,2] when the training range already
            // sits inside [0,1]
            let offset = if st.min >= 0.0 && st.max <= 1.0 { 1.0 } else { 0.0 };
            let span = st.max - st.min;
            for v in column.iter_mut() {
                let unit = if span > 0.0 { (*v - st.min) / span } else { 0.0 };
                *v = unit + offset;
            }
        }
        VariationKind::SortAscending => {
            column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        VariationKind::SortDescending => {
            column.sort_by(|a, b| b.partial_cmp(a).unwrap());
        }
        VariationKind::ReverseIndex => {
            column.reverse();
        }
        VariationKind::Binning => {
            let span = st.max - st.min;
            if span > 0.0 {
                let width = span / BIN_COUNT as f64;
                for v in column.iter_mut() {
                    let idx = (((*v - st.min) / width).floor() as i64)
                        .clamp(0, BIN_COUNT as i64 - 1) as f64;
                    *v = st.min + (idx + 0.5) * width;
                }
            } else {
                column.iter_mut().for_each(|v| *v = st.min);
            }
        }
        VariationKind::Negate => {
            column.iter_mut().for_each(|v| *v = -*v);
        }
        VariationKind::ReplaceMean => {
            column.iter_mut().for_each(|v| *v = st.mean);
        }
        VariationKind::ReplaceStd => {
            column.iter_mut().for_each(|v| *v = st.std);
        }
        VariationKind::Standardize => {
            if st.std > 0.0 {
                column.iter_mut().for_each(|v| *v = (*v - st.mean) / st.std);
            } else {
                column.iter_mut().for_each(|v| *v = 0.0);
            }
        }
    }
    for i in 0..n {
        rows[i][col] = column[i];
    }
}

/// Dump a plan as an audit CSV: respondent_id, kind, attribute_set.
pub fn write_plan_csv(path: &Path, plan: &RespondentPlan) -> Result<()> {
    let mut records = vec![vec![
        "respondent_id".to_string(),
        "kind".to_string(),
        "attribute_set".to_string(),
    ]];
    for spec in &plan.specs {
        records.push(vec![
            spec.respondent_id.to_string(),
            spec.kind.map(|k| k.name().to_string()).unwrap_or_else(|| "none".to_string()),
            spec.attribute_set
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ]);
    }
    io::write_csv(path, &records)
}
