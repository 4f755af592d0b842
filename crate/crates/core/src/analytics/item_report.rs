//! Item-parameter reports across datasets and clusters: threshold percentages
//! and median item characteristic curves.

use std::collections::BTreeMap;
use std::path::Path;

use crate::analytics::boxplot::{boxplot_stats, FiveNumberSummary};
use crate::analytics::cluster::ClusterAssignment;
use crate::error::{Error, Result};
use crate::io;
use crate::irt::{icc_probability, ItemParameters};

const PARAM_NAMES: [&str; 3] = ["discrimination", "difficulty", "guessing"];

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len().max(1) as f64
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per-dataset means, global thresholds, and per-cluster distributions of the
/// percentage of items at or above each threshold.
#[derive(Debug, Clone)]
pub struct ItemParamReport {
    /// Grand mean of per-dataset means, per parameter (a, b, c).
    pub thresholds: [f64; 3],
    /// dataset -> (cluster, [mean_a, mean_b, mean_c], [pct_a, pct_b, pct_c]).
    pub per_dataset: BTreeMap<String, (usize, [f64; 3], [f64; 3])>,
    /// (cluster, parameter name) -> summary of per-dataset percentages.
    pub per_cluster: BTreeMap<(usize, String), FiveNumberSummary>,
}

/// Build the threshold report from fitted item parameters per dataset.
pub fn item_param_threshold_report(
    params: &BTreeMap<String, ItemParameters>,
    clusters: &ClusterAssignment,
) -> Result<ItemParamReport> {
    if params.is_empty() {
        return Err(Error::Analytics("no item parameters to report".into()));
    }
    let mut per_dataset_means: BTreeMap<String, [f64; 3]> = BTreeMap::new();
    for (name, items) in params {
        if items.is_empty() {
            return Err(Error::Analytics(format!("dataset '{name}' has no items")));
        }
        per_dataset_means.insert(name.clone(), [mean(&items.a), mean(&items.b), mean(&items.c)]);
    }
    let thresholds = [
        mean(&per_dataset_means.values().map(|m| m[0]).collect::<Vec<_>>()),
        mean(&per_dataset_means.values().map(|m| m[1]).collect::<Vec<_>>()),
        mean(&per_dataset_means.values().map(|m| m[2]).collect::<Vec<_>>()),
    ];

    let mut per_dataset = BTreeMap::new();
    for (name, items) in params {
        let cluster = clusters.cluster_of(name).ok_or_else(|| {
            Error::Analytics(format!("dataset '{name}' missing from cluster assignment"))
        })?;
        let pct = |values: &[f64], threshold: f64| {
            100.0 * values.iter().filter(|&&v| v >= threshold).count() as f64
                / values.len() as f64
        };
        per_dataset.insert(
            name.clone(),
            (
                cluster,
                per_dataset_means[name],
                [
                    pct(&items.a, thresholds[0]),
                    pct(&items.b, thresholds[1]),
                    pct(&items.c, thresholds[2]),
                ],
            ),
        );
    }

    let mut per_cluster = BTreeMap::new();
    let cluster_ids: Vec<usize> = {
        let mut ids: Vec<usize> = per_dataset.values().map(|(c, _, _)| *c).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    for &cluster in &cluster_ids {
        for (p, pname) in PARAM_NAMES.iter().enumerate() {
            let values: Vec<f64> = per_dataset
                .values()
                .filter(|(c, _, _)| *c == cluster)
                .map(|(_, _, pcts)| pcts[p])
                .collect();
            if let Some(summary) = boxplot_stats(&values) {
                per_cluster.insert((cluster, pname.to_string()), summary);
            }
        }
    }

    Ok(ItemParamReport {
        thresholds,
        per_dataset,
        per_cluster,
    })
}

impl ItemParamReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut records = vec![vec![
            "dataset".to_string(),
            "cluster".to_string(),
            "mean_discrimination".to_string(),
            "mean_difficulty".to_string(),
            "mean_guessing".to_string(),
            "pct_discrimination_ge_threshold".to_string(),
            "pct_difficulty_ge_threshold".to_string(),
            "pct_guessing_ge_threshold".to_string(),
        ]];
        for (name, (cluster, means, pcts)) in &self.per_dataset {
            records.push(vec![
                name.clone(),
                cluster.to_string(),
                io::fmt_f64(means[0]),
                io::fmt_f64(means[1]),
                io::fmt_f64(means[2]),
                io::fmt_f64(pcts[0]),
                io::fmt_f64(pcts[1]),
                io::fmt_f64(pcts[2]),
            ]);
        }
        records.push(vec![
            "_threshold".to_string(),
            String::new(),
            io::fmt_f64(self.thresholds[0]),
            io::fmt_f64(self.thresholds[1]),
            io::fmt_f64(self.thresholds[2]),
            String::new(),
            String::new(),
            String::new(),
        ]);
        io::write_csv(path, &records)
    }

    /// Groups for the box SVG: one per (parameter, cluster).
    pub fn boxplot_groups(&self) -> Vec<(String, FiveNumberSummary)> {
        self.per_cluster
            .iter()
            .map(|((cluster, pname), summary)| {
                (format!("{pname} / cluster {cluster}"), summary.clone())
            })
            .collect()
    }
}

/// Median item characteristic curve of one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct IccCurve {
    pub cluster: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// (theta, probability) sampled over [-4, 4] at 0.1 steps.
    pub samples: Vec<(f64, f64)>,
}

/// Per cluster: mean (a,b,c) per dataset, then the component-wise median
/// across that cluster's datasets, sampled as an ICC.
pub fn median_icc_curves(
    params: &BTreeMap<String, ItemParameters>,
    clusters: &ClusterAssignment,
) -> Result<Vec<IccCurve>> {
    let mut by_cluster: BTreeMap<usize, Vec<[f64; 3]>> = BTreeMap::new();
    for (name, items) in params {
        let cluster = clusters.cluster_of(name).ok_or_else(|| {
            Error::Analytics(format!("dataset '{name}' missing from cluster assignment"))
        })?;
        by_cluster
            .entry(cluster)
            .or_default()
            .push([mean(&items.a), mean(&items.b), mean(&items.c)]);
    }
    let mut curves = Vec::new();
    for (cluster, triples) in by_cluster {
        let a = median(&triples.iter().map(|t| t[0]).collect::<Vec<_>>());
        let b = median(&triples.iter().map(|t| t[1]).collect::<Vec<_>>());
        let c = median(&triples.iter().map(|t| t[2]).collect::<Vec<_>>());
        let samples = (0..=80)
            .map(|k| {
                let theta = -4.0 + 0.1 * k as f64;
                (theta, icc_probability(theta, a, b, c))
            })
            .collect();
        curves.push(IccCurve {
            cluster,
            a,
            b,
            c,
            samples,
        });
    }
    Ok(curves)
}

/// Write the sampled curves: cluster, theta, probability.
pub fn write_icc_curves_csv(path: &Path, curves: &[IccCurve]) -> Result<()> {
    let mut records = vec![vec![
        "cluster".to_string(),
        "theta".to_string(),
        "probability".to_string(),
    ]];
    for curve in curves {
        for &(theta, p) in &curve.samples {
            records.push(vec![
                curve.cluster.to_string(),
                io::fmt_f64(theta),
                io::fmt_f64(p),
            ]);
        }
    }
    io::write_csv(path, &records)
}
