//! `exirt report`: item-parameter analyses over a finished benchmark run —
//! per-cluster threshold percentages and median item characteristic curves.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;

use exirt_core::analytics::{
    item_param_threshold_report, kmeans, median_icc_curves, silhouette_scan, ClusterAssignment,
    PropertyTable,
};
use exirt_core::analytics::item_report::write_icc_curves_csv;
use exirt_core::ensemble::ModelFamily;
use exirt_core::io::{atomic_write, fmt_f64, write_csv};
use exirt_core::irt::{read_item_params_csv, ItemParameters};
use exirt_core::svg;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Benchmark output directory to analyze.
    #[arg(long)]
    pub run: PathBuf,
    /// Cluster assignment CSV; computed from the run's properties.csv when
    /// not given.
    #[arg(long)]
    pub clusters: Option<PathBuf>,
    /// Fix the cluster count when computing the assignment here.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Output directory; defaults to `<run>/report`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_report(args: &ReportArgs) -> Result<()> {
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.run.join("report"));

    let per_family = collect_item_params(&args.run)?;
    if per_family.is_empty() {
        bail!("no item-parameter files found under {}", args.run.display());
    }

    let clusters = match &args.clusters {
        Some(path) => ClusterAssignment::read_csv(path)?,
        None => {
            let props_path = args.run.join("properties.csv");
            let table = PropertyTable::read_csv(&props_path).with_context(|| {
                format!(
                    "reading {} (pass --clusters to supply an assignment)",
                    props_path.display()
                )
            })?;
            let k = match args.k {
                Some(k) => k,
                None if table.n_rows() >= 3 => {
                    silhouette_scan(&table, 2..=10, args.seed, args.restarts)?.chosen_k
                }
                None => bail!("too few datasets to scan K; pass --k"),
            };
            let assignment = kmeans(&table, k, args.seed, args.restarts)?;
            assignment.write_csv(&out.join("clusters.csv"))?;
            assignment
        }
    };

    let mut summary = vec![vec![
        "family".to_string(),
        "datasets".to_string(),
        "threshold_discrimination".to_string(),
        "threshold_difficulty".to_string(),
        "threshold_guessing".to_string(),
    ]];
    for (family, params) in &per_family {
        let family_name = family.as_str();
        let report = item_param_threshold_report(params, &clusters)?;
        report.write_csv(&out.join(format!("item_params_{family_name}.csv")))?;
        let chart = svg::grouped_boxplot(
            &format!("Items at or above parameter thresholds [{family_name}]"),
            "% of items",
            &report.boxplot_groups(),
        );
        atomic_write(
            &out.join(format!("item_params_{family_name}.svg")),
            chart.as_bytes(),
        )?;

        let curves = median_icc_curves(params, &clusters)?;
        write_icc_curves_csv(&out.join(format!("icc_curves_{family_name}.csv")), &curves)?;
        let series: Vec<(String, Vec<(f64, f64)>)> = curves
            .iter()
            .map(|c| (format!("cluster {}", c.cluster), c.samples.clone()))
            .collect();
        let chart = svg::multi_line(
            &format!("Median item characteristic curves [{family_name}]"),
            "ability",
            "probability of correct answer",
            &series,
        );
        atomic_write(
            &out.join(format!("icc_curves_{family_name}.svg")),
            chart.as_bytes(),
        )?;

        summary.push(vec![
            family_name.to_string(),
            params.len().to_string(),
            fmt_f64(report.thresholds[0]),
            fmt_f64(report.thresholds[1]),
            fmt_f64(report.thresholds[2]),
        ]);
    }
    write_csv(&out.join("summary.csv"), &summary)?;
    println!("report written to {}", out.display());
    Ok(())
}

/// Find `<run>/<dataset>/<family>/exirt/item_params.csv` files.
fn collect_item_params(
    run: &Path,
) -> Result<BTreeMap<ModelFamily, BTreeMap<String, ItemParameters>>> {
    let mut per_family: BTreeMap<ModelFamily, BTreeMap<String, ItemParameters>> = BTreeMap::new();
    let mut dataset_dirs: Vec<PathBuf> = std::fs::read_dir(run)
        .with_context(|| format!("reading {}", run.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dataset_dirs.sort();
    for ds_dir in dataset_dirs {
        let dataset = ds_dir
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        for family in [ModelFamily::RandomForest, ModelFamily::GradientBoosting] {
            let path = ds_dir
                .join(family.as_str())
                .join("exirt")
                .join("item_params.csv");
            if path.exists() {
                let (_, items) = read_item_params_csv(&path)?;
                per_family
                    .entry(family)
                    .or_default()
                    .insert(dataset.clone(), items);
            }
        }
    }
    Ok(per_family)
}
