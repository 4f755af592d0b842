//! `exirt cluster`: dataset meta-property clustering — silhouette scan,
//! k-means assignment, h/s binarization, and the correspondence-analysis map.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;

use exirt_core::analytics::{kmeans, mca, silhouette_scan, PropertyTable};
use exirt_core::dataset::{
    binarize_numeric_table, load_csv, meta_features, write_property_csv, PropertyVector,
    SchemaHints, PROPERTY_NAMES,
};
use exirt_core::io::atomic_write;
use exirt_core::svg;

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Property CSV: first column dataset names, remaining columns numeric.
    #[arg(long, conflicts_with = "data_dir")]
    pub properties: Option<PathBuf>,
    /// Directory of dataset CSVs to compute properties from.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Label column name, used with --data-dir.
    #[arg(long, default_value = "label")]
    pub label: String,
    /// Fix the cluster count instead of selecting it by silhouette.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value = "cluster-out")]
    pub out: PathBuf,
}

pub fn run_cluster(args: &ClusterArgs) -> Result<()> {
    let table = match (&args.properties, &args.data_dir) {
        (Some(path), None) => PropertyTable::read_csv(path)?,
        (None, Some(dir)) => properties_from_dir(dir, &args.label, &args.out)?,
        _ => bail!("exactly one of --properties or --data-dir is required"),
    };
    if table.n_rows() < 3 {
        bail!("clustering needs at least 3 datasets, got {}", table.n_rows());
    }

    let scan = silhouette_scan(&table, args.k_min..=args.k_max, args.seed, args.restarts)?;
    scan.write_csv(&args.out.join("silhouette.csv"))?;
    let k = args.k.unwrap_or(scan.chosen_k);
    let assignment = kmeans(&table, k, args.seed, args.restarts)?;
    assignment.write_csv(&args.out.join("clusters.csv"))?;
    println!(
        "chose K={} (scan best K={} at mean silhouette {:.4}); assignment silhouette {:.4}",
        k, scan.chosen_k, scan.chosen_silhouette, assignment.silhouette_mean
    );

    let binarized = binarize_numeric_table(&table.row_names, &table.column_names, &table.rows)?;
    exirt_core::dataset::write_binarized_csv(&args.out.join("binarized.csv"), &binarized)?;

    let result = mca(&binarized)?;
    result.write_csv(&args.out.join("mca_rows.csv"), &args.out.join("mca_cols.csv"))?;
    let mut points = Vec::new();
    for (i, name) in result.row_names.iter().enumerate() {
        let cluster = assignment.cluster_of(name).unwrap_or(0);
        points.push((
            result.row_coords[i].first().copied().unwrap_or(0.0),
            result.row_coords[i].get(1).copied().unwrap_or(0.0),
            name.clone(),
            cluster,
        ));
    }
    for (j, label) in result.column_labels.iter().enumerate() {
        points.push((
            result.col_coords[j].first().copied().unwrap_or(0.0),
            result.col_coords[j].get(1).copied().unwrap_or(0.0),
            label.clone(),
            5, // fixed palette slot distinguishing categories from datasets
        ));
    }
    let chart = svg::scatter("Dataset and property-category map", &points);
    atomic_write(&args.out.join("mca.svg"), chart.as_bytes())?;
    Ok(())
}

/// Compute the 15 meta-properties for every CSV in a directory (sorted by
/// file name) and persist them as properties.csv.
fn properties_from_dir(dir: &Path, label: &str, out: &Path) -> Result<PropertyTable> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "csv").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no CSV files under {}", dir.display());
    }
    let mut named: Vec<(String, PropertyVector)> = Vec::new();
    for path in &paths {
        let ds = load_csv(path, label, &SchemaHints::new())
            .with_context(|| format!("loading {}", path.display()))?;
        named.push((ds.name.clone(), meta_features(&ds)));
    }
    write_property_csv(&out.join("properties.csv"), &named)?;
    Ok(PropertyTable {
        row_names: named.iter().map(|(n, _)| n.clone()).collect(),
        column_names: PROPERTY_NAMES.iter().map(|s| s.to_string()).collect(),
        rows: named.iter().map(|(_, p)| p.to_vec()).collect(),
    })
}
