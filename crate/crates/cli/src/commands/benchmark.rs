//! `exirt benchmark`: the full pipeline over a manifest of datasets — train
//! both families, run all four measures, emit per-model correlation matrices
//! and the cross-run boxplot summary.
//!
//! Dataset-by-family jobs are independent and may run on a thread pool; each
//! job owns its output subtree, every seed derives from the manifest, and a
//! failing job is isolated, logged, and surfaced in the exit code without
//! touching other outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use rayon::prelude::*;

use exirt_core::analytics::{boxplot_stats, correlation_matrix, CorrelationMatrix};
use exirt_core::baselines::{info_gain_rank, loco_rank, permutation_importance_rank};
use exirt_core::dataset::{
    binarize_properties, load_csv, meta_features, split, write_binarized_csv, write_property_csv,
    Dataset, PropertyVector, SchemaHints,
};
use exirt_core::ensemble::{save_model, train, ModelFamily};
use exirt_core::explain::{explain, export_report, ExplainConfig};
use exirt_core::io::{atomic_write, fmt_f64, write_csv};
use exirt_core::irt::ItemParameters;
use exirt_core::svg;

use crate::manifest::{parse_manifest, ResolvedDataset, RunConfig};

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Manifest TOML listing datasets, families, seeds and hyperparameters.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory (overrides the manifest `out` key and EXIRT_OUT).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of dataset-by-family jobs to run concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// One completed dataset-by-family job.
pub struct JobOutput {
    pub dataset: String,
    pub family: ModelFamily,
    pub matrix: CorrelationMatrix,
    pub item_params: ItemParameters,
}

pub struct BenchmarkOutcome {
    pub out_dir: PathBuf,
    pub jobs: Vec<JobOutput>,
    pub failures: Vec<String>,
}

impl BenchmarkOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

pub fn run_benchmark(args: &BenchmarkArgs) -> Result<BenchmarkOutcome> {
    let config = parse_manifest(&args.manifest)?;
    let out_dir = resolve_out_dir(args.out.clone(), &config);
    run_with_config(config, out_dir, args.jobs)
}

fn resolve_out_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.out.clone())
        .or_else(|| std::env::var_os("EXIRT_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("exirt-out"))
}

pub fn run_with_config(
    config: RunConfig,
    out_dir: PathBuf,
    jobs: usize,
) -> Result<BenchmarkOutcome> {
    let manifest_json = serde_json::to_vec_pretty(&config.resolved)?;
    atomic_write(&out_dir.join("run_manifest.json"), &manifest_json)?;

    // load every dataset up front; loading failures are isolated per dataset
    let mut datasets: Vec<(ResolvedDataset, Dataset)> = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    for entry in &config.datasets {
        match load_csv(Path::new(&entry.path), &entry.label, &SchemaHints::new()) {
            Ok(mut ds) => {
                ds.name = entry.name.clone();
                datasets.push((entry.clone(), ds));
            }
            Err(e) => failures.push(format!("{}: load failed: {e}", entry.name)),
        }
    }

    // dataset meta-properties (independent of family)
    let properties: Vec<(String, PropertyVector)> = datasets
        .iter()
        .map(|(entry, ds)| (entry.name.clone(), meta_features(ds)))
        .collect();
    write_property_csv(&out_dir.join("properties.csv"), &properties)?;
    if properties.len() >= 2 {
        let table = binarize_properties(&properties)?;
        write_binarized_csv(&out_dir.join("binarized.csv"), &table)?;
    }

    // dataset x family jobs
    let job_list: Vec<(&ResolvedDataset, &Dataset, ModelFamily)> = datasets
        .iter()
        .flat_map(|(entry, ds)| {
            config
                .families
                .iter()
                .map(move |&family| (entry, ds, family))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("building job pool")?;
    let results: Vec<std::result::Result<JobOutput, String>> = pool.install(|| {
        job_list
            .par_iter()
            .map(|(entry, ds, family)| {
                run_job(entry, ds, *family, &config, &out_dir)
                    .map_err(|e| format!("{} / {}: {e}", entry.name, family.as_str()))
            })
            .collect()
    });

    let mut outputs = Vec::new();
    for result in results {
        match result {
            Ok(job) => outputs.push(job),
            Err(message) => {
                log::error!("{message}");
                failures.push(message);
            }
        }
    }

    write_summary(&out_dir, &outputs)?;

    if !failures.is_empty() {
        let listing = failures.join("\n");
        atomic_write(&out_dir.join("failures.txt"), listing.as_bytes())?;
    }
    Ok(BenchmarkOutcome {
        out_dir,
        jobs: outputs,
        failures,
    })
}

fn run_job(
    entry: &ResolvedDataset,
    ds: &Dataset,
    family: ModelFamily,
    config: &RunConfig,
    out_dir: &Path,
) -> anyhow::Result<JobOutput> {
    let job_dir = out_dir.join(&entry.name).join(family.as_str());
    let (train_set, test_set) = split(ds, config.test_fraction, entry.seed)?;
    let hyper = &config.hyper[&family];
    let model = train(&train_set, family, hyper, entry.seed)?;
    save_model(&model, &job_dir.join("model.json"))?;

    let explain_cfg = ExplainConfig {
        kinds: config.kinds.clone(),
        max_arity: config.max_arity,
        base_seed: entry.seed,
        search: config.search,
        ..ExplainConfig::default()
    };
    let report = explain(&model, &train_set, &test_set, &explain_cfg)?;
    export_report(&report, &job_dir.join("exirt"))?;

    let permutation = permutation_importance_rank(&model, &test_set, config.repeats, entry.seed)?;
    permutation.write_csv(&job_dir.join("permutation").join("rank.csv"))?;
    let loco = loco_rank(&train_set, &test_set, family, hyper, entry.seed)?;
    loco.write_csv(&job_dir.join("loco").join("rank.csv"))?;
    let infogain = info_gain_rank(&train_set)?;
    infogain.write_csv(&job_dir.join("infogain").join("rank.csv"))?;

    let mut ranks = BTreeMap::new();
    ranks.insert("exirt".to_string(), report.rank.clone());
    ranks.insert("permutation".to_string(), permutation);
    ranks.insert("loco".to_string(), loco);
    ranks.insert("infogain".to_string(), infogain);
    let matrix = correlation_matrix(&ranks)?;
    matrix.write_csv(&job_dir.join("correlation_matrix.csv"))?;

    Ok(JobOutput {
        dataset: entry.name.clone(),
        family,
        matrix,
        item_params: report.item_params,
    })
}

/// Reporting convention, not a statistical claim: |rho| >= 0.7 counts as
/// high, 0.3..0.7 moderate, below 0.3 insignificant.
fn correlation_band(rho: f64) -> &'static str {
    let v = rho.abs();
    if v >= 0.7 {
        "high"
    } else if v >= 0.3 {
        "moderate"
    } else {
        "insignificant"
    }
}

/// Grouped five-number summaries of the pairwise correlations, one group per
/// (measure pair, family), plus the grouped boxplot SVG.
fn write_summary(out_dir: &Path, jobs: &[JobOutput]) -> Result<()> {
    let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for job in jobs {
        let measures = &job.matrix.measures;
        for i in 0..measures.len() {
            for j in (i + 1)..measures.len() {
                let pair = format!("{}-{}", measures[i], measures[j]);
                groups
                    .entry((pair, job.family.as_str().to_string()))
                    .or_default()
                    .push(job.matrix.rho[i][j]);
            }
        }
    }

    let mut records = vec![vec![
        "measure_pair".to_string(),
        "family".to_string(),
        "count".to_string(),
        "lower_whisker".to_string(),
        "q1".to_string(),
        "median".to_string(),
        "q3".to_string(),
        "upper_whisker".to_string(),
        "median_band".to_string(),
        "outliers".to_string(),
    ]];
    let mut svg_groups = Vec::new();
    for ((pair, family), values) in &groups {
        if let Some(s) = boxplot_stats(values) {
            records.push(vec![
                pair.clone(),
                family.clone(),
                s.count.to_string(),
                fmt_f64(s.lower_whisker),
                fmt_f64(s.q1),
                fmt_f64(s.median),
                fmt_f64(s.q3),
                fmt_f64(s.upper_whisker),
                correlation_band(s.median).to_string(),
                s.outliers
                    .iter()
                    .map(|v| fmt_f64(*v))
                    .collect::<Vec<_>>()
                    .join(";"),
            ]);
            svg_groups.push((format!("{pair} [{family}]"), s));
        }
    }
    if jobs.is_empty() {
        return Ok(());
    }
    write_csv(&out_dir.join("summary").join("correlation_boxplot.csv"), &records)?;
    let chart = svg::grouped_boxplot(
        "Rank correlations across datasets",
        "Spearman rho",
        &svg_groups,
    );
    atomic_write(
        &out_dir.join("summary").join("correlation_boxplot.svg"),
        chart.as_bytes(),
    )?;
    Ok(())
}
