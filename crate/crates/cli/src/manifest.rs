//! Benchmark manifest: a TOML file with flat global keys plus one `[[dataset]]`
//! table per dataset. Every seed and hyperparameter a run uses is resolved
//! from here and echoed into `run_manifest.json`, so outputs are reproducible
//! from that single file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use exirt_core::ensemble::{Hyperparameters, ModelFamily};
use exirt_core::irt::SearchMethod;
use exirt_core::perturb::VariationKind;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    #[serde(default = "default_max_arity")]
    pub max_arity: usize,
    #[serde(default = "default_families")]
    pub families: Vec<String>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_search")]
    pub search: String,
    pub out: Option<String>,
    #[serde(default)]
    pub hyper: BTreeMap<String, HyperOverride>,
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperOverride {
    pub n_trees: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_leaf: Option<usize>,
    pub learning_rate: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub path: String,
    pub label: String,
    pub name: Option<String>,
    pub seed: Option<u64>,
}

fn default_seed() -> u64 {
    42
}
fn default_test_fraction() -> f64 {
    0.3
}
fn default_kinds() -> Vec<String> {
    vec!["negate".to_string(), "binning".to_string()]
}
fn default_max_arity() -> usize {
    2
}
fn default_families() -> Vec<String> {
    vec!["random_forest".to_string(), "gradient_boosting".to_string()]
}
fn default_repeats() -> usize {
    5
}
fn default_search() -> String {
    "golden".to_string()
}

/// Fully resolved run configuration, serialized as `run_manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedManifest {
    pub tool_version: String,
    pub seed: u64,
    pub test_fraction: f64,
    pub kinds: Vec<String>,
    pub max_arity: usize,
    pub repeats: usize,
    pub search: String,
    pub families: Vec<String>,
    pub hyperparameters: BTreeMap<String, Hyperparameters>,
    pub datasets: Vec<ResolvedDataset>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedDataset {
    pub name: String,
    pub path: String,
    pub label: String,
    pub seed: u64,
}

pub struct RunConfig {
    pub test_fraction: f64,
    pub kinds: Vec<VariationKind>,
    pub max_arity: usize,
    pub repeats: usize,
    pub search: SearchMethod,
    pub families: Vec<ModelFamily>,
    pub hyper: BTreeMap<ModelFamily, Hyperparameters>,
    pub datasets: Vec<ResolvedDataset>,
    pub out: Option<PathBuf>,
    pub resolved: ResolvedManifest,
}

pub fn parse_manifest(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading manifest {}", path.display()))?;
    let manifest: Manifest =
        toml::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
    resolve(manifest, path)
}

fn resolve(manifest: Manifest, manifest_path: &Path) -> Result<RunConfig> {
    if manifest.datasets.is_empty() {
        bail!("manifest lists no datasets");
    }
    if !(manifest.test_fraction > 0.0 && manifest.test_fraction < 1.0) {
        bail!("test_fraction must lie in (0,1)");
    }

    let mut kinds = Vec::new();
    for name in &manifest.kinds {
        match VariationKind::parse(name) {
            Some(k) => kinds.push(k),
            None => bail!("unknown variation kind '{name}'"),
        }
    }
    let search = SearchMethod::parse(&manifest.search)
        .with_context(|| format!("unknown search method '{}'", manifest.search))?;

    let mut families = Vec::new();
    for name in &manifest.families {
        match ModelFamily::parse(name) {
            Some(f) => families.push(f),
            None => bail!("unknown model family '{name}'"),
        }
    }
    if families.is_empty() {
        bail!("manifest lists no model families");
    }

    let mut hyper = BTreeMap::new();
    for &family in &families {
        let mut h = Hyperparameters::default_for(family);
        if let Some(overrides) = manifest.hyper.get(family.as_str()) {
            if let Some(v) = overrides.n_trees {
                h.n_trees = v;
            }
            if let Some(v) = overrides.max_depth {
                h.max_depth = v;
            }
            if let Some(v) = overrides.min_leaf {
                h.min_leaf = v;
            }
            if let Some(v) = overrides.learning_rate {
                h.learning_rate = v;
            }
        }
        hyper.insert(family, h);
    }
    for key in manifest.hyper.keys() {
        if ModelFamily::parse(key).is_none() {
            bail!("hyper override for unknown family '{key}'");
        }
    }

    // dataset paths are relative to the manifest file
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let mut datasets = Vec::new();
    let mut seen = BTreeMap::new();
    for entry in &manifest.datasets {
        let path = base.join(&entry.path);
        let name = entry.name.clone().unwrap_or_else(|| {
            Path::new(&entry.path)
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| entry.path.clone())
        });
        if seen.insert(name.clone(), ()).is_some() {
            bail!("duplicate dataset name '{name}' in manifest");
        }
        datasets.push(ResolvedDataset {
            name,
            path: path.to_string_lossy().to_string(),
            label: entry.label.clone(),
            seed: entry.seed.unwrap_or(manifest.seed),
        });
    }

    let resolved = ResolvedManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: manifest.seed,
        test_fraction: manifest.test_fraction,
        kinds: kinds.iter().map(|k| k.name().to_string()).collect(),
        max_arity: manifest.max_arity,
        repeats: manifest.repeats,
        search: search.name().to_string(),
        families: families.iter().map(|f| f.as_str().to_string()).collect(),
        hyperparameters: hyper
            .iter()
            .map(|(f, h)| (f.as_str().to_string(), h.clone()))
            .collect(),
        datasets: datasets.clone(),
    };

    Ok(RunConfig {
        test_fraction: manifest.test_fraction,
        kinds,
        max_arity: manifest.max_arity,
        repeats: manifest.repeats,
        search,
        families,
        hyper,
        datasets,
        out: manifest.out.map(|o| base.join(o)),
        resolved,
    })
}
