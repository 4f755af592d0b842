//! Subcommand implementations. Each `run_*` function is callable from tests
//! as well as from `main`.

pub mod benchmark;
pub mod cluster;
pub mod explain;
pub mod report;
pub mod train;

use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

use exirt_core::dataset::{load_csv, split, Dataset, SchemaHints};

/// The four explanation measures the toolkit emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Exirt,
    Permutation,
    Loco,
    Infogain,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Exirt,
        Measure::Permutation,
        Measure::Loco,
        Measure::Infogain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Exirt => "exirt",
            Measure::Permutation => "permutation",
            Measure::Loco => "loco",
            Measure::Infogain => "infogain",
        }
    }
}

/// Load a dataset CSV and produce the stratified split every measure shares.
pub fn load_and_split(
    path: &Path,
    label: &str,
    test_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let ds = load_csv(path, label, &SchemaHints::new())
        .with_context(|| format!("loading {}", path.display()))?;
    let (train_set, test_set) = split(&ds, test_fraction, seed)
        .with_context(|| format!("splitting {}", path.display()))?;
    Ok((train_set, test_set))
}
