//! `exirt explain`: run one explanation measure against a saved model and
//! write its rank (plus the full report for the exirt measure).

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::Args;

use exirt_core::baselines::{info_gain_rank, loco_rank, permutation_importance_rank};
use exirt_core::ensemble::load_model;
use exirt_core::explain::{explain, export_report, ExplainConfig};
use exirt_core::irt::SearchMethod;
use exirt_core::perturb::VariationKind;

use super::{load_and_split, Measure};

#[derive(Debug, Args)]
pub struct ExplainArgs {
    /// Model file written by `exirt train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset CSV the model was trained from.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the binary label column.
    #[arg(long)]
    pub label: String,
    /// Which measure to run.
    #[arg(long, value_enum)]
    pub measure: Measure,
    /// Comma-separated variation kinds for the exirt measure.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["negate".to_string(), "binning".to_string()])]
    pub kinds: Vec<String>,
    /// Largest attribute-combination size (1 or 2).
    #[arg(long, default_value_t = 2)]
    pub max_arity: usize,
    /// Shuffle repeats for the permutation measure.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Ability search method for the exirt measure.
    #[arg(long, default_value = "golden")]
    pub search: String,
    /// Base seed for perturbations; defaults to the model's training seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Split seed; defaults to the model's training seed. Must match the
    /// value used at training time to reproduce the same split.
    #[arg(long)]
    pub split_seed: Option<u64>,
    /// Test fraction; must match the value used at training time.
    #[arg(long, default_value_t = 0.3)]
    pub test_fraction: f64,
    /// Output directory.
    #[arg(long, default_value = "explain-out")]
    pub out: PathBuf,
}

pub fn run_explain(args: &ExplainArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let split_seed = args.split_seed.unwrap_or(model.training_seed);
    let seed = args.seed.unwrap_or(model.training_seed);
    let (train_set, test_set) =
        load_and_split(&args.data, &args.label, args.test_fraction, split_seed)?;

    let rank_path = args.out.join(args.measure.name()).join("rank.csv");
    match args.measure {
        Measure::Exirt => {
            let mut kinds = Vec::new();
            for name in &args.kinds {
                kinds.push(
                    VariationKind::parse(name)
                        .ok_or_else(|| anyhow!("unknown variation kind '{name}'"))?,
                );
            }
            let cfg = ExplainConfig {
                kinds,
                max_arity: args.max_arity,
                base_seed: seed,
                search: SearchMethod::parse(&args.search)
                    .ok_or_else(|| anyhow!("unknown search method '{}'", args.search))?,
                ..ExplainConfig::default()
            };
            let report = explain(&model, &train_set, &test_set, &cfg)?;
            export_report(&report, &args.out.join("exirt"))?;
        }
        Measure::Permutation => {
            let rank = permutation_importance_rank(&model, &test_set, args.repeats, seed)?;
            rank.write_csv(&rank_path)?;
        }
        Measure::Loco => {
            let rank = loco_rank(
                &train_set,
                &test_set,
                model.family,
                &model.hyperparameters,
                model.training_seed,
            )?;
            rank.write_csv(&rank_path)?;
        }
        Measure::Infogain => {
            let rank = info_gain_rank(&train_set)?;
            rank.write_csv(&rank_path)?;
        }
    }
    println!(
        "{} rank written under {}",
        args.measure.name(),
        args.out.display()
    );
    Ok(())
}
