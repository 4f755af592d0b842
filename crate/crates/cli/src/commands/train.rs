//! `exirt train`: fit one model on the train partition and save it.

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::Args;

use exirt_core::ensemble::{save_model, train, Hyperparameters, ModelFamily};

use super::load_and_split;

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Dataset CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the binary label column.
    #[arg(long)]
    pub label: String,
    /// Model family: random_forest or gradient_boosting.
    #[arg(long)]
    pub family: String,
    /// Seed for the split and the training randomness.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Fraction of rows held out for testing.
    #[arg(long, default_value_t = 0.3)]
    pub test_fraction: f64,
    #[arg(long)]
    pub n_trees: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Output model file (versioned JSON).
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
}

pub fn run_train(args: &TrainArgs) -> Result<()> {
    let family = ModelFamily::parse(&args.family)
        .ok_or_else(|| anyhow!("unknown family '{}'", args.family))?;
    let mut hyper = Hyperparameters::default_for(family);
    if let Some(v) = args.n_trees {
        hyper.n_trees = v;
    }
    if let Some(v) = args.max_depth {
        hyper.max_depth = v;
    }
    if let Some(v) = args.min_leaf {
        hyper.min_leaf = v;
    }
    if let Some(v) = args.learning_rate {
        hyper.learning_rate = v;
    }

    let (train_set, test_set) = load_and_split(&args.data, &args.label, args.test_fraction, args.seed)?;
    let model = train(&train_set, family, &hyper, args.seed)?;
    let train_acc = model.accuracy(&train_set.matrix(), &train_set.labels)?;
    let test_acc = model.accuracy(&test_set.matrix(), &test_set.labels)?;
    save_model(&model, &args.out)?;
    println!(
        "trained {} on {} ({} train / {} test rows): train accuracy {:.4}, test accuracy {:.4} -> {}",
        family.as_str(),
        train_set.name,
        train_set.row_count(),
        test_set.row_count(),
        train_acc,
        test_acc,
        args.out.display()
    );
    Ok(())
}
