//! Random forest and gradient boosting ensembles with versioned JSON
//! serialization.
//!
//! Per-tree randomness is derived from `training_seed` plus the tree index,
//! never from scheduling, so a parallel trainer would reproduce the
//! sequential result bit for bit.

pub mod tree;

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnKind, Dataset};
use crate::error::{Error, Result};
use crate::io;
use tree::{grow_tree, DecisionTree, GrowConfig, GrowTask};

// grower internals re-exported for callers that inspect splits
pub use tree::{Node, SplitTest};

/// Supported ensemble families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    RandomForest,
    GradientBoosting,
}

impl ModelFamily {
    pub fn parse(s: &str) -> Option<ModelFamily> {
        match s {
            "random_forest" | "rf" => Some(ModelFamily::RandomForest),
            "gradient_boosting" | "gb" => Some(ModelFamily::GradientBoosting),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelFamily::RandomForest => "random_forest",
            ModelFamily::GradientBoosting => "gradient_boosting",
        }
    }
}

/// Training hyperparameters; `learning_rate` is ignored by random forests and
/// `min_leaf` defaults differ per family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub learning_rate: f64,
}

impl Hyperparameters {
    pub fn default_for(family: ModelFamily) -> Hyperparameters {
        match family {
            ModelFamily::RandomForest => Hyperparameters {
                n_trees: 100,
                max_depth: 8,
                min_leaf: 2,
                learning_rate: 0.0,
            },
            ModelFamily::GradientBoosting => Hyperparameters {
                n_trees: 100,
                max_depth: 3,
                min_leaf: 1,
                learning_rate: 0.1,
            },
        }
    }
}

/// A trained tree ensemble for binary classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedEnsemble {
    pub family: ModelFamily,
    pub trees: Vec<DecisionTree>,
    /// Per-tree weight: 1/n for forests, the learning rate for boosting.
    pub tree_weights: Vec<f64>,
    /// Log-odds baseline; 0 for random forests.
    pub initial_score: f64,
    pub feature_names: Vec<String>,
    pub feature_kinds: Vec<ColumnKind>,
    pub training_seed: u64,
    pub hyperparameters: Hyperparameters,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl TrainedEnsemble {
    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    /// Class-1 probability for each row.
    pub fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        for row in rows {
            if row.len() != self.feature_count() {
                return Err(Error::WidthMismatch {
                    expected: self.feature_count(),
                    got: row.len(),
                });
            }
        }
        Ok(rows
            .iter()
            .map(|row| {
                let acc: f64 = self
                    .trees
                    .iter()
                    .zip(&self.tree_weights)
                    .map(|(t, w)| w * t.predict_row(row))
                    .sum();
                match self.family {
                    // the weighted mean of leaf probabilities is in [0,1];
                    // clamp away float accumulation drift
                    ModelFamily::RandomForest => acc.clamp(0.0, 1.0),
                    ModelFamily::GradientBoosting => sigmoid(self.initial_score + acc),
                }
            })
            .collect())
    }

    /// Hard 0/1 predictions (probability >= 0.5 maps to class 1).
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<u8>> {
        Ok(self
            .predict_proba(rows)?
            .into_iter()
            .map(|p| (p >= 0.5) as u8)
            .collect())
    }

    /// Fraction of rows predicted correctly.
    pub fn accuracy(&self, rows: &[Vec<f64>], labels: &[u8]) -> Result<f64> {
        let preds = self.predict(rows)?;
        let hits = preds.iter().zip(labels).filter(|(p, l)| p == l).count();
        Ok(hits as f64 / labels.len().max(1) as f64)
    }

    /// Attribute indices used by at least one split across all trees.
    pub fn used_attributes(&self) -> Vec<usize> {
        let mut attrs: Vec<usize> = self
            .trees
            .iter()
            .flat_map(|t| t.split_attributes())
            .collect();
        attrs.sort_unstable();
        attrs.dedup();
        attrs
    }
}

fn check_two_classes(ds: &Dataset) -> Result<()> {
    let ones = ds.labels.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == ds.row_count() {
        return Err(Error::DegenerateTraining);
    }
    Ok(())
}

fn tree_rng(seed: u64, tree_index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(tree_index as u64))
}

/// Train a random forest: bootstrap rows per tree, sqrt(f) attributes sampled
/// per split, Gini criterion.
pub fn train_random_forest(
    train: &Dataset,
    hyper: &Hyperparameters,
    seed: u64,
) -> Result<TrainedEnsemble> {
    check_two_classes(train)?;
    let matrix = train.matrix();
    let kinds = train.column_kinds();
    let n = train.row_count();
    let mtry = ((kinds.len() as f64).sqrt().floor() as usize).max(1);
    let config = GrowConfig {
        max_depth: hyper.max_depth,
        min_leaf: hyper.min_leaf,
        mtry: Some(mtry),
    };

    let mut trees = Vec::with_capacity(hyper.n_trees);
    for t in 0..hyper.n_trees {
        let mut rng = tree_rng(seed, t);
        let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        trees.push(grow_tree(
            &matrix,
            &kinds,
            &GrowTask::GiniClassification {
                targets: &train.labels,
            },
            &rows,
            &config,
            &mut rng,
        ));
    }
    let w = 1.0 / hyper.n_trees as f64;
    Ok(TrainedEnsemble {
        family: ModelFamily::RandomForest,
        tree_weights: vec![w; trees.len()],
        trees,
        initial_score: 0.0,
        feature_names: train.feature_names(),
        feature_kinds: kinds,
        training_seed: seed,
        hyperparameters: hyper.clone(),
    })
}

/// Train a gradient boosting classifier: stagewise regression trees on
/// logistic-loss gradients, starting from the class prior log-odds.
pub fn train_gradient_boosting(
    train: &Dataset,
    hyper: &Hyperparameters,
    seed: u64,
) -> Result<TrainedEnsemble> {
    check_two_classes(train)?;
    let matrix = train.matrix();
    let kinds = train.column_kinds();
    let n = train.row_count();
    let p1 = train.labels.iter().filter(|&&l| l == 1).count() as f64 / n as f64;
    let initial_score = (p1 / (1.0 - p1)).ln();

    let config = GrowConfig {
        max_depth: hyper.max_depth,
        min_leaf: hyper.min_leaf,
        mtry: None,
    };
    let all_rows: Vec<usize> = (0..n).collect();

    let mut score = vec![initial_score; n];
    let mut trees = Vec::with_capacity(hyper.n_trees);
    for t in 0..hyper.n_trees {
        let mut rng = tree_rng(seed, t);
        let probs: Vec<f64> = score.iter().map(|&s| sigmoid(s)).collect();
        let gradients: Vec<f64> = train
            .labels
            .iter()
            .zip(&probs)
            .map(|(&y, &p)| y as f64 - p)
            .collect();
        let curvatures: Vec<f64> = probs.iter().map(|&p| p * (1.0 - p)).collect();
        let tree = grow_tree(
            &matrix,
            &kinds,
            &GrowTask::BoostedRegression {
                gradients: &gradients,
                curvatures: &curvatures,
            },
            &all_rows,
            &config,
            &mut rng,
        );
        for (i, row) in matrix.iter().enumerate() {
            score[i] += hyper.learning_rate * tree.predict_row(row);
        }
        trees.push(tree);
    }
    Ok(TrainedEnsemble {
        family: ModelFamily::GradientBoosting,
        tree_weights: vec![hyper.learning_rate; trees.len()],
        trees,
        initial_score,
        feature_names: train.feature_names(),
        feature_kinds: kinds,
        training_seed: seed,
        hyperparameters: hyper.clone(),
    })
}

/// Train either family with one call.
pub fn train(
    train_set: &Dataset,
    family: ModelFamily,
    hyper: &Hyperparameters,
    seed: u64,
) -> Result<TrainedEnsemble> {
    match family {
        ModelFamily::RandomForest => train_random_forest(train_set, hyper, seed),
        ModelFamily::GradientBoosting => train_gradient_boosting(train_set, hyper, seed),
    }
}

const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    #[serde(flatten)]
    model: TrainedEnsemble,
}

/// Serialize a model to the versioned JSON document.
pub fn save_model(model: &TrainedEnsemble, path: &Path) -> Result<()> {
    let file = ModelFile {
        schema_version: MODEL_SCHEMA_VERSION,
        model: model.clone(),
    };
    let bytes = serde_json::to_vec_pretty(&file)
        .map_err(|e| Error::MalformedModel(format!("serialize failed: {e}")))?;
    io::atomic_write(path, &bytes)
}

/// Load a model, checking the schema version.
pub fn load_model(path: &Path) -> Result<TrainedEnsemble> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let value: serde_json::Value = serde_json::from_slice(&bytes)
        .map_err(|e| Error::MalformedModel(format!("{}: {e}", path.display())))?;
    let version = value
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::MalformedModel("missing schema_version".to_string()))?;
    if version != MODEL_SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersion {
            expected: MODEL_SCHEMA_VERSION,
            got: version as u32,
        });
    }
    let file: ModelFile = serde_json::from_value(value)
        .map_err(|e| Error::MalformedModel(format!("{}: {e}", path.display())))?;
    Ok(file.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeColumn;
    use approx::assert_abs_diff_eq;

    fn separable_dataset(n: usize) -> Dataset {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut x1 = Vec::new();
        let mut x2 = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let y: bool = rng.random();
            let base = if y { 2.0 } else { -2.0 };
            x1.push(base + rng.random_range(-0.9..0.9));
            x2.push(rng.random_range(-1.0..1.0));
            labels.push(y as u8);
        }
        Dataset::new(
            "sep".to_string(),
            vec![
                AttributeColumn {
                    name: "x1".into(),
                    kind: ColumnKind::Numeric,
                    values: x1,
                    categories: vec![],
                },
                AttributeColumn {
                    name: "x2".into(),
                    kind: ColumnKind::Numeric,
                    values: x2,
                    categories: vec![],
                },
            ],
            labels,
        )
        .unwrap()
    }

    fn xor_dataset(n: usize) -> Dataset {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x1 = Vec::new();
        let mut x2 = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let a: f64 = rng.random_range(0.0..1.0);
            let b: f64 = rng.random_range(0.0..1.0);
            x1.push(a);
            x2.push(b);
            labels.push(((a > 0.5) ^ (b > 0.5)) as u8);
        }
        Dataset::new(
            "xor".to_string(),
            vec![
                AttributeColumn {
                    name: "x1".into(),
                    kind: ColumnKind::Numeric,
                    values: x1,
                    categories: vec![],
                },
                AttributeColumn {
                    name: "x2".into(),
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
    fn rf_fits_separable_data() {
        let ds = separable_dataset(200);
        let hyper = Hyperparameters {
            n_trees: 10,
            max_depth: 8,
            min_leaf: 1,
            learning_rate: 0.0,
        };
        let model = train_random_forest(&ds, &hyper, 3).unwrap();
        let acc = model.accuracy(&ds.matrix(), &ds.labels).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn rf_single_attribute_only_splits_there() {
        let ds = {
            let d = separable_dataset(100);
            Dataset::new(
                d.name.clone(),
                vec![d.columns[0].clone()],
                d.labels.clone(),
            )
            .unwrap()
        };
        let model =
            train_random_forest(&ds, &Hyperparameters::default_for(ModelFamily::RandomForest), 1)
                .unwrap();
        assert_eq!(model.used_attributes(), vec![0]);
    }

    #[test]
    fn rf_same_seed_identical_bytes() {
        let ds = separable_dataset(80);
        let hyper = Hyperparameters::default_for(ModelFamily::RandomForest);
        let m1 = train_random_forest(&ds, &hyper, 42).unwrap();
        let m2 = train_random_forest(&ds, &hyper, 42).unwrap();
        let b1 = serde_json::to_vec(&m1).unwrap();
        let b2 = serde_json::to_vec(&m2).unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn rf_rejects_single_class() {
        let mut ds = separable_dataset(50);
        ds.labels = vec![1; ds.row_count()];
        let hyper = Hyperparameters::default_for(ModelFamily::RandomForest);
        assert!(matches!(
            train_random_forest(&ds, &hyper, 1),
            Err(Error::DegenerateTraining)
        ));
    }

    #[test]
    fn gb_prior_half_gives_zero_initial_score() {
        let ds = {
            let mut d = separable_dataset(40);
            // force exactly balanced labels
            for i in 0..d.row_count() {
                d.labels[i] = (i % 2) as u8;
            }
            d
        };
        let hyper = Hyperparameters::default_for(ModelFamily::GradientBoosting);
        let model = train_gradient_boosting(&ds, &hyper, 1).unwrap();
        assert_abs_diff_eq!(model.initial_score, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gb_zero_learning_rate_is_constant_prior() {
        let ds = separable_dataset(60);
        let mut hyper = Hyperparameters::default_for(ModelFamily::GradientBoosting);
        hyper.learning_rate = 0.0;
        hyper.n_trees = 5;
        let model = train_gradient_boosting(&ds, &hyper, 1).unwrap();
        let p1 = ds.labels.iter().filter(|&&l| l == 1).count() as f64 / ds.row_count() as f64;
        for p in model.predict_proba(&ds.matrix()).unwrap() {
            assert_abs_diff_eq!(p, p1, epsilon = 1e-12);
        }
    }

    #[test]
    fn gb_learns_xor_at_depth_two() {
        let ds = xor_dataset(200);
        let hyper = Hyperparameters {
            n_trees: 50,
            max_depth: 2,
            min_leaf: 1,
            learning_rate: 0.1,
        };
        let model = train_gradient_boosting(&ds, &hyper, 7).unwrap();
        let acc = model.accuracy(&ds.matrix(), &ds.labels).unwrap();
        assert!(acc >= 0.95, "training accuracy {acc}");
    }

    #[test]
    fn predict_empty_rows_empty_output() {
        let ds = separable_dataset(40);
        let model = train_random_forest(
            &ds,
            &Hyperparameters::default_for(ModelFamily::RandomForest),
            1,
        )
        .unwrap();
        assert!(model.predict(&[]).unwrap().is_empty());
    }

    #[test]
    fn predict_width_mismatch_errors() {
        let ds = separable_dataset(40);
        let model = train_random_forest(
            &ds,
            &Hyperparameters::default_for(ModelFamily::RandomForest),
            1,
        )
        .unwrap();
        assert!(matches!(
            model.predict(&[vec![1.0]]),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn proba_in_unit_interval_and_reorder_invariant() {
        let ds = separable_dataset(60);
        let mut model = train_random_forest(
            &ds,
            &Hyperparameters::default_for(ModelFamily::RandomForest),
            11,
        )
        .unwrap();
        let rows = ds.matrix();
        let before = model.predict_proba(&rows).unwrap();
        for &p in &before {
            assert!((0.0..=1.0).contains(&p));
        }
        model.trees.reverse();
        model.tree_weights.reverse();
        let after = model.predict_proba(&rows).unwrap();
        for (a, b) in before.iter().zip(&after) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn identical_trees_average_to_single_tree_output() {
        use tree::{Node, SplitTest};
        let tree = DecisionTree {
            nodes: vec![
                Node::Split {
                    attribute: 0,
                    test: SplitTest::Threshold(0.0),
                    left: 1,
                    right: 2,
                },
                Node::Leaf { value: 0.25 },
                Node::Leaf { value: 0.75 },
            ],
            max_depth: 1,
        };
        let model = TrainedEnsemble {
            family: ModelFamily::RandomForest,
            trees: vec![tree.clone(), tree.clone(), tree],
            tree_weights: vec![1.0 / 3.0; 3],
            initial_score: 0.0,
            feature_names: vec!["x".into()],
            feature_kinds: vec![ColumnKind::Numeric],
            training_seed: 0,
            hyperparameters: Hyperparameters::default_for(ModelFamily::RandomForest),
        };
        let probas = model
            .predict_proba(&[vec![-1.0], vec![1.0]])
            .unwrap();
        assert_abs_diff_eq!(probas[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(probas[1], 0.75, epsilon = 1e-12);
    }

    #[test]
    fn save_load_round_trip_predicts_identically() {
        let ds = separable_dataset(60);
        let model = train_gradient_boosting(
            &ds,
            &Hyperparameters::default_for(ModelFamily::GradientBoosting),
            5,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        let rows = ds.matrix();
        assert_eq!(
            model.predict_proba(&rows).unwrap(),
            loaded.predict_proba(&rows).unwrap()
        );
    }

    #[test]
    fn load_rejects_wrong_schema_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(&path, br#"{"schema_version": 99}"#).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(Error::SchemaVersion { got: 99, .. })
        ));
    }

    #[test]
    fn load_rejects_malformed_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(&path, b"not json").unwrap();
        assert!(matches!(load_model(&path), Err(Error::MalformedModel(_))));
    }
}
