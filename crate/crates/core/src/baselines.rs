//! Comparison ranks: permutation importance, leave-one-covariate-out
//! retraining, and the information-gain purity rank.
//!
//! The first two are relevance measures (they score contribution to the model
//! output); information gain is an importance measure computed from the true
//! labels alone and is kept distinct in all reports.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{class_entropy_bits, ColumnKind, Dataset};
use crate::ensemble::{train, Hyperparameters, ModelFamily, TrainedEnsemble};
use crate::error::{Error, Result};
use crate::rank::{rank_from_scores, AttributeRank, RankDirection};

fn derived_seed(base: u64, a: u64, b: u64) -> u64 {
    // splitmix-style mixing keeps per-(attribute, repeat) streams independent
    let mut z = base
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mean accuracy drop on the test split after seeded within-column shuffles.
pub fn permutation_importance_rank(
    model: &TrainedEnsemble,
    test: &Dataset,
    repeats: usize,
    seed: u64,
) -> Result<AttributeRank> {
    if repeats == 0 {
        return Err(Error::Rank("permutation importance needs repeats >= 1".into()));
    }
    if model.feature_count() != test.feature_count() {
        return Err(Error::WidthMismatch {
            expected: model.feature_count(),
            got: test.feature_count(),
        });
    }
    let rows = test.matrix();
    let baseline = model.accuracy(&rows, &test.labels)?;
    let mut scores = Vec::with_capacity(test.feature_count());
    for (attr, name) in model.feature_names.iter().enumerate() {
        let mut total_drop = 0.0;
        for rep in 0..repeats {
            let mut shuffled = rows.clone();
            let mut column: Vec<f64> = shuffled.iter().map(|r| r[attr]).collect();
            let mut rng =
                ChaCha8Rng::seed_from_u64(derived_seed(seed, attr as u64, rep as u64));
            column.shuffle(&mut rng);
            for (row, v) in shuffled.iter_mut().zip(&column) {
                row[attr] = *v;
            }
            total_drop += baseline - model.accuracy(&shuffled, &test.labels)?;
        }
        scores.push((name.clone(), total_drop / repeats as f64));
    }
    let rank = rank_from_scores("permutation", scores, RankDirection::Descending);
    rank.validate()?;
    Ok(rank)
}

/// Accuracy drop after retraining the same family/hyperparameters/seed
/// without each attribute in turn.
pub fn loco_rank(
    train_set: &Dataset,
    test_set: &Dataset,
    family: ModelFamily,
    hyper: &Hyperparameters,
    seed: u64,
) -> Result<AttributeRank> {
    if train_set.feature_count() < 2 {
        return Err(Error::Rank("leave-one-out needs at least 2 attributes".into()));
    }
    let baseline_model = train(train_set, family, hyper, seed)?;
    let baseline = baseline_model.accuracy(&test_set.matrix(), &test_set.labels)?;

    let mut scores = Vec::with_capacity(train_set.feature_count());
    for attr in 0..train_set.feature_count() {
        let name = train_set.columns[attr].name.clone();
        let reduced_train = train_set.drop_column(attr)?;
        let reduced_test = test_set.drop_column(attr)?;
        let reduced_model = train(&reduced_train, family, hyper, seed).map_err(|e| {
            Error::Rank(format!("retraining without attribute '{name}' failed: {e}"))
        })?;
        let reduced = reduced_model.accuracy(&reduced_test.matrix(), &reduced_test.labels)?;
        scores.push((name, baseline - reduced));
    }
    let rank = rank_from_scores("loco", scores, RankDirection::Descending);
    rank.validate()?;
    Ok(rank)
}

/// Entropy of the labels minus the weighted child entropy at the attribute's
/// best single split: numeric/binary columns scan thresholds, symbolic ones
/// partition by category.
pub fn info_gain_rank(train_set: &Dataset) -> Result<AttributeRank> {
    let ones = train_set.labels.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == train_set.row_count() {
        return Err(Error::DegenerateTraining);
    }
    let parent_entropy = class_entropy_bits(&train_set.labels);
    let scores: Vec<(String, f64)> = train_set
        .columns
        .iter()
        .map(|col| {
            let gain = match col.kind {
                ColumnKind::Symbolic => {
                    categorical_gain(&col.values, &train_set.labels, parent_entropy)
                }
                ColumnKind::Numeric | ColumnKind::Binary => {
                    best_threshold_gain(&col.values, &train_set.labels, parent_entropy)
                }
            };
            (col.name.clone(), gain)
        })
        .collect();
    let rank = rank_from_scores("infogain", scores, RankDirection::Descending);
    rank.validate()?;
    Ok(rank)
}

fn entropy_of_counts(pos: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for p in [pos / total, 1.0 - pos / total] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

fn best_threshold_gain(values: &[f64], labels: &[u8], parent_entropy: f64) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap().then(i.cmp(&j)));
    let total = values.len() as f64;
    let total_pos = labels.iter().filter(|&&l| l == 1).count() as f64;

    let mut left_n = 0.0;
    let mut left_pos = 0.0;
    let mut best = 0.0f64;
    for w in 0..order.len() - 1 {
        left_n += 1.0;
        left_pos += labels[order[w]] as f64;
        if values[order[w]] == values[order[w + 1]] {
            continue;
        }
        let right_n = total - left_n;
        let right_pos = total_pos - left_pos;
        let child = (left_n / total) * entropy_of_counts(left_pos, left_n)
            + (right_n / total) * entropy_of_counts(right_pos, right_n);
        best = best.max(parent_entropy - child);
    }
    best
}

fn categorical_gain(values: &[f64], labels: &[u8], parent_entropy: f64) -> f64 {
    let mut stats: Vec<(u32, f64, f64)> = Vec::new(); // (category, count, positives)
    for (v, &l) in values.iter().zip(labels) {
        let cat = *v as u32;
        match stats.iter_mut().find(|(c, _, _)| *c == cat) {
            Some((_, n, p)) => {
                *n += 1.0;
                *p += l as f64;
            }
            None => stats.push((cat, 1.0, l as f64)),
        }
    }
    let total = values.len() as f64;
    let child: f64 = stats
        .iter()
        .map(|(_, n, p)| (n / total) * entropy_of_counts(*p, *n))
        .sum();
    (parent_entropy - child).max(0.0)
}
