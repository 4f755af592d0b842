//! The full explanation pipeline: plan the respondents, collect the response
//! matrix, calibrate items, score every respondent, and aggregate per-attribute
//! relevance.
//!
//! An attribute's score is the mean Total Score over every respondent whose
//! attribute set contains it; the identity respondent perturbs nothing and is
//! excluded from averaging (it still shapes the item calibration). Lower
//! scores mean the attribute explains more, so the rank is ascending.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::ensemble::TrainedEnsemble;
use crate::error::{Error, Result};
use crate::io;
use crate::irt::{
    build_response_matrix, estimate_ability, fit_item_parameters, total_score, FitConfig,
    ItemParameters, SearchMethod,
};
use crate::perturb::{build_plan, column_stats, write_plan_csv, RespondentPlan, VariationKind};
use crate::rank::{rank_from_scores, AttributeRank, RankDirection};
use crate::svg;

/// Configuration of one explain run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainConfig {
    pub kinds: Vec<VariationKind>,
    pub max_arity: usize,
    pub base_seed: u64,
    pub fit: FitConfig,
    pub search: SearchMethod,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            kinds: vec![VariationKind::Negate, VariationKind::Binning],
            max_arity: 2,
            base_seed: 0,
            fit: FitConfig::default(),
            search: SearchMethod::Golden,
        }
    }
}

/// Ability and Total Score of one respondent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RespondentOutcome {
    pub respondent_id: usize,
    pub kind: Option<VariationKind>,
    pub attribute_set: Vec<usize>,
    pub theta: f64,
    pub total_score: f64,
}

/// Everything one explain run produces.
#[derive(Debug, Clone)]
pub struct ExplainReport {
    pub rank: AttributeRank,
    pub item_params: ItemParameters,
    pub item_ids: Vec<usize>,
    pub respondents: Vec<RespondentOutcome>,
    pub plan: RespondentPlan,
}

/// Run the pipeline and emit the attribute relevance rank.
pub fn explain(
    model: &TrainedEnsemble,
    train: &Dataset,
    test: &Dataset,
    cfg: &ExplainConfig,
) -> Result<ExplainReport> {
    if test.row_count() == 0 {
        return Err(Error::InvalidDataset("test split is empty".into()));
    }
    if model.feature_count() != train.feature_count() {
        return Err(Error::WidthMismatch {
            expected: model.feature_count(),
            got: train.feature_count(),
        });
    }
    let f = model.feature_count();
    let plan = build_plan(f, &cfg.kinds, cfg.max_arity, cfg.base_seed)?;
    let stats = column_stats(train);
    let rm = build_response_matrix(&plan, model, test, &stats)?;
    let fit = fit_item_parameters(&rm, &cfg.fit)?;

    let mut respondents = Vec::with_capacity(plan.specs.len());
    for (spec, row) in plan.specs.iter().zip(&rm.rows) {
        let ability = estimate_ability(row, &fit.items, cfg.search);
        let score = total_score(row, ability.theta, &fit.items);
        respondents.push(RespondentOutcome {
            respondent_id: spec.respondent_id,
            kind: spec.kind,
            attribute_set: spec.attribute_set.clone(),
            theta: ability.theta,
            total_score: score,
        });
    }

    // mean Total Score over the respondents covering each attribute; the
    // identity respondent has an empty attribute set and drops out naturally
    let names = &model.feature_names;
    let mut sums = vec![0.0; f];
    let mut counts = vec![0usize; f];
    for outcome in &respondents {
        for &attr in &outcome.attribute_set {
            sums[attr] += outcome.total_score;
            counts[attr] += 1;
        }
    }
    let scores: Vec<(String, f64)> = (0..f)
        .map(|i| {
            debug_assert!(counts[i] > 0, "attribute {i} has no covering respondent");
            (names[i].clone(), sums[i] / counts[i].max(1) as f64)
        })
        .collect();
    let rank = rank_from_scores("exirt", scores, RankDirection::Ascending);
    rank.validate()?;

    Ok(ExplainReport {
        rank,
        item_params: fit.items,
        item_ids: rm.item_ids,
        respondents,
        plan,
    })
}

/// Write the rank, item-parameter, plan and ability CSVs plus the score bar
/// plot into `out_dir`.
pub fn export_report(report: &ExplainReport, out_dir: &Path) -> Result<()> {
    report.rank.write_csv(&out_dir.join("rank.csv"))?;
    crate::irt::write_item_params_csv(
        &out_dir.join("item_params.csv"),
        &report.item_ids,
        &report.item_params,
    )?;
    write_plan_csv(&out_dir.join("plan.csv"), &report.plan)?;

    let mut records = vec![vec![
        "respondent_id".to_string(),
        "theta".to_string(),
        "total_score".to_string(),
    ]];
    for r in &report.respondents {
        records.push(vec![
            r.respondent_id.to_string(),
            io::fmt_f64(r.theta),
            io::fmt_f64(r.total_score),
        ]);
    }
    io::write_csv(&out_dir.join("abilities.csv"), &records)?;

    let bars: Vec<(String, f64)> = report
        .rank
        .entries
        .iter()
        .map(|e| (e.attribute.clone(), e.score))
        .collect();
    let chart = svg::bar_chart(
        &format!("{} attribute scores", report.rank.measure),
        "attribute (most relevant first)",
        "aggregate skill score (lower = more relevant)",
        &bars,
    );
    io::atomic_write(&out_dir.join("rank.svg"), chart.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{AttributeColumn, ColumnKind};
    use crate::ensemble::{train_random_forest, Hyperparameters, ModelFamily};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn numeric_column(name: &str, values: Vec<f64>) -> AttributeColumn {
        AttributeColumn {
            name: name.to_string(),
            kind: ColumnKind::Numeric,
            values,
            categories: vec![],
        }
    }

    /// Three mutually redundant perfect features plus one pure-noise column.
    /// Any pair of sampled attributes contains a perfectly separating one, so
    /// the forest never needs to split on noise.
    pub(crate) fn planted_noise_dataset(n: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        let mut z = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let y = (i % 2) as u8;
            let t: f64 = if y == 1 {
                rng.random_range(0.5..2.0)
            } else {
                rng.random_range(-2.0..-0.5)
            };
            a.push(t);
            b.push(2.0 * t + 1.0);
            c.push(-t);
            z.push(rng.random_range(-1.0..1.0));
            labels.push(y);
        }
        Dataset::new(
            "planted_noise".to_string(),
            vec![
                numeric_column("a_one", a),
                numeric_column("b_two", b),
                numeric_column("c_three", c),
                numeric_column("z_noise", z),
            ],
            labels,
        )
        .unwrap()
    }

    #[test]
    fn explain_places_unused_noise_column_last() {
        let ds = planted_noise_dataset(160, 21);
        let (train, test) = crate::dataset::split(&ds, 0.3, 5).unwrap();
        let model = train_random_forest(
            &train,
            &Hyperparameters {
                n_trees: 30,
                ..Hyperparameters::default_for(ModelFamily::RandomForest)
            },
            5,
        )
        .unwrap();
        assert!(!model.used_attributes().contains(&3), "noise column split");

        let report = explain(&model, &train, &test, &ExplainConfig::default()).unwrap();
        assert_eq!(report.rank.tail_attribute(), Some("z_noise"));
        // identity respondent exists, covers nothing
        assert_eq!(report.respondents[0].respondent_id, 0);
        assert!(report.respondents[0].attribute_set.is_empty());
    }

    #[test]
    fn explain_single_attribute_rank() {
        let ds = planted_noise_dataset(120, 3);
        let one = Dataset::new(
            "one".into(),
            vec![ds.columns[0].clone()],
            ds.labels.clone(),
        )
        .unwrap();
        let (train, test) = crate::dataset::split(&one, 0.3, 2).unwrap();
        let model = train_random_forest(
            &train,
            &Hyperparameters {
                n_trees: 10,
                ..Hyperparameters::default_for(ModelFamily::RandomForest)
            },
            2,
        )
        .unwrap();
        let report = explain(&model, &train, &test, &ExplainConfig::default()).unwrap();
        assert_eq!(report.rank.len(), 1);
        assert_eq!(report.rank.entries[0].position, 1);
    }

    #[test]
    fn covering_respondent_counts_match_plan() {
        let ds = planted_noise_dataset(100, 9);
        let (train, test) = crate::dataset::split(&ds, 0.3, 4).unwrap();
        let model = train_random_forest(
            &train,
            &Hyperparameters {
                n_trees: 10,
                ..Hyperparameters::default_for(ModelFamily::RandomForest)
            },
            4,
        )
        .unwrap();
        let cfg = ExplainConfig::default();
        let report = explain(&model, &train, &test, &cfg).unwrap();
        let f = 4;
        let v = cfg.kinds.len();
        for attr in 0..f {
            let covering = report
                .respondents
                .iter()
                .filter(|r| r.attribute_set.contains(&attr))
                .count();
            assert_eq!(covering, v * (1 + (f - 1)));
        }
    }

    #[test]
    fn duplicate_attributes_tie_broken_lexicographically() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut x = Vec::new();
        let mut labels = Vec::new();
        for i in 0..120 {
            let y = (i % 2) as u8;
            let v: f64 = if y == 1 {
                rng.random_range(0.5..1.5)
            } else {
                rng.random_range(-1.5..-0.5)
            };
            x.push(v);
            labels.push(y);
        }
        let ds = Dataset::new(
            "dup".into(),
            vec![
                numeric_column("beta", x.clone()),
                numeric_column("alpha", x.clone()),
            ],
            labels,
        )
        .unwrap();
        let (train, test) = crate::dataset::split(&ds, 0.3, 8).unwrap();
        let model = train_random_forest(
            &train,
            &Hyperparameters {
                n_trees: 20,
                ..Hyperparameters::default_for(ModelFamily::RandomForest)
            },
            8,
        )
        .unwrap();
        let cfg = ExplainConfig {
            kinds: vec![VariationKind::Negate],
            ..ExplainConfig::default()
        };
        let report = explain(&model, &train, &test, &cfg).unwrap();
        // identical columns can differ in score only through which trees used
        // which copy; when they tie the rule orders by name
        if (report.rank.entries[0].score - report.rank.entries[1].score).abs() < 1e-12 {
            assert_eq!(report.rank.entries[0].attribute, "alpha");
        }
    }

    #[test]
    fn export_writes_all_files() {
        let ds = planted_noise_dataset(80, 2);
        let (train, test) = crate::dataset::split(&ds, 0.3, 3).unwrap();
        let model = train_random_forest(
            &train,
            &Hyperparameters {
                n_trees: 10,
                ..Hyperparameters::default_for(ModelFamily::RandomForest)
            },
            3,
        )
        .unwrap();
        let report = explain(&model, &train, &test, &ExplainConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        export_report(&report, dir.path()).unwrap();
        for file in ["rank.csv", "item_params.csv", "plan.csv", "abilities.csv", "rank.svg"] {
            assert!(dir.path().join(file).exists(), "{file} missing");
        }
    }
}
