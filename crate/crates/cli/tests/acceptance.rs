//! Acceptance suite: one test per shipped guarantee, each printing a PASS
//! line with the quantities it checked. Run with
//! `cargo test -p exirt-cli --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exirt_cli::manifest::parse_manifest;
use exirt_cli::commands::benchmark::run_with_config;
use exirt_core::analytics::{
    correlation_matrix, mca, silhouette_scan, spearman, CorrelationMatrix,
};
use exirt_core::baselines::{loco_rank, permutation_importance_rank};
use exirt_core::dataset::{load_csv, split, BinaryPropertyTable, HsSymbol, SchemaHints};
use exirt_core::ensemble::{train_random_forest, Hyperparameters, ModelFamily};
use exirt_core::explain::{explain, ExplainConfig};
use exirt_core::irt::{
    estimate_ability, fit_item_parameters, icc_probability, icc_slope, total_score, FitConfig,
    ItemParameters, ResponseMatrix, SearchMethod,
};
use exirt_core::perturb::{build_plan, VariationKind};
use exirt_core::rank::{rank_from_scores, RankDirection};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn criterion_01_three_pl_parameter_recovery() {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let n_resp = 200;
    let n_items = 30;
    let thetas: Vec<f64> = (0..n_resp).map(|_| standard_normal(&mut rng)).collect();
    let a_true: Vec<f64> = (0..n_items).map(|_| rng.random_range(0.5..2.0)).collect();
    let b_true: Vec<f64> = (0..n_items).map(|_| rng.random_range(-2.0..2.0)).collect();
    let c_true: Vec<f64> = (0..n_items).map(|_| rng.random_range(0.0..0.25)).collect();
    let rows: Vec<Vec<u8>> = thetas
        .iter()
        .map(|&t| {
            (0..n_items)
                .map(|i| {
                    let p = icc_probability(t, a_true[i], b_true[i], c_true[i]);
                    (rng.random_range(0.0..1.0) < p) as u8
                })
                .collect()
        })
        .collect();
    let rm = ResponseMatrix::new(rows, (0..n_resp).collect(), (0..n_items).collect()).unwrap();
    let fit = fit_item_parameters(&rm, &FitConfig::default()).unwrap();

    let r_b = pearson(&fit.items.b, &b_true);
    let r_a = pearson(&fit.items.a, &a_true);
    let rmse_c = (fit
        .items
        .c
        .iter()
        .zip(&c_true)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n_items as f64)
        .sqrt();
    let elapsed = start.elapsed();

    assert!(r_b >= 0.85, "Pearson(b_hat, b) = {r_b} < 0.85");
    assert!(r_a >= 0.6, "Pearson(a_hat, a) = {r_a} < 0.6");
    assert!(rmse_c <= 0.15, "RMSE(c_hat) = {rmse_c} > 0.15");
    assert!(elapsed.as_secs() < 60, "fit took {elapsed:?}");
    println!(
        "criterion 01 (3PL recovery, 200x30): PASS  r_b={r_b:.3} r_a={r_a:.3} rmse_c={rmse_c:.3} in {elapsed:?}"
    );
}

#[test]
fn criterion_02_model_and_score_exactness() {
    // hit-probability closed-form values
    assert!((icc_probability(1.0, 1.0, 1.0, 0.0) - 0.5).abs() < 1e-9);
    assert!((icc_probability(1.0, 1.0, 1.0, 0.2) - 0.6).abs() < 1e-9);
    assert!((icc_probability(1.0, 2.0, 0.0, 0.0) - 0.8807970779778823).abs() < 1e-9);

    // total score hand values: all p = 0.9 via theta = ln 9 on unit items
    let items = ItemParameters {
        a: vec![1.0; 10],
        b: vec![0.0; 10],
        c: vec![0.0; 10],
    };
    let theta = (9.0f64).ln();
    assert!((total_score(&[1; 10], theta, &items) - 9.0).abs() < 1e-9);
    assert!((total_score(&[0; 10], theta, &items) - (-1.0)).abs() < 1e-9);
    // mixed row with p = 0.8, 0.6, 0.7 at theta = 0
    let items = ItemParameters {
        a: vec![1.0, 1.0, 1.0],
        b: vec![-(4.0f64).ln(), -(1.5f64).ln(), -(7.0f64 / 3.0).ln()],
        c: vec![0.0, 0.0, 0.0],
    };
    assert!((total_score(&[1, 1, 0], 0.0, &items) - 1.1).abs() < 1e-9);

    // derivative vs central finite differences, relative 1e-6; the step
    // balances truncation against cancellation in the far ICC tails
    let h = 1e-4;
    let mut checked = 0;
    for &a in &[0.3, 1.0, 2.5] {
        for &b in &[-2.0, 0.0, 1.5] {
            for &c in &[0.0, 0.15, 0.45] {
                for &theta in &[-3.0, -0.5, 0.9, 3.5] {
                    let numeric = (icc_probability(theta + h, a, b, c)
                        - icc_probability(theta - h, a, b, c))
                        / (2.0 * h);
                    let analytic = icc_slope(theta, a, b, c);
                    let rel = (numeric - analytic).abs() / analytic.abs().max(1e-12);
                    assert!(rel < 1e-6, "slope mismatch at ({theta},{a},{b},{c}): {rel}");
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 02 (model/score exactness): PASS  3 icc + 3 score values at 1e-9, {checked} slope probes at 1e-6");
}

#[test]
fn criterion_03_em_objective_monotone() {
    let mut fixtures: Vec<(String, ResponseMatrix)> = Vec::new();

    // simulated calibration matrix
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<u8>> = (0..80)
        .map(|_| {
            let t = standard_normal(&mut rng);
            (0..15)
                .map(|i| {
                    let p = icc_probability(t, 1.0, (i as f64 - 7.0) / 3.0, 0.1);
                    (rng.random_range(0.0..1.0) < p) as u8
                })
                .collect()
        })
        .collect();
    fixtures.push((
        "simulated".into(),
        ResponseMatrix::new(rows, (0..80).collect(), (0..15).collect()).unwrap(),
    ));

    // matrix with degenerate all-correct / all-wrong items
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows: Vec<Vec<u8>> = (0..40)
        .map(|_| {
            let mut row: Vec<u8> = (0..8).map(|_| rng.random_range(0..2)).collect();
            row.push(1);
            row.push(0);
            row
        })
        .collect();
    fixtures.push((
        "degenerate-items".into(),
        ResponseMatrix::new(rows, (0..40).collect(), (0..10).collect()).unwrap(),
    ));

    // real pipeline matrix from the planted-noise fixture
    let ds = load_csv(
        &fixtures_dir().join("planted_noise.csv"),
        "label",
        &SchemaHints::new(),
    )
    .unwrap();
    let (train_set, test_set) = split(&ds, 0.3, 42).unwrap();
    let model = train_random_forest(
        &train_set,
        &Hyperparameters::default_for(ModelFamily::RandomForest),
        42,
    )
    .unwrap();
    let plan = build_plan(
        4,
        &[VariationKind::Negate, VariationKind::Binning],
        2,
        42,
    )
    .unwrap();
    let stats = exirt_core::perturb::column_stats(&train_set);
    let rm = exirt_core::irt::build_response_matrix(&plan, &model, &test_set, &stats).unwrap();
    fixtures.push(("planted-noise-pipeline".into(), rm));

    let mut total_iters = 0;
    for (name, rm) in &fixtures {
        let fit = fit_item_parameters(rm, &FitConfig::default()).unwrap();
        for w in fit.log_likelihood.windows(2) {
            assert!(
                w[1] >= w[0] - 1e-9 * (1.0 + w[0].abs()),
                "{name}: objective decreased {} -> {}",
                w[0],
                w[1]
            );
        }
        total_iters += fit.log_likelihood.len();
    }
    println!(
        "criterion 03 (EM monotonicity): PASS  {} fixture matrices, {total_iters} iterations, no decrease",
        fixtures.len()
    );
}

#[test]
fn criterion_04_spearman_matches_brute_force_oracle() {
    // oracle: average ranks by O(n^2) comparison counting, Pearson by sums
    fn oracle_average_ranks(scores: &[f64]) -> Vec<f64> {
        scores
            .iter()
            .map(|&s| {
                let less = scores.iter().filter(|&&o| o < s).count() as f64;
                let equal = scores.iter().filter(|&&o| o == s).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    }

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 1000 {
        let n = rng.random_range(2..=10usize);
        // small integer alphabet so ties are frequent
        let sa: Vec<f64> = (0..n).map(|_| rng.random_range(0..5) as f64).collect();
        let sb: Vec<f64> = (0..n).map(|_| rng.random_range(0..5) as f64).collect();
        let all_equal = |v: &[f64]| v.iter().all(|&x| x == v[0]);
        if all_equal(&sa) || all_equal(&sb) {
            continue; // correlation undefined on a constant rank
        }
        let names: Vec<String> = (0..n).map(|i| format!("a{i:02}")).collect();
        let rank_a = rank_from_scores(
            "a",
            names.iter().cloned().zip(sa.iter().copied()).collect(),
            RankDirection::Ascending,
        );
        let rank_b = rank_from_scores(
            "b",
            names.iter().cloned().zip(sb.iter().copied()).collect(),
            RankDirection::Ascending,
        );
        let got = spearman(&rank_a, &rank_b).unwrap();
        let want = pearson(&oracle_average_ranks(&sa), &oracle_average_ranks(&sb));
        assert!(
            (got - want).abs() <= 1e-9,
            "pair {checked}: {got} vs oracle {want} (scores {sa:?} / {sb:?})"
        );
        checked += 1;
    }
    println!("criterion 04 (Spearman oracle equivalence): PASS  1000 tied rank pairs within 1e-9");
}

#[test]
fn criterion_05_planted_noise_ranks_last_everywhere() {
    let ds = load_csv(
        &fixtures_dir().join("planted_noise.csv"),
        "label",
        &SchemaHints::new(),
    )
    .unwrap();
    let noise_index = 3;
    assert_eq!(ds.columns[noise_index].name, "z_noise");
    let (train_set, test_set) = split(&ds, 0.3, 42).unwrap();
    let hyper = Hyperparameters::default_for(ModelFamily::RandomForest);
    let model = train_random_forest(&train_set, &hyper, 42).unwrap();

    // split inspection: the forest never reads the noise column
    assert!(
        !model.used_attributes().contains(&noise_index),
        "forest split on the noise column"
    );

    let cfg = ExplainConfig {
        base_seed: 42,
        ..ExplainConfig::default()
    };
    let report = explain(&model, &train_set, &test_set, &cfg).unwrap();
    assert_eq!(report.rank.tail_attribute(), Some("z_noise"));

    let perm = permutation_importance_rank(&model, &test_set, 5, 42).unwrap();
    assert_eq!(perm.tail_attribute(), Some("z_noise"));
    let loco = loco_rank(&train_set, &test_set, ModelFamily::RandomForest, &hyper, 42).unwrap();
    assert_eq!(loco.tail_attribute(), Some("z_noise"));

    // determinism across reruns: byte-identical rank CSV
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("rank1.csv");
    let p2 = dir.path().join("rank2.csv");
    report.rank.write_csv(&p1).unwrap();
    let report2 = explain(&model, &train_set, &test_set, &cfg).unwrap();
    report2.rank.write_csv(&p2).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    println!(
        "criterion 05 (planted noise): PASS  exirt/permutation/loco all rank z_noise last; rerun byte-identical"
    );
}

#[test]
fn criterion_06_respondent_count_law() {
    let mut checked = 0;
    for f in 1..=10usize {
        for v in 1..=12usize {
            let kinds: Vec<VariationKind> = VariationKind::ALL[..v].to_vec();
            for max_arity in [1usize, 2] {
                let plan = build_plan(f, &kinds, max_arity, 5).unwrap();
                let pairs = if max_arity == 2 { f * (f - 1) / 2 } else { 0 };
                assert_eq!(
                    plan.specs.len(),
                    1 + v * f + v * pairs,
                    "f={f} v={v} arity={max_arity}"
                );
                checked += 1;
            }
        }
    }
    println!("criterion 06 (respondent-count law): PASS  {checked} (f, v, arity) combinations");
}

#[test]
fn criterion_07_correlation_matrix_structure() {
    let config = parse_manifest(&fixtures_dir().join("bench_small.toml")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let outcome = run_with_config(config, out.path().to_path_buf(), 2).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);

    let mut matrices = Vec::new();
    for entry in walk_files(out.path()) {
        if entry.file_name() == Some(std::ffi::OsStr::new("correlation_matrix.csv")) {
            matrices.push(entry);
        }
    }
    assert_eq!(matrices.len(), 6, "expected 6 matrices, got {matrices:?}");

    let expected_measures = ["exirt", "infogain", "loco", "permutation"];
    for path in &matrices {
        let matrix = CorrelationMatrix::read_csv(path).unwrap(); // validates symmetry + diagonal
        assert_eq!(matrix.measures, expected_measures);
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!(matrix.get(expected_measures[i], expected_measures[j]).is_some());
            }
        }
    }
    let ranks = walk_files(out.path())
        .into_iter()
        .filter(|p| p.file_name() == Some(std::ffi::OsStr::new("rank.csv")))
        .count();
    assert_eq!(ranks, 24, "3 datasets x 2 families x 4 measures rank files");
    let models = walk_files(out.path())
        .into_iter()
        .filter(|p| p.file_name() == Some(std::ffi::OsStr::new("model.json")))
        .count();
    assert_eq!(models, 6);
    println!(
        "criterion 07 (matrix structure): PASS  6 symmetric unit-diagonal matrices over all C(4,2)=6 pairs; 24 ranks, 6 models"
    );
}

#[test]
fn criterion_08_silhouette_kmeans_and_group_separation() {
    // planted 3-blob data selects K=3
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let centers = [(0.0, 0.0), (8.0, 0.0), (0.0, 8.0)];
    let mut rows = Vec::new();
    let mut names = Vec::new();
    for (b, &(cx, cy)) in centers.iter().enumerate() {
        for i in 0..10 {
            rows.push(vec![
                cx + rng.random_range(-0.6..0.6),
                cy + rng.random_range(-0.6..0.6),
            ]);
            names.push(format!("blob{b}_{i}"));
        }
    }
    let table = exirt_core::analytics::PropertyTable {
        row_names: names,
        column_names: vec!["x".into(), "y".into()],
        rows,
    };
    let scan = silhouette_scan(&table, 2..=10, 3, 10).unwrap();
    assert_eq!(scan.chosen_k, 3, "per_k = {:?}", scan.per_k);

    // published property table reproduction, when the file is supplied
    let supplied = std::env::var_os("EXIRT_PROPERTIES_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|| fixtures_dir().join("df_dataset_properties.csv"));
    let mut reproduction = String::from("property CSV not supplied, reproduction skipped");
    if supplied.exists() {
        let table = exirt_core::analytics::PropertyTable::read_csv(&supplied).unwrap();
        let assignment = exirt_core::analytics::kmeans(&table, 3, 42, 10).unwrap();
        let s = assignment.silhouette_mean;
        assert!(
            (s - 0.28).abs() <= 0.05,
            "K=3 mean silhouette {s} outside 0.28 +/- 0.05"
        );
        reproduction = format!("K=3 mean silhouette {s:.3} within 0.28 +/- 0.05");
    }

    // engineered cluster-profile groups: easy fixtures must agree more
    let config = parse_manifest(&fixtures_dir().join("bench_groups.toml")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let outcome = run_with_config(config, out.path().to_path_buf(), 4).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    let mut easy = Vec::new();
    let mut hard = Vec::new();
    for job in &outcome.jobs {
        let n = job.matrix.measures.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let value = job.matrix.rho[i][j].abs();
                if job.dataset.starts_with("easy_") {
                    easy.push(value);
                } else {
                    hard.push(value);
                }
            }
        }
    }
    let median = |values: &mut Vec<f64>| {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = values.len();
        if n % 2 == 1 {
            values[n / 2]
        } else {
            0.5 * (values[n / 2 - 1] + values[n / 2])
        }
    };
    let median_easy = median(&mut easy);
    let median_hard = median(&mut hard);
    assert!(
        median_easy > median_hard,
        "median |rho| easy {median_easy} <= hard {median_hard}"
    );
    println!(
        "criterion 08 (silhouette/k-means): PASS  blobs pick K=3; {reproduction}; median |rho| easy {median_easy:.3} > hard {median_hard:.3}"
    );
}

#[test]
fn criterion_09_mca_matches_eigen_oracle() {
    // hand-built 4x2 h/s table with distinct leading inertias
    let table = BinaryPropertyTable {
        row_names: vec!["d1".into(), "d2".into(), "d3".into(), "d4".into()],
        column_names: vec!["p1".into(), "p2".into()],
        cells: vec![
            vec![HsSymbol::H, HsSymbol::H],
            vec![HsSymbol::H, HsSymbol::H],
            vec![HsSymbol::S, HsSymbol::H],
            vec![HsSymbol::S, HsSymbol::S],
        ],
    };
    let got = mca(&table).unwrap();

    // independent oracle: dense Jacobi eigen-decomposition of S^T S
    let n = 4usize;
    let labels = ["p1=h", "p1=s", "p2=h", "p2=s"];
    let indicator: Vec<Vec<f64>> = table
        .cells
        .iter()
        .map(|row| {
            let mut z = vec![0.0; 4];
            z[if row[0] == HsSymbol::H { 0 } else { 1 }] = 1.0;
            z[if row[1] == HsSymbol::H { 2 } else { 3 }] = 1.0;
            z
        })
        .collect();
    let total = (n * 2) as f64;
    let freq: Vec<Vec<f64>> = indicator
        .iter()
        .map(|r| r.iter().map(|v| v / total).collect())
        .collect();
    let row_mass: Vec<f64> = freq.iter().map(|r| r.iter().sum()).collect();
    let col_mass: Vec<f64> = (0..4).map(|j| freq.iter().map(|r| r[j]).sum()).collect();
    let s: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..4)
                .map(|j| {
                    (freq[i][j] - row_mass[i] * col_mass[j]) / (row_mass[i] * col_mass[j]).sqrt()
                })
                .collect()
        })
        .collect();
    // S^T S (4x4 symmetric)
    let mut sts = vec![vec![0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            sts[a][b] = (0..n).map(|i| s[i][a] * s[i][b]).sum();
        }
    }
    let (eigenvalues, eigenvectors) = jacobi_eigen(sts);
    // sort descending
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&x, &y| eigenvalues[y].partial_cmp(&eigenvalues[x]).unwrap());

    // compare the two leading non-trivial components
    for (component, &k) in order.iter().take(2).enumerate() {
        let sigma = eigenvalues[k].max(0.0).sqrt();
        assert!(
            (got.inertias[component] - eigenvalues[k]).abs() < 1e-8,
            "inertia {component}: {} vs oracle {}",
            got.inertias[component],
            eigenvalues[k]
        );
        // oracle column coordinates: D_c^{-1/2} v sigma
        let v: Vec<f64> = (0..4).map(|j| eigenvectors[j][k]).collect();
        let col: Vec<f64> = (0..4).map(|j| v[j] * sigma / col_mass[j].sqrt()).collect();
        // oracle row coordinates: D_r^{-1/2} (S v / sigma) sigma = D_r^{-1/2} S v
        let row: Vec<f64> = (0..n)
            .map(|i| {
                let u: f64 = (0..4).map(|j| s[i][j] * v[j]).sum();
                u / row_mass[i].sqrt()
            })
            .collect();

        // align sign on the largest-magnitude row coordinate
        let pivot = (0..n)
            .max_by(|&x, &y| row[x].abs().partial_cmp(&row[y].abs()).unwrap())
            .unwrap();
        let sign = if (row[pivot] >= 0.0) == (got.row_coords[pivot][component] >= 0.0) {
            1.0
        } else {
            -1.0
        };
        for i in 0..n {
            assert!(
                (got.row_coords[i][component] - sign * row[i]).abs() < 1e-8,
                "row {i} component {component}"
            );
        }
        for (j, label) in labels.iter().enumerate() {
            let jj = got
                .column_labels
                .iter()
                .position(|l| l == label)
                .expect("category retained");
            assert!(
                (got.col_coords[jj][component] - sign * col[j]).abs() < 1e-8,
                "column {label} component {component}"
            );
        }
    }
    println!("criterion 09 (MCA oracle): PASS  4x2 table, 2 components within 1e-8 up to sign");
}

/// Plain Jacobi eigen-decomposition for small symmetric matrices; the oracle
/// half of the dual-route check, independent of the SVD the library uses.
fn jacobi_eigen(mut m: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.len();
    let mut vectors = vec![vec![0.0; n]; n];
    for (i, row) in vectors.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-30 {
                    continue;
                }
                let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = vectors[k][p];
                    let vkq = vectors[k][q];
                    vectors[k][p] = c * vkp - s * vkq;
                    vectors[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| m[i][i]).collect();
    (eigenvalues, vectors)
}

#[test]
fn criterion_10_benchmark_rerun_byte_identical() {
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    for out in [&out1, &out2] {
        let config = parse_manifest(&fixtures_dir().join("bench_small.toml")).unwrap();
        let outcome = run_with_config(config, out.path().to_path_buf(), 2).unwrap();
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    }
    let mut compared = 0;
    for path in walk_files(out1.path()) {
        if path.extension() != Some(std::ffi::OsStr::new("csv")) {
            continue;
        }
        let relative = path.strip_prefix(out1.path()).unwrap();
        let twin = out2.path().join(relative);
        let a = std::fs::read(&path).unwrap();
        let b = std::fs::read(&twin).unwrap_or_default();
        assert_eq!(a, b, "{} differs between reruns", relative.display());
        compared += 1;
    }
    assert!(compared >= 30, "only {compared} CSVs compared");
    println!("criterion 10 (rerun determinism): PASS  {compared} CSV files byte-identical");
}

fn walk_files(root: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        if let Ok(entries) = std::fs::read_dir(&dir) {
            for entry in entries.flatten() {
                let path = entry.path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    files.push(path);
                }
            }
        }
    }
    files.sort();
    files
}

// sanity helpers exercised by the suite itself

#[test]
fn suite_self_check_ability_and_matrix_helpers() {
    // cross-method ability agreement also holds on fitted fixture items
    let items = ItemParameters {
        a: vec![1.3, 0.7, 1.9],
        b: vec![-0.8, 0.4, 1.2],
        c: vec![0.05, 0.2, 0.0],
    };
    let reference = estimate_ability(&[1, 1, 0], &items, SearchMethod::Golden).theta;
    for method in SearchMethod::ALL {
        let theta = estimate_ability(&[1, 1, 0], &items, method).theta;
        assert!((theta - reference).abs() < 1e-2, "{}", method.name());
    }
    // correlation_matrix emission path validates structure
    let mut ranks = BTreeMap::new();
    for (name, scores) in [
        ("m1", vec![1.0, 2.0, 3.0]),
        ("m2", vec![2.0, 1.0, 3.0]),
    ] {
        ranks.insert(
            name.to_string(),
            rank_from_scores(
                name,
                vec![
                    ("x".to_string(), scores[0]),
                    ("y".to_string(), scores[1]),
                    ("z".to_string(), scores[2]),
                ],
                RankDirection::Ascending,
            ),
        );
    }
    let matrix = correlation_matrix(&ranks).unwrap();
    matrix.validate().unwrap();
}
