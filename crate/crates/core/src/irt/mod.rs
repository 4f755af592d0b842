//! Dichotomous response matrices and the three-parameter logistic model:
//! marginal maximum likelihood item calibration, ability estimation by 1-D
//! search, and the Total Score.
//!
//! Item calibration is an EM fit: abilities are integrated against a standard
//! normal prior on a fixed quadrature grid, and each item's parameters are
//! updated by bounded coordinate ascent on the expected complete-data
//! likelihood, so the marginal log-likelihood never decreases.

pub mod search;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use search::SearchMethod;

use crate::dataset::Dataset;
use crate::ensemble::TrainedEnsemble;
use crate::error::{Error, Result};
use crate::io;
use crate::perturb::{apply_variation, ColumnStats, RespondentPlan};

/// Estimation bounds for item parameters and abilities.
pub const A_MIN: f64 = 0.01;
pub const A_MAX: f64 = 4.0;
pub const B_MIN: f64 = -4.0;
pub const B_MAX: f64 = 4.0;
pub const C_MIN: f64 = 0.0;
pub const C_MAX: f64 = 0.5;
pub const THETA_MIN: f64 = -4.0;
pub const THETA_MAX: f64 = 4.0;

/// Absolute tolerance of the ability search.
pub const THETA_TOL: f64 = 1e-4;

/// Respondents-by-items correctness matrix: cell 1 means the respondent
/// predicted that item's true label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    pub rows: Vec<Vec<u8>>,
    pub respondent_ids: Vec<usize>,
    /// Test-instance indices, one per item column.
    pub item_ids: Vec<usize>,
}

impl ResponseMatrix {
    pub fn new(rows: Vec<Vec<u8>>, respondent_ids: Vec<usize>, item_ids: Vec<usize>) -> Result<Self> {
        if rows.len() != respondent_ids.len() {
            return Err(Error::InvalidResponseMatrix(
                "row/respondent count mismatch".into(),
            ));
        }
        let width = item_ids.len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidResponseMatrix("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&u| u > 1) {
            return Err(Error::InvalidResponseMatrix("cells must be 0/1".into()));
        }
        Ok(ResponseMatrix {
            rows,
            respondent_ids,
            item_ids,
        })
    }

    pub fn n_respondents(&self) -> usize {
        self.rows.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_ids.len()
    }
}

/// Fitted discrimination/difficulty/guessing per item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemParameters {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ItemParameters {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// A respondent's estimated latent ability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbilityEstimate {
    pub theta: f64,
    pub method: SearchMethod,
}

/// EM configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub quadrature_points: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            quadrature_points: 40,
            max_iter: 50,
            tol: 1e-4,
        }
    }
}

/// Fit output: parameters plus the marginal log-likelihood trace (including
/// the item-parameter log priors, i.e. the EM objective), one entry per
/// iteration, non-decreasing.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub items: ItemParameters,
    pub log_likelihood: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Hit probability of the three-parameter logistic model.
pub fn icc_probability(theta: f64, a: f64, b: f64, c: f64) -> f64 {
    c + (1.0 - c) * sigmoid(a * (theta - b))
}

/// Analytic derivative of [`icc_probability`] with respect to theta.
pub fn icc_slope(theta: f64, a: f64, b: f64, c: f64) -> f64 {
    let s = sigmoid(a * (theta - b));
    (1.0 - c) * a * s * (1.0 - s)
}

/// Run every respondent in the plan through the model on perturbed copies of
/// the test split and record correctness per test instance.
pub fn build_response_matrix(
    plan: &RespondentPlan,
    model: &TrainedEnsemble,
    test: &Dataset,
    stats: &[ColumnStats],
) -> Result<ResponseMatrix> {
    if model.feature_count() != test.feature_count() {
        return Err(Error::WidthMismatch {
            expected: model.feature_count(),
            got: test.feature_count(),
        });
    }
    if plan.attribute_count != test.feature_count() {
        return Err(Error::WidthMismatch {
            expected: plan.attribute_count,
            got: test.feature_count(),
        });
    }
    if stats.len() != test.feature_count() {
        return Err(Error::WidthMismatch {
            expected: test.feature_count(),
            got: stats.len(),
        });
    }
    let matrix = test.matrix();
    let mut rows = Vec::with_capacity(plan.specs.len());
    let mut respondent_ids = Vec::with_capacity(plan.specs.len());
    for spec in &plan.specs {
        let perturbed = apply_variation(&matrix, spec, stats);
        let preds = model
            .predict(&perturbed)
            .map_err(|e| e.for_respondent(spec.respondent_id))?;
        let row: Vec<u8> = preds
            .iter()
            .zip(&test.labels)
            .map(|(p, l)| (p == l) as u8)
            .collect();
        rows.push(row);
        respondent_ids.push(spec.respondent_id);
    }
    ResponseMatrix::new(rows, respondent_ids, (0..test.row_count()).collect())
}

struct Quadrature {
    points: Vec<f64>,
    weights: Vec<f64>,
}

fn quadrature(n: usize) -> Quadrature {
    let n = n.max(3);
    let points: Vec<f64> = (0..n)
        .map(|k| THETA_MIN + (THETA_MAX - THETA_MIN) * k as f64 / (n - 1) as f64)
        .collect();
    let raw: Vec<f64> = points.iter().map(|t| (-0.5 * t * t).exp()).collect();
    let total: f64 = raw.iter().sum();
    Quadrature {
        points,
        weights: raw.iter().map(|w| w / total).collect(),
    }
}

const P_FLOOR: f64 = 1e-10;

fn ln_clamped(p: f64) -> f64 {
    p.clamp(P_FLOOR, 1.0 - P_FLOOR).ln()
}

/// Weak stabilizing priors on the item parameters, the usual cure for the
/// guessing parameter soaking up sampling noise at modest respondent counts:
/// a ~ LogNormal(0, 0.5), b ~ Normal(0, 2), c ~ Beta(4, 25).
fn log_prior(a: f64, b: f64, c: f64) -> f64 {
    let la = a.ln();
    -0.5 * (la / 0.5) * (la / 0.5) - la - 0.5 * (b / 2.0) * (b / 2.0)
        + 3.0 * ln_clamped(c)
        + 24.0 * ln_clamped(1.0 - c)
}

/// Expected complete-data log-likelihood of one item given quadrature counts,
/// plus the item's log prior (the quantity the M-step maximizes).
fn item_objective(r: &[f64], n: &[f64], points: &[f64], a: f64, b: f64, c: f64) -> f64 {
    let mut total = log_prior(a, b, c);
    for q in 0..points.len() {
        let p = icc_probability(points[q], a, b, c);
        total += r[q] * ln_clamped(p) + (n[q] - r[q]) * ln_clamped(1.0 - p);
    }
    total
}

/// Fit 3PL item parameters by marginal maximum likelihood EM.
///
/// Items answered all-correct or all-wrong carry no signal; they are kept (so
/// item ids stay aligned with test instances) with parameters pinned at the
/// clamp bounds: difficulty at the floor for all-correct items and at the
/// ceiling for all-wrong ones, discrimination at its lower bound.
pub fn fit_item_parameters(rm: &ResponseMatrix, config: &FitConfig) -> Result<FitResult> {
    let n_resp = rm.n_respondents();
    let n_items = rm.n_items();
    if n_resp < 2 || n_items < 2 {
        return Err(Error::InvalidResponseMatrix(format!(
            "estimation needs at least 2 respondents and 2 items, got {n_resp}x{n_items}"
        )));
    }
    if rm.rows.iter().all(|r| *r == rm.rows[0]) {
        return Err(Error::NoDiscriminationSignal);
    }

    let quad = quadrature(config.quadrature_points);
    let nq = quad.points.len();

    // classify items; degenerate columns get pinned parameters
    let mut a = vec![1.0; n_items];
    let mut b = vec![0.0; n_items];
    let mut c = vec![0.1; n_items];
    let mut active = vec![true; n_items];
    for i in 0..n_items {
        let correct: usize = rm.rows.iter().map(|r| r[i] as usize).sum();
        if correct == 0 {
            active[i] = false;
            a[i] = A_MIN;
            b[i] = B_MAX;
            c[i] = C_MIN;
        } else if correct == n_resp {
            active[i] = false;
            a[i] = A_MIN;
            b[i] = B_MIN;
            c[i] = C_MIN;
        } else {
            let p = correct as f64 / n_resp as f64;
            b[i] = (-((p / (1.0 - p)).ln())).clamp(B_MIN, B_MAX);
        }
    }

    let mut trace = Vec::with_capacity(config.max_iter);
    let mut prev_ll = f64::NEG_INFINITY;

    // per-iteration buffers
    let mut ln_p = vec![vec![0.0; nq]; n_items];
    let mut ln_q = vec![vec![0.0; nq]; n_items];
    let mut r_counts = vec![vec![0.0; nq]; n_items];
    let mut n_counts = vec![0.0; nq];

    for _iter in 0..config.max_iter {
        // E-step: posterior weight of each quadrature point per respondent
        for i in 0..n_items {
            for q in 0..nq {
                let p = icc_probability(quad.points[q], a[i], b[i], c[i]);
                ln_p[i][q] = ln_clamped(p);
                ln_q[i][q] = ln_clamped(1.0 - p);
            }
        }
        for counts in r_counts.iter_mut() {
            counts.iter_mut().for_each(|v| *v = 0.0);
        }
        n_counts.iter_mut().for_each(|v| *v = 0.0);

        let mut marginal_ll = 0.0;
        let mut joint = vec![0.0; nq];
        for row in &rm.rows {
            for q in 0..nq {
                let mut lp = quad.weights[q].ln();
                for i in 0..n_items {
                    lp += if row[i] == 1 { ln_p[i][q] } else { ln_q[i][q] };
                }
                joint[q] = lp;
            }
            let max = joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = joint.iter().map(|&lp| (lp - max).exp()).sum();
            marginal_ll += max + sum.ln();
            for q in 0..nq {
                let w = (joint[q] - max).exp() / sum;
                n_counts[q] += w;
                for i in 0..n_items {
                    if row[i] == 1 {
                        r_counts[i][q] += w;
                    }
                }
            }
        }
        for i in 0..n_items {
            marginal_ll += log_prior(a[i], b[i], c[i]);
        }
        trace.push(marginal_ll);

        if marginal_ll - prev_ll < config.tol && prev_ll.is_finite() {
            break;
        }
        prev_ll = marginal_ll;

        // M-step: bounded coordinate ascent per item; keep a move only when
        // it improves the expected likelihood, which preserves EM monotonicity
        for i in 0..n_items {
            if !active[i] {
                continue;
            }
            let r = &r_counts[i];
            let mut cur = item_objective(r, &n_counts, &quad.points, a[i], b[i], c[i]);
            for _sweep in 0..8 {
                let before = cur;
                let cand =
                    search::golden(|x| item_objective(r, &n_counts, &quad.points, a[i], x, c[i]), B_MIN, B_MAX, 1e-5);
                let val = item_objective(r, &n_counts, &quad.points, a[i], cand, c[i]);
                if val > cur {
                    b[i] = cand;
                    cur = val;
                }
                let cand =
                    search::golden(|x| item_objective(r, &n_counts, &quad.points, x, b[i], c[i]), A_MIN, A_MAX, 1e-5);
                let val = item_objective(r, &n_counts, &quad.points, cand, b[i], c[i]);
                if val > cur {
                    a[i] = cand;
                    cur = val;
                }
                let cand =
                    search::golden(|x| item_objective(r, &n_counts, &quad.points, a[i], b[i], x), C_MIN, C_MAX, 1e-5);
                let val = item_objective(r, &n_counts, &quad.points, a[i], b[i], cand);
                if val > cur {
                    c[i] = cand;
                    cur = val;
                }
                if cur - before < 1e-9 * (1.0 + before.abs()) {
                    break;
                }
            }
        }
    }

    Ok(FitResult {
        items: ItemParameters { a, b, c },
        log_likelihood: trace,
    })
}

/// Bernoulli log-likelihood of one response row at ability `theta`.
pub fn response_log_likelihood(row: &[u8], items: &ItemParameters, theta: f64) -> f64 {
    let mut ll = 0.0;
    for i in 0..items.len() {
        let p = icc_probability(theta, items.a[i], items.b[i], items.c[i]);
        ll += if row[i] == 1 {
            ln_clamped(p)
        } else {
            ln_clamped(1.0 - p)
        };
    }
    ll
}

/// Maximum-likelihood ability estimate over `[-4, 4]` using the chosen
/// one-dimensional search.
pub fn estimate_ability(
    row: &[u8],
    items: &ItemParameters,
    method: SearchMethod,
) -> AbilityEstimate {
    let theta = method.maximize(
        |t| response_log_likelihood(row, items, t),
        THETA_MIN,
        THETA_MAX,
        THETA_TOL,
    );
    AbilityEstimate { theta, method }
}

/// Total Score: hit probabilities summed over correct items minus miss
/// probabilities over wrong items.
pub fn total_score(row: &[u8], theta: f64, items: &ItemParameters) -> f64 {
    let mut t = 0.0;
    for i in 0..items.len() {
        let p = icc_probability(theta, items.a[i], items.b[i], items.c[i]);
        if row[i] == 1 {
            t += p;
        } else {
            t -= 1.0 - p;
        }
    }
    t
}

/// Export fitted item parameters as CSV (item_id, a, b, c).
pub fn write_item_params_csv(path: &Path, item_ids: &[usize], items: &ItemParameters) -> Result<()> {
    let mut records = vec![vec![
        "item_id".to_string(),
        "a".to_string(),
        "b".to_string(),
        "c".to_string(),
    ]];
    for (i, &id) in item_ids.iter().enumerate() {
        records.push(vec![
            id.to_string(),
            io::fmt_f64(items.a[i]),
            io::fmt_f64(items.b[i]),
            io::fmt_f64(items.c[i]),
        ]);
    }
    io::write_csv(path, &records)
}

/// Read an item-parameter CSV written by [`write_item_params_csv`].
pub fn read_item_params_csv(path: &Path) -> Result<(Vec<usize>, ItemParameters)> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut ids = Vec::new();
    let mut items = ItemParameters {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
    };
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let parse = |idx: usize| -> Result<f64> {
            record
                .get(idx)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Analytics(format!("bad item param row in {}", path.display())))
        };
        ids.push(parse(0)? as usize);
        items.a.push(parse(1)?);
        items.b.push(parse(2)?);
        items.c.push(parse(3)?);
    }
    Ok((ids, items))
}
