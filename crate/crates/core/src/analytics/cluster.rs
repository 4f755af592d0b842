//! K-means over z-scored dataset properties, with silhouette-based selection
//! of the cluster count.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytics::PropertyTable;
use crate::error::{Error, Result};
use crate::io;

/// Cluster membership of each dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub row_names: Vec<String>,
    pub assignments: Vec<usize>,
    pub k: usize,
    pub silhouette_mean: f64,
}

impl ClusterAssignment {
    pub fn cluster_of(&self, name: &str) -> Option<usize> {
        self.row_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.assignments[i])
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut records = vec![vec!["dataset".to_string(), "cluster".to_string()]];
        for (name, &cluster) in self.row_names.iter().zip(&self.assignments) {
            records.push(vec![name.clone(), cluster.to_string()]);
        }
        io::write_csv(path, &records)
    }

    pub fn read_csv(path: &Path) -> Result<ClusterAssignment> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut row_names = Vec::new();
        let mut assignments = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?;
            row_names.push(record.get(0).unwrap_or("").to_string());
            assignments.push(
                record
                    .get(1)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::Analytics(format!("bad cluster row in {}", path.display()))
                    })?,
            );
        }
        let k = assignments.iter().max().map(|m| m + 1).unwrap_or(0);
        Ok(ClusterAssignment {
            row_names,
            assignments,
            k,
            silhouette_mean: f64::NAN,
        })
    }
}

/// Z-score each column; zero-variance columns become all zeros.
fn standardize(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len() as f64;
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut out = rows.to_vec();
    for j in 0..cols {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        for row in out.iter_mut() {
            row[j] = if std > 0.0 { (row[j] - mean) / std } else { 0.0 };
        }
    }
    out
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

struct KmeansRun {
    assignments: Vec<usize>,
    wcss: f64,
}

fn lloyd(points: &[Vec<f64>], k: usize, seed: u64) -> KmeansRun {
    let n = points.len();
    let dims = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut centroids: Vec<Vec<f64>> = order[..k].iter().map(|&i| points[i].clone()).collect();

    let mut assignments = vec![0usize; n];
    let mut prev_wcss = f64::INFINITY;
    for _ in 0..100 {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(p, centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }
        // recompute centroids; an emptied cluster takes the point farthest
        // from its own centroid
        let mut sums = vec![vec![0.0; dims]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assignments[i]] += 1;
            for (s, v) in sums[assignments[i]].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                let (far_idx, _) = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, sq_dist(p, &centroids[assignments[i]])))
                    .max_by(|(ia, da), (ib, db)| {
                        da.partial_cmp(db).unwrap().then(ia.cmp(ib))
                    })
                    .unwrap();
                assignments[far_idx] = c;
                centroids[c] = points[far_idx].clone();
                changed = true;
            } else {
                for (j, s) in sums[c].iter().enumerate() {
                    centroids[c][j] = s / counts[c] as f64;
                }
            }
        }
        let wcss: f64 = points
            .iter()
            .zip(&assignments)
            .map(|(p, &c)| sq_dist(p, &centroids[c]))
            .sum();
        debug_assert!(
            wcss <= prev_wcss + 1e-9 * (1.0 + prev_wcss.abs()),
            "lloyd iteration increased wcss: {prev_wcss} -> {wcss}"
        );
        prev_wcss = wcss;
        if !changed {
            break;
        }
    }

    let wcss = points
        .iter()
        .zip(&assignments)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum();
    KmeansRun { assignments, wcss }
}

/// Mean silhouette coefficient of an assignment under Euclidean distance.
/// Singleton clusters contribute 0 for their lone member.
pub fn silhouette_mean(points: &[Vec<f64>], assignments: &[usize], k: usize) -> f64 {
    let n = points.len();
    if n == 0 || k < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = assignments[i];
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for j in 0..n {
            if j == i {
                continue;
            }
            sums[assignments[j]] += sq_dist(&points[i], &points[j]).sqrt();
            counts[assignments[j]] += 1;
        }
        if counts[own] == 0 {
            continue; // singleton: silhouette 0
        }
        let a = sums[own] / counts[own] as f64;
        let b = (0..k)
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if b.is_finite() {
            let s = (b - a) / a.max(b).max(1e-300);
            total += s;
        }
    }
    total / n as f64
}

/// Best-of-`restarts` seeded Lloyd runs on z-scored features, judged by
/// within-cluster sum of squares.
pub fn kmeans(
    props: &PropertyTable,
    k: usize,
    seed: u64,
    restarts: usize,
) -> Result<ClusterAssignment> {
    if props.n_rows() < k || k == 0 {
        return Err(Error::Analytics(format!(
            "kmeans needs at least k={k} rows, got {}",
            props.n_rows()
        )));
    }
    let points = standardize(&props.rows);
    let mut best: Option<KmeansRun> = None;
    for r in 0..restarts.max(1) {
        let run = lloyd(&points, k, seed.wrapping_add(r as u64));
        let better = match &best {
            None => true,
            Some(b) => run.wcss < b.wcss,
        };
        if better {
            best = Some(run);
        }
    }
    let run = best.unwrap();
    let silhouette = silhouette_mean(&points, &run.assignments, k);
    Ok(ClusterAssignment {
        row_names: props.row_names.clone(),
        assignments: run.assignments,
        k,
        silhouette_mean: silhouette,
    })
}

/// Result of scanning K over a range.
#[derive(Debug, Clone, PartialEq)]
pub struct SilhouetteScan {
    /// (k, mean silhouette) per scanned value.
    pub per_k: Vec<(usize, f64)>,
    pub chosen_k: usize,
    pub chosen_silhouette: f64,
}

impl SilhouetteScan {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut records = vec![vec![
            "k".to_string(),
            "mean_silhouette".to_string(),
            "chosen".to_string(),
        ]];
        for &(k, s) in &self.per_k {
            records.push(vec![
                k.to_string(),
                io::fmt_f64(s),
                (k == self.chosen_k).to_string(),
            ]);
        }
        io::write_csv(path, &records)
    }
}

/// Scan K over `k_range` (clamped to feasible values), choosing the K with
/// the highest mean silhouette; ties go to the smaller K.
pub fn silhouette_scan(
    props: &PropertyTable,
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
    restarts: usize,
) -> Result<SilhouetteScan> {
    let n = props.n_rows();
    if n < 3 {
        return Err(Error::Analytics(
            "silhouette scan needs at least 3 rows".into(),
        ));
    }
    let lo = (*k_range.start()).max(2);
    let hi = (*k_range.end()).min(n - 1);
    if lo > hi {
        return Err(Error::Analytics(format!(
            "empty feasible K range for {n} rows"
        )));
    }
    let mut per_k = Vec::new();
    for k in lo..=hi {
        let assignment = kmeans(props, k, seed, restarts)?;
        per_k.push((k, assignment.silhouette_mean));
    }
    let (chosen_k, chosen_silhouette) = per_k
        .iter()
        .copied()
        .max_by(|(ka, sa), (kb, sb)| sa.partial_cmp(sb).unwrap().then(kb.cmp(ka)))
        .unwrap();
    Ok(SilhouetteScan {
        per_k,
        chosen_k,
        chosen_silhouette,
    })
}

/// Group row names by cluster id, for reporting.
pub fn members_by_cluster(assignment: &ClusterAssignment) -> BTreeMap<usize, Vec<String>> {
    let mut map: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (name, &c) in assignment.row_names.iter().zip(&assignment.assignments) {
        map.entry(c).or_default().push(name.clone());
    }
    map
}
