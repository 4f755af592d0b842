//! Spearman rank correlation with tie handling, and the per-model
//! correlation matrix over all measure pairs.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;
use crate::rank::AttributeRank;

/// Tie-averaged rank positions, derived from a rank's scores: attributes with
/// equal scores share the mean of the positions they occupy.
fn average_positions(rank: &AttributeRank) -> BTreeMap<&str, f64> {
    let mut ordered: Vec<_> = rank.entries.iter().collect();
    ordered.sort_by_key(|e| e.position);
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < ordered.len() {
        let mut j = i;
        while j < ordered.len() && ordered[j].score == ordered[i].score {
            j += 1;
        }
        // positions are consecutive inside a tie group
        let mean = ordered[i..j]
            .iter()
            .map(|e| e.position as f64)
            .sum::<f64>()
            / (j - i) as f64;
        for e in &ordered[i..j] {
            out.insert(e.attribute.as_str(), mean);
        }
        i = j;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        // a fully tied rank carries no ordering information
        return 0.0;
    }
    (cov / (vx * vy).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman correlation of two ranks over the same attribute set: Pearson on
/// tie-averaged positions.
pub fn spearman(rank_a: &AttributeRank, rank_b: &AttributeRank) -> Result<f64> {
    if rank_a.len() != rank_b.len() || rank_a.len() < 2 {
        return Err(Error::Rank(format!(
            "spearman needs two ranks over the same >=2 attributes, got {} and {}",
            rank_a.len(),
            rank_b.len()
        )));
    }
    let pos_a = average_positions(rank_a);
    let pos_b = average_positions(rank_b);
    if pos_a.keys().ne(pos_b.keys()) {
        return Err(Error::Rank("ranks cover different attribute sets".into()));
    }
    let x: Vec<f64> = pos_a.values().copied().collect();
    let y: Vec<f64> = pos_b.values().copied().collect();
    Ok(pearson(&x, &y))
}

/// Symmetric unit-diagonal matrix of pairwise Spearman correlations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub measures: Vec<String>,
    pub rho: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn validate(&self) -> Result<()> {
        let n = self.measures.len();
        if self.rho.len() != n || self.rho.iter().any(|r| r.len() != n) {
            return Err(Error::Analytics("correlation matrix not square".into()));
        }
        for i in 0..n {
            if self.rho[i][i] != 1.0 {
                return Err(Error::Analytics("correlation diagonal must be 1".into()));
            }
            for j in 0..n {
                let v = self.rho[i][j];
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Analytics(format!("correlation {v} out of range")));
                }
                if self.rho[i][j] != self.rho[j][i] {
                    return Err(Error::Analytics("correlation matrix not symmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Correlation for a measure pair, in either order.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.measures.iter().position(|m| m == a)?;
        let j = self.measures.iter().position(|m| m == b)?;
        Some(self.rho[i][j])
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let mut records = Vec::new();
        let mut header = vec!["measure".to_string()];
        header.extend(self.measures.iter().cloned());
        records.push(header);
        for (i, m) in self.measures.iter().enumerate() {
            let mut row = vec![m.clone()];
            row.extend(self.rho[i].iter().map(|v| io::fmt_f64(*v)));
            records.push(row);
        }
        io::write_csv(path, &records)
    }

    pub fn read_csv(path: &Path) -> Result<CorrelationMatrix> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let measures: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?
            .iter()
            .skip(1)
            .map(|s| s.to_string())
            .collect();
        let mut rho = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?;
            let row: Vec<f64> = record
                .iter()
                .skip(1)
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Analytics(format!("bad matrix cell in {}", path.display())))?;
            rho.push(row);
        }
        let matrix = CorrelationMatrix { measures, rho };
        matrix.validate()?;
        Ok(matrix)
    }
}

/// Pairwise Spearman over all measures. The map's iteration order (sorted by
/// measure name) fixes the matrix layout.
pub fn correlation_matrix(ranks: &BTreeMap<String, AttributeRank>) -> Result<CorrelationMatrix> {
    let measures: Vec<String> = ranks.keys().cloned().collect();
    let n = measures.len();
    let mut rho = vec![vec![0.0; n]; n];
    for i in 0..n {
        rho[i][i] = 1.0;
        for j in (i + 1)..n {
            let r = spearman(&ranks[&measures[i]], &ranks[&measures[j]])?;
            rho[i][j] = r;
            rho[j][i] = r;
        }
    }
    let matrix = CorrelationMatrix { measures, rho };
    matrix.validate()?;
    Ok(matrix)
}
