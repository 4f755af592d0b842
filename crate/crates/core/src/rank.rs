//! The universal attribute-rank exchange type.
//!
//! Every explanation measure emits an [`AttributeRank`]: attributes paired
//! with a score and a 1-based position. Ordering direction depends on the
//! measure (relevance by ascending skill score, importance by descending
//! gain); ties always break by attribute name so reruns are byte-identical.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// Whether position 1 belongs to the smallest or the largest score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankDirection {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub attribute: String,
    pub score: f64,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRank {
    pub measure: String,
    pub direction: RankDirection,
    /// Sorted by position (1-based).
    pub entries: Vec<RankEntry>,
}

/// Sort scored attributes into a rank, breaking ties lexicographically.
pub fn rank_from_scores(
    measure: &str,
    scores: Vec<(String, f64)>,
    direction: RankDirection,
) -> AttributeRank {
    let mut scored = scores;
    scored.sort_by(|(na, sa), (nb, sb)| {
        let ord = match direction {
            RankDirection::Ascending => sa.partial_cmp(sb).unwrap(),
            RankDirection::Descending => sb.partial_cmp(sa).unwrap(),
        };
        ord.then_with(|| na.cmp(nb))
    });
    AttributeRank {
        measure: measure.to_string(),
        direction,
        entries: scored
            .into_iter()
            .enumerate()
            .map(|(i, (attribute, score))| RankEntry {
                attribute,
                score,
                position: i + 1,
            })
            .collect(),
    }
}

impl AttributeRank {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position_of(&self, attribute: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.attribute == attribute)
            .map(|e| e.position)
    }

    /// Attribute at the last (least relevant / least important) position.
    pub fn tail_attribute(&self) -> Option<&str> {
        self.entries
            .iter()
            .max_by_key(|e| e.position)
            .map(|e| e.attribute.as_str())
    }

    /// Check positions form 1..=n and scores are monotone along positions.
    pub fn validate(&self) -> Result<()> {
        let n = self.entries.len();
        let mut seen = vec![false; n];
        for e in &self.entries {
            if e.position == 0 || e.position > n || seen[e.position - 1] {
                return Err(Error::Rank(format!(
                    "positions are not a permutation of 1..={n}"
                )));
            }
            seen[e.position - 1] = true;
        }
        let mut ordered = self.entries.clone();
        ordered.sort_by_key(|e| e.position);
        for w in ordered.windows(2) {
            let ok = match self.direction {
                RankDirection::Ascending => w[0].score <= w[1].score,
                RankDirection::Descending => w[0].score >= w[1].score,
            };
            if !ok {
                return Err(Error::Rank("scores not monotone along positions".into()));
            }
        }
        Ok(())
    }

    /// Write the shared rank CSV schema: measure, attribute, score, position.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut records = vec![vec![
            "measure".to_string(),
            "attribute".to_string(),
            "score".to_string(),
            "position".to_string(),
        ]];
        for e in &self.entries {
            records.push(vec![
                self.measure.clone(),
                e.attribute.clone(),
                io::fmt_f64(e.score),
                e.position.to_string(),
            ]);
        }
        io::write_csv(path, &records)
    }

    /// Read a rank CSV written by [`AttributeRank::write_csv`]. The direction
    /// is inferred from the score ordering along positions.
    pub fn read_csv(path: &Path) -> Result<AttributeRank> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut measure = String::new();
        let mut entries = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Csv {
                path: path.to_path_buf(),
                source: e,
            })?;
            measure = record.get(0).unwrap_or("").to_string();
            let attribute = record
                .get(1)
                .ok_or_else(|| Error::Rank(format!("short row in {}", path.display())))?
                .to_string();
            let score: f64 = record
                .get(2)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Rank(format!("bad score in {}", path.display())))?;
            let position: usize = record
                .get(3)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Rank(format!("bad position in {}", path.display())))?;
            entries.push(RankEntry {
                attribute,
                score,
                position,
            });
        }
        entries.sort_by_key(|e| e.position);
        let ascending = entries
            .windows(2)
            .all(|w| w[0].score <= w[1].score);
        Ok(AttributeRank {
            measure,
            direction: if ascending {
                RankDirection::Ascending
            } else {
                RankDirection::Descending
            },
            entries,
        })
    }
}
