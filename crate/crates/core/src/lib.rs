//! Explain tree-ensemble classifiers by treating perturbed model variants as
//! test respondents and scoring them with item response theory.
//!
//! The crate is organized around a small number of exchange types:
//!
//! - [`dataset::Dataset`] — a loaded tabular binary-classification dataset,
//! - [`ensemble::TrainedEnsemble`] — a random forest or gradient boosting model,
//! - [`perturb::RespondentPlan`] — the population of perturbed model variants,
//! - [`irt::ResponseMatrix`] — the dichotomous respondents-by-items answer matrix,
//! - [`rank::AttributeRank`] — the universal (attribute, score, position) ranking
//!   emitted by every explanation measure and consumed by the correlation
//!   analytics in [`analytics`].
//!
//! The pipeline entry point is [`explain::explain`]; comparison baselines live
//! in [`baselines`]; cross-model analysis (Spearman matrices, clustering,
//! correspondence analysis, item-parameter reports) lives in [`analytics`].

pub mod analytics;
pub mod baselines;
pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod explain;
pub mod io;
pub mod irt;
pub mod perturb;
pub mod rank;
pub mod svg;

pub use error::{Error, Result};
