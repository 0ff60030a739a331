//! Single-sample feature importance.
//!
//! Every internal node a sample passes through contributes
//! `|s - f| / (1 + alpha^-d)` to the node's split feature, where `s` is the
//! node threshold, `f` the sample's value of that feature and `d` the node
//! depth (root = 0). Contributions are summed over every node of every tree's
//! path; features that never appear on a path score exactly zero.

use std::collections::BTreeMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{apply_normalizer, fit_normalizer, Dataset, Task};
use crate::error::{Error, Result};
use crate::eval::metrics::{accuracy, r_squared};
use crate::forest::{fit_forest, rank_descending, ForestConfig, RandomForest};
use crate::seed::{derive_seed, rng_from_seed};

pub const DEFAULT_ALPHA: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsfiConfig {
    pub alpha: f64,
}

impl Default for SsfiConfig {
    fn default() -> Self {
        SsfiConfig {
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl SsfiConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        let cfg = SsfiConfig { alpha };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::NonPositiveAlpha(self.alpha));
        }
        Ok(())
    }

    /// Logs a warning when `alpha >= 1`, where deeper nodes weigh at least as
    /// much as the root.
    pub fn warn_if_inverted(&self) {
        if self.alpha >= 1.0 {
            warn!("alpha = {} >= 1 inverts the depth weighting", self.alpha);
        }
    }
}

/// `1 / (1 + alpha^-depth)`.
pub fn depth_weight(depth: usize, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    Ok(1.0 / (1.0 + alpha.powi(-(depth as i32))))
}

pub fn node_importance(value: f64, depth: usize, split: f64, alpha: f64) -> Result<f64> {
    if !value.is_finite() || !split.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    Ok(depth_weight(depth, alpha)? * (split - value).abs())
}

/// Per-feature importances for one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsfiScores {
    pub sample_index: Option<usize>,
    pub raw: Vec<f64>,
    /// `raw` scaled to sum to 1; all zeros when `raw` is all zeros.
    pub normalized: Vec<f64>,
    /// Feature indices by descending score, ties to the lower index.
    pub ranking: Vec<usize>,
}

impl SsfiScores {
    pub fn from_raw(raw: Vec<f64>, sample_index: Option<usize>) -> Self {
        let total: f64 = raw.iter().sum();
        let normalized = if total > 0.0 {
            raw.iter().map(|v| v / total).collect()
        } else {
            vec![0.0; raw.len()]
        };
        let ranking = rank_descending(&raw);
        SsfiScores {
            sample_index,
            raw,
            normalized,
            ranking,
        }
    }
}

/// Scores `sample` against every tree of `forest`.
pub fn score_sample(forest: &RandomForest, sample: &[f64], cfg: &SsfiConfig) -> Result<SsfiScores> {
    cfg.validate()?;
    crate::tree::check_sample(sample, forest.n_features)?;
    if sample.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        warn!("sample has values outside [0, 1]; split distances are scale-sensitive");
    }
    let max_depth = forest.trees.iter().map(|t| t.depth()).max().unwrap_or(0);
    let weights: Vec<f64> = (0..=max_depth)
        .map(|d| depth_weight(d, cfg.alpha))
        .collect::<Result<_>>()?;
    let mut raw = vec![0.0; forest.n_features];
    for tree in &forest.trees {
        for step in tree.path_unchecked(sample).steps {
            raw[step.feature] +=
                weights[step.depth] * (step.threshold - sample[step.feature]).abs();
        }
    }
    Ok(SsfiScores::from_raw(raw, None))
}

pub fn top_k(s: &SsfiScores, k: usize) -> Result<Vec<usize>> {
    let p = s.ranking.len();
    if k == 0 || k > p {
        return Err(Error::KOutOfRange { k, p });
    }
    Ok(s.ranking[..k].to_vec())
}

/// One held-out sample's scores and the scoring forest's prediction for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsfiRecord {
    pub sample_index: usize,
    pub prediction: f64,
    pub truth: f64,
    pub scores: SsfiScores,
    /// Original row indices the scoring forest was trained on.
    #[serde(skip)]
    pub train_rows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", content = "value", rename_all = "snake_case")]
pub enum Viability {
    Accuracy(f64),
    RSquared(f64),
}

impl Viability {
    pub fn value(&self) -> f64 {
        match *self {
            Viability::Accuracy(v) | Viability::RSquared(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsfiRun {
    pub records: Vec<SsfiRecord>,
    /// How well the held-out predictions match the truths; `None` when the
    /// metric is undefined (e.g. constant predictions).
    pub viability: Option<Viability>,
}

impl SsfiRun {
    pub fn by_sample(&self) -> BTreeMap<usize, &SsfiScores> {
        self.records
            .iter()
            .map(|r| (r.sample_index, &r.scores))
            .collect()
    }
}

/// Which rows train the forest that scores a held-out sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainPool {
    /// Every other row (leave-one-out).
    AllOthers,
    /// A seeded random subset of the other rows.
    Subset { size: usize, seed: u64 },
}

/// Leave-one-out SSFI over every row of `d`.
///
/// For each row a normalizer is fit on the remaining rows, a forest seeded by
/// `derive_seed(fcfg.seed, row)` is trained on them, and the held-out row is
/// scored after scaling it with the training normalizer.
pub fn ssfi_loo(d: &Dataset, fcfg: &ForestConfig, scfg: &SsfiConfig) -> Result<SsfiRun> {
    let n = d.n_samples();
    if n < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            found: n,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    score_held_out(d, &all, fcfg, scfg, TrainPool::AllOthers)
}

/// SSFI for the listed rows, each scored by a forest that never saw it.
pub fn score_held_out(
    d: &Dataset,
    samples: &[usize],
    fcfg: &ForestConfig,
    scfg: &SsfiConfig,
    pool: TrainPool,
) -> Result<SsfiRun> {
    fcfg.validate()?;
    scfg.validate()?;
    scfg.warn_if_inverted();
    let n = d.n_samples();
    if n < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: n,
        });
    }
    for &i in samples {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    let records = samples
        .par_iter()
        .map(|&i| score_one(d, i, fcfg, scfg, pool))
        .collect::<Result<Vec<_>>>()?;

    let preds: Vec<f64> = records.iter().map(|r| r.prediction).collect();
    let truths: Vec<f64> = records.iter().map(|r| r.truth).collect();
    let viability = match d.task() {
        Task::Classification => accuracy(&preds, &truths).ok().map(Viability::Accuracy),
        Task::Regression => r_squared(&preds, &truths).ok().map(Viability::RSquared),
    };
    Ok(SsfiRun { records, viability })
}

fn score_one(
    d: &Dataset,
    index: usize,
    fcfg: &ForestConfig,
    scfg: &SsfiConfig,
    pool: TrainPool,
) -> Result<SsfiRecord> {
    let n = d.n_samples();
    let mut train_rows: Vec<usize> = (0..n).filter(|&i| i != index).collect();
    if let TrainPool::Subset { size, seed } = pool {
        if size < train_rows.len() {
            let mut rng = rng_from_seed(derive_seed(seed, index as u64));
            let mut picked = rand::seq::index::sample(&mut rng, train_rows.len(), size).into_vec();
            picked.sort_unstable();
            train_rows = picked.into_iter().map(|k| train_rows[k]).collect();
        }
    }
    let train = d.subset_rows(&train_rows)?;
    let norm = fit_normalizer(&train);
    let train = apply_normalizer(&train, &norm)?;
    let sample = norm.transform_row(d.row(index))?;
    let forest = fit_forest(
        &train,
        &fcfg.with_seed(derive_seed(fcfg.seed, index as u64)),
    )?;
    let prediction = forest.predict(&sample)?;
    let scores = score_sample(&forest, &sample, scfg)?;
    Ok(SsfiRecord {
        sample_index: index,
        prediction,
        truth: d.target(index),
        scores: SsfiScores {
            sample_index: Some(index),
            ..scores
        },
        train_rows,
    })
}
