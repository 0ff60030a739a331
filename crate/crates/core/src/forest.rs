//! Bagged random forests with per-split feature subsampling, plus global
//! mean-decrease-in-impurity importance.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Task};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from_seed};
use crate::tree::{check_sample, fit_tree_on_rows, DecisionTree, PredictionPath, TreeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub tree: TreeConfig,
    pub seed: u64,
    /// Rows drawn per tree; `None` means the dataset size.
    pub bootstrap_size: Option<usize>,
    /// When false every tree is fit on all rows in order.
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_estimators: 100,
            tree: TreeConfig::default(),
            seed: 0,
            bootstrap_size: None,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        ForestConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::InvalidConfig("n_estimators must be >= 1".into()));
        }
        if self.bootstrap_size == Some(0) {
            return Err(Error::InvalidConfig("bootstrap_size must be >= 1".into()));
        }
        self.tree.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub config: ForestConfig,
    pub task: Task,
    pub n_features: usize,
    /// Zero for regression.
    pub n_classes: usize,
    pub trees: Vec<DecisionTree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalImportances {
    pub scores: Vec<f64>,
    pub normalized: bool,
}

/// `size` row indices drawn uniformly with replacement from `0..n_rows`.
pub fn bootstrap_sample<R: Rng + ?Sized>(n_rows: usize, size: usize, rng: &mut R) -> Vec<usize> {
    assert!(n_rows > 0, "bootstrap from an empty dataset");
    (0..size).map(|_| rng.gen_range(0..n_rows)).collect()
}

/// Fits `n_estimators` trees; tree `t` draws from the stream
/// `derive_seed(cfg.seed, t)` so the result does not depend on scheduling.
pub fn fit_forest(d: &Dataset, cfg: &ForestConfig) -> Result<RandomForest> {
    cfg.validate()?;
    cfg.tree.features_per_split(d.task(), d.n_features())?;
    let n = d.n_samples();
    let size = cfg.bootstrap_size.unwrap_or(n);
    let all_rows: Vec<usize> = (0..n).collect();
    let trees = (0..cfg.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, t as u64));
            if cfg.bootstrap {
                let rows = bootstrap_sample(n, size, &mut rng);
                fit_tree_on_rows(d, &rows, &cfg.tree, &mut rng)
            } else {
                fit_tree_on_rows(d, &all_rows, &cfg.tree, &mut rng)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomForest {
        config: cfg.clone(),
        task: d.task(),
        n_features: d.n_features(),
        n_classes: d.n_classes(),
        trees,
    })
}

impl RandomForest {
    fn combine(&self, outputs: impl Iterator<Item = f64>) -> f64 {
        match self.task {
            Task::Regression => {
                let (sum, k) = outputs.fold((0.0, 0usize), |(s, k), y| (s + y, k + 1));
                sum / k as f64
            }
            Task::Classification => {
                let mut votes = vec![0usize; self.n_classes.max(1)];
                for y in outputs {
                    votes[y as usize] += 1;
                }
                crate::tree::argmax_lowest(&votes) as f64
            }
        }
    }

    /// Mean of tree outputs for regression, majority vote (ties to the lower
    /// class index) for classification.
    pub fn predict(&self, sample: &[f64]) -> Result<f64> {
        check_sample(sample, self.n_features)?;
        Ok(self.combine(
            self.trees
                .iter()
                .map(|t| t.nodes[t.leaf_unchecked(sample)].value.prediction()),
        ))
    }

    /// The forest prediction plus one recorded path per tree, in tree order.
    pub fn predict_with_paths(&self, sample: &[f64]) -> Result<(f64, Vec<PredictionPath>)> {
        check_sample(sample, self.n_features)?;
        let paths: Vec<PredictionPath> = self
            .trees
            .iter()
            .map(|t| t.path_unchecked(sample))
            .collect();
        let prediction = self.combine(paths.iter().map(|p| p.prediction));
        Ok((prediction, paths))
    }

    /// Sum of node impurity decreases per split feature over every tree.
    pub fn gini_importance(&self, normalize: bool) -> GlobalImportances {
        let mut scores = vec![0.0; self.n_features];
        for tree in &self.trees {
            for node in tree.internal_nodes() {
                if let crate::tree::NodeKind::Internal { feature, .. } = node.kind {
                    scores[feature] += tree
                        .node_gini_importance(node.id)
                        .expect("internal node")
                        .max(0.0);
                }
            }
        }
        let total: f64 = scores.iter().sum();
        if normalize && total > 0.0 {
            scores.iter_mut().for_each(|s| *s /= total);
        }
        GlobalImportances {
            scores,
            normalized: normalize,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Indices of the `k` largest scores, descending; ties go to the lower index.
pub fn rank_descending(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

pub fn top_k_features(g: &GlobalImportances, k: usize) -> Result<Vec<usize>> {
    let p = g.scores.len();
    if k == 0 || k > p {
        return Err(Error::KOutOfRange { k, p });
    }
    let mut ranking = rank_descending(&g.scores);
    ranking.truncate(k);
    Ok(ranking)
}
