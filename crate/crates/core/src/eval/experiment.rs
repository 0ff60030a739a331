//! Leave-one-out feature-selection experiments.
//!
//! Each repeat runs a full leave-one-out pass. At every fold a selector picks
//! `k` feature columns for the held-out sample, a model is trained on the
//! remaining rows restricted to those columns, and the held-out target is
//! predicted. The repeat's score is the R² between the `n` predictions and
//! truths.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linear::{fit_linear, predict_linear};
use super::metrics::R2Kind;
use crate::dataset::{apply_normalizer, fit_normalizer, select_features, Dataset};
use crate::error::{Error, Result};
use crate::forest::{fit_forest, top_k_features, ForestConfig};
use crate::seed::{derive_seed, rng_from_seed};
use crate::ssfi::{ssfi_loo, top_k, SsfiConfig, SsfiRun};

// Stream tags keeping the random streams of different stages apart.
const STREAM_SSFI: u64 = 0;
const STREAM_REPEAT: u64 = 1;
const STREAM_STATIC: u64 = 2;
const STREAM_RANDOM: u64 = 3;
const STREAM_MODEL: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMethod {
    /// Per-sample top-k of the sample's leave-one-out SSFI scores.
    SsfiDynamic,
    /// Top-k global Gini importance of one forest per repeat.
    StaticForest,
    /// k distinct uniform indices per repeat.
    RandomFeatures,
    /// Per-sample rankings read from a JSON-lines file.
    ExternalScores(PathBuf),
}

impl SelectionMethod {
    pub fn label(&self) -> &'static str {
        match self {
            SelectionMethod::SsfiDynamic => "ssfi",
            SelectionMethod::StaticForest => "static",
            SelectionMethod::RandomFeatures => "random",
            SelectionMethod::ExternalScores(_) => "external",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalModel {
    /// Random forest regressor over the numeric targets.
    Forest,
    Linear,
}

impl EvalModel {
    pub fn label(&self) -> &'static str {
        match self {
            EvalModel::Forest => "forest",
            EvalModel::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub method: SelectionMethod,
    pub model: EvalModel,
    pub k: usize,
    pub repeats: usize,
    /// Used for the SSFI and static selector forests and, in regression mode,
    /// for the evaluation forest. Its `seed` field is ignored.
    pub forest: ForestConfig,
    pub ssfi: SsfiConfig,
    pub master_seed: u64,
    pub r2: R2Kind,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: SelectionMethod::SsfiDynamic,
            model: EvalModel::Forest,
            k: 3,
            repeats: 50,
            forest: ForestConfig::default(),
            ssfi: SsfiConfig::default(),
            master_seed: 0,
            r2: R2Kind::Pearson,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self, p: usize) -> Result<()> {
        if self.k == 0 || self.k > p {
            return Err(Error::KOutOfRange { k: self.k, p });
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be >= 1".into()));
        }
        self.forest.validate()?;
        self.ssfi.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub dataset: String,
    pub method: String,
    pub model: String,
    pub k: usize,
    pub repeats: usize,
    pub per_repeat_r2: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation over repeats (0 for a single repeat).
    pub std: f64,
    pub seed: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Deserialize)]
struct ExternalRecord {
    sample_index: usize,
    ranking: Vec<usize>,
}

/// Reads `{sample_index, ranking}` JSON lines into a map.
pub fn read_external_rankings(path: &Path) -> Result<HashMap<usize, Vec<usize>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let rec: ExternalRecord = serde_json::from_str(line)?;
        out.insert(rec.sample_index, rec.ranking);
    }
    Ok(out)
}

type SsfiKey = (ForestConfig, SsfiConfig, u64);

/// A dataset plus the leave-one-out SSFI pass shared by every SSFI-driven
/// experiment on it.
pub struct Experiment<'a> {
    data: &'a Dataset,
    name: String,
    ssfi: Option<(Option<SsfiKey>, SsfiRun)>,
}

impl<'a> Experiment<'a> {
    pub fn new(data: &'a Dataset, name: impl Into<String>) -> Self {
        Experiment {
            data,
            name: name.into(),
            ssfi: None,
        }
    }

    /// Uses `run` for every SSFI-driven experiment instead of computing one.
    pub fn with_ssfi_run(mut self, run: SsfiRun) -> Self {
        self.ssfi = Some((None, run));
        self
    }

    /// The leave-one-out SSFI pass for `cfg`, computed on first use.
    pub fn ssfi_run(&mut self, cfg: &ExperimentConfig) -> Result<&SsfiRun> {
        let key = (cfg.forest.clone(), cfg.ssfi, cfg.master_seed);
        let stale = match &self.ssfi {
            None => true,
            Some((None, _)) => false,
            Some((Some(k), _)) => *k != key,
        };
        if stale {
            let fcfg = cfg
                .forest
                .with_seed(derive_seed(cfg.master_seed, STREAM_SSFI));
            let run = ssfi_loo(self.data, &fcfg, &cfg.ssfi)?;
            self.ssfi = Some((Some(key), run));
        }
        Ok(&self.ssfi.as_ref().expect("populated").1)
    }

    /// Feature columns chosen for each held-out sample in repeat `repeat`.
    pub fn selections(&mut self, cfg: &ExperimentConfig, repeat: usize) -> Result<Vec<Vec<usize>>> {
        let d = self.data;
        let n = d.n_samples();
        let p = d.n_features();
        let repeat_seed = repeat_seed(cfg.master_seed, repeat);
        match &cfg.method {
            SelectionMethod::SsfiDynamic => {
                let run = self.ssfi_run(cfg)?;
                let by_sample = run.by_sample();
                (0..n)
                    .map(|i| {
                        let scores = by_sample.get(&i).ok_or_else(|| {
                            Error::ConfigMismatch(format!("SSFI run has no record for sample {i}"))
                        })?;
                        top_k(scores, cfg.k)
                    })
                    .collect()
            }
            SelectionMethod::StaticForest => {
                let norm = fit_normalizer(d);
                let scaled = apply_normalizer(d, &norm)?;
                let forest = fit_forest(
                    &scaled,
                    &cfg.forest
                        .with_seed(derive_seed(repeat_seed, STREAM_STATIC)),
                )?;
                let top = top_k_features(&forest.gini_importance(true), cfg.k)?;
                Ok(vec![top; n])
            }
            SelectionMethod::RandomFeatures => {
                let mut rng = rng_from_seed(derive_seed(repeat_seed, STREAM_RANDOM));
                let mut pick = rand::seq::index::sample(&mut rng, p, cfg.k).into_vec();
                pick.sort_unstable();
                Ok(vec![pick; n])
            }
            SelectionMethod::ExternalScores(path) => {
                let rankings = read_external_rankings(path)?;
                (0..n)
                    .map(|i| {
                        let ranking = rankings.get(&i).ok_or(Error::MissingExternalScores(i))?;
                        validate_ranking(ranking, cfg.k, p, i)?;
                        Ok(ranking[..cfg.k].to_vec())
                    })
                    .collect()
            }
        }
    }

    pub fn run(&mut self, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
        let started = Instant::now();
        let d = self.data;
        cfg.validate(d.n_features())?;
        if d.n_samples() < 3 {
            return Err(Error::TooFewSamples {
                needed: 3,
                found: d.n_samples(),
            });
        }
        let mut per_repeat = Vec::with_capacity(cfg.repeats);
        for r in 0..cfg.repeats {
            let selections = self.selections(cfg, r)?;
            let preds = loo_predictions(d, &selections, cfg, repeat_seed(cfg.master_seed, r))?;
            per_repeat.push(cfg.r2.compute(&preds, d.targets())?);
        }
        let (mean, std) = mean_std(&per_repeat);
        Ok(ExperimentResult {
            dataset: self.name.clone(),
            method: cfg.method.label().to_string(),
            model: cfg.model.label().to_string(),
            k: cfg.k,
            repeats: cfg.repeats,
            per_repeat_r2: per_repeat,
            mean,
            std,
            seed: cfg.master_seed,
            wall_time: started.elapsed(),
        })
    }
}

pub fn run_experiment(d: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    Experiment::new(d, "").run(cfg)
}

fn repeat_seed(master: u64, repeat: usize) -> u64 {
    derive_seed(derive_seed(master, STREAM_REPEAT), repeat as u64)
}

fn validate_ranking(ranking: &[usize], k: usize, p: usize, sample: usize) -> Result<()> {
    if ranking.len() < k {
        return Err(Error::ConfigMismatch(format!(
            "ranking for sample {sample} has {} entries, need {k}",
            ranking.len()
        )));
    }
    let mut seen = vec![false; p];
    for &j in &ranking[..k] {
        if j >= p || std::mem::replace(&mut seen[j], true) {
            return Err(Error::ConfigMismatch(format!(
                "ranking for sample {sample} has invalid or repeated feature {j}"
            )));
        }
    }
    Ok(())
}

/// Held-out predictions of one leave-one-out pass.
fn loo_predictions(
    d: &Dataset,
    selections: &[Vec<usize>],
    cfg: &ExperimentConfig,
    repeat_seed: u64,
) -> Result<Vec<f64>> {
    let n = d.n_samples();
    let model_seed = derive_seed(repeat_seed, STREAM_MODEL);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let projected = select_features(d, &selections[i])?;
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let train = projected.subset_rows(&rest)?;
            let norm = fit_normalizer(&train);
            let train = apply_normalizer(&train, &norm)?;
            let sample = norm.transform_row(projected.row(i))?;
            match cfg.model {
                EvalModel::Forest => {
                    let fcfg = cfg.forest.with_seed(derive_seed(model_seed, i as u64));
                    fit_forest(&train.as_regression(), &fcfg)?.predict(&sample)
                }
                EvalModel::Linear => {
                    let m = fit_linear(train.features(), train.n_features(), train.targets())?;
                    predict_linear(&m, &sample)
                }
            }
        })
        .collect()
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
