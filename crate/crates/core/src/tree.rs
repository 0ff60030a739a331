//! CART decision trees: Gini splitting for classification, variance splitting
//! for regression, and prediction that records every internal node visited.
//!
//! Conventions: the root has depth 0, a sample goes left iff
//! `sample[feature] <= threshold`, thresholds are midpoints between
//! consecutive distinct values, and equally good splits resolve to the lower
//! feature index and then the lower threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Task};
use crate::error::{Error, Result};

/// Decreases closer than this (scaled by node impurity for regression) are
/// treated as ties, and a split must beat it to be accepted.
pub const SPLIT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    All,
    /// `ceil(sqrt(p))`
    Sqrt,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn resolve(self, p: usize) -> Result<usize> {
        match self {
            MaxFeatures::All => Ok(p),
            MaxFeatures::Sqrt => Ok(ceil_sqrt(p)),
            MaxFeatures::Fixed(m) if (1..=p).contains(&m) => Ok(m),
            MaxFeatures::Fixed(m) => Err(Error::InvalidConfig(format!(
                "max_features {m} outside 1..={p}"
            ))),
        }
    }

    pub fn default_for(task: Task) -> Self {
        match task {
            Task::Classification => MaxFeatures::Sqrt,
            Task::Regression => MaxFeatures::All,
        }
    }
}

fn ceil_sqrt(p: usize) -> usize {
    let mut m = (p as f64).sqrt() as usize;
    while m * m < p {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= p {
        m -= 1;
    }
    m.max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// `None` picks [`MaxFeatures::default_for`] the dataset's task.
    pub max_features: Option<MaxFeatures>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: None,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_split < 2 {
            return Err(Error::InvalidConfig(
                "min_samples_split must be >= 2".into(),
            ));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::InvalidConfig("min_samples_leaf must be >= 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::InvalidConfig("max_depth must be positive".into()));
        }
        Ok(())
    }

    pub fn features_per_split(&self, task: Task, p: usize) -> Result<usize> {
        self.max_features
            .unwrap_or_else(|| MaxFeatures::default_for(task))
            .resolve(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeValue {
    /// Majority class (ties to the lower index) and the class histogram.
    Class {
        class: usize,
        counts: Vec<usize>,
    },
    Mean {
        mean: f64,
    },
}

impl NodeValue {
    pub fn prediction(&self) -> f64 {
        match self {
            NodeValue::Class { class, .. } => *class as f64,
            NodeValue::Mean { mean } => *mean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeKind {
    Internal {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub depth: usize,
    pub kind: NodeKind,
    /// Training samples reaching the node (bootstrap duplicates counted).
    pub n_samples: usize,
    pub impurity: f64,
    /// `n_samples` over the tree's training sample count.
    pub weighted_fraction: f64,
    pub value: NodeValue,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: usize,
    /// Arena indexed by node id, in depth-first (left before right) order.
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
    pub task: Task,
    pub n_classes: usize,
    pub training_sample_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub node_id: usize,
    pub feature: usize,
    pub threshold: f64,
    pub depth: usize,
    pub direction: Direction,
}

/// Internal nodes visited while routing one sample, root first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionPath {
    pub steps: Vec<PathStep>,
    pub leaf_id: usize,
    pub prediction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub impurity_decrease: f64,
}

pub fn gini_impurity(class_counts: &[usize]) -> Result<f64> {
    let total: usize = class_counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let total = total as f64;
    Ok(class_counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * (1.0 - p)
        })
        .sum())
}

/// Population variance.
pub fn variance_impurity(targets: &[f64]) -> Result<f64> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let n = targets.len() as f64;
    let mean = targets.iter().sum::<f64>() / n;
    Ok(targets.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n)
}

/// Exhaustive best split of `rows` over `candidate_features`, with the
/// impurity decrease weighted relative to `rows.len()`.
pub fn best_split(
    data: &Dataset,
    rows: &[usize],
    candidate_features: &[usize],
    cfg: &TreeConfig,
) -> Option<Split> {
    if rows.len() < cfg.min_samples_split.max(2) || candidate_features.is_empty() {
        return None;
    }
    let mut finder = SplitFinder::new(data, cfg.min_samples_leaf.max(1));
    let stats = finder.node_stats(rows);
    let mut candidates = candidate_features.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    finder.best_split(rows, &stats, &candidates)
}

struct NodeStats {
    n: usize,
    counts: Vec<usize>,
    sum_sq_counts: f64,
    mean: f64,
    impurity: f64,
    pure: bool,
}

struct SplitFinder<'a> {
    data: &'a Dataset,
    min_leaf: usize,
    pairs: Vec<(f64, usize)>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl<'a> SplitFinder<'a> {
    fn new(data: &'a Dataset, min_leaf: usize) -> Self {
        SplitFinder {
            data,
            min_leaf,
            pairs: Vec::new(),
            left: vec![0; data.n_classes()],
            right: vec![0; data.n_classes()],
        }
    }

    fn node_stats(&self, rows: &[usize]) -> NodeStats {
        let n = rows.len();
        match self.data.task() {
            Task::Classification => {
                let mut counts = vec![0usize; self.data.n_classes()];
                for &i in rows {
                    counts[self.data.target(i) as usize] += 1;
                }
                let sum_sq: usize = counts.iter().map(|c| c * c).sum();
                let impurity = gini_impurity(&counts).unwrap_or(0.0);
                let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
                NodeStats {
                    n,
                    counts,
                    sum_sq_counts: sum_sq as f64,
                    mean: 0.0,
                    impurity,
                    pure,
                }
            }
            Task::Regression => {
                let ys: Vec<f64> = rows.iter().map(|&i| self.data.target(i)).collect();
                let mean = ys.iter().sum::<f64>() / n as f64;
                let impurity = variance_impurity(&ys).unwrap_or(0.0);
                let first = ys[0];
                NodeStats {
                    n,
                    counts: Vec::new(),
                    sum_sq_counts: 0.0,
                    mean,
                    impurity,
                    pure: ys.iter().all(|&y| y == first),
                }
            }
        }
    }

    fn best_split(
        &mut self,
        rows: &[usize],
        stats: &NodeStats,
        sorted_candidates: &[usize],
    ) -> Option<Split> {
        if stats.pure || rows.len() < 2 * self.min_leaf {
            return None;
        }
        let eps = match self.data.task() {
            Task::Classification => SPLIT_EPSILON,
            Task::Regression => SPLIT_EPSILON * stats.impurity,
        };
        let mut best: Option<Split> = None;
        for &feature in sorted_candidates {
            self.pairs.clear();
            self.pairs
                .extend(rows.iter().map(|&i| (self.data.value(i, feature), i)));
            self.pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            if self.pairs[0].0 == self.pairs[rows.len() - 1].0 {
                continue;
            }
            let found = match self.data.task() {
                Task::Classification => self.sweep_classification(stats),
                Task::Regression => self.sweep_regression(stats),
            };
            if let Some((threshold, decrease)) = found {
                let better = match best {
                    None => decrease > eps,
                    Some(b) => decrease > b.impurity_decrease + eps,
                };
                if better {
                    best = Some(Split {
                        feature,
                        threshold,
                        impurity_decrease: decrease,
                    });
                }
            }
        }
        best
    }

    /// Best (threshold, decrease) along the sorted `pairs`, first wins on ties.
    fn sweep_classification(&mut self, stats: &NodeStats) -> Option<(f64, f64)> {
        let n = stats.n;
        let nf = n as f64;
        let eps = SPLIT_EPSILON;
        self.left.iter_mut().for_each(|c| *c = 0);
        self.right.copy_from_slice(&stats.counts);
        let mut sq_left = 0usize;
        let mut sq_right = stats.sum_sq_counts as usize;
        let parent_term = stats.sum_sq_counts / nf;
        let mut best: Option<(f64, f64)> = None;
        for pos in 0..n - 1 {
            let class = self.data.target(self.pairs[pos].1) as usize;
            sq_left += 2 * self.left[class] + 1;
            self.left[class] += 1;
            sq_right -= 2 * self.right[class] - 1;
            self.right[class] -= 1;

            let (v, next) = (self.pairs[pos].0, self.pairs[pos + 1].0);
            if v == next {
                continue;
            }
            let n_left = pos + 1;
            let n_right = n - n_left;
            if n_left < self.min_leaf || n_right < self.min_leaf {
                continue;
            }
            let decrease = (sq_left as f64 / n_left as f64 + sq_right as f64 / n_right as f64
                - parent_term)
                / nf;
            if best.is_none_or(|(_, d)| decrease > d + eps) {
                best = Some((midpoint(v, next), decrease));
            }
        }
        best
    }

    fn sweep_regression(&mut self, stats: &NodeStats) -> Option<(f64, f64)> {
        let n = stats.n;
        let nf = n as f64;
        let eps = SPLIT_EPSILON * stats.impurity;
        let total: f64 = self
            .pairs
            .iter()
            .map(|&(_, i)| self.data.target(i) - stats.mean)
            .sum();
        let parent_term = total * total / nf;
        let mut left_sum = 0.0;
        let mut best: Option<(f64, f64)> = None;
        for pos in 0..n - 1 {
            left_sum += self.data.target(self.pairs[pos].1) - stats.mean;
            let (v, next) = (self.pairs[pos].0, self.pairs[pos + 1].0);
            if v == next {
                continue;
            }
            let n_left = pos + 1;
            let n_right = n - n_left;
            if n_left < self.min_leaf || n_right < self.min_leaf {
                continue;
            }
            let right_sum = total - left_sum;
            let decrease = (left_sum * left_sum / n_left as f64
                + right_sum * right_sum / n_right as f64
                - parent_term)
                / nf;
            if best.is_none_or(|(_, d)| decrease > d + eps) {
                best = Some((midpoint(v, next), decrease));
            }
        }
        best
    }
}

/// Midpoint that still sends `lo` left and `hi` right under `<=`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi || mid < lo {
        lo
    } else {
        mid
    }
}

/// Fits a tree on every row of `train`.
pub fn fit_tree<R: Rng + ?Sized>(
    train: &Dataset,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<DecisionTree> {
    let rows: Vec<usize> = (0..train.n_samples()).collect();
    fit_tree_on_rows(train, &rows, cfg, rng)
}

/// Fits a tree on `rows` of `data` (repeats allowed, as in a bootstrap sample).
pub fn fit_tree_on_rows<R: Rng + ?Sized>(
    data: &Dataset,
    rows: &[usize],
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<DecisionTree> {
    cfg.validate()?;
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(&bad) = rows.iter().find(|&&i| i >= data.n_samples()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: data.n_samples(),
        });
    }
    let p = data.n_features();
    let m = cfg.features_per_split(data.task(), p)?;
    let total = rows.len();
    let mut samples = rows.to_vec();
    let mut finder = SplitFinder::new(data, cfg.min_samples_leaf);
    let mut nodes: Vec<TreeNode> = Vec::new();
    let all_features: Vec<usize> = (0..p).collect();

    struct Job {
        start: usize,
        end: usize,
        depth: usize,
        parent: Option<(usize, Direction)>,
    }
    let mut stack = vec![Job {
        start: 0,
        end: total,
        depth: 0,
        parent: None,
    }];

    while let Some(job) = stack.pop() {
        let id = nodes.len();
        if let Some((parent, side)) = job.parent {
            if let NodeKind::Internal { left, right, .. } = &mut nodes[parent].kind {
                match side {
                    Direction::Left => *left = id,
                    Direction::Right => *right = id,
                }
            }
        }
        let slice = &mut samples[job.start..job.end];
        let stats = finder.node_stats(slice);
        let value = match data.task() {
            Task::Classification => NodeValue::Class {
                class: argmax_lowest(&stats.counts),
                counts: stats.counts.clone(),
            },
            Task::Regression => NodeValue::Mean { mean: stats.mean },
        };

        let splittable = stats.n >= cfg.min_samples_split
            && cfg.max_depth.is_none_or(|d| job.depth < d)
            && !stats.pure;
        let split = if splittable {
            let candidates = if m >= p {
                all_features.clone()
            } else {
                let mut c = rand::seq::index::sample(rng, p, m).into_vec();
                c.sort_unstable();
                c
            };
            finder.best_split(slice, &stats, &candidates)
        } else {
            None
        };

        let mut node = TreeNode {
            id,
            depth: job.depth,
            kind: NodeKind::Leaf,
            n_samples: stats.n,
            impurity: stats.impurity,
            weighted_fraction: stats.n as f64 / total as f64,
            value,
        };
        if let Some(split) = split {
            let mid = partition(slice, |i| data.value(i, split.feature) <= split.threshold);
            debug_assert!(mid > 0 && mid < slice.len());
            node.kind = NodeKind::Internal {
                feature: split.feature,
                threshold: split.threshold,
                left: usize::MAX,
                right: usize::MAX,
            };
            stack.push(Job {
                start: job.start + mid,
                end: job.end,
                depth: job.depth + 1,
                parent: Some((id, Direction::Right)),
            });
            stack.push(Job {
                start: job.start,
                end: job.start + mid,
                depth: job.depth + 1,
                parent: Some((id, Direction::Left)),
            });
        }
        nodes.push(node);
    }

    Ok(DecisionTree {
        root: 0,
        nodes,
        n_features: p,
        task: data.task(),
        n_classes: data.n_classes(),
        training_sample_count: total,
    })
}

fn partition(slice: &mut [usize], goes_left: impl Fn(usize) -> bool) -> usize {
    let mut mid = 0;
    for k in 0..slice.len() {
        if goes_left(slice[k]) {
            slice.swap(mid, k);
            mid += 1;
        }
    }
    mid
}

pub(crate) fn argmax_lowest(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn check_sample(sample: &[f64], p: usize) -> Result<()> {
    if sample.len() != p {
        return Err(Error::ShapeMismatch {
            expected: p,
            found: sample.len(),
        });
    }
    if let Some(index) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index });
    }
    Ok(())
}

impl DecisionTree {
    pub fn node(&self, id: usize) -> Result<&TreeNode> {
        self.nodes.get(id).ok_or(Error::IndexOutOfRange {
            index: id,
            len: self.nodes.len(),
        })
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| !n.is_leaf())
    }

    /// Leaf reached by `sample`; the caller guarantees a valid sample.
    pub(crate) fn leaf_unchecked(&self, sample: &[f64]) -> usize {
        let mut id = self.root;
        while let NodeKind::Internal {
            feature,
            threshold,
            left,
            right,
        } = self.nodes[id].kind
        {
            id = if sample[feature] <= threshold {
                left
            } else {
                right
            };
        }
        id
    }

    pub(crate) fn path_unchecked(&self, sample: &[f64]) -> PredictionPath {
        let mut steps = Vec::new();
        let mut id = self.root;
        while let NodeKind::Internal {
            feature,
            threshold,
            left,
            right,
        } = self.nodes[id].kind
        {
            let direction = if sample[feature] <= threshold {
                Direction::Left
            } else {
                Direction::Right
            };
            steps.push(PathStep {
                node_id: id,
                feature,
                threshold,
                depth: self.nodes[id].depth,
                direction,
            });
            id = match direction {
                Direction::Left => left,
                Direction::Right => right,
            };
        }
        PredictionPath {
            steps,
            leaf_id: id,
            prediction: self.nodes[id].value.prediction(),
        }
    }

    pub fn predict(&self, sample: &[f64]) -> Result<f64> {
        check_sample(sample, self.n_features)?;
        Ok(self.nodes[self.leaf_unchecked(sample)].value.prediction())
    }

    pub fn predict_with_path(&self, sample: &[f64]) -> Result<(f64, PredictionPath)> {
        check_sample(sample, self.n_features)?;
        let path = self.path_unchecked(sample);
        Ok((path.prediction, path))
    }

    /// Weighted impurity decrease `w·G − w_left·G_left − w_right·G_right` of an
    /// internal node, with weights relative to the tree's training samples.
    pub fn node_gini_importance(&self, node_id: usize) -> Result<f64> {
        let node = self.node(node_id)?;
        match node.kind {
            NodeKind::Leaf => Err(Error::LeafNode(node_id)),
            NodeKind::Internal { left, right, .. } => {
                let (l, r) = (&self.nodes[left], &self.nodes[right]);
                Ok(node.weighted_fraction * node.impurity
                    - l.weighted_fraction * l.impurity
                    - r.weighted_fraction * r.impurity)
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
