//! Independent reference implementations and the checks built on them.
//!
//! Every check returns `Ok(detail)` or `Err(reason)` so it can back both an
//! ordinary `#[test]` and a line of the acceptance report.

#![allow(dead_code)]

use rand::Rng;
use serde_json::Value;
use ssfi_core::seed::rng_from_seed;
use ssfi_core::ssfi::{depth_weight, node_importance};
use ssfi_core::tree::{gini_impurity, NodeKind, NodeValue};
use ssfi_core::{
    fit_forest, fit_tree, score_sample, ssfi_loo, Dataset, ForestConfig, MaxFeatures, SsfiConfig,
    Task, TreeConfig,
};

pub type Check = Result<String, String>;

// ---------------------------------------------------------------- formulas

pub fn gini_oracle(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n as f64;
            p * p
        })
        .sum::<f64>()
}

pub fn check_gini(vectors: usize, seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for _ in 0..vectors {
        let len = rng.gen_range(1..=10);
        let mut counts: Vec<usize> = (0..len).map(|_| rng.gen_range(0..50)).collect();
        if counts.iter().all(|&c| c == 0) {
            counts[0] = 1;
        }
        let got = gini_impurity(&counts).map_err(|e| e.to_string())?;
        let err = (got - gini_oracle(&counts)).abs();
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!(
                "counts {counts:?}: {got} vs {}",
                gini_oracle(&counts)
            ));
        }
    }
    Ok(format!("{vectors} count vectors, max error {worst:.1e}"))
}

pub fn check_depth_weight() -> Check {
    let mut worst = 0.0f64;
    for &alpha in &[0.5f64, 0.9, 0.99] {
        for d in 0..=30usize {
            let expected = 1.0 / (1.0 + (1.0 / alpha).powf(d as f64));
            let got = depth_weight(d, alpha).map_err(|e| e.to_string())?;
            let err = (got - expected).abs();
            worst = worst.max(err);
            if err > 1e-12 {
                return Err(format!("d={d} alpha={alpha}: {got} vs {expected}"));
            }
        }
    }
    Ok(format!("93 (d, alpha) pairs, max error {worst:.1e}"))
}

pub fn check_node_importance_examples() -> Check {
    let cases = [
        ((0.2, 0, 0.7, 0.9), 0.25, 1e-12),
        ((0.4, 5, 0.4, 0.9), 0.0, 0.0),
        ((0.0, 2, 1.0, 0.9), 0.447514, 1e-6),
    ];
    for ((f, d, s, a), expected, tol) in cases {
        let got = node_importance(f, d, s, a).map_err(|e| e.to_string())?;
        if (got - expected).abs() > tol {
            return Err(format!(
                "node_importance({f}, {d}, {s}, {a}) = {got}, expected {expected}"
            ));
        }
    }
    Ok("3 hand-computed cases".into())
}

pub fn pearson_sq_oracle(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    let saa: f64 = a.iter().map(|x| x * x).sum();
    let sbb: f64 = b.iter().map(|x| x * x).sum();
    let sab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let num = n * sab - sa * sb;
    num * num / ((n * saa - sa * sa) * (n * sbb - sb * sb))
}

pub fn check_r_squared(pairs: usize, seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let len = rng.gen_range(3..60);
        let a: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|x| 0.7 * x + rng.gen_range(-1.0..1.0))
            .collect();
        let got = ssfi_core::eval::r_squared(&a, &b).map_err(|e| e.to_string())?;
        let err = (got - pearson_sq_oracle(&a, &b)).abs();
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!(
                "length {len}: {got} vs {}",
                pearson_sq_oracle(&a, &b)
            ));
        }
    }
    Ok(format!("{pairs} vector pairs, max error {worst:.1e}"))
}

// ------------------------------------------------------------ path sums

/// Re-walks the JSON form of a forest and sums depth-weighted split
/// distances per feature, using only the serialized node fields.
pub fn serialized_path_sums(forest_json: &Value, sample: &[f64], alpha: f64) -> Vec<f64> {
    let p = forest_json["n_features"].as_u64().expect("n_features") as usize;
    let mut totals = vec![0.0; p];
    for tree in forest_json["trees"].as_array().expect("trees") {
        let nodes = tree["nodes"].as_array().expect("nodes");
        let mut id = tree["root"].as_u64().expect("root") as usize;
        loop {
            let node = &nodes[id];
            let kind = &node["kind"];
            if kind["type"] == "leaf" {
                break;
            }
            let feature = kind["feature"].as_u64().unwrap() as usize;
            let threshold = kind["threshold"].as_f64().unwrap();
            let depth = node["depth"].as_u64().unwrap() as i32;
            let x = sample[feature];
            totals[feature] += (x - threshold).abs() / (1.0 + alpha.powi(-depth));
            id = if x <= threshold {
                kind["left"].as_u64().unwrap() as usize
            } else {
                kind["right"].as_u64().unwrap() as usize
            };
        }
    }
    totals
}

/// Uniform data on `[0,1]^p` whose class depends on the first two features.
pub fn blob_dataset(n: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let targets = rows
        .iter()
        .map(|r| {
            if r[0] + 0.5 * r[1] + rng.gen_range(-0.1..0.1) > 0.75 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let names = (0..p).map(|j| format!("x{j}")).collect();
    Dataset::new(names, rows, targets, Task::Classification).expect("valid blob dataset")
}

pub fn check_path_sums(samples: usize, seed: u64) -> Check {
    let d = blob_dataset(200, 6, seed);
    let cfg = ForestConfig {
        n_estimators: 50,
        seed,
        ..ForestConfig::default()
    };
    let forest = fit_forest(&d, &cfg).map_err(|e| e.to_string())?;
    let json: Value = serde_json::from_str(&forest.to_json().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let scfg = SsfiConfig::default();
    let mut rng = rng_from_seed(seed ^ 0xABCD);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..6).map(|_| rng.gen::<f64>()).collect();
        let got = score_sample(&forest, &x, &scfg).map_err(|e| e.to_string())?;
        let want = serialized_path_sums(&json, &x, scfg.alpha);
        for (j, (g, w)) in got.raw.iter().zip(&want).enumerate() {
            let err = (g - w).abs();
            worst = worst.max(err);
            if err > 1e-9 {
                return Err(format!("feature {j}: {g} vs {w}"));
            }
        }
    }
    Ok(format!(
        "{samples} samples x 50 trees, max error {worst:.1e}"
    ))
}

// ---------------------------------------------------------- dummy feature

pub fn check_dummy_feature(seed: u64) -> Check {
    let base = blob_dataset(80, 4, seed);
    let dummy = 2;
    let rows: Vec<Vec<f64>> = base
        .rows()
        .map(|r| {
            let mut r = r.to_vec();
            r[dummy] = 0.5;
            r
        })
        .collect();
    let d = Dataset::new(
        base.feature_names().to_vec(),
        rows,
        base.targets().to_vec(),
        Task::Classification,
    )
    .map_err(|e| e.to_string())?;
    let cfg = ForestConfig {
        n_estimators: 30,
        seed,
        tree: TreeConfig {
            max_features: Some(MaxFeatures::All),
            ..TreeConfig::default()
        },
        ..ForestConfig::default()
    };
    let run = ssfi_loo(&d, &cfg, &SsfiConfig::default()).map_err(|e| e.to_string())?;
    for r in &run.records {
        if r.scores.raw[dummy] != 0.0 {
            return Err(format!(
                "sample {}: SSFI of dummy = {}",
                r.sample_index, r.scores.raw[dummy]
            ));
        }
    }
    let forest = fit_forest(&d, &cfg).map_err(|e| e.to_string())?;
    let g = forest.gini_importance(false);
    if g.scores[dummy] != 0.0 {
        return Err(format!("Gini importance of dummy = {}", g.scores[dummy]));
    }
    if g.scores.iter().all(|&s| s == 0.0) {
        return Err("forest made no splits".into());
    }
    Ok(format!(
        "{} samples, SSFI and Gini of the constant column are 0",
        run.records.len()
    ))
}

// ----------------------------------------------------- brute-force trees

#[derive(Debug, Clone, PartialEq)]
pub enum OracleNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<OracleNode>,
        right: Box<OracleNode>,
    },
    Leaf {
        class: usize,
        counts: Vec<usize>,
    },
}

fn class_counts(d: &Dataset, rows: &[usize], j: usize) -> Vec<usize> {
    let mut c = vec![0; j];
    for &i in rows {
        c[d.target(i) as usize] += 1;
    }
    c
}

/// Exhaustive CART: every feature and every midpoint is tried, the largest
/// weighted Gini decrease wins, ties go to the lower feature then the lower
/// threshold.
pub fn brute_force_tree(d: &Dataset, rows: &[usize]) -> OracleNode {
    let j = d.n_classes();
    let counts = class_counts(d, rows, j);
    let leaf = || {
        let max = *counts.iter().max().unwrap();
        OracleNode::Leaf {
            class: counts.iter().position(|&c| c == max).unwrap(),
            counts: counts.clone(),
        }
    };
    let n = rows.len() as f64;
    let parent = gini_oracle(&counts);
    if rows.len() < 2 || parent == 0.0 {
        return leaf();
    }
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..d.n_features() {
        let mut vals: Vec<f64> = rows.iter().map(|&i| d.value(i, f)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| d.value(i, f) <= t);
            let gain = parent
                - l.len() as f64 / n * gini_oracle(&class_counts(d, &l, j))
                - r.len() as f64 / n * gini_oracle(&class_counts(d, &r, j));
            if best.map_or(gain > 1e-12, |(_, _, g)| gain > g + 1e-12) {
                best = Some((f, t, gain));
            }
        }
    }
    match best {
        None => leaf(),
        Some((feature, threshold, _)) => {
            let (l, r): (Vec<usize>, Vec<usize>) = rows
                .iter()
                .partition(|&&i| d.value(i, feature) <= threshold);
            OracleNode::Split {
                feature,
                threshold,
                left: Box::new(brute_force_tree(d, &l)),
                right: Box::new(brute_force_tree(d, &r)),
            }
        }
    }
}

fn to_oracle(t: &ssfi_core::DecisionTree, id: usize) -> OracleNode {
    let node = &t.nodes[id];
    match node.kind {
        NodeKind::Leaf => match &node.value {
            NodeValue::Class { class, counts } => OracleNode::Leaf {
                class: *class,
                counts: counts.clone(),
            },
            NodeValue::Mean { .. } => panic!("classification tree has a mean leaf"),
        },
        NodeKind::Internal {
            feature,
            threshold,
            left,
            right,
        } => OracleNode::Split {
            feature,
            threshold,
            left: Box::new(to_oracle(t, left)),
            right: Box::new(to_oracle(t, right)),
        },
    }
}

pub fn random_small_dataset(rng: &mut impl Rng) -> Dataset {
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(1..=3);
    let j = rng.gen_range(2..=3);
    let features: Vec<f64> = (0..n * p)
        .map(|_| f64::from(rng.gen_range(0..4u8)))
        .collect();
    let targets: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.gen_range(0..j as u8)))
        .collect();
    let names = (0..p).map(|f| format!("f{f}")).collect();
    Dataset::from_flat(names, features, targets, Task::Classification, Some(j))
        .expect("valid small dataset")
}

pub fn check_brute_force_trees(datasets: usize, seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let cfg = TreeConfig {
        max_features: Some(MaxFeatures::All),
        ..TreeConfig::default()
    };
    let mut splits = 0;
    for case in 0..datasets {
        let d = random_small_dataset(&mut rng);
        let tree = fit_tree(&d, &cfg, &mut rng).map_err(|e| e.to_string())?;
        let rows: Vec<usize> = (0..d.n_samples()).collect();
        let want = brute_force_tree(&d, &rows);
        let got = to_oracle(&tree, tree.root);
        if got != want {
            return Err(format!(
                "dataset {case}: fitted {got:?} but oracle built {want:?}"
            ));
        }
        splits += tree.internal_nodes().count();
    }
    Ok(format!(
        "{datasets} datasets identical, {splits} splits compared"
    ))
}
