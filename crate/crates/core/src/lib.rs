//! Random forests whose prediction paths are first-class values, and the
//! per-sample feature importance computed from those paths.
//!
//! The crate is organized bottom-up:
//!
//! * [`dataset`]: CSV / IDX loading, min-max scaling, leave-one-out folds.
//! * [`tree`]: CART trees with recorded prediction paths.
//! * [`forest`]: bagged ensembles and global Gini importance.
//! * [`ssfi`]: single-sample feature importance over forest paths.
//! * [`eval`]: metrics, least squares, selection experiments, pixel reports.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod forest;
pub mod seed;
pub mod ssfi;
pub mod tree;

pub use dataset::{Dataset, Task};
pub use error::{Error, Result};
pub use forest::{fit_forest, ForestConfig, GlobalImportances, RandomForest};
pub use ssfi::{score_sample, ssfi_loo, SsfiConfig, SsfiRun, SsfiScores};
pub use tree::{fit_tree, DecisionTree, MaxFeatures, PredictionPath, TreeConfig};
