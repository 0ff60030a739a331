//! Metrics, the linear baseline, feature-selection experiments and image
//! pixel reports.

pub mod experiment;
pub mod linear;
pub mod metrics;
pub mod pixels;

pub use experiment::{
    read_external_rankings, run_experiment, EvalModel, Experiment, ExperimentConfig,
    ExperimentResult, SelectionMethod,
};
pub use linear::{fit_linear, predict_linear, LinearModel};
pub use metrics::{accuracy, r_squared, r_squared_residual, R2Kind};
pub use pixels::{pixel_report, PixelScore};
