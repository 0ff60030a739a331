//! Ordinary least squares through the normal equations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ridge added to the diagonal of the (centered) Gram matrix so that
/// collinear or constant columns still yield a finite solution.
pub const RIDGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

/// Fits `targets ≈ features · β + c` on a row-major `n × k` matrix.
///
/// Columns and targets are centered first, so the intercept is not shrunk by
/// the ridge term and a constant column gets a zero coefficient.
pub fn fit_linear(features: &[f64], k: usize, targets: &[f64]) -> Result<LinearModel> {
    let n = targets.len();
    if k == 0 {
        return Err(Error::EmptyDataset);
    }
    if features.len() != n * k {
        return Err(Error::ShapeMismatch {
            expected: n * k,
            found: features.len(),
        });
    }
    if n < k + 1 {
        return Err(Error::TooFewSamples {
            needed: k + 1,
            found: n,
        });
    }
    let x = DMatrix::from_row_slice(n, k, features);
    let y = DVector::from_column_slice(targets);
    let x_mean: Vec<f64> = (0..k).map(|j| x.column(j).mean()).collect();
    let y_mean = y.mean();
    let mut xc = x;
    for (j, m) in x_mean.iter().enumerate() {
        xc.column_mut(j).add_scalar_mut(-m);
    }
    let yc = y.add_scalar(-y_mean);

    let mut gram = xc.tr_mul(&xc);
    for j in 0..k {
        gram[(j, j)] += RIDGE;
    }
    let rhs = xc.tr_mul(&yc);
    let beta = gram
        .clone()
        .cholesky()
        .map(|c| c.solve(&rhs))
        .or_else(|| gram.lu().solve(&rhs))
        .ok_or_else(|| Error::InvalidDataset("singular design matrix".into()))?;

    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let intercept = y_mean
        - coefficients
            .iter()
            .zip(&x_mean)
            .map(|(b, m)| b * m)
            .sum::<f64>();
    Ok(LinearModel {
        coefficients,
        intercept,
    })
}

pub fn predict_linear(m: &LinearModel, sample: &[f64]) -> Result<f64> {
    if sample.len() != m.coefficients.len() {
        return Err(Error::ShapeMismatch {
            expected: m.coefficients.len(),
            found: sample.len(),
        });
    }
    Ok(m.intercept
        + m.coefficients
            .iter()
            .zip(sample)
            .map(|(b, x)| b * x)
            .sum::<f64>())
}
