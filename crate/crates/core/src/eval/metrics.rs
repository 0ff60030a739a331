use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which coefficient of determination to report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum R2Kind {
    /// Squared Pearson correlation between predictions and truths.
    #[default]
    Pearson,
    /// `1 - SS_res / SS_tot`.
    Residual,
}

impl R2Kind {
    pub fn compute(self, preds: &[f64], truths: &[f64]) -> Result<f64> {
        match self {
            R2Kind::Pearson => r_squared(preds, truths),
            R2Kind::Residual => r_squared_residual(preds, truths),
        }
    }
}

fn check_lengths(a: usize, b: usize, min: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a < min {
        return Err(Error::TooFewSamples {
            needed: min,
            found: a,
        });
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Squared Pearson correlation of `preds` against `truths`; affine-invariant in
/// `preds`. Fails with `DegenerateVariance` when either vector is constant.
pub fn r_squared(preds: &[f64], truths: &[f64]) -> Result<f64> {
    check_lengths(preds.len(), truths.len(), 2)?;
    let (mf, my) = (mean(preds), mean(truths));
    let (mut sfy, mut sff, mut syy) = (0.0, 0.0, 0.0);
    for (&f, &y) in preds.iter().zip(truths) {
        let (df, dy) = (f - mf, y - my);
        sfy += df * dy;
        sff += df * df;
        syy += dy * dy;
    }
    if sff <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let r = sfy / (sff.sqrt() * syy.sqrt());
    Ok((r * r).min(1.0))
}

/// `1 - SS_res / SS_tot`; can be negative for models worse than the mean.
pub fn r_squared_residual(preds: &[f64], truths: &[f64]) -> Result<f64> {
    check_lengths(preds.len(), truths.len(), 2)?;
    let my = mean(truths);
    let ss_tot: f64 = truths.iter().map(|y| (y - my) * (y - my)).sum();
    if ss_tot <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let ss_res: f64 = preds
        .iter()
        .zip(truths)
        .map(|(f, y)| (y - f) * (y - f))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Fraction of positions where `preds` equals `truths`.
pub fn accuracy<T: PartialEq>(preds: &[T], truths: &[T]) -> Result<f64> {
    check_lengths(preds.len(), truths.len(), 1)?;
    let hits = preds.iter().zip(truths).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / preds.len() as f64)
}
