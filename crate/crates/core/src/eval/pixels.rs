use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::ssfi::{top_k, SsfiScores};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelScore {
    pub row: usize,
    pub col: usize,
    pub score: f64,
}

/// Top-`k` SSFI features of each requested sample, mapped to pixel
/// coordinates through the dataset's row-major image shape.
pub fn pixel_report(
    d: &Dataset,
    sample_indices: &[usize],
    k: usize,
    scores: &BTreeMap<usize, SsfiScores>,
) -> Result<Vec<(usize, Vec<PixelScore>)>> {
    let (_, cols) = d.source_shape().ok_or(Error::NotAnImageDataset)?;
    sample_indices
        .iter()
        .map(|&i| {
            let s = scores
                .get(&i)
                .ok_or_else(|| Error::ConfigMismatch(format!("no scores for sample {i}")))?;
            let pixels = top_k(s, k)?
                .into_iter()
                .map(|j| PixelScore {
                    row: j / cols,
                    col: j % cols,
                    score: s.raw[j],
                })
                .collect();
            Ok((i, pixels))
        })
        .collect()
}
