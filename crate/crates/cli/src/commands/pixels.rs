use std::collections::BTreeMap;

use serde_json::json;
use ssfi_core::dataset::load_idx;
use ssfi_core::eval::pixel_report;
use ssfi_core::seed::derive_seed;
use ssfi_core::ssfi::{score_held_out, TrainPool};
use ssfi_core::Error;

use super::{csv_bytes, fingerprint, forest_config, ssfi_config, ssfi_seed};
use crate::args::PixelsArgs;
use crate::image::{pgm, ppm_overlay};
use crate::manifest::RunRecorder;
use crate::{CliError, CliResult};

const STREAM_SUBSET: u64 = 5;

pub fn run(a: &PixelsArgs) -> CliResult<()> {
    let mut fcfg = forest_config(&a.forest)?;
    let scfg = ssfi_config(&a.forest)?;
    if a.top == 0 {
        return Err(CliError::Config("--top must be >= 1".into()));
    }
    if a.train_subset == Some(0) {
        return Err(CliError::Config("--train-subset must be >= 1".into()));
    }
    let mut rec = RunRecorder::new(&a.out)?;
    let d = load_idx(&a.images, &a.labels)?;
    let (rows, cols) = d.source_shape().ok_or(Error::NotAnImageDataset)?;
    let n = d.n_samples();
    for &i in &a.samples {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n }.into());
        }
    }
    if a.top > rows * cols {
        return Err(Error::KOutOfRange {
            k: a.top,
            p: rows * cols,
        }
        .into());
    }
    let mut samples = a.samples.clone();
    samples.sort_unstable();
    samples.dedup();
    rec.stage("load");

    fcfg.seed = ssfi_seed(a.forest.seed);
    let pool = match a.train_subset {
        Some(size) => TrainPool::Subset {
            size,
            seed: derive_seed(a.forest.seed, STREAM_SUBSET),
        },
        None => TrainPool::AllOthers,
    };
    let run = score_held_out(&d, &samples, &fcfg, &scfg, pool)?;
    rec.stage("ssfi");

    let scores: BTreeMap<_, _> = run
        .records
        .iter()
        .map(|r| (r.sample_index, r.scores.clone()))
        .collect();
    let report = pixel_report(&d, &samples, a.top, &scores)?;
    let labels = d.class_labels();
    for (record, (i, pixels)) in run.records.iter().zip(&report) {
        let label = |v: f64| match labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        };
        println!(
            "sample {i}: label {} predicted {}",
            label(record.truth),
            label(record.prediction)
        );
        let coords = csv_bytes(&["rank", "row", "col", "score"], |w| {
            for (rank, p) in pixels.iter().enumerate() {
                w.write_record([
                    (rank + 1).to_string(),
                    p.row.to_string(),
                    p.col.to_string(),
                    p.score.to_string(),
                ])?;
            }
            Ok(())
        })?;
        rec.write(&format!("sample_{i}_top{}.csv", a.top), &coords)?;
        let gray: Vec<u8> = d
            .row(*i)
            .iter()
            .map(|&v| v.clamp(0.0, 255.0) as u8)
            .collect();
        rec.write(
            &format!("sample_{i}.pgm"),
            pgm(rows, cols, &gray).as_bytes(),
        )?;
        let hl: Vec<(usize, usize)> = pixels.iter().map(|p| (p.row, p.col)).collect();
        rec.write(
            &format!("sample_{i}_top{}.ppm", a.top),
            ppm_overlay(rows, cols, &gray, &hl).as_bytes(),
        )?;
    }
    rec.stage("write");

    let config = json!({
        "images": a.images,
        "labels": a.labels,
        "samples": samples,
        "top": a.top,
        "train_subset": a.train_subset,
        "train_pool": if a.train_subset.is_some() { "random_subset" } else { "all_other_images" },
        "forest": fcfg,
        "master_seed": a.forest.seed,
        "ssfi": scfg,
        "out": a.out,
    });
    let fp = fingerprint(&d, &[&a.images, &a.labels])?;
    rec.finish("pixels", config, fp, a.forest.seed)?;
    Ok(())
}
