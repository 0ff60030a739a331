#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ssfi"))
}

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ssfi")
}

/// Every file in `dir` except the manifest, by name.
pub fn analytic_outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name() != "manifest.json")
        .map(|e| {
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

/// Writes a tiny IDX image/label pair: `count` images of `rows x cols`,
/// label = 1 when the left half is brighter than the right.
pub fn write_idx(
    dir: &Path,
    count: usize,
    rows: usize,
    cols: usize,
    seed: u64,
) -> (PathBuf, PathBuf) {
    use rand::Rng;
    let mut rng = ssfi_core::seed::rng_from_seed(seed);
    let mut images = Vec::new();
    images.extend(0x0000_0803u32.to_be_bytes());
    for v in [count, rows, cols] {
        images.extend((v as u32).to_be_bytes());
    }
    let mut labels = Vec::new();
    labels.extend(0x0000_0801u32.to_be_bytes());
    labels.extend((count as u32).to_be_bytes());
    for _ in 0..count {
        let bright_left = rng.gen_bool(0.5);
        for _r in 0..rows {
            for c in 0..cols {
                let hot = (c < cols / 2) == bright_left;
                let base: u8 = if hot { 160 } else { 20 };
                images.push(base.saturating_add(rng.gen_range(0..90)));
            }
        }
        labels.push(u8::from(bright_left));
    }
    let (ip, lp) = (dir.join("images-idx3-ubyte"), dir.join("labels-idx1-ubyte"));
    fs::write(&ip, images).unwrap();
    fs::write(&lp, labels).unwrap();
    (ip, lp)
}

pub fn red_pixels(ppm: &str) -> usize {
    ssfi_cli::image::parse_ppm(ppm)
        .expect("valid P3")
        .2
        .iter()
        .filter(|px| **px == ssfi_cli::image::RED)
        .count()
}
