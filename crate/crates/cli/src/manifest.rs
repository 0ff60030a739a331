//! Run manifests: one `manifest.json` per command invocation, listing the
//! resolved configuration, input fingerprints and every file written.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliResult;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct InputFingerprint {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetFingerprint {
    pub rows: usize,
    pub cols: usize,
    pub files: Vec<InputFingerprint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub dataset: DatasetFingerprint,
    pub seed: u64,
    pub version: String,
    pub timings: Vec<Timing>,
    pub outputs: Vec<OutputEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn fingerprint_file(path: &Path) -> CliResult<InputFingerprint> {
    let bytes = fs::read(path)?;
    Ok(InputFingerprint {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// Collects output files and stage timings while a command runs.
pub struct RunRecorder {
    out_dir: PathBuf,
    outputs: Vec<OutputEntry>,
    timings: Vec<Timing>,
    stage_start: Instant,
}

impl RunRecorder {
    pub fn new(out_dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(RunRecorder {
            out_dir: out_dir.to_path_buf(),
            outputs: Vec::new(),
            timings: Vec::new(),
            stage_start: Instant::now(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Ends the current stage, recording its wall time.
    pub fn stage(&mut self, name: &str) -> Duration {
        let elapsed = self.stage_start.elapsed();
        self.timings.push(Timing {
            stage: name.to_string(),
            seconds: elapsed.as_secs_f64(),
        });
        self.stage_start = Instant::now();
        elapsed
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.out_dir.join(name);
        let mut f = fs::File::create(&path)?;
        f.write_all(bytes)?;
        self.outputs.push(OutputEntry {
            file: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn finish(
        self,
        command: &str,
        config: serde_json::Value,
        dataset: DatasetFingerprint,
        seed: u64,
    ) -> CliResult<RunManifest> {
        let m = RunManifest {
            command: command.to_string(),
            argv: std::env::args().collect(),
            config,
            dataset,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timings: self.timings,
            outputs: self.outputs,
        };
        let mut json = serde_json::to_string_pretty(&m)?;
        json.push('\n');
        fs::write(self.out_dir.join(MANIFEST_FILE), json)?;
        Ok(m)
    }
}
