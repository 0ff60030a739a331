pub mod experiment;
pub mod pixels;
pub mod score;

use ssfi_core::seed::derive_seed;
use ssfi_core::{Dataset, ForestConfig, SsfiConfig, TreeConfig};

use crate::args::ForestArgs;
use crate::manifest::DatasetFingerprint;
use crate::CliResult;

/// Seed of the leave-one-out SSFI stream; shared by `score`, `experiment`
/// and `pixels` so their SSFI rankings agree for equal flags.
pub(crate) fn ssfi_seed(master: u64) -> u64 {
    derive_seed(master, 0)
}

pub(crate) fn forest_config(a: &ForestArgs) -> CliResult<ForestConfig> {
    let cfg = ForestConfig {
        n_estimators: a.trees,
        tree: TreeConfig {
            max_depth: a.max_depth,
            ..TreeConfig::default()
        },
        seed: a.seed,
        ..ForestConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

pub(crate) fn ssfi_config(a: &ForestArgs) -> CliResult<SsfiConfig> {
    Ok(SsfiConfig::new(a.alpha)?)
}

pub(crate) fn fingerprint(
    d: &Dataset,
    files: &[&std::path::Path],
) -> CliResult<DatasetFingerprint> {
    Ok(DatasetFingerprint {
        rows: d.n_samples(),
        cols: d.n_features(),
        files: files
            .iter()
            .map(|p| crate::manifest::fingerprint_file(p))
            .collect::<CliResult<_>>()?,
    })
}

pub(crate) fn csv_bytes<F>(header: &[&str], fill: F) -> CliResult<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> CliResult<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    w.into_inner()
        .map_err(|e| crate::CliError::Data(e.to_string()))
}
