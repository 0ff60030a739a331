use serde_json::json;
use ssfi_core::dataset::load_csv;
use ssfi_core::eval::{
    EvalModel, Experiment, ExperimentConfig, ExperimentResult, R2Kind, SelectionMethod,
};

use super::{csv_bytes, fingerprint, forest_config, ssfi_config};
use crate::args::{ExperimentArgs, MethodArg, ModelArg, R2Arg};
use crate::manifest::RunRecorder;
use crate::{CliError, CliResult};

fn method(m: MethodArg, a: &ExperimentArgs) -> CliResult<SelectionMethod> {
    Ok(match m {
        MethodArg::Ssfi => SelectionMethod::SsfiDynamic,
        MethodArg::Static => SelectionMethod::StaticForest,
        MethodArg::Random => SelectionMethod::RandomFeatures,
        MethodArg::External => match &a.external_scores {
            Some(p) => SelectionMethod::ExternalScores(p.clone()),
            None => {
                return Err(CliError::Config(
                    "method `external` needs --external-scores".into(),
                ))
            }
        },
    })
}

pub fn run(a: &ExperimentArgs) -> CliResult<()> {
    let forest = forest_config(&a.forest)?;
    let ssfi = ssfi_config(&a.forest)?;
    if a.methods.is_empty() {
        return Err(CliError::Config("--methods is empty".into()));
    }
    let mut methods = Vec::new();
    for &m in &a.methods {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let configs: Vec<ExperimentConfig> = methods
        .iter()
        .map(|&m| {
            Ok(ExperimentConfig {
                method: method(m, a)?,
                model: match a.model {
                    ModelArg::Forest => EvalModel::Forest,
                    ModelArg::Linear => EvalModel::Linear,
                },
                k: a.k,
                repeats: a.repeats,
                forest: forest.clone(),
                ssfi,
                master_seed: a.forest.seed,
                r2: match a.r2 {
                    R2Arg::Pearson => R2Kind::Pearson,
                    R2Arg::Residual => R2Kind::Residual,
                },
            })
        })
        .collect::<CliResult<_>>()?;

    let mut rec = RunRecorder::new(&a.out)?;
    let d = load_csv(&a.data, &a.target, a.task.into())?;
    for c in &configs {
        c.validate(d.n_features())?;
    }
    rec.stage("load");

    let name = a
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut exp = Experiment::new(&d, name);
    let mut results: Vec<ExperimentResult> = Vec::new();
    for c in &configs {
        let r = exp.run(c)?;
        rec.stage(&format!("{}_{}", r.method, r.model));
        println!(
            "{:<8} {:<6} k={} repeats={} mean_r2={:.4} std={:.4}",
            r.method, r.model, r.k, r.repeats, r.mean, r.std
        );
        let json = serde_json::to_string_pretty(&r)? + "\n";
        rec.write(
            &format!("result_{}_{}.json", r.method, r.model),
            json.as_bytes(),
        )?;
        results.push(r);
    }

    let summary = csv_bytes(
        &[
            "dataset", "method", "model", "k", "repeats", "mean_r2", "std_r2", "seed",
        ],
        |w| {
            for r in &results {
                w.write_record([
                    r.dataset.clone(),
                    r.method.clone(),
                    r.model.clone(),
                    r.k.to_string(),
                    r.repeats.to_string(),
                    r.mean.to_string(),
                    r.std.to_string(),
                    r.seed.to_string(),
                ])?;
            }
            Ok(())
        },
    )?;
    rec.write("summary.csv", &summary)?;

    let config = json!({
        "data": a.data,
        "target": a.target,
        "task": a.task,
        "experiments": configs,
        "out": a.out,
    });
    let fp = fingerprint(&d, &[&a.data])?;
    rec.finish("experiment", config, fp, a.forest.seed)?;
    Ok(())
}
