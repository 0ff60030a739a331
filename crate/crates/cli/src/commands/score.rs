use serde::Serialize;
use serde_json::json;
use ssfi_core::dataset::load_csv;
use ssfi_core::ssfi::Viability;
use ssfi_core::{ssfi_loo, Task};

use super::{csv_bytes, fingerprint, forest_config, ssfi_config, ssfi_seed};
use crate::args::ScoreArgs;
use crate::manifest::RunRecorder;
use crate::CliResult;

#[derive(Serialize)]
struct ScoreLine<'a> {
    sample_index: usize,
    prediction: f64,
    truth: f64,
    raw_scores: &'a [f64],
    normalized_scores: &'a [f64],
    ranking: &'a [usize],
}

pub fn run(a: &ScoreArgs) -> CliResult<()> {
    let mut fcfg = forest_config(&a.forest)?;
    let scfg = ssfi_config(&a.forest)?;
    let task: Task = a.task.into();
    let mut rec = RunRecorder::new(&a.out)?;

    let d = load_csv(&a.data, &a.target, task)?;
    rec.stage("load");
    fcfg.seed = ssfi_seed(a.forest.seed);
    let run = ssfi_loo(&d, &fcfg, &scfg)?;
    rec.stage("ssfi");

    let mut jsonl = String::new();
    for r in &run.records {
        jsonl.push_str(&serde_json::to_string(&ScoreLine {
            sample_index: r.sample_index,
            prediction: r.prediction,
            truth: r.truth,
            raw_scores: &r.scores.raw,
            normalized_scores: &r.scores.normalized,
            ranking: &r.scores.ranking,
        })?);
        jsonl.push('\n');
    }
    rec.write("scores.jsonl", jsonl.as_bytes())?;

    let names = d.feature_names();
    let mut header: Vec<&str> = vec!["sample_index"];
    header.extend(names.iter().map(String::as_str));
    let scores_csv = csv_bytes(&header, |w| {
        for r in &run.records {
            let mut row = vec![r.sample_index.to_string()];
            row.extend(r.scores.raw.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        Ok(())
    })?;
    rec.write("scores.csv", &scores_csv)?;

    let rankings_csv = csv_bytes(
        &["sample_index", "rank", "feature_index", "feature", "score"],
        |w| {
            for r in &run.records {
                for (rank, &j) in r.scores.ranking.iter().enumerate() {
                    w.write_record([
                        r.sample_index.to_string(),
                        (rank + 1).to_string(),
                        j.to_string(),
                        names[j].clone(),
                        r.scores.raw[j].to_string(),
                    ])?;
                }
            }
            Ok(())
        },
    )?;
    rec.write("rankings.csv", &rankings_csv)?;

    let viability = json!({
        "samples": run.records.len(),
        "viability": run.viability,
    });
    rec.write(
        "viability.json",
        format!("{}\n", serde_json::to_string_pretty(&viability)?).as_bytes(),
    )?;
    rec.stage("write");

    match run.viability {
        Some(Viability::Accuracy(v)) => println!(
            "scored {} samples; leave-one-out accuracy {v:.4}",
            run.records.len()
        ),
        Some(Viability::RSquared(v)) => println!(
            "scored {} samples; leave-one-out r2 {v:.4}",
            run.records.len()
        ),
        None => println!("scored {} samples; viability undefined", run.records.len()),
    }

    let config = json!({
        "data": a.data,
        "target": a.target,
        "task": a.task,
        "forest": fcfg,
        "master_seed": a.forest.seed,
        "ssfi": scfg,
        "out": a.out,
    });
    let fp = fingerprint(&d, &[&a.data])?;
    rec.finish("score", config, fp, a.forest.seed)?;
    Ok(())
}
