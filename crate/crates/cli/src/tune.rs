//! Pulse tuning against the overlap graph a config produces.

use std::path::PathBuf;

use clusteragg::rydberg::EmulatorParams;
use clusteragg::tuner::{self, PulseTuning};

use crate::config::RunConfig;
use crate::pipeline::{emulator_params, prepare};
use crate::{write_file, CliError};

pub struct TuneOutput {
    pub tuning: PulseTuning,
    pub trace_file: PathBuf,
    pub result_file: PathBuf,
}

/// Emulator settings come from the first `rydberg` backend, else defaults.
pub fn tune(cfg: &RunConfig) -> Result<TuneOutput, CliError> {
    let t = cfg
        .tune
        .clone()
        .ok_or_else(|| CliError::Validation("config has no [tune] section".into()))?;
    let bounds = t.bounds();
    bounds
        .validate()
        .map_err(|e| CliError::Validation(format!("tune bounds: {e}")))?;
    if t.budget == 0 || t.shots == 0 {
        return Err(CliError::Validation("tune budget and shots must be at least 1".into()));
    }
    let emulator = cfg
        .backend
        .iter()
        .find_map(emulator_params)
        .map_or_else(EmulatorParams::default, |(_, e)| e);
    let prep = prepare(cfg)?;
    let tuning = tuner::tune_pulse(&prep.graph, &bounds, t.budget, t.shots, cfg.seed, &emulator)
        .map_err(CliError::stage("tuning"))?;

    let dir = cfg.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let trace_file = dir.join("tune_trace.csv");
    write_file(&trace_file, tuning.result.trace_csv())?;
    let result_file = dir.join("tune.json");
    let doc = serde_json::json!({
        "best": tuning.result.best,
        "best_score": tuning.result.best_score,
        "final_score": tuning.final_score,
        "rescore_seeds": tuner::RESCORE_SEEDS,
        "budget": t.budget,
        "shots": t.shots,
        "evaluations": tuning.result.trace.len(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json value serializes");
    text.push('\n');
    write_file(&result_file, text)?;
    Ok(TuneOutput {
        tuning,
        trace_file,
        result_file,
    })
}
