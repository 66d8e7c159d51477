//! Independent runs executed in parallel, each in its own subdirectory.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::run::{execute, RunStatus};

pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub name: String,
    pub dir: PathBuf,
    /// `ok`, `blow_up` or `error`.
    pub status: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub scenario: u8,
    pub gamma: f64,
    pub breakdown_time: Option<f64>,
    pub initial_total_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepIndex {
    pub runs: Vec<SweepEntry>,
}

impl SweepIndex {
    /// 0 when every run succeeded, otherwise the largest per-run code.
    pub fn exit_code(&self) -> i32 {
        self.runs.iter().map(|r| r.exit_code).max().unwrap_or(0)
    }
}

fn run_name(cfg: &RunConfig, i: usize) -> String {
    cfg.name.clone().unwrap_or_else(|| format!("run_{i:03}"))
}

/// Runs every config under `out_root/<name>` and writes `out_root/index.json`
/// in input order. A failing run is recorded and does not stop the others.
pub fn run_sweep(configs: &[RunConfig], out_root: &Path) -> Result<SweepIndex, CliError> {
    fs::create_dir_all(out_root).map_err(|e| CliError::io(out_root, e))?;
    let mut names: Vec<String> = configs.iter().enumerate().map(|(i, c)| run_name(c, i)).collect();
    // Duplicate names would share a directory.
    for i in 0..names.len() {
        if names[..i].contains(&names[i]) {
            names[i] = format!("{}_{i:03}", names[i]);
        }
    }

    let runs = configs
        .par_iter()
        .zip(names.par_iter())
        .map(|(cfg, name)| {
            let dir = out_root.join(name);
            let mut entry = SweepEntry {
                name: name.clone(),
                dir: dir.clone(),
                status: "error".into(),
                exit_code: 1,
                error: None,
                scenario: cfg.scenario,
                gamma: cfg.gamma,
                breakdown_time: None,
                initial_total_norm: None,
            };
            match execute(cfg, None, &dir) {
                Ok(report) => {
                    entry.exit_code = report.exit_code();
                    entry.status = match report.summary.status {
                        RunStatus::Ok => "ok",
                        RunStatus::BlowUp => "blow_up",
                    }
                    .into();
                    entry.breakdown_time = report.summary.breakdown_time;
                    entry.initial_total_norm = Some(report.summary.initial_total_norm);
                }
                Err(e) => entry.error = Some(e.to_string()),
            }
            entry
        })
        .collect();

    let index = SweepIndex { runs };
    let json = serde_json::to_string_pretty(&index).expect("index serializes") + "\n";
    let path = out_root.join(INDEX_FILE);
    fs::write(&path, json).map_err(|e| CliError::io(path, e))?;
    Ok(index)
}

/// The four scenarios built from one base config, named `scenario_<row>`.
pub fn all_scenarios(base: &RunConfig) -> Vec<RunConfig> {
    (1..=4).map(|row| RunConfig { scenario: row, name: Some(format!("scenario_{row}")), ..base.clone() }).collect()
}
