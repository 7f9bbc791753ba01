//! Named sweeps over horizons and seeds.

use std::path::Path;

use serde::Serialize;

use super::emit::{self, SCHEMA};
use super::fit::{fit_exponent, median, ExponentFit};
use super::run::{run, ExperimentConfig};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub body: &'static str,
    pub dim: usize,
    pub learner: &'static str,
    pub adversaries: Vec<&'static str>,
    pub lipschitz: f64,
    /// Horizons are `2^k` for `k` in this range.
    pub log2_horizons: (u32, u32),
    pub seeds: u64,
}

pub const PRESET_NAMES: [&str; 4] = ["thm1-ball", "thm2-square", "ftl-strong", "freegrad-1d"];

impl Preset {
    pub fn named(name: &str) -> Result<Self> {
        let p = match name {
            "thm1-ball" => Preset {
                name: "thm1-ball",
                body: "ball:R=1",
                dim: 5,
                learner: "main",
                adversaries: vec!["iid-sphere", "biased-drift"],
                lipschitz: 1.0,
                log2_horizons: (8, 14),
                seeds: 10,
            },
            "thm2-square" => Preset {
                name: "thm2-square",
                body: "cube:half=1",
                dim: 2,
                learner: "main:base=ftal",
                adversaries: vec!["iid-sphere", "biased-drift"],
                lipschitz: 1.0,
                log2_horizons: (8, 13),
                seeds: 10,
            },
            "ftl-strong" => Preset {
                name: "ftl-strong",
                body: "ball:R=1",
                dim: 2,
                learner: "ftl",
                adversaries: vec!["biased-drift", "sign-flip"],
                lipschitz: 1.0,
                log2_horizons: (8, 14),
                seeds: 10,
            },
            "freegrad-1d" => Preset {
                name: "freegrad-1d",
                body: "ball:R=1",
                dim: 1,
                learner: "freegrad",
                adversaries: vec!["iid-sphere", "biased-drift"],
                lipschitz: 1.0,
                log2_horizons: (8, 14),
                seeds: 10,
            },
            other => {
                return Err(Error::Parse(format!(
                    "unknown preset '{other}'; expected one of {}",
                    PRESET_NAMES.join(", ")
                )))
            }
        };
        Ok(p)
    }

    /// A small grid with the same structure, for smoke and reproducibility runs.
    pub fn quick(mut self) -> Self {
        let top = if self.name == "thm2-square" { 7 } else { 9 };
        self.log2_horizons = (top - 2, top);
        self.seeds = 2;
        self
    }

    pub fn horizons(&self) -> Vec<usize> {
        (self.log2_horizons.0..=self.log2_horizons.1)
            .map(|k| 1usize << k)
            .collect()
    }

    pub fn config(&self, adversary: &str, horizon: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            body: self.body.into(),
            dim: self.dim,
            learner: self.learner.into(),
            adversary: adversary.into(),
            horizon,
            lipschitz: self.lipschitz,
            seed,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub adversary: String,
    pub horizon: usize,
    pub seed: u64,
    pub regret: f64,
    pub loo_calls: u64,
    pub restarts: Option<usize>,
    /// Plays checked against the body; equals the horizon for a completed run.
    pub membership_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub horizon: usize,
    pub median_regret: f64,
    pub loo_calls_max: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub adversary: String,
    pub points: Vec<GridPoint>,
    pub fit: Option<ExponentFit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub preset: Preset,
    pub runs: Vec<RunOutcome>,
    pub series: Vec<Series>,
    pub loo_calls_total: u64,
}

/// Runs every `(adversary, T, seed)` cell; results are ordered by that key
/// regardless of scheduling. With `trace_dir`, per-run traces are written there.
pub fn sweep(preset: &Preset, trace_dir: Option<&Path>) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for adv in &preset.adversaries {
        for t in preset.horizons() {
            for seed in 0..preset.seeds {
                jobs.push((*adv, t, seed));
            }
        }
    }
    let results = par::map(jobs.len(), |i| -> Result<RunOutcome> {
        let (adv, t, seed) = jobs[i];
        let trace = run(&preset.config(adv, t, seed))?;
        if let Some(dir) = trace_dir {
            emit::emit_trace(&trace, &dir.join(format!("{}_{adv}_T{t}_s{seed}", preset.name)))?;
        }
        Ok(RunOutcome {
            adversary: adv.to_string(),
            horizon: t,
            seed,
            regret: trace.regret,
            loo_calls: trace.loo_calls_total,
            restarts: trace.restarts,
            membership_checks: trace.membership_checks,
        })
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut series = Vec::new();
    for adv in &preset.adversaries {
        let points: Vec<GridPoint> = preset
            .horizons()
            .into_iter()
            .map(|t| {
                let cell: Vec<&RunOutcome> = runs.iter().filter(|r| r.adversary == *adv && r.horizon == t).collect();
                let regrets: Vec<f64> = cell.iter().map(|r| r.regret).collect();
                GridPoint {
                    horizon: t,
                    median_regret: median(&regrets),
                    loo_calls_max: cell.iter().map(|r| r.loo_calls).max().unwrap_or(0),
                }
            })
            .collect();
        let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.horizon as f64, p.median_regret)).collect();
        let fit = fit_exponent(&xy).ok();
        series.push(Series {
            adversary: adv.to_string(),
            points,
            fit,
        });
    }
    let loo_calls_total = runs.iter().map(|r| r.loo_calls).sum();
    Ok(SweepReport {
        schema: SCHEMA,
        preset: preset.clone(),
        runs,
        series,
        loo_calls_total,
    })
}

/// Writes `<stem>.json` (the report) and `<stem>.csv` (one row per run).
pub fn emit_sweep(report: &SweepReport, stem: &Path) -> Result<()> {
    let csv_path = stem.with_extension("csv");
    let cerr = |source| Error::Csv {
        path: csv_path.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(&csv_path).map_err(cerr)?;
    w.write_record(["adversary", "T", "seed", "regret", "loo_calls", "restarts"])
        .map_err(cerr)?;
    for r in &report.runs {
        w.write_record([
            r.adversary.clone(),
            r.horizon.to_string(),
            r.seed.to_string(),
            r.regret.to_string(),
            r.loo_calls.to_string(),
            r.restarts.map(|n| n.to_string()).unwrap_or_default(),
        ])
        .map_err(cerr)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: csv_path.clone(),
        source,
    })?;
    emit::write_json(report, &stem.with_extension("json"))
}
