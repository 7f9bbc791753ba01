//! Experiment orchestration: adversaries, runs, sweeps, fits, output, and invariant suites.

pub mod adversary;
pub mod emit;
pub mod fit;
pub mod presets;
pub mod run;
pub mod spec;
pub mod verify;

pub use adversary::{clip_norm, smooth_quad_gradient, Adversary, AdversaryKind};
pub use emit::{emit_trace, summarize, write_json, write_trace_csv, SCHEMA};
pub use fit::{fit_exponent, median, ExponentFit};
pub use presets::{emit_sweep, sweep, Preset, SweepReport, PRESET_NAMES};
pub use run::{best_comparator, run, run_on, ExperimentConfig, RegretTrace};
pub use verify::{run_suite, SuiteSize, VerifyReport, SUITES};
