use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pfoco::harness::emit::read_json;
use pfoco::harness::spec::Auto;
use pfoco::harness::{self, fit_exponent, ExperimentConfig, Preset, SuiteSize};
use pfoco::Result;

#[derive(Parser)]
#[command(
    name = "pfoco",
    version,
    about = "Projection-free online convex optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one learner against one adversary and write `<out>.csv` and `<out>.json`.
    Run {
        #[arg(long, default_value = "ball:R=1")]
        body: String,
        /// Dimension for bodies whose spec has no `d=` key.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "main")]
        learner: String,
        #[arg(long, default_value = "iid-sphere")]
        adversary: String,
        #[arg(long = "T", default_value_t = 1000)]
        horizon: usize,
        #[arg(long = "L", default_value_t = 1.0)]
        lipschitz: f64,
        #[arg(long, default_value = "auto", value_parser = Auto::parse)]
        eta: Auto,
        #[arg(long, default_value = "auto", value_parser = Auto::parse)]
        mu: Auto,
        #[arg(long, default_value = "auto", value_parser = Auto::parse)]
        eps: Auto,
        #[arg(long, default_value = "auto", value_parser = Auto::parse)]
        delta: Auto,
        #[arg(long, default_value = "auto", value_parser = Auto::parse)]
        rho: Auto,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report regret against each prefix's best comparator.
        #[arg(long)]
        prefix_comparators: bool,
        #[arg(long, default_value = "run")]
        out: PathBuf,
    },
    /// Run a preset grid and write `<out>.csv` and `<out>.json`.
    Sweep {
        #[arg(long)]
        preset: String,
        /// Small grid with two seeds.
        #[arg(long)]
        quick: bool,
        /// Also write every run's trace into this directory.
        #[arg(long)]
        traces: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite; exits nonzero on any failure.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Refit regret exponents from sweep or run JSON files.
    Fit {
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Run {
            body,
            dim,
            learner,
            adversary,
            horizon,
            lipschitz,
            eta,
            mu,
            eps,
            delta,
            rho,
            seed,
            prefix_comparators,
            out,
        } => {
            let cfg = ExperimentConfig {
                body,
                dim,
                learner,
                adversary,
                horizon,
                lipschitz,
                eta,
                mu,
                eps,
                delta,
                rho,
                seed,
                prefix_comparators,
            };
            let trace = harness::run(&cfg)?;
            harness::emit_trace(&trace, &out)?;
            println!(
                "T={} regret={:.6} loo_calls={} -> {}",
                trace.records.len(),
                trace.regret,
                trace.loo_calls_total,
                out.with_extension("{csv,json}").display()
            );
            Ok(true)
        }
        Command::Sweep {
            preset,
            quick,
            traces,
            out,
        } => {
            let mut p = Preset::named(&preset)?;
            if quick {
                p = p.quick();
            }
            if let Some(dir) = &traces {
                std::fs::create_dir_all(dir).map_err(|source| pfoco::Error::Io {
                    path: dir.clone(),
                    source,
                })?;
            }
            let report = harness::sweep(&p, traces.as_deref())?;
            let out = out.unwrap_or_else(|| PathBuf::from(p.name));
            harness::emit_sweep(&report, &out)?;
            for s in &report.series {
                match &s.fit {
                    Some(f) => println!("{} {}: slope={:.4} r2={:.4}", p.name, s.adversary, f.slope, f.r2),
                    None => println!("{} {}: too few points to fit", p.name, s.adversary),
                }
            }
            Ok(true)
        }
        Command::Verify { suite, seed } => {
            let rep = harness::run_suite(
                &suite,
                SuiteSize {
                    seed,
                    ..SuiteSize::default()
                },
            )?;
            let status = if rep.passed() { "PASS" } else { "FAIL" };
            println!(
                "{status} {}: {} checks, {} failures, worst margin {:.3e}",
                rep.suite, rep.checks, rep.failures, rep.worst_margin
            );
            for n in &rep.notes {
                println!("  {n}");
            }
            Ok(rep.passed())
        }
        Command::Fit { inputs } => {
            let mut loose = Vec::new();
            for path in &inputs {
                let doc = read_json(path)?;
                if let Some(series) = doc.get("series").and_then(|s| s.as_array()) {
                    let name = doc["preset"]["name"].as_str().unwrap_or("?");
                    for s in series {
                        let pts: Vec<(f64, f64)> = s["points"]
                            .as_array()
                            .into_iter()
                            .flatten()
                            .filter_map(|p| Some((p["horizon"].as_f64()?, p["median_regret"].as_f64()?)))
                            .collect();
                        report_fit(&format!("{name} {}", s["adversary"].as_str().unwrap_or("?")), &pts);
                    }
                } else if let (Some(t), Some(r)) = (doc["horizon"].as_f64(), doc["final_regret"].as_f64()) {
                    loose.push((t, r));
                } else {
                    eprintln!("warning: {} is neither a sweep nor a run summary", path.display());
                }
            }
            if !loose.is_empty() {
                report_fit("runs", &loose);
            }
            Ok(true)
        }
    }
}

fn report_fit(label: &str, points: &[(f64, f64)]) {
    match fit_exponent(points) {
        Ok(f) => println!("{label}: slope={:.4} r2={:.4} points={}", f.slope, f.r2, points.len()),
        Err(e) => println!("{label}: {e}"),
    }
}
