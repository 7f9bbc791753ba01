//! One experiment: a learner against an adversary on a body.

use std::rc::Rc;
use std::sync::Arc;

use serde::Serialize;

use super::adversary::{Adversary, AdversaryKind};
use super::spec::{split_spec, Auto};
use crate::approx_set::{ApproxTuning, Deflation, EpsBody, Ftal, WeakLooParams};
use crate::error::{Error, Result};
use crate::geometry::{Body, DEFAULT_TOL};
use crate::learners::{default_eta, ftsl_new, Ca, Ftl, IntervalFreeGrad, Learner, MainAlg, MainParams, Ogd};
use crate::oracles::CountingOracle;
use crate::point::Point;

/// Default `rho` for the approximate pipeline's accuracy rule.
pub const DEFAULT_RHO: f64 = 0.5;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub body: String,
    /// Dimension used when the body spec has no `d=` key.
    pub dim: usize,
    pub learner: String,
    pub adversary: String,
    pub horizon: usize,
    pub lipschitz: f64,
    pub eta: Auto,
    pub mu: Auto,
    pub eps: Auto,
    pub delta: Auto,
    pub rho: Auto,
    pub seed: u64,
    /// Report regret against the best comparator of each prefix instead of the final one.
    pub prefix_comparators: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            body: "ball:R=1".into(),
            dim: 2,
            learner: "main".into(),
            adversary: "iid-sphere".into(),
            horizon: 100,
            lipschitz: 1.0,
            eta: Auto::Auto,
            mu: Auto::Auto,
            eps: Auto::Auto,
            delta: Auto::Auto,
            rho: Auto::Auto,
            seed: 0,
            prefix_comparators: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Ftl,
    Freegrad,
    Ftsl,
    Main,
    MainFtal,
    Ogd,
    Ftal,
}

/// Numeric parameters after every `auto` has been replaced.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Resolved {
    pub learner: LearnerKind,
    pub adversary: AdversaryKind,
    pub r: f64,
    pub big_r: f64,
    pub kappa: f64,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub eps: Option<f64>,
    pub ln_delta: Option<f64>,
    pub solver_delta: Option<f64>,
    pub rho: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub t: usize,
    pub x: Point,
    pub g: Point,
    /// `<g_t, x_t>`.
    pub loss: f64,
    pub cum_loss: f64,
    /// Cumulative oracle calls after the learner consumed `g_t`.
    pub loo_calls: u64,
    /// Cumulative loss minus the comparator's cumulative loss up to `t`.
    pub cum_regret: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegretTrace {
    pub config: ExperimentConfig,
    pub resolved: Resolved,
    pub records: Vec<Record>,
    pub comparator: Point,
    pub regret: f64,
    pub loo_calls_total: u64,
    pub membership_checks: usize,
    pub restarts: Option<usize>,
}

impl RegretTrace {
    pub fn grad_sum(&self) -> Point {
        let mut s = Point::zeros(self.comparator.dim());
        for r in &self.records {
            s.axpy(1.0, &r.g);
        }
        s
    }
}

/// The hindsight-optimal comparator for linear losses: `lin_min(body, sum g_t)`.
pub fn best_comparator(trace: &RegretTrace, body: &Body) -> Result<Point> {
    body.lin_min(&trace.grad_sum())
}

struct LearnerSpec {
    kind: LearnerKind,
    eps: Auto,
    delta: Auto,
}

fn parse_learner(spec: &str, cfg: &ExperimentConfig) -> Result<LearnerSpec> {
    let (kind, kv) = split_spec(spec)?;
    let pick = |key: &str, fallback: Auto| -> Result<Auto> {
        Ok(if kv.get(key).is_some() {
            kv.get_auto(key)?
        } else {
            fallback
        })
    };
    let eps = pick("eps", cfg.eps)?;
    let delta = pick("delta", cfg.delta)?;
    let kind = match kind {
        "ftl" => LearnerKind::Ftl,
        "freegrad" => LearnerKind::Freegrad,
        "ftsl" => LearnerKind::Ftsl,
        "ogd" => LearnerKind::Ogd,
        "ftal" => LearnerKind::Ftal,
        "main" => match kv.get("base").unwrap_or("ftl") {
            "ftl" => LearnerKind::Main,
            "ftal" => LearnerKind::MainFtal,
            other => return Err(Error::Parse(format!("{spec}: unknown base '{other}'"))),
        },
        other => return Err(Error::Parse(format!("unknown learner '{other}'"))),
    };
    let allowed: &[&str] = match kind {
        LearnerKind::Ftal => &["eps", "delta"],
        LearnerKind::MainFtal => &["base", "eps", "delta"],
        LearnerKind::Main => &["base"],
        _ => &[],
    };
    kv.finish(allowed)?;
    Ok(LearnerSpec { kind, eps, delta })
}

fn opt(a: Auto) -> Option<f64> {
    match a {
        Auto::Auto => None,
        Auto::Value(v) => Some(v),
    }
}

struct Built {
    learner: Box<dyn Learner>,
    oracle: Rc<CountingOracle>,
    resolved: Resolved,
    main_restarts: Option<Rc<std::cell::Cell<usize>>>,
}

/// Wraps [`MainAlg`] to expose its restart count after the run.
struct Tracked {
    inner: MainAlg,
    restarts: Rc<std::cell::Cell<usize>>,
}

impl Learner for Tracked {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn next(&self) -> Point {
        self.inner.next()
    }
    fn feed(&mut self, g: &Point) -> Result<()> {
        self.inner.feed(g)?;
        self.restarts.set(self.inner.restarts());
        Ok(())
    }
}

fn build(cfg: &ExperimentConfig, body: Arc<Body>, adversary: AdversaryKind) -> Result<Built> {
    let spec = parse_learner(&cfg.learner, cfg)?;
    let oracle = Rc::new(CountingOracle::new(Arc::clone(&body)));
    let s = body.sandwich();
    let l = cfg.lipschitz;
    let t = cfg.horizon;
    let mut resolved = Resolved {
        learner: spec.kind,
        adversary,
        r: s.r,
        big_r: s.big_r,
        kappa: s.kappa,
        eta: None,
        mu: None,
        eps: None,
        ln_delta: None,
        solver_delta: None,
        rho: None,
    };
    let mut tuning = || -> Result<(EpsBody, WeakLooParams)> {
        let rho = cfg.rho.resolve(|| DEFAULT_RHO);
        let tune = ApproxTuning::resolve(s.kappa, t, rho, opt(spec.eps), opt(spec.delta))?;
        resolved.rho = Some(rho);
        resolved.eps = Some(tune.eps);
        resolved.ln_delta = Some(tune.ln_delta);
        resolved.solver_delta = Some(tune.solver_delta);
        let eb = EpsBody::new(Arc::clone(&body), tune.eps)?;
        let params = WeakLooParams::new(tune.solver_delta).with_deflation(Deflation::Nominal {
            ln_delta: tune.ln_delta,
        });
        Ok((eb, params))
    };
    let mut main_restarts = None;
    let learner: Box<dyn Learner> = match spec.kind {
        LearnerKind::Ftl => Box::new(Ftl::new(Rc::clone(&oracle))),
        LearnerKind::Freegrad => {
            if body.dim() != 1 {
                return Err(Error::Input(format!(
                    "freegrad runs on 1-d bodies, got d = {}",
                    body.dim()
                )));
            }
            Box::new(IntervalFreeGrad::new(l, s.big_r)?)
        }
        LearnerKind::Ftsl => Box::new(ftsl_new(Rc::clone(&oracle), l)?),
        LearnerKind::Ogd => Box::new(Ogd::new(Rc::clone(&oracle), l)?),
        LearnerKind::Ftal => {
            let (eb, params) = tuning()?;
            Box::new(Ftal::new(Rc::clone(&oracle), eb, params)?)
        }
        LearnerKind::Main | LearnerKind::MainFtal => {
            let eta = cfg.eta.resolve(|| default_eta(l, s.big_r, t));
            let (mu, factory): (f64, crate::learners::CaFactory) = if spec.kind == LearnerKind::Main {
                let mu = cfg.mu.resolve(|| body.modulus());
                if !(mu > 0.0) {
                    return Err(Error::Parameter(format!(
                        "main with an FTL base needs a strongly convex body; modulus is {mu}"
                    )));
                }
                let o = Rc::clone(&oracle);
                (mu, Box::new(move || ftsl_new(Rc::clone(&o), l)))
            } else {
                let (eb, params) = tuning()?;
                let mu = cfg.mu.resolve(|| eb.mu_eps());
                let o = Rc::clone(&oracle);
                let big_r = s.big_r;
                let factory = move || -> Result<Ca> {
                    let base = Ftal::new(Rc::clone(&o), eb.clone(), params)?;
                    Ca::new(Box::new(base), l, big_r)
                };
                (mu, Box::new(factory))
            };
            resolved.eta = Some(eta);
            resolved.mu = Some(mu);
            let params = MainParams {
                eta,
                modulus: mu,
                ..MainParams::tuned(l, s.big_r, mu, t)
            };
            let alg = MainAlg::new(params, factory)?;
            let cell = Rc::new(std::cell::Cell::new(0));
            main_restarts = Some(Rc::clone(&cell));
            Box::new(Tracked {
                inner: alg,
                restarts: cell,
            })
        }
    };
    if learner.dim() != body.dim() {
        return Err(Error::Dimension {
            expected: body.dim(),
            got: learner.dim(),
        });
    }
    Ok(Built {
        learner,
        oracle,
        resolved,
        main_restarts,
    })
}

/// Runs the protocol for `T` rounds; every play is checked for membership.
pub fn run(cfg: &ExperimentConfig) -> Result<RegretTrace> {
    if !(cfg.lipschitz > 0.0) {
        return Err(Error::Parameter(format!("L must be > 0, got {}", cfg.lipschitz)));
    }
    let body = Arc::new(Body::parse(&cfg.body, cfg.dim)?);
    run_on(cfg, body)
}

/// As [`run`], with an already constructed body.
pub fn run_on(cfg: &ExperimentConfig, body: Arc<Body>) -> Result<RegretTrace> {
    let adversary_kind = AdversaryKind::parse(&cfg.adversary)?;
    let Built {
        mut learner,
        oracle,
        resolved,
        main_restarts,
    } = build(cfg, Arc::clone(&body), adversary_kind)?;
    let mut adversary = Adversary::new(adversary_kind, body.dim(), cfg.lipschitz, cfg.seed);
    let d = body.dim();
    let mut records = Vec::with_capacity(cfg.horizon);
    let mut cum_loss = 0.0;
    let mut grad_sum = Point::zeros(d);
    for t in 1..=cfg.horizon {
        let round_err = |e: Error| Error::Round {
            round: t,
            source: Box::new(e),
        };
        let x = learner.next();
        if !x.is_finite() || !body.membership(&x, DEFAULT_TOL) {
            return Err(round_err(Error::Domain(format!(
                "play {x} is outside the body (gauge {})",
                body.gauge(&x, 1e-12)
            ))));
        }
        let g = adversary.next(t, &x);
        learner.feed(&g).map_err(round_err)?;
        let loss = g.dot(&x);
        cum_loss += loss;
        grad_sum.axpy(1.0, &g);
        let cum_regret = if cfg.prefix_comparators {
            cum_loss - grad_sum.dot(&body.lin_min(&grad_sum).map_err(round_err)?)
        } else {
            0.0
        };
        records.push(Record {
            t,
            x,
            g,
            loss,
            cum_loss,
            loo_calls: oracle.loo_calls(),
            cum_regret,
        });
    }
    let comparator = body.lin_min(&grad_sum)?;
    if !cfg.prefix_comparators {
        let mut prefix = Point::zeros(d);
        for r in records.iter_mut() {
            prefix.axpy(1.0, &r.g);
            r.cum_regret = r.cum_loss - prefix.dot(&comparator);
        }
    }
    let regret = cum_loss - grad_sum.dot(&comparator);
    Ok(RegretTrace {
        config: cfg.clone(),
        resolved,
        membership_checks: records.len(),
        records,
        comparator,
        regret,
        loo_calls_total: oracle.loo_calls(),
        restarts: main_restarts.map(|c| c.get()),
    })
}
