//! Randomized invariant suites behind `pfoco verify`.

use std::rc::Rc;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::adversary::{Adversary, AdversaryKind};
use crate::approx_set::{
    brute_support_2d, golden_section, sandwich_check, theta_eval, theta_grad, weak_loo_with, Deflation, EpsBody,
    WeakLooParams,
};
use crate::error::{Error, Result};
use crate::geometry::{verify_strong_convexity, Body};
use crate::learners::{Ca, FreeGrad, Ftl, Learner, SleepingExperts};
use crate::oracles::CountingOracle;
use crate::par;
use crate::point::Point;
use crate::rng;

pub const SUITES: [&str; 8] = [
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma6",
    "lemma7",
    "eq18",
    "weakloo2d",
    "gradcheck",
];

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: usize,
    pub failures: usize,
    /// Largest observed `lhs - rhs` (negative when every check holds with room).
    pub worst_margin: f64,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(suite: &str) -> Self {
        VerifyReport {
            suite: suite.into(),
            checks: 0,
            failures: 0,
            worst_margin: f64::NEG_INFINITY,
            notes: vec![],
        }
    }

    /// Records `lhs <= rhs`.
    fn check(&mut self, lhs: f64, rhs: f64) {
        self.checks += 1;
        let margin = lhs - rhs;
        if !(margin <= 0.0) {
            self.failures += 1;
        }
        if margin > self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
        }
    }

    fn merge(&mut self, other: VerifyReport) {
        self.checks += other.checks;
        self.failures += other.failures;
        if other.worst_margin > self.worst_margin || other.worst_margin.is_nan() {
            self.worst_margin = other.worst_margin;
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

/// Sizes for the suites; `Default` gives the documented sizes.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSize {
    pub traces: usize,
    pub seed: u64,
}

impl Default for SuiteSize {
    fn default() -> Self {
        SuiteSize { traces: 100, seed: 7 }
    }
}

pub fn run_suite(name: &str, size: SuiteSize) -> Result<VerifyReport> {
    match name {
        "lemma2" => ftl_bound(size, 1000),
        "lemma3" => freegrad_bound(size, 10_000),
        "lemma4" => wrapper_identity(size, 1000),
        "lemma6" => eps_sandwich(10_000, size.seed),
        "lemma7" => lambda_consistency(size.traces.min(50), size.seed, 1e-8),
        "eq18" => sleeping_bound(size, 200),
        "weakloo2d" => weak_loo_2d(size.traces.min(50), size.seed, 1e-8),
        "gradcheck" => theta_gradcheck(size.traces * 10, size.seed, 1e-8),
        other => Err(Error::Parse(format!(
            "unknown suite '{other}'; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Bodies used by the planar suites: the square `[-1, 1]^2` and the unit l_1.5 ball.
pub fn planar_bases() -> Result<Vec<Arc<Body>>> {
    Ok(vec![Arc::new(Body::cube(2, 1.0)?), Arc::new(Body::lp(2, 1.5, 1.0)?)])
}

fn collect(suite: &str, parts: Vec<Result<VerifyReport>>) -> Result<VerifyReport> {
    let mut out = VerifyReport::new(suite);
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}

/// FTL regret against `lin_min(G_T)` versus `sum 2 |g_t|^2 / (mu |G_t|)` on the unit ball.
fn ftl_bound(size: SuiteSize, horizon: usize) -> Result<VerifyReport> {
    let parts = par::map(size.traces, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("lemma2");
        let body = Arc::new(Body::ball(2, 1.0)?);
        let mu = body.modulus();
        let oracle = Rc::new(CountingOracle::new(Arc::clone(&body)));
        let mut ftl = Ftl::new(oracle);
        let kind = AdversaryKind::BiasedDrift { drift: 0.3, noise: 1.0 };
        let mut adv = Adversary::new(kind, 2, 1.0, rng::splitmix64(size.seed ^ i as u64));
        let (mut loss, mut bound) = (0.0, 0.0);
        let mut sum = Point::zeros(2);
        for t in 1..=horizon {
            let w = ftl.next();
            let g = adv.next(t, &w);
            ftl.feed(&g)?;
            loss += g.dot(&w);
            sum.axpy(1.0, &g);
            let n = sum.norm();
            if n == 0.0 {
                rep.notes.push(format!("trace {i}: zero prefix sum at t={t}, skipped"));
                return Ok(rep);
            }
            bound += 2.0 * g.norm_sq() / (mu * n);
        }
        let u = body.lin_min(&sum)?;
        rep.check(loss - sum.dot(&u), bound + 1e-9 * (1.0 + bound));
        Ok(rep)
    });
    collect("lemma2", parts)
}

/// The FreeGrad bound at comparators `z in {0, ±0.25, ±0.5, ±1}`; `R_T(0) <= L`.
pub fn freegrad_regret_bound(z: f64, v: f64, l: f64) -> f64 {
    let a = z.abs();
    if a == 0.0 || v == 0.0 {
        return l;
    }
    2.0 * a * (v * (1.0 + 2.0 * a * v / (l * l)).ln()).sqrt() + 4.0 * l * a * (4.0 * a * v.sqrt() / l).ln() + l
}

fn freegrad_bound(size: SuiteSize, horizon: usize) -> Result<VerifyReport> {
    let comparators = [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0];
    let parts = par::map(size.traces, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("lemma3");
        let mut r = rng::substream(size.seed, i as u64);
        let l = 1.0;
        let mut fg = FreeGrad::new(l)?;
        let (mut gz, mut gsum, mut v) = (0.0, 0.0, 0.0);
        for _ in 0..horizon {
            let z = fg.play();
            let g: f64 = r.random_range(-l..=l);
            fg.feed(g)?;
            gz += g * z;
            gsum += g;
            v += g * g;
        }
        for &u in &comparators {
            let regret = gz - gsum * u;
            rep.check(regret, freegrad_regret_bound(u, v, l) + 1e-9 * (1.0 + regret.abs()));
        }
        Ok(rep)
    });
    collect("lemma3", parts)
}

/// The wrapper's regret decomposition on unclipped runs, to `1e-8` relative.
fn wrapper_identity(size: SuiteSize, horizon: usize) -> Result<VerifyReport> {
    let parts = par::map(size.traces, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("lemma4");
        let body = Arc::new(Body::ball(2, 1.0)?);
        let oracle = Rc::new(CountingOracle::new(Arc::clone(&body)));
        let mut ca = Ca::new(Box::new(Ftl::new(oracle)), 1.0, 1.0)?.unclipped();
        let mut r = rng::substream(size.seed, i as u64);
        let mut adv = Adversary::new(AdversaryKind::IidSphere, 2, 1.0, size.seed.wrapping_add(i as u64));
        let dir = rng::unit_vector(&mut r, 2);
        let u = dir.scale(r.random_range(0.05..1.0));
        let gamma = body.gauge(&u, 1e-15);
        let base_u = u.scale(1.0 / gamma);
        let (mut lhs, mut oned, mut base, mut scale) = (0.0, 0.0, 0.0, 0.0);
        for t in 1..=horizon {
            let play = ca.next();
            let z = ca.scalar();
            let w = ca.base_play();
            let g = adv.next(t, &play);
            ca.feed(&g)?;
            let wg = w.dot(&g);
            lhs += g.dot(&play) - g.dot(&u);
            oned += (z - gamma) * wg;
            base += g.dot(&w) - g.dot(&base_u);
            scale += (z * wg).abs() + wg.abs() + g.dot(&u).abs();
        }
        let rhs = oned + gamma * base;
        rep.check((lhs - rhs).abs(), 1e-8 * (1.0 + scale));
        Ok(rep)
    });
    collect("lemma4", parts)
}

fn eps_sandwich(samples: usize, seed: u64) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new("lemma6");
    for (bi, base) in planar_bases()?.into_iter().enumerate() {
        for (ei, eps) in [0.05, 0.2, 0.5].into_iter().enumerate() {
            let eb = EpsBody::new(Arc::clone(&base), eps)?;
            let s = seed.wrapping_add((10 * bi + ei) as u64);
            let sandwich = sandwich_check(&eb, samples, s);
            let strong = verify_strong_convexity(&eb, eb.mu_eps(), samples, s);
            rep.check(if sandwich { 0.0 } else { 1.0 }, 0.0);
            rep.check(if strong { 0.0 } else { 1.0 }, 0.0);
            if !(sandwich && strong) {
                rep.notes.push(format!(
                    "base {bi}, eps {eps}: sandwich {sandwich}, strong convexity {strong}"
                ));
            }
        }
    }
    Ok(rep)
}

/// A random planar instance: base, eps in [0.05, 0.5], unit direction.
fn instance(seed: u64, i: usize, bases: &[Arc<Body>], eps_set: Option<&[f64]>) -> Result<(EpsBody, Point)> {
    let mut r = rng::substream(seed, i as u64);
    let base = Arc::clone(&bases[i % bases.len()]);
    let eps = match eps_set {
        Some(set) => set[(i / bases.len()) % set.len()],
        None => r.random_range(0.05..0.5),
    };
    Ok((EpsBody::new(base, eps)?, rng::unit_vector(&mut r, 2)))
}

/// `sqrt(min Theta)` against the brute-force support of `C_eps`, within `2 r^2 delta`.
fn lambda_consistency(n: usize, seed: u64, delta: f64) -> Result<VerifyReport> {
    let bases = planar_bases()?;
    let parts = par::map(n, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("lemma7");
        let (eb, w) = instance(seed, i, &bases, None)?;
        let oracle = CountingOracle::new(eb.shared_base());
        let golden = golden_section(&oracle, &eb, &w, delta)?;
        let value = theta_eval(&oracle, &eb, golden.gamma, &w, delta * 1e-2)?.value;
        let (brute, _) = brute_support_2d(&eb, &w, 100_000);
        let r = eb.sandwich().r;
        rep.check((value.sqrt() - brute).abs(), 2.0 * r * r * delta);
        Ok(rep)
    });
    collect("lemma7", parts)
}

/// The sleeping-experts bound on interval-awake schedules, every expert, every prefix.
fn sleeping_bound(size: SuiteSize, horizon: usize) -> Result<VerifyReport> {
    let parts = par::map(size.traces, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("eq18");
        let mut r = rng::substream(size.seed, i as u64);
        let n = r.random_range(2..=32usize);
        let eta = r.random_range(0.01..1.0);
        let intervals: Vec<(usize, usize)> = (0..n)
            .map(|k| {
                if k == 0 {
                    return (1, horizon);
                }
                let a = r.random_range(1..=horizon);
                let b = r.random_range(a..=horizon);
                (a, b)
            })
            .collect();
        let mut se = SleepingExperts::new(n, eta)?;
        let mut regret = vec![0.0; n];
        let mut sq = 0.0;
        for t in 1..=horizon {
            let awake: Vec<bool> = intervals.iter().map(|&(a, b)| a <= t && t <= b).collect();
            let losses: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
            let p = se.step(&awake, &losses)?;
            let sur = SleepingExperts::surrogate(&awake, &losses, &p);
            sq += sur.iter().fold(0.0f64, |m, x| m.max(x.abs())).powi(2);
            let mix: f64 = p.iter().zip(&losses).map(|(a, b)| a * b).sum();
            let bound = (n as f64).ln() / eta + 0.75 * eta * sq;
            for k in 0..n {
                if awake[k] {
                    regret[k] += mix - losses[k];
                }
                rep.check(regret[k], bound + 1e-9);
            }
        }
        Ok(rep)
    });
    collect("eq18", parts)
}

/// Weak oracle against the brute-force maximizer: value within `1e-2 R |w|`,
/// and `gauge_eps` of the output at most `1 + 1e-6`.
fn weak_loo_2d(n: usize, seed: u64, delta: f64) -> Result<VerifyReport> {
    let bases = planar_bases()?;
    let eps_set = [0.1, 0.3];
    let parts = par::map(n, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("weakloo2d");
        let (eb, w) = instance(seed, i, &bases, Some(&eps_set))?;
        let oracle = CountingOracle::new(eb.shared_base());
        let params = WeakLooParams::new(delta).with_deflation(Deflation::Off);
        let out = weak_loo_with(&oracle, &eb, &w, &params)?;
        let (best, _) = brute_support_2d(&eb, &w, 100_000);
        let big_r = eb.sandwich().big_r;
        rep.check((out.v_tilde.dot(&w) - best).abs(), 1e-2 * big_r * w.norm());
        rep.check(eb.gauge_eps(&out.v_tilde), 1.0 + 1e-6);
        Ok(rep)
    });
    collect("weakloo2d", parts)
}

/// `theta_grad` against central differences of `theta_eval`, within `max(1e-4, 10 r^2 delta)`.
fn theta_gradcheck(n: usize, seed: u64, delta: f64) -> Result<VerifyReport> {
    let bases = planar_bases()?;
    let parts = par::map(n, |i| -> Result<VerifyReport> {
        let mut rep = VerifyReport::new("gradcheck");
        let (eb, w) = instance(seed, i, &bases, None)?;
        let mut r = rng::substream(seed ^ 0x9E37, i as u64);
        let oracle = CountingOracle::new(eb.shared_base());
        let s = eb.sandwich();
        let gamma = r.random_range(0.05..1.0) * s.big_r * w.norm();
        let h = 1e-4 * (1.0 + gamma);
        let inner = delta * 0.1;
        let up = theta_eval(&oracle, &eb, gamma + h, &w, inner)?.value;
        let down = theta_eval(&oracle, &eb, gamma - h, &w, inner)?.value;
        let fd = (up - down) / (2.0 * h);
        let grad = theta_grad(&oracle, &eb, gamma, &w, delta)?;
        rep.check((grad - fd).abs(), (10.0 * s.r * s.r * delta).max(1e-4));
        Ok(rep)
    });
    collect("gradcheck", parts)
}
