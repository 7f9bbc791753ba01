use super::{Ca, Learner};
use crate::error::{check_dim, Error, Result};
use crate::point::Point;

use super::freegrad::BOUND_SLACK;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainParams {
    /// Gradient norm bound `L`.
    pub lipschitz: f64,
    pub eta: f64,
    /// Strong-convexity modulus used by the restart test.
    pub modulus: f64,
    pub outer_radius: f64,
    /// `ln T` for the configured horizon.
    pub ln_horizon: f64,
}

impl MainParams {
    /// `eta = sqrt(ln T) / (R L sqrt(T))`.
    pub fn tuned(lipschitz: f64, outer_radius: f64, modulus: f64, horizon: usize) -> Self {
        let t = horizon.max(1) as f64;
        MainParams {
            lipschitz,
            eta: default_eta(lipschitz, outer_radius, horizon),
            modulus,
            outer_radius,
            ln_horizon: t.ln(),
        }
    }
}

pub fn default_eta(lipschitz: f64, outer_radius: f64, horizon: usize) -> f64 {
    let t = horizon.max(2) as f64;
    t.ln().sqrt() / (outer_radius * lipschitz * t.sqrt())
}

pub type CaFactory = Box<dyn Fn() -> Result<Ca>>;

/// Two-expert sleeping-experts combination of a wrapper started at round 1
/// and one restarted whenever the clipped gradient sum is small.
pub struct MainAlg {
    params: MainParams,
    factory: CaFactory,
    a1: Ca,
    a_tau: Ca,
    tau: usize,
    q: f64,
    u_loss: f64,
    w_loss: f64,
    s_loss: f64,
    clipped_sum: Point,
    clipped_sq: f64,
    round: usize,
    play: Point,
    restarts: usize,
}

impl MainAlg {
    pub fn new(params: MainParams, factory: CaFactory) -> Result<Self> {
        let p = params;
        if !(p.lipschitz > 0.0 && p.eta > 0.0 && p.modulus > 0.0 && p.outer_radius > 0.0) {
            return Err(Error::Parameter(format!(
                "main algorithm parameters must be positive: {p:?}"
            )));
        }
        let a1 = factory()?;
        let a_tau = factory()?;
        let d = a1.dim();
        let play = Point::lincomb(0.5, &a1.next(), 0.5, &a_tau.next());
        Ok(MainAlg {
            params,
            factory,
            a1,
            a_tau,
            tau: 1,
            q: 0.5,
            u_loss: 0.0,
            w_loss: 0.0,
            s_loss: 0.0,
            clipped_sum: Point::zeros(d),
            clipped_sq: 0.0,
            round: 0,
            play,
            restarts: 0,
        })
    }

    /// `2 R L eta <= 1`, the step-size condition of the regret bound.
    pub fn eta_condition_holds(&self) -> bool {
        2.0 * self.params.outer_radius * self.params.lipschitz * self.params.eta <= 1.0 + 1e-12
    }

    pub fn params(&self) -> &MainParams {
        &self.params
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `(U, W, S)`.
    pub fn losses(&self) -> (f64, f64, f64) {
        (self.u_loss, self.w_loss, self.s_loss)
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn first(&self) -> &Ca {
        &self.a1
    }

    pub fn restarted(&self) -> &Ca {
        &self.a_tau
    }

    pub fn clipped_sum(&self) -> &Point {
        &self.clipped_sum
    }

    pub fn clipped_sq(&self) -> f64 {
        self.clipped_sq
    }
}

impl Learner for MainAlg {
    fn dim(&self) -> usize {
        self.play.dim()
    }

    fn next(&self) -> Point {
        self.play.clone()
    }

    fn feed(&mut self, g: &Point) -> Result<()> {
        check_dim(self.dim(), g.dim())?;
        let p = self.params;
        let gn = g.norm();
        if !(gn <= p.lipschitz * (1.0 + BOUND_SLACK)) {
            return Err(Error::Parameter(format!("||g|| = {gn} exceeds L = {}", p.lipschitz)));
        }
        let t = self.round + 1;
        let g_clip = if gn >= p.lipschitz / t as f64 {
            g.clone()
        } else {
            Point::zeros(g.dim())
        };

        let u = self.a1.next();
        let w = self.a_tau.next();
        self.a1.feed(&g_clip)?;
        self.a_tau.feed(&g_clip)?;
        self.u_loss += g_clip.dot(&u);
        self.w_loss += g_clip.dot(&w);
        self.s_loss += g_clip.dot(&self.play);
        self.clipped_sum.axpy(1.0, &g_clip);
        self.clipped_sq += g_clip.norm_sq();

        if p.outer_radius * p.modulus * self.clipped_sum.norm_sq() <= self.clipped_sq * p.ln_horizon {
            self.tau = t + 1;
            self.a_tau = (self.factory)()?;
            self.w_loss = self.s_loss;
            self.restarts += 1;
        }

        self.q = 1.0 / (1.0 + (p.eta * (self.u_loss - self.w_loss)).exp());
        self.play = Point::lincomb(self.q, &self.a1.next(), 1.0 - self.q, &self.a_tau.next());
        self.round = t;
        Ok(())
    }
}
