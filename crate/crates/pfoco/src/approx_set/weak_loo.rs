use super::golden::golden_section_on;
use super::{EpsBody, Theta};
use crate::error::{check_dim, Error, Result};
use crate::oracles::{CountingOracle, PolarSolver};
use crate::point::Point;

/// How the output is shrunk to guarantee membership.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Deflation {
    /// `theta = 1 + 576^2 delta^(1/4) kappa^15 / eps^2` with the solver accuracy `delta`.
    Literal,
    /// The same formula at a separate nominal accuracy, given by its logarithm
    /// (the tuned values underflow `f64`).
    Nominal { ln_delta: f64 },
    /// No shrinking.
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakLooParams {
    pub delta: f64,
    pub deflation: Deflation,
    pub solver: PolarSolver,
}

impl WeakLooParams {
    pub fn new(delta: f64) -> Self {
        WeakLooParams {
            delta,
            deflation: Deflation::Literal,
            solver: PolarSolver::default(),
        }
    }

    pub fn with_deflation(mut self, deflation: Deflation) -> Self {
        self.deflation = deflation;
        self
    }

    pub fn theta_factor(&self, eb: &EpsBody) -> f64 {
        let ln_delta = match self.deflation {
            Deflation::Literal => self.delta.ln(),
            Deflation::Nominal { ln_delta } => ln_delta,
            Deflation::Off => return 1.0,
        };
        1.0 + theta_excess(ln_delta, eb.sandwich().kappa, eb.eps())
    }
}

/// `576^2 delta^(1/4) kappa^15 / eps^2`, computed from `ln delta`.
pub fn theta_excess(ln_delta: f64, kappa: f64, eps: f64) -> f64 {
    (2.0 * 576f64.ln() + 0.25 * ln_delta + 15.0 * kappa.ln() - 2.0 * eps.ln()).exp()
}

/// `delta <= eps^4 / (29^4 kappa^12)`, the accuracy regime of the error bound.
pub fn accuracy_hypothesis(delta: f64, eps: f64, kappa: f64) -> bool {
    delta.ln() <= 4.0 * eps.ln() - 4.0 * 29f64.ln() - 12.0 * kappa.ln()
}

/// The distance bound `484^4 R delta^(1/4) kappa^32 / eps^4`; reported, never asserted.
pub fn distance_bound(eb: &EpsBody, delta: f64) -> f64 {
    let s = eb.sandwich();
    (4.0 * 484f64.ln() + s.big_r.ln() + 0.25 * delta.ln() + 32.0 * s.kappa.ln() - 4.0 * eb.eps().ln()).exp()
}

#[derive(Clone, Debug)]
pub struct WeakLooResult {
    pub v_tilde: Point,
    pub v_hat: Point,
    pub gamma_hat: f64,
    pub u_hat: Point,
    pub z_hat: Point,
    pub lambda_hat: f64,
    pub theta_factor: f64,
    pub golden_iterations: usize,
    pub loo_calls: u64,
}

/// Approximate maximizer of `<v, w>` over `C_eps` with literal deflation.
pub fn weak_loo(oracle: &CountingOracle, eb: &EpsBody, w: &Point, delta: f64) -> Result<WeakLooResult> {
    weak_loo_with(oracle, eb, w, &WeakLooParams::new(delta))
}

pub fn weak_loo_with(
    oracle: &CountingOracle,
    eb: &EpsBody,
    w: &Point,
    params: &WeakLooParams,
) -> Result<WeakLooResult> {
    check_dim(oracle.dim(), w.dim())?;
    let delta = params.delta;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let d = w.dim();
    let calls_before = oracle.loo_calls();
    let theta_factor = params.theta_factor(eb);
    let Some(w_bar) = w.normalized() else {
        return Ok(WeakLooResult {
            v_tilde: Point::zeros(d),
            v_hat: Point::zeros(d),
            gamma_hat: 0.0,
            u_hat: Point::zeros(d),
            z_hat: Point::zeros(d),
            lambda_hat: 0.0,
            theta_factor,
            golden_iterations: 0,
            loo_calls: 0,
        });
    };
    let mut theta = Theta::new(oracle, eb, &w_bar)?.with_solver(params.solver);
    let golden = golden_section_on(&mut theta, eb, delta)?;
    let gamma_hat = golden.gamma;
    let u_hat = if gamma_hat > 0.0 {
        theta.project(gamma_hat, delta)?
    } else {
        Point::zeros(d)
    };
    let z_hat = Point::lincomb(1.0, &w_bar, -gamma_hat, &u_hat);
    let lambda_hat = theta.value_at(gamma_hat, &u_hat).sqrt();
    let inner = z_hat.dot(&w_bar);
    if !(inner > 0.0) {
        return Err(Error::Geometry(format!("<z, w> = {inner} is not positive")));
    }
    let v_hat = z_hat.scale(lambda_hat / inner);
    let v_tilde = v_hat.scale(1.0 / theta_factor);
    Ok(WeakLooResult {
        v_tilde,
        v_hat,
        gamma_hat,
        u_hat,
        z_hat,
        lambda_hat,
        theta_factor,
        golden_iterations: golden.iterations,
        loo_calls: oracle.loo_calls() - calls_before,
    })
}
