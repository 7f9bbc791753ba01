use std::rc::Rc;
use std::sync::Arc;

use serde::Serialize;

use super::{weak_loo_with, EpsBody, WeakLooParams};
use crate::error::{check_dim, Error, Result};
use crate::learners::Learner;
use crate::oracles::CountingOracle;
use crate::point::Point;

/// Smallest solver accuracy used by the tuned pipeline.
pub const DELTA_FLOOR: f64 = 1e-12;

/// `eps = 1 / (kappa^(4/3) T^(1/3))`.
pub fn tuned_eps(kappa: f64, horizon: usize) -> f64 {
    1.0 / (kappa.powf(4.0 / 3.0) * (horizon.max(1) as f64).powf(1.0 / 3.0))
}

/// `ln delta` for `delta = rho eps^16 / (484^16 T kappa^128)`.
pub fn tuned_ln_delta(rho: f64, eps: f64, horizon: usize, kappa: f64) -> f64 {
    rho.ln() + 16.0 * eps.ln() - 16.0 * 484f64.ln() - (horizon.max(1) as f64).ln() - 128.0 * kappa.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxTuning {
    pub eps: f64,
    /// Logarithm of the nominal accuracy.
    pub ln_delta: f64,
    /// Accuracy handed to the solvers: the nominal value floored at [`DELTA_FLOOR`].
    pub solver_delta: f64,
}

impl ApproxTuning {
    pub fn resolve(kappa: f64, horizon: usize, rho: f64, eps: Option<f64>, delta: Option<f64>) -> Result<Self> {
        let eps = eps.unwrap_or_else(|| tuned_eps(kappa, horizon));
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!("eps must lie in (0, 1), got {eps}")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Parameter(format!("rho must lie in (0, 1), got {rho}")));
        }
        let ln_delta = match delta {
            Some(d) if d > 0.0 && d < 1.0 => d.ln(),
            Some(d) => return Err(Error::Parameter(format!("delta must lie in (0, 1), got {d}"))),
            None => tuned_ln_delta(rho, eps, horizon, kappa),
        };
        Ok(ApproxTuning {
            eps,
            ln_delta,
            solver_delta: ln_delta.exp().max(DELTA_FLOOR),
        })
    }

    pub fn floored(&self) -> bool {
        self.ln_delta < DELTA_FLOOR.ln()
    }
}

/// Follow-The-Approximate-Leader: FTL on `C_eps` through the weak oracle.
pub struct Ftal {
    oracle: Rc<CountingOracle>,
    eb: EpsBody,
    params: WeakLooParams,
    grad_sum: Point,
    play: Point,
}

impl Ftal {
    pub fn new(oracle: Rc<CountingOracle>, eb: EpsBody, params: WeakLooParams) -> Result<Self> {
        if !Arc::ptr_eq(&oracle.shared_body(), &eb.shared_base()) {
            return Err(Error::Input("oracle and approximation must share one base body".into()));
        }
        let d = oracle.dim();
        Ok(Ftal {
            oracle,
            eb,
            params,
            grad_sum: Point::zeros(d),
            play: Point::zeros(d),
        })
    }

    pub fn eps_body(&self) -> &EpsBody {
        &self.eb
    }
}

impl Learner for Ftal {
    fn dim(&self) -> usize {
        self.grad_sum.dim()
    }

    fn next(&self) -> Point {
        self.play.clone()
    }

    fn feed(&mut self, g: &Point) -> Result<()> {
        check_dim(self.dim(), g.dim())?;
        self.grad_sum.axpy(1.0, g);
        self.play = if self.grad_sum.is_zero() {
            Point::zeros(self.dim())
        } else {
            weak_loo_with(&self.oracle, &self.eb, &-&self.grad_sum, &self.params)?.v_tilde
        };
        Ok(())
    }
}
