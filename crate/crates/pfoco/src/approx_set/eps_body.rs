use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Body, BodySandwich, ConvexSet};
use crate::point::Point;

/// Strongly convex inner approximation `C_eps` of a base body, known through
/// `gauge_eps(u)^2 = (1 - eps) gauge(u)^2 + eps ||u||^2 / r^2`.
#[derive(Clone, Debug)]
pub struct EpsBody {
    base: Arc<Body>,
    eps: f64,
    mu_eps: f64,
}

impl EpsBody {
    pub fn new(base: Arc<Body>, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!("eps must lie in (0, 1), got {eps}")));
        }
        let s = base.sandwich();
        let mu_eps = 2.0 * eps / (s.r * (1.0 + eps * s.kappa * s.kappa).sqrt());
        Ok(EpsBody { base, eps, mu_eps })
    }

    pub fn base(&self) -> &Body {
        &self.base
    }

    pub fn shared_base(&self) -> Arc<Body> {
        Arc::clone(&self.base)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `2 eps / (r sqrt(1 + eps kappa^2))`.
    pub fn mu_eps(&self) -> f64 {
        self.mu_eps
    }

    pub fn sandwich(&self) -> BodySandwich {
        self.base.sandwich()
    }

    /// Weight `r^2 / eps` on the squared distance term of the 1-d objective.
    pub fn penalty(&self) -> f64 {
        let r = self.base.sandwich().r;
        r * r / self.eps
    }

    pub fn gauge_eps(&self, u: &Point) -> f64 {
        if u.is_zero() {
            return 0.0;
        }
        let g = self.base.gauge(u, 1e-14);
        let r = self.base.sandwich().r;
        ((1.0 - self.eps) * g * g + self.eps * u.norm_sq() / (r * r)).sqrt()
    }

    /// Outer inclusion factor `sqrt(1 + kappa^2 eps)`.
    pub fn outer_factor(&self) -> f64 {
        let k = self.base.sandwich().kappa;
        (1.0 + k * k * self.eps).sqrt()
    }
}

impl ConvexSet for EpsBody {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn gauge_of(&self, w: &Point) -> f64 {
        self.gauge_eps(w)
    }
}
