use super::EpsBody;
use crate::error::{check_dim, Error, Result};
use crate::oracles::{project_scaled_polar_with, CountingOracle, CutPool, PolarSolver};
use crate::point::Point;

/// The 1-d objective
/// `Theta(gamma) = gamma^2 + (r^2 / eps) min_{u in sqrt(1-eps) C°} ||gamma u - w||^2`
/// for a fixed `w`, evaluated through approximate projections that share one
/// pool of cuts.
pub struct Theta<'a> {
    oracle: &'a CountingOracle,
    eb: &'a EpsBody,
    w: Point,
    pool: CutPool,
    solver: PolarSolver,
    evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: f64,
    /// The approximate projector `u`.
    pub u: Point,
}

impl<'a> Theta<'a> {
    pub fn new(oracle: &'a CountingOracle, eb: &'a EpsBody, w: &Point) -> Result<Self> {
        check_dim(oracle.dim(), w.dim())?;
        if w.is_zero() {
            return Err(Error::Input("the 1-d objective needs w != 0".into()));
        }
        Ok(Theta {
            oracle,
            eb,
            w: w.clone(),
            pool: CutPool::new(),
            solver: PolarSolver::default(),
            evaluations: 0,
        })
    }

    pub fn with_solver(mut self, solver: PolarSolver) -> Self {
        self.solver = solver;
        self
    }

    pub fn w(&self) -> &Point {
        &self.w
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Projection onto the scaled polar; `delta` is the additive accuracy of
    /// `Theta`, in units of `r^2`.
    pub fn project(&mut self, gamma: f64, delta: f64) -> Result<Point> {
        let proj = project_scaled_polar_with(
            self.oracle,
            &self.w,
            gamma,
            self.eb.eps(),
            self.eb.eps() * delta,
            self.solver,
            &mut self.pool,
        )?;
        Ok(proj.u)
    }

    /// `Theta(gamma)` within `r^2 delta`.
    pub fn eval(&mut self, gamma: f64, delta: f64) -> Result<ThetaValue> {
        if !(gamma >= 0.0) {
            return Err(Error::Parameter(format!("gamma must be >= 0, got {gamma}")));
        }
        self.evaluations += 1;
        if gamma == 0.0 {
            return Ok(ThetaValue {
                value: self.eb.penalty() * self.w.norm_sq(),
                u: Point::zeros(self.w.dim()),
            });
        }
        let u = self.project(gamma, delta)?;
        Ok(ThetaValue {
            value: self.value_at(gamma, &u),
            u,
        })
    }

    /// `Theta'(gamma) = 2 gamma + 2 (r^2 / eps) <u, gamma u - w>` at the approximate projector.
    pub fn grad(&mut self, gamma: f64, delta: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(Error::Parameter(format!("gamma must be > 0, got {gamma}")));
        }
        let u = self.project(gamma, delta)?;
        let resid = Point::lincomb(gamma, &u, -1.0, &self.w);
        Ok(2.0 * gamma + 2.0 * self.eb.penalty() * u.dot(&resid))
    }

    /// `gamma^2 + (r^2 / eps) ||gamma u - w||^2` for a given `u`.
    pub fn value_at(&self, gamma: f64, u: &Point) -> f64 {
        gamma * gamma + self.eb.penalty() * Point::lincomb(gamma, u, -1.0, &self.w).norm_sq()
    }
}

pub fn theta_eval(oracle: &CountingOracle, eb: &EpsBody, gamma: f64, w: &Point, delta: f64) -> Result<ThetaValue> {
    Theta::new(oracle, eb, w)?.eval(gamma, delta)
}

pub fn theta_grad(oracle: &CountingOracle, eb: &EpsBody, gamma: f64, w: &Point, delta: f64) -> Result<f64> {
    Theta::new(oracle, eb, w)?.grad(gamma, delta)
}

/// Bound on `|Theta'|` over `(0, b]`: `2b + 2 (r^2/eps) (s/r) (s b / r + ||w||)` with `s = sqrt(1-eps)`.
pub fn theta_grad_bound(eb: &EpsBody, b: f64, w: &Point) -> f64 {
    let r = eb.sandwich().r;
    let s = (1.0 - eb.eps()).sqrt();
    2.0 * b + 2.0 * eb.penalty() * (s / r) * (s * b / r + w.norm())
}
