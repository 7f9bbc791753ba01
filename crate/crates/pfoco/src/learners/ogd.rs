use std::rc::Rc;

use super::Learner;
use crate::error::{check_dim, Error, Result};
use crate::oracles::{euclidean_project, CountingOracle};
use crate::point::Point;

const PROJECTION_TOL: f64 = 1e-12;

/// `project(x - step g)`.
pub fn ogd_step(oracle: &CountingOracle, x: &Point, g: &Point, step: f64) -> Result<Point> {
    if !(step > 0.0) {
        return Err(Error::Parameter(format!("step size must be > 0, got {step}")));
    }
    check_dim(x.dim(), g.dim())?;
    euclidean_project(oracle, &Point::lincomb(1.0, x, -step, g), PROJECTION_TOL)
}

/// Projected online gradient descent with step `D / (L sqrt(t))`, `D = 2R`.
pub struct Ogd {
    oracle: Rc<CountingOracle>,
    x: Point,
    base_step: f64,
    round: usize,
}

impl Ogd {
    pub fn new(oracle: Rc<CountingOracle>, lipschitz: f64) -> Result<Self> {
        if !(lipschitz > 0.0) {
            return Err(Error::Parameter(format!("L must be > 0, got {lipschitz}")));
        }
        let d = oracle.dim();
        let base_step = 2.0 * oracle.body().sandwich().big_r / lipschitz;
        Ok(Ogd {
            oracle,
            x: Point::zeros(d),
            base_step,
            round: 0,
        })
    }
}

impl Learner for Ogd {
    fn dim(&self) -> usize {
        self.x.dim()
    }

    fn next(&self) -> Point {
        self.x.clone()
    }

    fn feed(&mut self, g: &Point) -> Result<()> {
        self.round += 1;
        let step = self.base_step / (self.round as f64).sqrt();
        self.x = ogd_step(&self.oracle, &self.x, g, step)?;
        Ok(())
    }
}
