//! Online learners.

mod ca;
mod freegrad;
mod ftl;
mod main_alg;
mod ogd;
mod sleeping;

pub use ca::{ftsl_new, Ca};
pub use freegrad::{ln_psi, psi, FreeGrad};
pub use ftl::Ftl;
pub use main_alg::{default_eta, CaFactory, MainAlg, MainParams};
pub use ogd::{ogd_step, Ogd};
pub use sleeping::SleepingExperts;

use crate::error::{check_dim, Error, Result};
use crate::point::Point;

/// Online learning protocol: `next` is the current play, `feed` reveals the
/// gradient of the loss at that play.
pub trait Learner {
    fn dim(&self) -> usize;
    /// Current play; unchanged until the next `feed`.
    fn next(&self) -> Point;
    fn feed(&mut self, g: &Point) -> Result<()>;
}

impl Learner for Box<dyn Learner> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn next(&self) -> Point {
        (**self).next()
    }
    fn feed(&mut self, g: &Point) -> Result<()> {
        (**self).feed(g)
    }
}

/// FreeGrad on the interval `[-R, R]`, playing its clipped output.
pub struct IntervalFreeGrad {
    inner: FreeGrad,
    radius: f64,
}

impl IntervalFreeGrad {
    pub fn new(lipschitz: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Parameter(format!("radius must be > 0, got {radius}")));
        }
        Ok(IntervalFreeGrad {
            inner: FreeGrad::new(lipschitz)?,
            radius,
        })
    }

    pub fn unclipped(&self) -> f64 {
        self.inner.play()
    }
}

impl Learner for IntervalFreeGrad {
    fn dim(&self) -> usize {
        1
    }
    fn next(&self) -> Point {
        Point::new(vec![self.inner.play().clamp(-self.radius, self.radius)])
    }
    fn feed(&mut self, g: &Point) -> Result<()> {
        check_dim(1, g.dim())?;
        self.inner.feed(g[0]).map(|_| ())
    }
}
