use std::rc::Rc;

use super::{FreeGrad, Ftl, Learner};
use crate::error::{check_dim, Result};
use crate::oracles::CountingOracle;
use crate::point::Point;

/// Comparator-adaptive wrapper: a 1-d FreeGrad instance scales the plays of a
/// base learner.
///
/// The scalar loss `<w_t, g_t>` can reach `R L`, so the 1-d learner runs with
/// scale `R L`. Plays are `clip(z, [0, 1]) w`; the unclipped variant exists for
/// checking the regret decomposition.
pub struct Ca {
    oned: FreeGrad,
    base: Box<dyn Learner>,
    clip: bool,
    play: Point,
}

impl Ca {
    pub fn new(base: Box<dyn Learner>, lipschitz: f64, outer_radius: f64) -> Result<Self> {
        let oned = FreeGrad::new(lipschitz * outer_radius)?;
        let play = Point::zeros(base.dim());
        Ok(Ca {
            oned,
            base,
            clip: true,
            play,
        })
    }

    pub fn unclipped(mut self) -> Self {
        self.clip = false;
        self.play = self.base.next().scale(self.oned.play());
        self
    }

    /// Current (unclipped) 1-d play.
    pub fn scalar(&self) -> f64 {
        self.oned.play()
    }

    pub fn base_play(&self) -> Point {
        self.base.next()
    }

    pub fn oned(&self) -> &FreeGrad {
        &self.oned
    }

    fn compose(&self) -> Point {
        let z = self.oned.play();
        let z = if self.clip { z.clamp(0.0, 1.0) } else { z };
        self.base.next().scale(z)
    }
}

impl Learner for Ca {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn next(&self) -> Point {
        self.play.clone()
    }

    fn feed(&mut self, g: &Point) -> Result<()> {
        check_dim(self.dim(), g.dim())?;
        let w = self.base.next();
        self.oned.feed(w.dot(g))?;
        self.base.feed(g)?;
        self.play = self.compose();
        Ok(())
    }
}

/// Follow-The-Scaled-Leader: the wrapper around FTL on the oracle's body.
pub fn ftsl_new(oracle: Rc<CountingOracle>, lipschitz: f64) -> Result<Ca> {
    let radius = oracle.body().sandwich().big_r;
    Ca::new(Box::new(Ftl::new(oracle)), lipschitz, radius)
}
