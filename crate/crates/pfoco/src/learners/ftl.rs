use std::rc::Rc;

use super::Learner;
use crate::error::{check_dim, Result};
use crate::oracles::CountingOracle;
use crate::point::Point;

/// Follow-The-Leader: plays `lin_min(sum of gradients)`, the origin first.
#[derive(Debug)]
pub struct Ftl {
    oracle: Rc<CountingOracle>,
    grad_sum: Point,
    play: Point,
    rounds: usize,
}

impl Ftl {
    pub fn new(oracle: Rc<CountingOracle>) -> Self {
        let d = oracle.dim();
        Ftl {
            oracle,
            grad_sum: Point::zeros(d),
            play: Point::zeros(d),
            rounds: 0,
        }
    }

    pub fn grad_sum(&self) -> &Point {
        &self.grad_sum
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }
}

impl Learner for Ftl {
    fn dim(&self) -> usize {
        self.grad_sum.dim()
    }

    fn next(&self) -> Point {
        self.play.clone()
    }

    fn feed(&mut self, g: &Point) -> Result<()> {
        check_dim(self.dim(), g.dim())?;
        self.grad_sum.axpy(1.0, g);
        self.play = self.oracle.lin_min(&self.grad_sum)?;
        self.rounds += 1;
        Ok(())
    }
}
