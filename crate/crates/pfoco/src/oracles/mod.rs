//! Oracle-call accounting and the reductions built on a linear optimization
//! oracle: polar separation, projection onto a scaled polar, and Euclidean
//! projection onto the body.

mod nnls;
mod polar;
mod project;

pub use nnls::{ldp, nnls};
pub use polar::{
    project_scaled_polar, project_scaled_polar_with, CutPool, PolarProjection, PolarSolver, PROJECTION_FLOOR,
};
pub use project::euclidean_project;

use std::cell::Cell;
use std::sync::Arc;

use crate::error::Result;
use crate::geometry::Body;
use crate::point::Point;

/// A body whose linear optimization calls are counted.
///
/// Counters are plain cells: an oracle belongs to a single run on a single thread.
#[derive(Debug)]
pub struct CountingOracle {
    body: Arc<Body>,
    loo_calls: Cell<u64>,
    sep_calls: Cell<u64>,
}

impl CountingOracle {
    pub fn new(body: Arc<Body>) -> Self {
        CountingOracle {
            body,
            loo_calls: Cell::new(0),
            sep_calls: Cell::new(0),
        }
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn shared_body(&self) -> Arc<Body> {
        Arc::clone(&self.body)
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn loo_calls(&self) -> u64 {
        self.loo_calls.get()
    }

    pub fn sep_calls(&self) -> u64 {
        self.sep_calls.get()
    }

    pub fn lin_min(&self, g: &Point) -> Result<Point> {
        self.loo_calls.set(self.loo_calls.get() + 1);
        self.body.lin_min(g)
    }

    pub fn support(&self, w: &Point) -> Result<(f64, Point)> {
        self.loo_calls.set(self.loo_calls.get() + 1);
        self.body.support(w)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationResult {
    pub inside: bool,
    /// Support maximizer of the query; present iff outside.
    pub hyperplane: Option<Point>,
    /// `sigma_C(y)`.
    pub support_value: f64,
}

/// Separation for `C°` with one oracle call: `y ∈ C°` iff `sigma_C(y) <= 1`.
pub fn separate_polar(oracle: &CountingOracle, y: &Point, tol: f64) -> Result<SeparationResult> {
    oracle.sep_calls.set(oracle.sep_calls.get() + 1);
    let (value, x) = oracle.support(y)?;
    let inside = value <= 1.0 + tol;
    Ok(SeparationResult {
        inside,
        hyperplane: (!inside).then_some(x),
        support_value: value,
    })
}
