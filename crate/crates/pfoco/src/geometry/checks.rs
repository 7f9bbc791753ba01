use rand::Rng;

use super::Body;
use crate::error::Result;
use crate::par;
use crate::point::Point;
use crate::rng;

/// A convex set with the origin inside, known through its gauge.
pub trait ConvexSet: Sync {
    fn dim(&self) -> usize;
    fn gauge_of(&self, w: &Point) -> f64;
    fn contains(&self, w: &Point, tol: f64) -> bool {
        self.gauge_of(w) <= 1.0 + tol
    }
}

impl ConvexSet for Body {
    fn dim(&self) -> usize {
        Body::dim(self)
    }
    fn gauge_of(&self, w: &Point) -> f64 {
        self.gauge(w, 1e-14)
    }
    fn contains(&self, w: &Point, tol: f64) -> bool {
        self.membership(w, tol)
    }
}

/// Boundary point in direction `dir` (nonzero).
pub fn boundary_point<S: ConvexSet + ?Sized>(set: &S, dir: &Point) -> Point {
    dir.scale(1.0 / set.gauge_of(dir))
}

/// Sampling test of strong convexity with modulus `mu`: boundary pairs `x, y`,
/// `theta ~ U[0,1]`, and a perturbation of norm `mu theta (1-theta) |x-y|^2 / 2`
/// in a uniform direction must stay inside (tolerance 1e-9).
pub fn verify_strong_convexity<S: ConvexSet + ?Sized>(set: &S, mu: f64, n_samples: usize, seed: u64) -> bool {
    let d = set.dim();
    par::all(n_samples, |i| {
        let mut rng = rng::substream(seed, i as u64);
        let x = boundary_point(set, &rng::unit_vector(&mut rng, d));
        let y = boundary_point(set, &rng::unit_vector(&mut rng, d));
        let theta: f64 = rng.random();
        let size = mu * theta * (1.0 - theta) * (&x - &y).norm_sq() / 2.0;
        let mut p = Point::lincomb(theta, &x, 1.0 - theta, &y);
        p.axpy(size, &rng::unit_vector(&mut rng, d));
        set.contains(&p, 1e-9)
    })
}

/// Checks `||u - v|| <= 2 ||x - y|| / (mu (||x|| + ||y||))` for the support
/// maximizers `u, v` of `x, y`.
pub fn support_lipschitz_check(body: &Body, mu: f64, x: &Point, y: &Point) -> Result<bool> {
    let (_, u) = body.support(x)?;
    let (_, v) = body.support(y)?;
    let lhs = u.dist(&v);
    let rhs = 2.0 * x.dist(y) / (mu * (x.norm() + y.norm()));
    Ok(lhs <= rhs + 1e-9)
}
