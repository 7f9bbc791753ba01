//! Strongly convex approximation of a general body and linear optimization on it.

mod brute;
mod eps_body;
mod ftal;
mod golden;
mod theta;
mod weak_loo;

pub use brute::brute_support_2d;
pub use eps_body::EpsBody;
pub use ftal::{tuned_eps, tuned_ln_delta, ApproxTuning, Ftal, DELTA_FLOOR};
pub use golden::{golden_iterations, golden_section, GoldenResult};
pub use theta::{theta_eval, theta_grad, theta_grad_bound, Theta, ThetaValue};
pub use weak_loo::{
    accuracy_hypothesis, distance_bound, theta_excess, weak_loo, weak_loo_with, Deflation, WeakLooParams, WeakLooResult,
};

use crate::geometry::{boundary_point, ConvexSet};
use crate::par;
use crate::rng;

/// Sampled check of `C_eps ⊆ C ⊆ sqrt(1 + kappa^2 eps) C_eps` along random directions.
pub fn sandwich_check(eb: &EpsBody, n_samples: usize, seed: u64) -> bool {
    let d = eb.base().dim();
    let factor = eb.outer_factor();
    par::all(n_samples, |i| {
        let mut rng = rng::substream(seed, i as u64);
        let dir = rng::unit_vector(&mut rng, d);
        let inner = boundary_point(eb, &dir);
        let outer = boundary_point(eb.base(), &dir);
        eb.base().membership(&inner, 1e-8) && eb.gauge_of(&outer) <= factor + 1e-8
    })
}
