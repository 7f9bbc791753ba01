use super::{EpsBody, Theta};
use crate::error::{Error, Result};
use crate::oracles::CountingOracle;
use crate::point::Point;

#[derive(Clone, Debug)]
pub struct GoldenResult {
    pub gamma: f64,
    /// Number of bracket updates `K`.
    pub iterations: usize,
    /// Brackets `[gamma_i, mu_i]` for `i = 1..=K+1`.
    pub brackets: Vec<(f64, f64)>,
    /// Accuracy passed to each inner evaluation.
    pub inner_delta: f64,
}

/// `K = ceil(-log_{phi-1}((8 kappa^2 + 4 kappa) ||w||^2 / delta))`, at least 1.
pub fn golden_iterations(kappa: f64, w_norm: f64, delta: f64) -> usize {
    let phi = (5f64.sqrt() + 1.0) / 2.0;
    let x = (8.0 * kappa * kappa + 4.0 * kappa) * w_norm * w_norm / delta;
    ((x.ln() / phi.ln()).ceil()).max(1.0) as usize
}

/// Golden-section search for the minimizer of `Theta` over `[0, R ||w||]`.
pub fn golden_section(oracle: &CountingOracle, eb: &EpsBody, w: &Point, delta: f64) -> Result<GoldenResult> {
    let mut theta = Theta::new(oracle, eb, w)?;
    golden_section_on(&mut theta, eb, delta)
}

pub(crate) fn golden_section_on(theta: &mut Theta<'_>, eb: &EpsBody, delta: f64) -> Result<GoldenResult> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let phi = (5f64.sqrt() + 1.0) / 2.0;
    let sw = eb.sandwich();
    let w_norm = theta.w().norm();
    let k = golden_iterations(sw.kappa, w_norm, delta);
    let inner = delta / (4.0 * k as f64 * phi);

    let (mut lo, mut hi) = (0.0, sw.big_r * w_norm);
    let mut g_bar = hi - (hi - lo) / phi;
    let mut m_bar = lo + (hi - lo) / phi;
    let mut th_g = theta.eval(g_bar, inner)?.value;
    let mut th_m = theta.eval(m_bar, inner)?.value;
    let mut brackets = vec![(lo, hi)];
    for _ in 0..k {
        if th_g < th_m {
            hi = m_bar;
            m_bar = g_bar;
            g_bar = hi - (hi - lo) / phi;
            th_m = th_g;
            th_g = theta.eval(g_bar, inner)?.value;
        } else {
            lo = g_bar;
            g_bar = m_bar;
            m_bar = lo + (hi - lo) / phi;
            th_g = th_m;
            th_m = theta.eval(m_bar, inner)?.value;
        }
        brackets.push((lo, hi));
    }
    let (lo_k, hi_k) = brackets[k - 1];
    Ok(GoldenResult {
        gamma: 0.5 * (lo_k + hi_k),
        iterations: k,
        brackets,
        inner_delta: inner,
    })
}
