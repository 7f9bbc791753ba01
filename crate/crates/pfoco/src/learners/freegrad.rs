use crate::error::{Error, Result};

/// Relative slack accepted on the gradient bound before a feed is rejected.
pub(crate) const BOUND_SLACK: f64 = 1e-12;

/// `ln Psi_L(s, v)` where
/// `Psi_L(s, v) = (2v + L|s|) L^2 / (2 (v + L|s|)^2 sqrt(L v)) * exp(s^2 / (2v + 2L|s|))`.
pub fn ln_psi(s: f64, v: f64, l: f64) -> Result<f64> {
    if !(v > 0.0) || !(l > 0.0) || !s.is_finite() || !v.is_finite() {
        return Err(Error::Domain(format!(
            "psi needs v > 0 and L > 0, got s={s}, v={v}, L={l}"
        )));
    }
    let a = s.abs();
    Ok(
        (2.0 * v + l * a).ln() + 2.0 * l.ln() - std::f64::consts::LN_2 - 2.0 * (v + l * a).ln() - 0.5 * (l * v).ln()
            + a * a / (2.0 * v + 2.0 * l * a),
    )
}

/// The adaptive rate `Psi_L(s, v)`; saturates at `f64::MAX` instead of overflowing.
pub fn psi(s: f64, v: f64, l: f64) -> Result<f64> {
    Ok(ln_psi(s, v, l)?.exp().min(f64::MAX))
}

/// One-dimensional FreeGrad with scale `L`.
///
/// The variance sum starts at `L^2`. Started at zero, a tiny first gradient
/// produces a play of order `1 / |g_1|` and the regret against the origin is
/// no longer bounded by `L`; [`FreeGrad::with_initial_variance`] allows that
/// start for comparison.
#[derive(Clone, Debug)]
pub struct FreeGrad {
    scale: f64,
    v0: f64,
    sum: f64,
    sq_sum: f64,
    z: f64,
}

impl FreeGrad {
    pub fn new(scale: f64) -> Result<Self> {
        Self::with_initial_variance(scale, scale * scale)
    }

    pub fn with_initial_variance(scale: f64, v0: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("FreeGrad scale must be > 0, got {scale}")));
        }
        if !(v0 >= 0.0 && v0.is_finite()) {
            return Err(Error::Parameter(format!(
                "initial variance must be finite and >= 0, got {v0}"
            )));
        }
        Ok(FreeGrad {
            scale,
            v0,
            sum: 0.0,
            sq_sum: 0.0,
            z: 0.0,
        })
    }

    pub fn initial_variance(&self) -> f64 {
        self.v0
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Current play.
    pub fn play(&self) -> f64 {
        self.z
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    /// Sum of squared gradients, without the initial variance.
    pub fn sq_sum(&self) -> f64 {
        self.sq_sum
    }

    /// Feeds the gradient of the linear loss at the current play and returns the next play.
    pub fn feed(&mut self, g: f64) -> Result<f64> {
        if !g.is_finite() || g.abs() > self.scale * (1.0 + BOUND_SLACK) {
            return Err(Error::Parameter(format!(
                "|g| = {} exceeds the scale {}",
                g.abs(),
                self.scale
            )));
        }
        let g = g.clamp(-self.scale, self.scale);
        self.sum += g;
        self.sq_sum += g * g;
        let v = self.v0 + self.sq_sum;
        self.z = if v == 0.0 || self.sum == 0.0 {
            0.0
        } else {
            let mag = (self.sum.abs().ln() + ln_psi(self.sum, v, self.scale)?).exp();
            -self.sum.signum() * mag.min(f64::MAX)
        };
        Ok(self.z)
    }
}
