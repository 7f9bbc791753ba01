//! Gradient sequences.

use rand::Rng;
use serde::Serialize;

use super::spec::split_spec;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{self, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversaryKind {
    /// Uniform directions of norm `L`.
    IidSphere,
    /// `L e_1` signed to oppose the first coordinate of the play.
    SignFlip,
    /// `2 (x_t - a_t)` for a target circling at radius `amp` with angular speed `speed`.
    SmoothQuad { amp: f64, speed: f64 },
    /// `L (drift e + noise n_t)` for a fixed random direction `e` and Gaussian `n_t`.
    BiasedDrift { drift: f64, noise: f64 },
}

impl AdversaryKind {
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, kv) = split_spec(spec)?;
        let out = match kind {
            "iid-sphere" => {
                kv.finish(&[])?;
                AdversaryKind::IidSphere
            }
            "sign-flip" => {
                kv.finish(&[])?;
                AdversaryKind::SignFlip
            }
            "smooth-quad" => {
                kv.finish(&["amp", "speed"])?;
                AdversaryKind::SmoothQuad {
                    amp: kv.get_f64("amp")?.unwrap_or(0.5),
                    speed: kv.get_f64("speed")?.unwrap_or(0.01),
                }
            }
            "biased-drift" => {
                kv.finish(&["drift", "noise"])?;
                AdversaryKind::BiasedDrift {
                    drift: kv.get_f64("drift")?.unwrap_or(0.3),
                    noise: kv.get_f64("noise")?.unwrap_or(1.0),
                }
            }
            other => return Err(Error::Parse(format!("unknown adversary '{other}'"))),
        };
        Ok(out)
    }
}

/// Scales `g` down to norm `L` if needed.
pub fn clip_norm(g: Point, lipschitz: f64) -> Point {
    let n = g.norm();
    if n > lipschitz {
        g.scale(lipschitz / n)
    } else {
        g
    }
}

/// `2 (x - a)`, clipped to norm `L`.
pub fn smooth_quad_gradient(x: &Point, target: &Point, lipschitz: f64) -> Point {
    clip_norm((x - target).scale(2.0), lipschitz)
}

pub struct Adversary {
    kind: AdversaryKind,
    lipschitz: f64,
    dim: usize,
    rng: Stream,
    direction: Point,
    phase: f64,
}

impl Adversary {
    pub fn new(kind: AdversaryKind, dim: usize, lipschitz: f64, seed: u64) -> Self {
        let mut rng = rng::substream(seed, 0xAD);
        let direction = rng::unit_vector(&mut rng, dim);
        let phase = rng.random::<f64>() * std::f64::consts::TAU;
        Adversary {
            kind,
            lipschitz,
            dim,
            rng,
            direction,
            phase,
        }
    }

    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    /// Gradient for round `t` (1-based) at play `x`; norm at most `L`.
    pub fn next(&mut self, t: usize, x: &Point) -> Point {
        let l = self.lipschitz;
        let g = match self.kind {
            AdversaryKind::IidSphere => rng::unit_vector(&mut self.rng, self.dim).scale(l),
            AdversaryKind::SignFlip => {
                let s = if x[0].abs() > 1e-12 {
                    x[0].signum()
                } else if t % 2 == 1 {
                    1.0
                } else {
                    -1.0
                };
                let mag = if t == 1 { 0.5 * l } else { l };
                Point::basis(self.dim, 0).scale(s * mag)
            }
            AdversaryKind::SmoothQuad { amp, speed } => {
                let a = self.phase + speed * t as f64;
                let mut target = Point::zeros(self.dim);
                target[0] = amp * a.cos();
                if self.dim > 1 {
                    target[1] = amp * a.sin();
                }
                smooth_quad_gradient(x, &target, l)
            }
            AdversaryKind::BiasedDrift { drift, noise } => {
                let n = rng::gaussian(&mut self.rng, self.dim).scale(noise / (self.dim as f64).sqrt());
                let mut g = self.direction.scale(drift);
                g.axpy(1.0, &n);
                g.scale(l)
            }
        };
        clip_norm(g, l)
    }
}
