use crate::error::{Error, Result};

/// Sleeping-experts reduction over Hedge with learning rate `eta`.
#[derive(Clone, Debug)]
pub struct SleepingExperts {
    eta: f64,
    cum_surrogate: Vec<f64>,
    pi: Vec<f64>,
}

impl SleepingExperts {
    pub fn new(n: usize, eta: f64) -> Result<Self> {
        if n == 0 || !(eta > 0.0) {
            return Err(Error::Parameter(format!("need n >= 1 and eta > 0, got {n}, {eta}")));
        }
        Ok(SleepingExperts {
            eta,
            cum_surrogate: vec![0.0; n],
            pi: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Hedge weights.
    pub fn weights(&self) -> &[f64] {
        &self.pi
    }

    /// Hedge weights restricted to the awake experts and renormalized.
    pub fn mixture(&self, awake: &[bool]) -> Result<Vec<f64>> {
        if awake.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: awake.len(),
            });
        }
        let mass: f64 = self.pi.iter().zip(awake).filter(|(_, &a)| a).map(|(p, _)| p).sum();
        if !awake.iter().any(|&a| a) {
            return Err(Error::Input("no expert is awake".into()));
        }
        if !(mass > 0.0) {
            return Err(Error::Domain("awake experts carry no weight".into()));
        }
        Ok(self
            .pi
            .iter()
            .zip(awake)
            .map(|(p, &a)| if a { p / mass } else { 0.0 })
            .collect())
    }

    /// Plays one round and returns the mixture that was played.
    pub fn step(&mut self, awake: &[bool], losses: &[f64]) -> Result<Vec<f64>> {
        let p = self.mixture(awake)?;
        if losses.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: losses.len(),
            });
        }
        let mix: f64 = p.iter().zip(losses).map(|(a, b)| a * b).sum();
        for k in 0..self.len() {
            self.cum_surrogate[k] += if awake[k] { losses[k] } else { mix };
        }
        let lo = self.cum_surrogate.iter().copied().fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = self
            .cum_surrogate
            .iter()
            .map(|c| (-self.eta * (c - lo)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        self.pi = raw.into_iter().map(|x| x / total).collect();
        Ok(p)
    }

    /// Surrogate losses `I l + (1 - I) p.l` for a played mixture `p`.
    pub fn surrogate(awake: &[bool], losses: &[f64], p: &[f64]) -> Vec<f64> {
        let mix: f64 = p.iter().zip(losses).map(|(a, b)| a * b).sum();
        awake
            .iter()
            .zip(losses)
            .map(|(&a, &l)| if a { l } else { mix })
            .collect()
    }
}
