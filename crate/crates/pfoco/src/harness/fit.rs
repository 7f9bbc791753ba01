//! Log-log regression of regret against horizon.

use serde::Serialize;

use crate::error::{Error, Result};

/// Values below this are replaced before taking logarithms.
pub const REGRET_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// How many regret values were floored.
    pub floored: usize,
}

/// Least-squares fit of `ln regret = intercept + slope ln T`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::Input(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(&(t, _)) = points.iter().find(|(t, _)| !(*t > 0.0)) {
        return Err(Error::Input(format!("horizons must be positive, got {t}")));
    }
    let mut floored = 0;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(t, r)| {
            let r = if r > REGRET_FLOOR {
                r
            } else {
                floored += 1;
                REGRET_FLOOR
            };
            (t.ln(), r.ln())
        })
        .collect();
    if floored > 0 {
        eprintln!("warning: {floored} non-positive regret value(s) floored at {REGRET_FLOOR:e}");
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("all horizons are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        floored,
    })
}

/// Median of a non-empty slice; the mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [16.0, 64.0, 256.0, 1024.0]
            .iter()
            .map(|&t: &f64| (t, 3.0 * t.sqrt()))
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.floored, 0);
    }

    #[test]
    fn floors_non_positive_regret() {
        let fit = fit_exponent(&[(1.0, 0.0), (2.0, -1.0), (4.0, 1.0)]).unwrap();
        assert_eq!(fit.floored, 2);
    }

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
