use super::CountingOracle;
use crate::error::{check_dim, Error, Result};
use crate::geometry::Shape;
use crate::point::Point;

const MAX_ITERS: usize = 200_000;

/// Euclidean projection onto the body with `||x - w||^2 <= min + tol`.
///
/// Balls use the closed form. Other bodies run pairwise Frank-Wolfe over the
/// oracle's outputs, stopping on the duality gap.
pub fn euclidean_project(oracle: &CountingOracle, w: &Point, tol: f64) -> Result<Point> {
    check_dim(oracle.dim(), w.dim())?;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tol must be > 0, got {tol}")));
    }
    let body = oracle.body();
    if let Shape::Ball { radius } = body.shape() {
        let n = w.norm();
        return Ok(if n <= *radius { w.clone() } else { w.scale(radius / n) });
    }
    if body.membership(w, 0.0) {
        return Ok(w.clone());
    }

    let mut atoms: Vec<(Point, f64)> = vec![(oracle.lin_min(&w.scale(-1.0))?, 1.0)];
    let mut x = atoms[0].0.clone();
    let mut gap = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        let grad = (&x - w).scale(2.0);
        let s = oracle.lin_min(&grad)?;
        gap = grad.dot(&(&x - &s));
        if gap <= tol {
            return Ok(x);
        }
        let (away, _) = atoms
            .iter()
            .enumerate()
            .max_by(|a, b| grad.dot(&a.1 .0).total_cmp(&grad.dot(&b.1 .0)))
            .expect("active set is never empty");
        let dir = &s - &atoms[away].0;
        let dn = dir.norm_sq();
        if dn == 0.0 {
            return Ok(x);
        }
        let step = (-grad.dot(&dir) / (2.0 * dn)).clamp(0.0, atoms[away].1);
        if step == 0.0 {
            return Ok(x);
        }
        x.axpy(step, &dir);
        atoms[away].1 -= step;
        match atoms.iter_mut().find(|(a, _)| *a == s) {
            Some(entry) => entry.1 += step,
            None => atoms.push((s, step)),
        }
        atoms.retain(|(_, wgt)| *wgt > 1e-15);
    }
    Err(Error::Solver {
        iterations: MAX_ITERS,
        residual: gap,
        best: x,
    })
}
