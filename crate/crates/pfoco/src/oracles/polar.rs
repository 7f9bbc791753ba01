use nalgebra::{DMatrix, DVector};

use super::{ldp, separate_polar, CountingOracle};
use crate::error::{check_dim, Error, Result};
use crate::geometry::Shape;
use crate::point::Point;

/// Smallest certified gap requested from the solvers, relative to `1 + ||w||^2`.
/// Below this the objective itself is not resolvable in double precision.
pub const PROJECTION_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PolarSolver {
    /// Outer approximation by separating hyperplanes, each subproblem solved
    /// exactly as a least-distance program.
    #[default]
    CuttingPlane,
    /// Central-cut ellipsoid method with the volumetric stopping rule.
    Ellipsoid,
}

/// Support points collected from earlier separations. Each `x` encodes the
/// valid inequality `<x, u> <= 1` on `C°`, so a pool can be shared by
/// projections of the same body at different scales.
#[derive(Clone, Debug, Default)]
pub struct CutPool {
    cuts: Vec<Point>,
}

impl CutPool {
    pub fn new() -> Self {
        CutPool::default()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    fn add(&mut self, x: Point) -> bool {
        if self.cuts.iter().any(|c| c == &x) {
            false
        } else {
            self.cuts.push(x);
            true
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolarProjection {
    /// The projecting point, a member of `sqrt(1-eps) C°`.
    pub u: Point,
    /// `||gamma u - w||^2`.
    pub objective: f64,
    /// Certified lower bound on the optimal objective.
    pub lower_bound: f64,
    pub iterations: usize,
    /// Best objective after each iteration; non-increasing.
    pub history: Vec<f64>,
}

/// Approximately minimizes `||gamma u - w||^2` over `u ∈ sqrt(1-eps) C°` to
/// additive accuracy `delta` with the default solver.
pub fn project_scaled_polar(
    oracle: &CountingOracle,
    w: &Point,
    gamma: f64,
    eps: f64,
    delta: f64,
) -> Result<PolarProjection> {
    project_scaled_polar_with(
        oracle,
        w,
        gamma,
        eps,
        delta,
        PolarSolver::default(),
        &mut CutPool::new(),
    )
}

pub fn project_scaled_polar_with(
    oracle: &CountingOracle,
    w: &Point,
    gamma: f64,
    eps: f64,
    delta: f64,
    solver: PolarSolver,
    pool: &mut CutPool,
) -> Result<PolarProjection> {
    check_dim(oracle.dim(), w.dim())?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::Parameter(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Parameter(format!("eps must lie in [0, 1), got {eps}")));
    }
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("delta must be > 0, got {delta}")));
    }
    let d = w.dim();
    let wn2 = w.norm_sq();
    if gamma == 0.0 || wn2 == 0.0 {
        let objective = wn2;
        return Ok(PolarProjection {
            u: Point::zeros(d),
            objective,
            lower_bound: if gamma == 0.0 { objective } else { 0.0 },
            iterations: 0,
            history: vec![objective],
        });
    }
    let scale = (1.0 - eps).sqrt();
    let accuracy = delta.max(PROJECTION_FLOOR * (1.0 + wn2));

    if let Shape::Ball { radius } = oracle.body().shape() {
        let limit = gamma * scale / radius;
        let wn = wn2.sqrt();
        let y = if wn <= limit { w.clone() } else { w.scale(limit / wn) };
        let objective = (wn - limit).max(0.0).powi(2);
        return Ok(PolarProjection {
            u: y.scale(1.0 / gamma),
            objective,
            lower_bound: objective,
            iterations: 0,
            history: vec![objective],
        });
    }

    let sw = oracle.body().sandwich();
    let rho = d as f64 * sw.big_r * (gamma / sw.r + wn2.sqrt()) / (sw.r * accuracy);
    let cap = ((4 * d * d) as f64 * (rho / accuracy).ln()).ceil().max(64.0) as usize;
    match solver {
        PolarSolver::CuttingPlane => cutting_plane(oracle, w, gamma * scale, gamma, accuracy, cap, pool),
        PolarSolver::Ellipsoid => ellipsoid(oracle, w, gamma, scale, accuracy, cap),
    }
}

/// Projection of `w` onto `{y : <x_j, y> <= c}`.
fn project_onto_cuts(cuts: &[Point], c: f64, w: &Point) -> Result<Point> {
    let (m, d) = (cuts.len(), w.dim());
    let g = DMatrix::from_fn(m, d, |i, j| -cuts[i][j]);
    let h = DVector::from_fn(m, |i, _| cuts[i].dot(w) - c);
    let z = ldp(&g, &h).ok_or_else(|| Error::Geometry("empty cutting-plane model".into()))?;
    Ok(Point::new((0..d).map(|i| w[i] + z[i]).collect()))
}

fn cutting_plane(
    oracle: &CountingOracle,
    w: &Point,
    c: f64,
    gamma: f64,
    accuracy: f64,
    cap: usize,
    pool: &mut CutPool,
) -> Result<PolarProjection> {
    let d = w.dim();
    let mut best = Point::zeros(d);
    let mut best_val = w.norm_sq();
    let mut lower: f64 = 0.0;
    let mut history = Vec::new();
    for k in 1..=cap {
        let y = if pool.is_empty() {
            w.clone()
        } else {
            project_onto_cuts(&pool.cuts, c, w)?
        };
        lower = lower.max((&y - w).norm_sq());
        let sep = separate_polar(oracle, &y.scale(1.0 / c), 0.0)?;
        let sigma = c * sep.support_value;
        let feasible = if sigma <= c { y.clone() } else { y.scale(c / sigma) };
        let val = (&feasible - w).norm_sq();
        if val < best_val {
            best_val = val;
            best = feasible;
        }
        history.push(best_val);
        if best_val - lower <= accuracy {
            return Ok(PolarProjection {
                u: best.scale(1.0 / gamma),
                objective: best_val,
                lower_bound: lower.min(best_val),
                iterations: k,
                history,
            });
        }
        let fresh = sep.hyperplane.map(|x| pool.add(x)).unwrap_or(false);
        if !fresh {
            return Err(Error::Solver {
                iterations: k,
                residual: best_val - lower,
                best: best.scale(1.0 / gamma),
            });
        }
    }
    Err(Error::Solver {
        iterations: cap,
        residual: best_val - lower,
        best: best.scale(1.0 / gamma),
    })
}

/// Ellipsoid method in `u`-space over `U = scale * C°`, starting from the ball
/// `B(scale / r) ⊇ U`. With `B(scale / R) ⊆ U`, the best feasible center is within
/// `(vol E_k / vol B(scale/R))^(1/d) * range` of optimal.
fn ellipsoid(
    oracle: &CountingOracle,
    w: &Point,
    gamma: f64,
    scale: f64,
    accuracy: f64,
    cap: usize,
) -> Result<PolarProjection> {
    let d = w.dim();
    let sw = oracle.body().sandwich();
    let outer = scale / sw.r;
    let inner = scale / sw.big_r;
    let range = (gamma * outer + w.norm()).powi(2);
    let df = d as f64;
    let mut center = DVector::<f64>::zeros(d);
    let mut shape = DMatrix::<f64>::identity(d, d) * (outer * outer);
    let mut best = Point::zeros(d);
    let mut best_val = w.norm_sq();
    let mut history = Vec::new();
    let mut certified = f64::INFINITY;
    for k in 1..=cap {
        let u = Point::new(center.iter().copied().collect());
        let sep = separate_polar(oracle, &u.scale(1.0 / scale), 0.0)?;
        let cut = match sep.hyperplane {
            Some(x) => DVector::from_vec(x.into_vec()),
            None => {
                let val = (&u.scale(gamma) - w).norm_sq();
                if val < best_val {
                    best_val = val;
                    best = u.clone();
                }
                let grad = (&u.scale(gamma) - w).scale(2.0 * gamma);
                if grad.is_zero() {
                    history.push(best_val);
                    return Ok(PolarProjection {
                        u: best,
                        objective: best_val,
                        lower_bound: best_val,
                        iterations: k,
                        history,
                    });
                }
                DVector::from_vec(grad.into_vec())
            }
        };
        history.push(best_val);
        let pa = &shape * &cut;
        let apa = cut.dot(&pa);
        if !(apa > 0.0) || !apa.is_finite() {
            break;
        }
        let b = pa / apa.sqrt();
        if d == 1 {
            center -= &b * 0.5;
            shape *= 0.25;
        } else {
            center -= &b * (1.0 / (df + 1.0));
            shape = (&shape - (&b * b.transpose()) * (2.0 / (df + 1.0))) * (df * df / (df * df - 1.0));
            shape = (&shape + shape.transpose()) * 0.5;
        }
        let det = shape.determinant();
        if !(det > 0.0) {
            break;
        }
        let ratio = det.sqrt().powf(1.0 / df) / inner;
        certified = ratio * range;
        if certified <= accuracy {
            return Ok(PolarProjection {
                u: best,
                objective: best_val,
                lower_bound: best_val - certified,
                iterations: k,
                history,
            });
        }
    }
    Err(Error::Solver {
        iterations: history.len(),
        residual: certified,
        best,
    })
}
