//! Reference computations for the integration tests. Nothing here calls the
//! library's solvers: closed forms, brute force and plain re-simulation only.
#![allow(dead_code)]

use pfoco::Point;

pub fn p2(x: f64, y: f64) -> Point {
    Point::from([x, y])
}

/// `Psi_L(s, v)` evaluated term by term, without logarithms.
pub fn psi_direct(s: f64, v: f64, l: f64) -> f64 {
    let a = s.abs();
    (2.0 * v + l * a) * l * l / (2.0 * (v + l * a).powi(2) * (l * v).sqrt()) * (a * a / (2.0 * v + 2.0 * l * a)).exp()
}

/// Gauge of the square `[-h, h]^2`.
pub fn square_gauge(u: &Point, half: f64) -> f64 {
    u[0].abs().max(u[1].abs()) / half
}

/// Gauge of the l_p ball of radius `rho`.
pub fn lp_gauge(u: &Point, p: f64, rho: f64) -> f64 {
    u.coords().iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p) / rho
}

/// `sqrt((1-eps) g^2 + eps |u|^2 / r^2)` for a base gauge value `g`.
pub fn eps_gauge(base_gauge: f64, u: &Point, eps: f64, r: f64) -> f64 {
    ((1.0 - eps) * base_gauge * base_gauge + eps * u.norm_sq() / (r * r)).sqrt()
}

/// Boundary radius along `dir` by bisection on a gauge, to `1e-10`.
pub fn ray_radius(gauge: &dyn Fn(&Point) -> f64, dir: &Point) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while gauge(&dir.scale(hi)) <= 1.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if gauge(&dir.scale(mid)) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let a = hi - inv * (hi - lo);
        let b = lo + inv * (hi - lo);
        if f(a) > f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// `max <x, w>` over a planar set given by its gauge: `n` angles with
/// bisection per ray, then a golden-section refinement around the best angle.
pub fn brute_support(gauge: &dyn Fn(&Point) -> f64, w: &Point, n: usize) -> (f64, Point) {
    let step = std::f64::consts::TAU / n as f64;
    let at = |a: f64| {
        let dir = p2(a.cos(), a.sin());
        dir.scale(ray_radius(gauge, &dir))
    };
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..n {
        let a = step * i as f64;
        let v = at(a).dot(w);
        if v > best.0 {
            best = (v, a);
        }
    }
    let a = golden_max(&|a| at(a).dot(w), best.1 - 2.0 * step, best.1 + 2.0 * step);
    let x = at(a);
    if x.dot(w) >= best.0 {
        (x.dot(w), x)
    } else {
        (best.0, at(best.1))
    }
}

/// Squared distance from `w` to the planar l_q ball of radius `t`, by a scan
/// over boundary angles refined with golden-section search.
pub fn dist2_to_lq_ball(w: &Point, q: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return w.norm_sq();
    }
    if lp_gauge(w, q, t) <= 1.0 {
        return 0.0;
    }
    let n = 4000;
    let step = std::f64::consts::TAU / n as f64;
    let neg_dist = |a: f64| {
        let dir = p2(a.cos(), a.sin());
        -(&dir.scale(1.0 / lp_gauge(&dir, q, t)) - w).norm_sq()
    };
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..n {
        let a = step * i as f64;
        let v = neg_dist(a);
        if v > best.0 {
            best = (v, a);
        }
    }
    let a = golden_max(&neg_dist, best.1 - 2.0 * step, best.1 + 2.0 * step);
    (-neg_dist(a)).min(-best.0)
}

/// Euclidean projection onto the l_1 ball of radius `t` (sort-based).
pub fn project_l1(w: &Point, t: f64) -> Point {
    if t <= 0.0 {
        return Point::zeros(w.dim());
    }
    if w.coords().iter().map(|x| x.abs()).sum::<f64>() <= t {
        return w.clone();
    }
    let mut a: Vec<f64> = w.coords().iter().map(|x| x.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &ak) in a.iter().enumerate() {
        cum += ak;
        let th = (cum - t) / (k + 1) as f64;
        if ak > th {
            theta = th;
        }
    }
    Point::new(
        w.coords()
            .iter()
            .map(|x| x.signum() * (x.abs() - theta).max(0.0))
            .collect(),
    )
}

/// The 1-d objective for the square `[-h, h]^2` (whose polar is the l_1 ball of
/// radius `1/h`), with closed-form projection.
pub fn square_theta(gamma: f64, w: &Point, eps: f64, half: f64) -> f64 {
    let r = half;
    let radius = gamma * (1.0 - eps).sqrt() / half;
    let y = project_l1(w, radius);
    gamma * gamma + r * r / eps * (&y - w).norm_sq()
}

/// The 1-d objective for the planar l_p ball of radius `rho`, whose polar is
/// the l_q ball of radius `1/rho`; `r` is the inner radius.
pub fn lp_theta(gamma: f64, w: &Point, eps: f64, p: f64, rho: f64) -> f64 {
    let q = p / (p - 1.0);
    let r = rho * 2f64.powf(0.5 - 1.0 / p);
    let radius = gamma * (1.0 - eps).sqrt() / rho;
    gamma * gamma + r * r / eps * dist2_to_lq_ball(w, q, radius)
}

/// Grid minimum of a function on `[0, hi]`, refined twice around the best node.
pub fn grid_min(f: &dyn Fn(f64) -> f64, hi: f64, n: usize) -> (f64, f64) {
    let (mut lo, mut top) = (0.0, hi);
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..3 {
        let step = (top - lo) / n as f64;
        for i in 0..=n {
            let x = lo + step * i as f64;
            let v = f(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        lo = (best.1 - step).max(0.0);
        top = best.1 + step;
    }
    best
}

/// Minimum of `<g, x>` over a vertex list, first strictly better vertex kept.
pub fn vertex_min(vertices: &[Point], g: &Point) -> Point {
    let mut best = vertices[0].clone();
    for v in &vertices[1..] {
        if v.dot(g) < best.dot(g) {
            best = v.clone();
        }
    }
    best
}

pub fn square_vertices(half: f64) -> Vec<Point> {
    vec![p2(-half, -half), p2(half, -half), p2(-half, half), p2(half, half)]
}

/// The FreeGrad regret bound at comparator `z` (the `|z| ln` terms vanish at `z = 0`).
pub fn freegrad_bound(z: f64, v: f64, l: f64) -> f64 {
    let a = z.abs();
    if a == 0.0 {
        return l;
    }
    2.0 * a * (v * (1.0 + 2.0 * a * v / (l * l)).ln()).sqrt() + 4.0 * l * a * (4.0 * a * v.sqrt() / l).ln() + l
}
