//! Angular brute force in the plane, independent of the projection pipeline.

use crate::geometry::ConvexSet;
use crate::point::Point;

fn ray_value<S: ConvexSet + ?Sized>(set: &S, w: &Point, angle: f64) -> (f64, Point) {
    let dir = Point::from([angle.cos(), angle.sin()]);
    let x = dir.scale(1.0 / set.gauge_of(&dir));
    (x.dot(w), x)
}

/// `max <x, w>` over a planar convex set: scan `n_angles` boundary rays, then
/// refine around the best one by golden-section search on the angle.
pub fn brute_support_2d<S: ConvexSet + ?Sized>(set: &S, w: &Point, n_angles: usize) -> (f64, Point) {
    assert_eq!(set.dim(), 2, "planar sets only");
    let step = std::f64::consts::TAU / n_angles as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..n_angles {
        let a = i as f64 * step;
        let (v, _) = ray_value(set, w, a);
        if v > best.0 {
            best = (v, a);
        }
    }
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.1 - 2.0 * step, best.1 + 2.0 * step);
    for _ in 0..80 {
        let a = hi - invphi * (hi - lo);
        let b = lo + invphi * (hi - lo);
        if ray_value(set, w, a).0 > ray_value(set, w, b).0 {
            hi = b;
        } else {
            lo = a;
        }
    }
    let refined = ray_value(set, w, 0.5 * (lo + hi));
    let coarse = ray_value(set, w, best.1);
    if refined.0 >= coarse.0 {
        refined
    } else {
        coarse
    }
}
