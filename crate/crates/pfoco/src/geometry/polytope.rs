use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::point::Point;

/// Upper bound on the number of vertex subsets scanned during facet enumeration.
const MAX_SUBSETS: u64 = 5_000_000;

/// Convex hull of a vertex list, stored alongside its facet inequalities
/// `<a_i, x> <= 1`.
#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<Point>,
    facets: Vec<Point>,
}

impl Polytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let d = vertices
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::Input("polytope needs at least one vertex".into()))?;
        if d == 0 {
            return Err(Error::Input("zero-dimensional polytope".into()));
        }
        for v in &vertices {
            crate::error::check_dim(d, v.dim())?;
            if !v.is_finite() {
                return Err(Error::Input(format!("non-finite vertex {v}")));
            }
        }
        if vertices.len() < d + 1 {
            return Err(Error::Geometry(format!(
                "{} vertices cannot span a full-dimensional polytope in R^{d}",
                vertices.len()
            )));
        }
        let facets = enumerate_facets(&vertices, d)?;
        if facets.is_empty() {
            return Err(Error::Geometry("polytope has no facets".into()));
        }
        Ok(Polytope { vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Point] {
        &self.facets
    }

    /// `max_i <a_i, w>`: the gauge, read off the facet description.
    pub fn facet_value(&self, w: &Point) -> f64 {
        self.facets
            .iter()
            .map(|a| a.dot(w))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    pub fn inner_radius(&self) -> f64 {
        self.facets.iter().map(|a| 1.0 / a.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn outer_radius(&self) -> f64 {
        self.vertices.iter().map(Point::norm).fold(0.0, f64::max)
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

fn enumerate_facets(vertices: &[Point], d: usize) -> Result<Vec<Point>> {
    let n = vertices.len();
    if binomial(n, d) > MAX_SUBSETS {
        return Err(Error::Input(format!(
            "facet enumeration over {n} vertices in R^{d} is too large"
        )));
    }
    let scale = vertices.iter().map(Point::norm).fold(0.0, f64::max);
    let tol = 1e-10 * scale.max(1.0);
    let mut facets: Vec<Point> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if let Some(normal) = hyperplane_normal(vertices, &idx) {
            if normal.norm() > 1e-12 * scale.powi(d as i32 - 1).max(1e-300) {
                let offset = normal.dot(&vertices[idx[0]]);
                let sides: Vec<f64> = vertices.iter().map(|v| normal.dot(v) - offset).collect();
                let nscale = normal.norm();
                let below = sides.iter().all(|&s| s <= tol * nscale);
                let above = sides.iter().all(|&s| s >= -tol * nscale);
                let oriented = match (below, above) {
                    (true, false) => Some((normal, offset)),
                    (false, true) => Some((normal.scale(-1.0), -offset)),
                    _ => None,
                };
                if let Some((a, c)) = oriented {
                    if c <= tol * nscale {
                        return Err(Error::Geometry("origin must lie strictly inside the polytope".into()));
                    }
                    let a = a.scale(1.0 / c);
                    if !facets.iter().any(|f| f.dist(&a) <= 1e-9 * (1.0 + a.norm())) {
                        facets.push(a);
                    }
                }
            }
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    Ok(facets)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Normal of the affine hull of the chosen vertices, by cofactor expansion of
/// the `(d-1) x d` matrix of edge vectors.
fn hyperplane_normal(vertices: &[Point], idx: &[usize]) -> Option<Point> {
    let d = idx.len();
    let base = &vertices[idx[0]];
    if d == 1 {
        return Some(Point::new(vec![1.0]));
    }
    let edges = DMatrix::from_fn(d - 1, d, |i, j| vertices[idx[i + 1]][j] - base[j]);
    let mut normal = vec![0.0; d];
    for (j, n) in normal.iter_mut().enumerate() {
        let minor = edges.clone().remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *n = sign * minor.determinant();
    }
    let p = Point::new(normal);
    p.is_finite().then_some(p)
}
