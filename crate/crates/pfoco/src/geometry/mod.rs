//! Convex bodies and their oracles.

mod checks;
mod polytope;

pub use checks::{boundary_point, support_lipschitz_check, verify_strong_convexity, ConvexSet};
pub use polytope::Polytope;

use std::path::Path;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::point::Point;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Inner and outer radii with `B(r) ⊆ C ⊆ B(R)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BodySandwich {
    pub r: f64,
    pub big_r: f64,
    pub kappa: f64,
}

impl BodySandwich {
    pub fn new(r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && big_r >= r && big_r.is_finite()) {
            return Err(Error::Geometry(format!("invalid sandwich r={r}, R={big_r}")));
        }
        Ok(BodySandwich {
            r,
            big_r,
            kappa: big_r / r,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Ball {
        radius: f64,
    },
    /// `{x : ||x||_p <= radius}` with `p` in `(1, 2]`.
    Lp {
        p: f64,
        radius: f64,
    },
    Polytope(Polytope),
}

#[derive(Clone, Debug)]
pub struct Body {
    shape: Shape,
    dim: usize,
    sandwich: BodySandwich,
    modulus: f64,
}

impl Body {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Input(format!(
                "ball needs dim >= 1 and radius > 0, got {dim}, {radius}"
            )));
        }
        Ok(Body {
            shape: Shape::Ball { radius },
            dim,
            sandwich: BodySandwich::new(radius, radius)?,
            modulus: 1.0 / radius,
        })
    }

    /// The default modulus is `(p-1) d^(1/2-1/p) / radius`, the l_p-norm modulus
    /// converted to the Euclidean norm. Override with [`Body::with_modulus`].
    pub fn lp(dim: usize, p: f64, radius: f64) -> Result<Self> {
        if dim == 0 || !(p > 1.0 && p <= 2.0) || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Input(format!(
                "lp ball needs dim >= 1, p in (1,2], radius > 0; got {dim}, {p}, {radius}"
            )));
        }
        let shrink = (dim as f64).powf(0.5 - 1.0 / p);
        Ok(Body {
            shape: Shape::Lp { p, radius },
            dim,
            sandwich: BodySandwich::new(radius * shrink, radius)?,
            modulus: (p - 1.0) * shrink / radius,
        })
    }

    pub fn polytope(vertices: Vec<Point>) -> Result<Self> {
        let poly = Polytope::new(vertices)?;
        let dim = poly.dim();
        let sandwich = BodySandwich::new(poly.inner_radius(), poly.outer_radius())?;
        Ok(Body {
            shape: Shape::Polytope(poly),
            dim,
            sandwich,
            modulus: 0.0,
        })
    }

    /// Axis-aligned cube `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        if dim == 0 || dim > 12 || !(half > 0.0) {
            return Err(Error::Input(format!(
                "cube needs 1 <= dim <= 12 and half > 0, got {dim}, {half}"
            )));
        }
        let vertices = (0..1usize << dim)
            .map(|s| Point::new((0..dim).map(|i| if s >> i & 1 == 1 { half } else { -half }).collect()))
            .collect();
        Body::polytope(vertices)
    }

    pub fn with_modulus(mut self, mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Parameter(format!("modulus must be finite and >= 0, got {mu}")));
        }
        self.modulus = mu;
        Ok(self)
    }

    /// Parse `ball:R=1.0`, `lp:p=1.5,r=1.0`, `cube:half=1.0` or `poly:file=verts.csv`.
    /// A `d=` key overrides `default_dim`; polytopes take their dimension from the file.
    pub fn parse(spec: &str, default_dim: usize) -> Result<Self> {
        let (kind, kv) = crate::harness::spec::split_spec(spec)?;
        let dim = kv.get_usize("d")?.unwrap_or(default_dim);
        let body = match kind {
            "ball" => Body::ball(dim, kv.get_f64("R")?.or(kv.get_f64("r")?).unwrap_or(1.0))?,
            "lp" => Body::lp(
                dim,
                kv.get_f64("p")?
                    .ok_or_else(|| Error::Parse(format!("{spec}: lp needs p=")))?,
                kv.get_f64("r")?.or(kv.get_f64("R")?).unwrap_or(1.0),
            )?,
            "cube" => Body::cube(dim, kv.get_f64("half")?.unwrap_or(1.0))?,
            "poly" => {
                let file = kv
                    .get("file")
                    .ok_or_else(|| Error::Parse(format!("{spec}: poly needs file=")))?;
                Body::polytope(read_vertices(Path::new(file))?)?
            }
            other => return Err(Error::Parse(format!("unknown body kind '{other}'"))),
        };
        kv.finish(&["d", "R", "r", "p", "half", "file", "mu"])?;
        match kv.get_f64("mu")? {
            Some(mu) => body.with_modulus(mu),
            None => Ok(body),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn sandwich(&self) -> BodySandwich {
        self.sandwich
    }

    /// Declared strong-convexity modulus; 0 means not declared.
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// A minimizer of `<v, g>` over the body; the origin when `g = 0`.
    pub fn lin_min(&self, g: &Point) -> Result<Point> {
        check_dim(self.dim, g.dim())?;
        if !g.is_finite() {
            return Err(Error::Input(format!("non-finite direction {g}")));
        }
        if g.is_zero() {
            return Ok(Point::zeros(self.dim));
        }
        Ok(match &self.shape {
            Shape::Ball { radius } => g.scale(-radius / g.norm()),
            Shape::Lp { p, radius } => {
                let q = p / (p - 1.0);
                let m = g.max_abs();
                let h: Vec<f64> = g.coords().iter().map(|x| x / m).collect();
                let mags: Vec<f64> = h.iter().map(|x| x.abs().powf(q - 1.0)).collect();
                let nq = h.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf((q - 1.0) / q);
                Point::new(
                    h.iter()
                        .zip(&mags)
                        .map(|(x, a)| -radius * x.signum() * a / nq)
                        .map(|x| if x == 0.0 { 0.0 } else { x })
                        .collect(),
                )
            }
            Shape::Polytope(poly) => {
                let mut best = &poly.vertices()[0];
                let mut best_val = best.dot(g);
                for v in &poly.vertices()[1..] {
                    let val = v.dot(g);
                    if val < best_val {
                        best = v;
                        best_val = val;
                    }
                }
                best.clone()
            }
        })
    }

    /// `sigma(w) = max_{x in body} <x, w>` and a maximizer.
    pub fn support(&self, w: &Point) -> Result<(f64, Point)> {
        let x = self.lin_min(&-w)?;
        Ok((x.dot(w), x))
    }

    /// Gauge within additive `tol`. Polytopes use bisection on membership.
    pub fn gauge(&self, w: &Point, tol: f64) -> f64 {
        debug_assert_eq!(w.dim(), self.dim);
        if w.is_zero() {
            return 0.0;
        }
        match &self.shape {
            Shape::Ball { radius } => w.norm() / radius,
            Shape::Lp { p, radius } => w.lp_norm(*p) / radius,
            Shape::Polytope(poly) => {
                let n = w.norm();
                let (mut lo, mut hi) = (n / self.sandwich.big_r, n / self.sandwich.r);
                for _ in 0..60 {
                    if hi - lo <= tol {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if poly.facet_value(&w.scale(1.0 / mid)) <= 1.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    pub fn membership(&self, w: &Point, tol: f64) -> bool {
        debug_assert_eq!(w.dim(), self.dim);
        match &self.shape {
            Shape::Ball { radius } => w.norm() <= radius * (1.0 + tol),
            Shape::Lp { p, radius } => w.lp_norm(*p) <= radius * (1.0 + tol),
            Shape::Polytope(poly) => poly.facet_value(w) <= 1.0 + tol,
        }
    }
}

/// One vertex per line, comma-separated coordinates.
pub fn read_vertices(path: &Path) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let coords = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}: '{s}': {e}", path.display())))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Point::new(coords));
    }
    Ok(out)
}
