//! Nonnegative least squares (Lawson-Hanson) and least-distance programming.

use nalgebra::{DMatrix, DVector};

/// `argmin ||E x - f||` over `x >= 0`.
pub fn nnls(e: &DMatrix<f64>, f: &DVector<f64>) -> DVector<f64> {
    let n = e.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = e.abs().max().max(1.0) * f.abs().max().max(1.0);
    let tol = 1e-14 * scale * (n.max(e.nrows()) as f64);
    for _ in 0..3 * n + 10 {
        let w = e.transpose() * (f - e * &x);
        let candidate = (0..n).filter(|&j| !passive[j]).max_by(|&a, &b| w[a].total_cmp(&w[b]));
        match candidate {
            Some(t) if w[t] > tol => passive[t] = true,
            _ => break,
        }
        for _ in 0..3 * n + 10 {
            let z = solve_passive(e, f, &passive);
            if (0..n).filter(|&j| passive[j]).all(|j| z[j] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            let mut blocking = None;
            for j in (0..n).filter(|&j| passive[j] && z[j] <= 0.0) {
                let denom = x[j] - z[j];
                if denom > 0.0 && x[j] / denom < alpha {
                    alpha = x[j] / denom;
                    blocking = Some(j);
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x += (&z - &x) * alpha;
            if let Some(j) = blocking {
                x[j] = 0.0;
            }
            for j in 0..n {
                if passive[j] && x[j] <= 0.0 {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
            if passive.iter().all(|p| !p) {
                break;
            }
        }
    }
    x
}

fn solve_passive(e: &DMatrix<f64>, f: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&j| passive[j]).collect();
    let mut z = DVector::zeros(passive.len());
    if cols.is_empty() {
        return z;
    }
    let sub = DMatrix::from_fn(e.nrows(), cols.len(), |i, k| e[(i, cols[k])]);
    let svd = sub.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1e-300);
    if let Ok(sol) = svd.solve(f, eps) {
        for (k, &j) in cols.iter().enumerate() {
            z[j] = sol[k];
        }
    }
    z
}

/// `argmin ||z||` subject to `G z >= h`; `None` when infeasible.
pub fn ldp(g: &DMatrix<f64>, h: &DVector<f64>) -> Option<DVector<f64>> {
    let (m, d) = (g.nrows(), g.ncols());
    if m == 0 {
        return Some(DVector::zeros(d));
    }
    let e = DMatrix::from_fn(d + 1, m, |i, j| if i < d { g[(j, i)] } else { h[j] });
    let mut f = DVector::zeros(d + 1);
    f[d] = 1.0;
    let u = nnls(&e, &f);
    let r = &e * &u - &f;
    if r.norm() <= 1e-12 || r[d].abs() <= 1e-300 {
        return None;
    }
    Some(DVector::from_fn(d, |i, _| -r[i] / r[d]))
}
