//! Discrete weighted `p`-Dirichlet energy
//! `E(u) = (1/p) sum_c w_c lambda_c |G_c u|^p` over active cells, with
//! cell-centred gradients `G_c`.

use super::grid::{AxisymGrid, GridField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Samples a function at cell centres.
pub fn sample_cells<T: Real>(grid: &AxisymGrid<T>, f: impl Fn(T, T) -> T) -> Vec<T> {
    (0..grid.cell_count())
        .map(|c| {
            let (x, r) = grid.cell_center(c);
            f(x, r)
        })
        .collect()
}

fn check_weights<T: Real>(grid: &AxisymGrid<T>, lambda: &[T]) -> Result<()> {
    if lambda.len() != grid.cell_count() {
        return Err(Error::GridMismatch(format!("{} cell weights for {} cells", lambda.len(), grid.cell_count())));
    }
    Ok(())
}

/// `|g|^{p-2} g`, zero at `g = 0`.
#[inline]
pub fn flux<T: Real>(g: [T; 2], p: T) -> [T; 2] {
    let n = g[0].hypot(g[1]);
    if n == T::zero() {
        return [T::zero(); 2];
    }
    let s = n.powf(p - T::lit(2.0));
    [s * g[0], s * g[1]]
}

/// `(|g|^2 + eps^2)^{p/2} / p`.
#[inline]
fn density<T: Real>(g: [T; 2], p: T, eps: T) -> T {
    if eps == T::zero() {
        g[0].hypot(g[1]).powf(p) / p
    } else {
        (g[0] * g[0] + g[1] * g[1] + eps * eps).powf(p * T::lit(0.5)) / p
    }
}

/// Energy with integrand `(|grad u|^2 + eps^2)^{p/2} / p`.
pub fn regularized_energy<T: Real>(grid: &AxisymGrid<T>, values: &[T], lambda: &[T], p: T, eps: T) -> T {
    grid.active_cells().iter().fold(T::zero(), |acc, &c| {
        acc + grid.cell_weight(c) * lambda[c] * density(grid.cell_gradient(values, c), p, eps)
    })
}

pub fn energy<T: Real>(u: &GridField<T>, lambda: &[T], p: T) -> Result<T> {
    check_weights(&u.grid, lambda)?;
    Ok(regularized_energy(&u.grid, &u.values, lambda, p, T::zero()))
}

/// `A(u, phi) = sum_c w_c lambda_c |G_c u|^{p-2} G_c u . G_c phi`.
pub fn weak_residual<T: Real>(u: &GridField<T>, phi: &GridField<T>, lambda: &[T], p: T) -> Result<T> {
    u.same_grid(phi)?;
    check_weights(&u.grid, lambda)?;
    let g = &*u.grid;
    Ok(g.active_cells().iter().fold(T::zero(), |acc, &c| {
        let a = flux(g.cell_gradient(&u.values, c), p);
        let b = g.cell_gradient(&phi.values, c);
        acc + g.cell_weight(c) * lambda[c] * (a[0] * b[0] + a[1] * b[1])
    }))
}

/// Nodal gradient of the regularized energy, and per node the sum of the
/// absolute cell contributions (a scale for relative residuals).
pub fn energy_gradient<T: Real>(grid: &AxisymGrid<T>, values: &[T], lambda: &[T], p: T, eps: T) -> (Vec<T>, Vec<T>) {
    let mut grad = vec![T::zero(); grid.len()];
    let mut scale = vec![T::zero(); grid.len()];
    let two = T::lit(2.0);
    for &c in grid.active_cells() {
        let g = grid.cell_gradient(values, c);
        let s = if eps == T::zero() {
            let n = g[0].hypot(g[1]);
            if n == T::zero() {
                T::zero()
            } else {
                n.powf(p - two)
            }
        } else {
            (g[0] * g[0] + g[1] * g[1] + eps * eps).powf((p - two) * T::lit(0.5))
        };
        let wl = grid.cell_weight(c) * lambda[c] * s;
        let q = [wl * g[0], wl * g[1]];
        grid.scatter_gradient(c, q, &mut grad);
        let mag = (q[0] / (two * grid.hx)).abs() + (q[1] / (two * grid.hr)).abs();
        for k in grid.cell_corners(c) {
            scale[k] = scale[k] + mag;
        }
    }
    (grad, scale)
}

/// Per-cell symmetric `2 x 2` Hessian blocks `[a, b, c]` of the regularized energy.
pub fn hessian_blocks<T: Real>(grid: &AxisymGrid<T>, values: &[T], lambda: &[T], p: T, eps: T) -> Vec<[T; 3]> {
    let two = T::lit(2.0);
    let mut out = vec![[T::zero(); 3]; grid.cell_count()];
    for &c in grid.active_cells() {
        let g = grid.cell_gradient(values, c);
        let s = g[0] * g[0] + g[1] * g[1] + eps * eps;
        let wl = grid.cell_weight(c) * lambda[c];
        if p == two {
            out[c] = [wl, T::zero(), wl];
            continue;
        }
        if s == T::zero() {
            continue;
        }
        let base = wl * s.powf((p - two) * T::lit(0.5));
        let k = (p - two) / s;
        out[c] = [base * (T::one() + k * g[0] * g[0]), base * k * g[0] * g[1], base * (T::one() + k * g[1] * g[1])];
    }
    out
}

/// `H v` for the blocks of [`hessian_blocks`].
pub fn hessian_apply<T: Real>(grid: &AxisymGrid<T>, blocks: &[[T; 3]], v: &[T], out: &mut [T]) {
    out.iter_mut().for_each(|o| *o = T::zero());
    for &c in grid.active_cells() {
        let g = grid.cell_gradient(v, c);
        let [a, b, d] = blocks[c];
        grid.scatter_gradient(c, [a * g[0] + b * g[1], b * g[0] + d * g[1]], out);
    }
}

/// Diagonal of the Hessian.
pub fn hessian_diagonal<T: Real>(grid: &AxisymGrid<T>, blocks: &[[T; 3]]) -> Vec<T> {
    let mut diag = vec![T::zero(); grid.len()];
    let two = T::lit(2.0);
    let (ix, ir) = (T::one() / (two * grid.hx), T::one() / (two * grid.hr));
    for &c in grid.active_cells() {
        let [a, b, d] = blocks[c];
        // corner gradients are (+-ix, +-ir); the cross term flips sign with the corner
        let corners = grid.cell_corners(c);
        let signs = [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)];
        for (k, (sx, sr)) in corners.into_iter().zip(signs) {
            let gx = ix * T::lit(sx);
            let gr = ir * T::lit(sr);
            diag[k] = diag[k] + a * gx * gx + two * b * gx * gr + d * gr * gr;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn residual_of_u_against_itself_is_p_times_energy() {
        let g = Arc::new(AxisymGrid::<f64>::ball(3, 0.0, 1.0, 0.1).unwrap());
        let u = GridField::from_fn(g.clone(), |x, r| (x * 3.0).sin() + r * r * x).with_zero_boundary();
        let lambda = sample_cells(&g, |x, r| 1.0 + x * x + r);
        for p in [1.5, 2.0, 3.0] {
            let e = energy(&u, &lambda, p).unwrap();
            let a = weak_residual(&u, &u, &lambda, p).unwrap();
            assert!((a - p * e).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        let g = Arc::new(AxisymGrid::<f64>::cylinder(3, (-0.5, 0.5), (0.25, 1.0), 7, 6).unwrap());
        let u = GridField::from_fn(g.clone(), |x, r| x * x + (2.0 * r).cos());
        let lambda = sample_cells(&g, |x, _| 1.0 + x.abs());
        let p = 2.7;
        let (grad, _) = energy_gradient(&g, &u.values, &lambda, p, 0.0);
        let blocks = hessian_blocks(&g, &u.values, &lambda, p, 0.0);
        let diag = hessian_diagonal(&g, &blocks);
        let h = 1e-6;
        for k in (0..g.len()).filter(|&k| g.is_free(k)) {
            let mut up = u.values.clone();
            let mut dn = u.values.clone();
            up[k] += h;
            dn[k] -= h;
            let fd = (regularized_energy(&g, &up, &lambda, p, 0.0) - regularized_energy(&g, &dn, &lambda, p, 0.0)) / (2.0 * h);
            assert!((fd - grad[k]).abs() <= 1e-6 * grad[k].abs().max(1e-3));
            let (gu, _) = energy_gradient(&g, &up, &lambda, p, 0.0);
            let (gd, _) = energy_gradient(&g, &dn, &lambda, p, 0.0);
            let mut e = vec![0.0; g.len()];
            e[k] = 1.0;
            let mut hv = vec![0.0; g.len()];
            hessian_apply(&g, &blocks, &e, &mut hv);
            for m in 0..g.len() {
                let fd2 = (gu[m] - gd[m]) / (2.0 * h);
                assert!((fd2 - hv[m]).abs() <= 1e-5 * hv[m].abs().max(1e-2), "{k} {m}");
            }
            assert!((diag[k] - hv[k]).abs() <= 1e-12 * diag[k]);
        }
    }
}
