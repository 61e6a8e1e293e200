//! Damped Newton method with a matrix-free, Jacobi-preconditioned conjugate
//! gradient inner solve and Armijo backtracking.

use std::fmt::Write as _;
use std::sync::Arc;

use super::energy::{energy_gradient, hessian_apply, hessian_blocks, hessian_diagonal, regularized_energy};
use super::grid::{AxisymGrid, GridField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimize the weighted `p`-energy over free nodes with the non-free nodes
/// of `data` as Dirichlet values. Free values of `data` are the initial guess.
#[derive(Debug, Clone)]
pub struct DirichletProblem<T> {
    pub data: GridField<T>,
    /// Weight `lambda` at cell centres.
    pub lambda: Vec<T>,
    pub p: T,
    pub max_iterations: usize,
    /// Bound on the relative nodal residual.
    pub tol: T,
    /// Replace the initial guess by the weighted `p = 2` extension of the data.
    pub warm_start: bool,
}

impl<T: Real> DirichletProblem<T> {
    pub fn new(data: GridField<T>, lambda: Vec<T>, p: T) -> Self {
        Self { data, lambda, p, max_iterations: 200, tol: T::lit(1e-9), warm_start: true }
    }

    /// `lambda = 1`, Dirichlet values from `g`, zero initial guess.
    pub fn uniform(grid: Arc<AxisymGrid<T>>, p: T, g: impl Fn(T, T) -> T) -> Self {
        let mut data = GridField::from_fn(grid.clone(), g);
        for (k, v) in data.values.iter_mut().enumerate() {
            if grid.is_free(k) {
                *v = T::zero();
            }
        }
        let lambda = vec![T::one(); grid.cell_count()];
        Self::new(data, lambda, p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub energy_history: Vec<T>,
    /// Max over free nodes of `|dE/du_k|`, relative to the largest nodal sum of
    /// absolute cell contributions.
    pub final_residual: T,
    pub iterations: usize,
    pub converged: bool,
    /// `eps` in `(|grad u|^2 + eps^2)^{p/2}`; zero for `p >= 2`.
    pub regularization: T,
    pub cg_iterations: usize,
}

impl<T: Real> SolveReport<T> {
    /// `# degenlab-csv v1` CSV, one row per iteration.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# degenlab-csv v1\niteration,energy\n");
        for (k, e) in self.energy_history.iter().enumerate() {
            let _ = writeln!(s, "{k},{:.17e}", e.to_f64_lossy());
        }
        let _ = writeln!(
            s,
            "# final_residual={:e} iterations={} converged={} regularization={:e}",
            self.final_residual.to_f64_lossy(),
            self.iterations,
            self.converged,
            self.regularization.to_f64_lossy()
        );
        s
    }
}

const ARMIJO: f64 = 1e-4;
const ENERGY_RTOL: f64 = 1e-12;
const EPS_FACTOR: f64 = 1e-8;
const FLAT_RTOL: f64 = 1e-13;

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn relative_residual<T: Real>(grid: &AxisymGrid<T>, grad: &[T], scale: &[T]) -> T {
    let (mut worst, mut top) = (T::zero(), T::zero());
    for k in (0..grid.len()).filter(|&k| grid.is_free(k)) {
        worst = worst.max(grad[k].abs());
        top = top.max(scale[k]);
    }
    if top > T::zero() {
        worst / top
    } else {
        worst
    }
}

/// Preconditioned CG for `H d = -grad` on free nodes.
fn pcg<T: Real>(
    grid: &AxisymGrid<T>,
    blocks: &[[T; 3]],
    grad: &[T],
    rtol: T,
    max_iter: usize,
) -> (Vec<T>, usize) {
    let n = grid.len();
    let free = grid.free_mask();
    let diag = hessian_diagonal(grid, blocks);
    let inv: Vec<T> = (0..n)
        .map(|k| if free[k] && diag[k] > T::zero() { T::one() / diag[k] } else { T::zero() })
        .collect();
    let mut x = vec![T::zero(); n];
    let mut r: Vec<T> = (0..n).map(|k| if free[k] { -grad[k] } else { T::zero() }).collect();
    let mut z: Vec<T> = r.iter().zip(&inv).map(|(&a, &b)| a * b).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let r0 = dot(&r, &r).sqrt();
    let mut hp = vec![T::zero(); n];
    let mut it = 0;
    while it < max_iter {
        if dot(&r, &r).sqrt() <= rtol * r0 || rz == T::zero() {
            break;
        }
        hessian_apply(grid, blocks, &p, &mut hp);
        for k in 0..n {
            if !free[k] {
                hp[k] = T::zero();
            }
        }
        let php = dot(&p, &hp);
        if !(php > T::zero()) {
            break;
        }
        let a = rz / php;
        for k in 0..n {
            x[k] = x[k] + a * p[k];
            r[k] = r[k] - a * hp[k];
            z[k] = r[k] * inv[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
        it += 1;
    }
    if it == 0 && dot(&x, &x) == T::zero() {
        // fall back to the preconditioned gradient
        return (z, 0);
    }
    (x, it)
}

/// Solves `problem`; the report says whether the stopping test was met.
pub fn minimize_energy<T: Real>(problem: &DirichletProblem<T>) -> Result<(GridField<T>, SolveReport<T>)> {
    let grid = problem.data.grid.clone();
    let g = &*grid;
    if problem.lambda.len() != g.cell_count() {
        return Err(Error::GridMismatch(format!("{} cell weights for {} cells", problem.lambda.len(), g.cell_count())));
    }
    if !(problem.p > T::one()) {
        return Err(Error::config(format!("p = {} must exceed 1", problem.p)));
    }
    if let Some(c) = g.active_cells().iter().find(|&&c| !(problem.lambda[c] > T::zero())) {
        return Err(Error::config(format!("lambda is not positive on cell {c}")));
    }
    let p = problem.p;
    let two = T::lit(2.0);
    let mut u = problem.data.values.clone();
    if let Some(k) = u.iter().position(|v| !v.is_finite()) {
        return Err(Error::config(format!("non-finite data at node {k}")));
    }

    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    for (k, &v) in u.iter().enumerate() {
        if !g.is_free(k) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let width = (g.hx * T::from_count(g.nx - 1)).max(g.hr * T::from_count(g.nr - 1));
    let data_scale = if hi >= lo { (hi - lo).max(lo.abs().max(hi.abs())) / width } else { T::one() };
    let eps_scale = T::lit(EPS_FACTOR) * data_scale.max(T::min_positive_value());
    let eps = if p < two { eps_scale } else { T::zero() };
    // Hessian shift where |grad u| vanishes and p > 2.
    let eps_h = if p == two { T::zero() } else { eps_scale };

    if problem.warm_start && p != two {
        let linear = DirichletProblem { p: two, warm_start: false, ..problem.clone() };
        let (v, _) = minimize_energy(&linear)?;
        u = v.values;
    }

    let energy_of = |v: &[T]| regularized_energy(g, v, &problem.lambda, p, eps);
    let mut e = energy_of(&u);
    let mut history = vec![e];
    let mut residual = T::infinity();
    let mut converged = false;
    let mut cg_total = 0;
    let mut iterations = 0;
    let cg_cap = 20 * g.nx.max(g.nr) + 200;
    let mut trial = u.clone();

    for it in 0..problem.max_iterations {
        let (grad, scale) = energy_gradient(g, &u, &problem.lambda, p, eps);
        residual = relative_residual(g, &grad, &scale);
        let last_drop = if history.len() >= 2 {
            let a = history[history.len() - 2];
            (a - e).abs() / e.abs().max(T::min_positive_value())
        } else {
            T::infinity()
        };
        if residual <= problem.tol && (last_drop <= T::lit(ENERGY_RTOL) || residual <= problem.tol * T::lit(1e-3)) {
            converged = true;
            break;
        }
        iterations = it + 1;
        let blocks = hessian_blocks(g, &u, &problem.lambda, p, eps_h);
        let forcing = residual.sqrt().min(T::lit(0.1)).max(T::lit(1e-12));
        let (mut dir, cg_it) = pcg(g, &blocks, &grad, forcing, cg_cap);
        cg_total += cg_it;
        let mut slope = dot(&grad, &dir);
        if !(slope < T::zero()) {
            dir = grad.iter().enumerate().map(|(k, &v)| if g.is_free(k) { -v } else { T::zero() }).collect();
            slope = dot(&grad, &dir);
        }
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            for k in 0..u.len() {
                trial[k] = u[k] + t * dir[k];
            }
            let et = energy_of(&trial);
            let armijo = et <= e + T::lit(ARMIJO) * t * slope;
            // energy differences below roundoff: fall back to the residual
            let flat = !armijo && (et - e).abs() <= T::lit(FLAT_RTOL) * e.abs();
            let accept = armijo || (flat && {
                let (gt, st) = energy_gradient(g, &trial, &problem.lambda, p, eps);
                relative_residual(g, &gt, &st) < residual
            });
            if accept {
                std::mem::swap(&mut u, &mut trial);
                e = et;
                history.push(e);
                accepted = true;
                break;
            }
            t = t * T::lit(0.5);
        }
        if !accepted {
            // no further decrease representable
            let (grad, scale) = energy_gradient(g, &u, &problem.lambda, p, eps);
            residual = relative_residual(g, &grad, &scale);
            converged = residual <= problem.tol * T::lit(10.0);
            break;
        }
    }
    let field = GridField::new(grid.clone(), u)?;
    Ok((
        field,
        SolveReport { energy_history: history, final_residual: residual, iterations, converged, regularization: eps, cg_iterations: cg_total },
    ))
}
