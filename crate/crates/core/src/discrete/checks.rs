//! Discrete versions of the local boundedness estimates, evaluated on
//! computed subsolutions. Integrals run over cells whose centre lies in the
//! relevant ball; values and gradients are cell-centred.

use super::grid::{AxisymGrid, GridField};
use crate::error::{Error, Result};
use crate::params::{classify, moser_constants, s_star, Exponent, ExponentConfig, RegimeTag};
use crate::quadrature::{scaled_sobolev_norm, GaussLegendre};
use crate::scalar::Real;

/// `(int |u|^gamma, int |grad u|^gamma)` over cells centred in `B_R(center)`.
pub fn ball_power_integrals<T: Real>(u: &GridField<T>, center: T, radius: T, gamma: T) -> (T, T) {
    let g = &*u.grid;
    let (mut iu, mut ig) = (T::zero(), T::zero());
    for c in g.cells_in_ball(center, radius) {
        let w = g.cell_weight(c);
        let gr = g.cell_gradient(&u.values, c);
        iu = iu + w * g.cell_value(&u.values, c).abs().powf(gamma);
        ig = ig + w * gr[0].hypot(gr[1]).powf(gamma);
    }
    (iu, ig)
}

/// Discrete scale-invariant `W^{1,gamma}(B_R)` norm.
pub fn grid_sobolev_norm<T: Real>(u: &GridField<T>, center: T, radius: T, gamma: T) -> Result<T> {
    let (iu, ig) = ball_power_integrals(u, center, radius, gamma);
    scaled_sobolev_norm(u.grid.d, gamma, radius, iu, ig)
}

/// `Lambda(B_R)` from cell samples of `lambda` and `mu`.
pub fn grid_lambda<T: Real>(
    grid: &AxisymGrid<T>,
    lambda: &[T],
    mu: &[T],
    s: Exponent<T>,
    t: Exponent<T>,
    center: T,
    radius: T,
) -> Result<T> {
    let cells = grid.cells_in_ball(center, radius);
    let vol = cells.iter().fold(T::zero(), |a, &c| a + grid.cell_weight(c));
    let (mut ms, mut lt, mut msup, mut lsup) = (T::zero(), T::zero(), T::zero(), T::zero());
    for &c in &cells {
        let (l, m) = (lambda[c], mu[c]);
        if !(l > T::zero()) || !(m > T::zero()) {
            return Err(Error::config(format!("weights must be positive on cell {c}")));
        }
        let w = grid.cell_weight(c);
        if let Exponent::Finite(s) = s {
            ms = ms + w * m.powf(s);
        }
        if let Exponent::Finite(t) = t {
            lt = lt + w * l.powf(-t);
        }
        msup = msup.max(m);
        lsup = lsup.max(T::one() / l);
    }
    let a = match s {
        Exponent::Finite(s) => (ms / vol).powf(T::one() / s),
        Exponent::Infinite => msup,
    };
    let b = match t {
        Exponent::Finite(t) => (lt / vol).powf(T::one() / t),
        Exponent::Infinite => lsup,
    };
    Ok(a * b)
}

/// `t p / (t + 1)`, equal to `p` for `t = inf`.
pub fn bound_gamma<T: Real>(p: T, t: Exponent<T>) -> T {
    match t {
        Exponent::Finite(t) => t * p / (t + T::one()),
        Exponent::Infinite => p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaccioppoliReport<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs / rhs`; the inequality holds with slack `k` when this is `<= k`.
    pub slack: T,
}

impl<T: Real> CaccioppoliReport<T> {
    pub fn holds(&self, slack: T) -> bool {
        self.lhs <= self.rhs * slack
    }
}

/// `int eta^p lambda u_+^{beta-1} |grad u_+|^p` against
/// `(p/beta)^p int u_+^{p+beta-1} mu |grad eta|^p`.
pub fn caccioppoli_check<T: Real>(
    u: &GridField<T>,
    lambda: &[T],
    mu: &[T],
    eta: &GridField<T>,
    beta: T,
    p: T,
) -> Result<CaccioppoliReport<T>> {
    u.same_grid(eta)?;
    if !(beta >= T::one()) {
        return Err(Error::config(format!("beta = {beta} must be at least 1")));
    }
    let g = &*u.grid;
    if lambda.len() != g.cell_count() || mu.len() != g.cell_count() {
        return Err(Error::GridMismatch("cell weights do not match the grid".into()));
    }
    let up = u.positive_part();
    let (mut lhs, mut rhs) = (T::zero(), T::zero());
    for c in 0..g.cell_count() {
        let w = g.cell_weight(c);
        let e = g.cell_value(&eta.values, c);
        let uc = g.cell_value(&up.values, c);
        let gu = g.cell_gradient(&up.values, c);
        let ge = g.cell_gradient(&eta.values, c);
        let gu_n = gu[0].hypot(gu[1]);
        if gu_n > T::zero() && e > T::zero() {
            lhs = lhs + w * e.powf(p) * lambda[c] * uc.powf(beta - T::one()) * gu_n.powf(p);
        }
        let ge_n = ge[0].hypot(ge[1]);
        if ge_n > T::zero() && uc > T::zero() {
            rhs = rhs + w * uc.powf(p + beta - T::one()) * mu[c] * ge_n.powf(p);
        }
    }
    rhs = rhs * (p / beta).powf(p);
    let slack = if rhs > T::zero() { lhs / rhs } else if lhs > T::zero() { T::infinity() } else { T::zero() };
    Ok(CaccioppoliReport { lhs, rhs, slack })
}

/// Radial cutoff `eta(|x - center|)`: 1 inside `rho`, 0 outside `sigma`,
/// `cos^2` in between.
pub fn smooth_cutoff<T: Real>(grid: std::sync::Arc<AxisymGrid<T>>, center: T, rho: T, sigma: T) -> GridField<T> {
    GridField::from_fn(grid, |x, r| {
        let q = (x - center).hypot(r);
        if q <= rho {
            T::one()
        } else if q >= sigma {
            T::zero()
        } else {
            let z = (q - rho) / (sigma - rho) * T::lit(std::f64::consts::FRAC_PI_2);
            z.cos() * z.cos()
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport<T> {
    /// Minimized discrete functional.
    pub j_min: T,
    /// Functional at the linear ramp.
    pub j_ramp: T,
    /// One-dimensional optimum from the shell masses.
    pub j_radial: T,
    /// Right-hand side of the optimization bound without its constant.
    pub bound_rhs: T,
    /// Profile values at the `K + 1` equispaced radii in `[rho, sigma]`.
    pub profile: Vec<T>,
    pub iterations: usize,
}

/// Solves `A x = b` for small dense symmetric positive systems.
fn dense_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != T::zero() {
                for k in col..n {
                    a[row][k] = a[row][k] - f * a[col][k];
                }
                b[row] = b[row] - f * b[col];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Minimizes `int mu |v|^p |grad eta|^p` over cutoffs that are piecewise
/// linear in `|x - center|` with `segments` pieces on `[rho, sigma]`,
/// evaluated through the grid's cell gradients.
#[allow(clippy::too_many_arguments)]
pub fn cutoff_optimize<T: Real>(
    mu: &[T],
    v: &GridField<T>,
    center: T,
    rho: T,
    sigma: T,
    p: T,
    s: T,
    segments: usize,
) -> Result<CutoffReport<T>> {
    if !(rho < sigma) || !(rho > T::zero()) {
        return Err(Error::config(format!("cutoff radii need 0 < rho < sigma (rho = {rho}, sigma = {sigma})")));
    }
    if segments < 2 {
        return Err(Error::config("cutoff needs at least two segments"));
    }
    let g = &*v.grid;
    if mu.len() != g.cell_count() {
        return Err(Error::GridMismatch("mu does not match the grid".into()));
    }
    let kseg = segments;
    let delta = (sigma - rho) / T::from_count(kseg);
    // node -> (segment, position in segment), clamped to the ends
    let place: Vec<(usize, T)> = (0..g.len())
        .map(|n| {
            let (x, r) = g.node_at(n);
            let q = (x - center).hypot(r);
            if q <= rho {
                (0, T::zero())
            } else if q >= sigma {
                (kseg - 1, T::one())
            } else {
                let f = (q - rho) / delta;
                let k = (f.floor().to_f64_lossy() as usize).min(kseg - 1);
                (k, f - T::from_count(k))
            }
        })
        .collect();
    let masses: Vec<T> = (0..g.cell_count())
        .map(|c| g.cell_weight(c) * mu[c] * g.cell_value(&v.values, c).abs().powf(p))
        .collect();
    let two = T::lit(2.0);
    let (ix, ir) = (T::one() / (two * g.hx), T::one() / (two * g.hr));
    let corner_stencil = [(-ix, -ir), (ix, -ir), (-ix, ir), (ix, ir)];
    // per cell: sparse Jacobian of the cell gradient w.r.t. interior profile values 1..K-1
    let mut jac: Vec<(usize, Vec<(usize, [T; 2])>)> = Vec::new();
    for c in 0..g.cell_count() {
        if masses[c] == T::zero() {
            continue;
        }
        let mut entries: Vec<(usize, [T; 2])> = Vec::new();
        for (corner, (sx, sr)) in g.cell_corners(c).into_iter().zip(corner_stencil) {
            let (k, t) = place[corner];
            for (m, wgt) in [(k, T::one() - t), (k + 1, t)] {
                if m == 0 || m == kseg || wgt == T::zero() {
                    continue;
                }
                let add = [sx * wgt, sr * wgt];
                match entries.iter_mut().find(|e| e.0 == m) {
                    Some(e) => {
                        e.1[0] = e.1[0] + add[0];
                        e.1[1] = e.1[1] + add[1];
                    }
                    None => entries.push((m, add)),
                }
            }
        }
        entries.retain(|e| e.1[0] != T::zero() || e.1[1] != T::zero());
        if !entries.is_empty() {
            jac.push((c, entries));
        }
    }
    let eta_nodes = |prof: &[T]| -> Vec<T> {
        place.iter().map(|&(k, t)| prof[k] * (T::one() - t) + prof[k + 1] * t).collect()
    };
    let functional = |prof: &[T]| -> T {
        let eta = eta_nodes(prof);
        (0..g.cell_count()).fold(T::zero(), |acc, c| {
            if masses[c] == T::zero() {
                return acc;
            }
            let ge = g.cell_gradient(&eta, c);
            acc + masses[c] * ge[0].hypot(ge[1]).powf(p)
        })
    };
    let mut prof: Vec<T> = (0..=kseg).map(|k| T::one() - T::from_count(k) / T::from_count(kseg)).collect();
    let j_ramp = functional(&prof);
    let mut j = j_ramp;
    let nfree = kseg - 1;
    let eps = T::lit(1e-10) / delta;
    let mut iterations = 0;
    for _ in 0..100 {
        let eta = eta_nodes(&prof);
        let mut grad = vec![T::zero(); nfree];
        let mut hess = vec![vec![T::zero(); nfree]; nfree];
        for (c, entries) in &jac {
            let ge = g.cell_gradient(&eta, *c);
            let n2 = ge[0] * ge[0] + ge[1] * ge[1] + eps * eps;
            let base = masses[*c] * p * n2.powf((p - two) * T::lit(0.5));
            let kk = (p - two) / n2;
            let m = [
                base * (T::one() + kk * ge[0] * ge[0]),
                base * kk * ge[0] * ge[1],
                base * (T::one() + kk * ge[1] * ge[1]),
            ];
            let flux = [base * ge[0], base * ge[1]];
            for &(a, ja) in entries {
                grad[a - 1] = grad[a - 1] + flux[0] * ja[0] + flux[1] * ja[1];
                let mja = [m[0] * ja[0] + m[1] * ja[1], m[1] * ja[0] + m[2] * ja[1]];
                for &(b, jb) in entries {
                    hess[a - 1][b - 1] = hess[a - 1][b - 1] + mja[0] * jb[0] + mja[1] * jb[1];
                }
            }
        }
        for (k, row) in hess.iter_mut().enumerate() {
            if row[k] == T::zero() {
                row[k] = T::one();
            }
        }
        let Some(step) = dense_solve(hess, grad.iter().map(|&x| -x).collect()) else { break };
        let slope = grad.iter().zip(&step).fold(T::zero(), |a, (&x, &y)| a + x * y);
        if !(slope < T::zero()) {
            break;
        }
        let mut t = T::one();
        let mut improved = false;
        for _ in 0..50 {
            let mut trial = prof.clone();
            for k in 0..nfree {
                trial[k + 1] = prof[k + 1] + t * step[k];
            }
            let jt = functional(&trial);
            if jt <= j + T::lit(1e-4) * t * slope {
                let drop = (j - jt) / j.abs().max(T::min_positive_value());
                prof = trial;
                j = jt;
                improved = drop > T::lit(1e-13);
                break;
            }
            t = t * T::lit(0.5);
        }
        iterations += 1;
        if !improved {
            break;
        }
    }

    // one-dimensional optimum from the masses between consecutive radii
    let mut shell_mass = vec![T::zero(); kseg];
    for c in 0..g.cell_count() {
        let (x, r) = g.cell_center(c);
        let q = (x - center).hypot(r);
        if q > rho && q < sigma {
            let k = (((q - rho) / delta).floor().to_f64_lossy() as usize).min(kseg - 1);
            shell_mass[k] = shell_mass[k] + masses[c];
        }
    }
    let inv = T::one() / (p - T::one());
    let sum = shell_mass.iter().fold(T::zero(), |a, &m| a + delta * (m / delta).powf(-inv));
    let j_radial = sum.powf(T::one() - p);

    // bound: (sigma - rho)^{-pd/(d-1)} ||mu||_{L^s} (||grad v||^p_{L^s*} + rho^{-p} ||v||^p_{L^s*})
    let d = g.d;
    let dm1 = T::lit(f64::from(d) - 1.0);
    let dd = T::lit(f64::from(d));
    let s_lower = T::one() / (T::one() / p * (T::one() - T::one() / s) + T::one() / dm1);
    let ss = s_lower.max(T::one());
    let (mut mu_s, mut gv, mut vv) = (T::zero(), T::zero(), T::zero());
    for c in 0..g.cell_count() {
        let (x, r) = g.cell_center(c);
        let q = (x - center).hypot(r);
        if q > rho && q < sigma {
            let w = g.cell_weight(c);
            let gr = g.cell_gradient(&v.values, c);
            mu_s = mu_s + w * mu[c].powf(s);
            gv = gv + w * gr[0].hypot(gr[1]).powf(ss);
            vv = vv + w * g.cell_value(&v.values, c).abs().powf(ss);
        }
    }
    let bound_rhs = (sigma - rho).powf(-p * dd / dm1)
        * mu_s.powf(T::one() / s)
        * (gv.powf(p / ss) + rho.powf(-p) * vv.powf(p / ss));
    Ok(CutoffReport { j_min: j, j_ramp, j_radial, bound_rhs, profile: prof, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoserReport<T> {
    pub sup_val: T,
    pub bound_val: T,
    pub ratio: T,
    pub lambda: T,
    pub norm: T,
}

fn ratio_of<T: Real>(sup: T, bound: T) -> T {
    if sup <= T::zero() {
        T::zero()
    } else if bound > T::zero() {
        sup / bound
    } else {
        T::infinity()
    }
}

/// `sup_{B_{R/2}} u` against `Lambda(B_R)^{1/(p delta)} ||u_+||_{W^{1, tp/(t+1)}(B_R)}`.
pub fn moser_bound_check<T: Real>(
    u: &GridField<T>,
    lambda: &[T],
    mu: &[T],
    cfg: &ExponentConfig<T>,
    center: T,
    radius: T,
) -> Result<MoserReport<T>> {
    let regime = classify(cfg);
    if regime.tag != RegimeTag::TheoremAdmissible {
        return Err(Error::config(format!("exponents are not admissible ({})", regime.tag.as_str())));
    }
    let mc = moser_constants(cfg)?;
    let g = &*u.grid;
    let sup_val = u.max_over(&g.nodes_in_ball(center, radius * T::lit(0.5)));
    let gamma = bound_gamma(*cfg.p(), *cfg.t());
    let norm = grid_sobolev_norm(&u.positive_part(), center, radius, gamma)?;
    let lam = grid_lambda(g, lambda, mu, *cfg.s(), *cfg.t(), center, radius)?;
    let bound_val = lam.powf(mc.sup_exponent) * norm;
    Ok(MoserReport { sup_val, bound_val, ratio: ratio_of(sup_val, bound_val), lambda: lam, norm })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryReport<T> {
    pub sup_val: T,
    pub bound_val: T,
    pub ratio: T,
    pub exponent: T,
}

/// `sup_{B_{R/2}} u` against `Lambda(B_R)^{e(gamma)} (avg_{B_R} u_+^gamma)^{1/gamma}`.
pub fn corollary_check<T: Real>(
    u: &GridField<T>,
    lambda: &[T],
    mu: &[T],
    cfg: &ExponentConfig<T>,
    gamma: T,
    center: T,
    radius: T,
) -> Result<CorollaryReport<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::config(format!("gamma = {gamma} must be positive")));
    }
    let mc = moser_constants(cfg)?;
    let exponent = mc.corollary_exponent(gamma)?;
    let g = &*u.grid;
    let sup_val = u.max_over(&g.nodes_in_ball(center, radius * T::lit(0.5)));
    let up = u.positive_part();
    let cells = g.cells_in_ball(center, radius);
    let (mut num, mut vol) = (T::zero(), T::zero());
    for &c in &cells {
        let w = g.cell_weight(c);
        num = num + w * g.cell_value(&up.values, c).powf(gamma);
        vol = vol + w;
    }
    let lam = grid_lambda(g, lambda, mu, *cfg.s(), *cfg.t(), center, radius)?;
    let bound_val = lam.powf(exponent) * (num / vol).powf(T::one() / gamma);
    Ok(CorollaryReport { sup_val, bound_val, ratio: ratio_of(sup_val, bound_val), exponent })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereReport<T> {
    pub r0: T,
    pub interior_sup: T,
    pub sphere_sup: T,
    /// `||u_+||_{W^{1,gamma}(S_{r0})}` (unscaled).
    pub sphere_bound: T,
    /// `||u_+||^gamma_{W^{1,gamma}(S_{r0})} <= 2 ||u_+||^gamma_{W^{1,gamma}(B_R)}`.
    pub fubini_ok: bool,
    pub max_principle_ok: bool,
}

const SPHERE_CANDIDATES: usize = 32;
const SPHERE_SAMPLES: usize = 512;

/// Max-principle route on a generic sphere `S_{r0}`, `r0 in (R/2, R)`.
pub fn sphere_max_bound<T: Real>(u: &GridField<T>, cfg: &ExponentConfig<T>, center: T, radius: T, tol: T) -> Result<SphereReport<T>> {
    let d = cfg.d();
    let one = T::one();
    let rhs = (*cfg.p()) / T::lit(f64::from(d) - 1.0);
    let lhs = one + (*cfg.t()).recip();
    if !(lhs < rhs) {
        return Err(Error::config("sphere route needs 1 + 1/t < p/(d - 1)"));
    }
    if u.grid.d != d {
        return Err(Error::GridMismatch(format!("grid dimension {} differs from d = {d}", u.grid.d)));
    }
    let g = &*u.grid;
    let gamma = bound_gamma(*cfg.p(), *cfg.t());
    let up = u.positive_part();
    let sample = |x: T, r: T| -> (T, T) {
        let r = r.max(g.r_lo);
        match g.locate(x, r) {
            Some((c, _, _)) => {
                let gr = g.cell_gradient(&up.values, c);
                (g.interpolate(&up.values, x, r).unwrap_or(T::zero()), gr[0].hypot(gr[1]))
            }
            None => (T::zero(), T::zero()),
        }
    };
    let sigma = crate::scalar::unit_sphere_area::<T>(d - 1);
    let gl = GaussLegendre::<T>::new(16);
    let pi = T::lit(std::f64::consts::PI);
    let panels = 16;
    let sphere_integral = |rad: T| -> T {
        let mut acc = T::zero();
        for k in 0..panels {
            let a = pi * T::from_count(k) / T::from_count(panels);
            let b = pi * T::from_count(k + 1) / T::from_count(panels);
            for (phi, w) in gl.nodes_on(a, b) {
                let (val, grad) = sample(center + rad * phi.cos(), rad * phi.sin());
                let meas = sigma * rad.powi(d as i32 - 1) * phi.sin().powi(d as i32 - 2);
                acc = acc + w * meas * (val.powf(gamma) + grad.powf(gamma));
            }
        }
        acc
    };
    let mut best = (T::infinity(), radius);
    for k in 0..SPHERE_CANDIDATES {
        let rad = radius * (T::lit(0.5) + T::lit(0.5) * (T::from_count(k) + T::lit(0.5)) / T::from_count(SPHERE_CANDIDATES));
        let val = sphere_integral(rad);
        if val < best.0 {
            best = (val, rad);
        }
    }
    let (sphere_pow, r0) = best;
    let (iu, ig) = ball_power_integrals(&up, center, radius, gamma);
    let fubini_ok = sphere_pow <= T::lit(2.0) * (iu + ig) / radius;
    let mut sphere_sup = T::zero();
    for k in 0..=SPHERE_SAMPLES {
        let phi = pi * T::from_count(k) / T::from_count(SPHERE_SAMPLES);
        sphere_sup = sphere_sup.max(sample(center + r0 * phi.cos(), r0 * phi.sin()).0);
    }
    let interior_sup = up.max_over(&g.nodes_in_ball(center, radius * T::lit(0.5))).max(T::zero());
    Ok(SphereReport {
        r0,
        interior_sup,
        sphere_sup,
        sphere_bound: sphere_pow.powf(one / gamma),
        fubini_ok,
        max_principle_ok: interior_sup <= sphere_sup + tol,
    })
}

/// Two-dimensional route: `sup_{B_{R/2}} u` against `||u_+||_{W^{1,1}(B_R)}` (scaled).
pub fn planar_bound<T: Real>(u: &GridField<T>, center: T, radius: T) -> Result<(T, T, T)> {
    if u.grid.d != 2 {
        return Err(Error::config("the planar route needs d = 2"));
    }
    let sup = u.max_over(&u.grid.nodes_in_ball(center, radius * T::lit(0.5)));
    let norm = grid_sobolev_norm(&u.positive_part(), center, radius, T::one())?;
    Ok((sup, norm, ratio_of(sup, norm)))
}

/// `s_*` for the cutoff bound, exposed for reports.
pub fn cutoff_s_star<T: Real>(d: u32, p: T, s: T) -> Result<T> {
    let cfg = ExponentConfig::new(d, p, Exponent::Finite(s), Exponent::Infinite)?;
    Ok(s_star(&cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn annulus_capacity_d3() {
        let g = Arc::new(AxisymGrid::<f64>::ball(3, 0.0, 1.0, 1.0 / 32.0).unwrap());
        let v = GridField::from_fn(g.clone(), |_, _| 1.0);
        let mu = vec![1.0; g.cell_count()];
        let rep = cutoff_optimize(&mu, &v, 0.0, 0.5, 1.0, 2.0, 2.0, 16).unwrap();
        let cap = 4.0 * std::f64::consts::PI;
        assert!(rep.j_min <= rep.j_ramp);
        assert!(((rep.j_min - cap) / cap).abs() < 0.05, "{rep:?}");
        assert!(((rep.j_radial - cap) / cap).abs() < 0.05, "{rep:?}");
        assert!(rep.profile.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn constant_subsolution_has_zero_caccioppoli_lhs() {
        let g = Arc::new(AxisymGrid::<f64>::ball(3, 0.0, 1.0, 0.1).unwrap());
        let u = GridField::from_fn(g.clone(), |_, _| 2.0);
        let eta = smooth_cutoff(g.clone(), 0.0, 0.25, 0.75);
        let ones = vec![1.0; g.cell_count()];
        let rep = caccioppoli_check(&u, &ones, &ones, &eta, 1.0, 2.0).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.rhs > 0.0 && rep.holds(1.0));
    }
}
