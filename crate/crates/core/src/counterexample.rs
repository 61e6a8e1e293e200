//! Explicit unbounded subsolution `v(x) = e^{alpha x_1} phi(|x'|)` of
//! `div(lambda |grad v|^{p-2} grad v) >= 0` with a dyadically oscillating
//! weight `lambda = omega_theta(|x'|)`, together with the numerical
//! certificates for it.
//!
//! Radii are organised in dyadic shells `[4^{-i-1}, 4^{-i})`, each split at
//! `4^{-i}/2` into a power-law ([`Branch::Log`]) outer half and a quadratic
//! ([`Branch::Quad`]) inner half. The flux-matching parameters are stored as
//! `1 - eta_i`, which decays like `16^{-i}` and would otherwise be lost to
//! rounding after a dozen shells.

use crate::error::{Error, Result};
use crate::params::{counterexample_params, CounterexampleParams};
use crate::quadrature::GaussLegendre;
use crate::scalar::{unit_sphere_area, Real};

/// Default deepest resolved shell.
pub const DEFAULT_I_MAX: usize = 64;
/// Step of the downward scan for the largest root.
pub const ETA_SCAN_STEP: f64 = 1e-3;
/// Bisection steps after the scan.
pub const ETA_BISECTION_STEPS: usize = 200;
/// Interior sample count per branch used while determining `j`.
pub const J_SAMPLES_PER_BRANCH: usize = 64;
/// Relative slack for the sign of the shell divergence.
pub const DIVERGENCE_TOL: f64 = 1e-9;
/// Relative slack when comparing `1 - eta_i` with its explicit bound.
pub const ETA_BOUND_RTOL: f64 = 1e-12;
/// Relative tolerance for flux equality at the branch interface.
pub const FLUX_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `r in [4^{-i}/2, 4^{-i})`.
    Log,
    /// `r in [4^{-i}/4, 4^{-i}/2)`.
    Quad,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Log => "LOG",
            Branch::Quad => "QUAD",
        }
    }
}

/// A point `(x_1, r)` tagged with the shell and branch containing `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPoint<T> {
    pub shell: usize,
    pub branch: Branch,
    pub r: T,
    pub x1: T,
}

/// `4^{-i}`, exact in binary floating point.
pub fn shell_outer<T: Real>(i: usize) -> T {
    T::lit(0.25).powi(i as i32)
}

/// `4^{-i}/2`.
pub fn shell_mid<T: Real>(i: usize) -> T {
    shell_outer::<T>(i) * T::lit(0.5)
}

/// `4^{-i}/4`.
pub fn shell_inner<T: Real>(i: usize) -> T {
    shell_outer::<T>(i + 1)
}

/// Interval `[lo, hi)` of a branch.
pub fn branch_interval<T: Real>(i: usize, branch: Branch) -> (T, T) {
    match branch {
        Branch::Log => (shell_mid(i), shell_outer(i)),
        Branch::Quad => (shell_inner(i), shell_mid(i)),
    }
}

/// Shell and branch containing `r in (0, 1)`, with half-open intervals
/// closed on the left.
pub fn locate<T: Real>(r: T) -> Result<(usize, Branch)> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::Domain(r.to_f64_lossy()));
    }
    let guess = (-r.ln() / T::lit(4.0).ln()).floor().to_f64_lossy().max(0.0) as usize;
    let mut i = guess;
    while r < shell_inner::<T>(i) {
        i += 1;
    }
    while i > 0 && r >= shell_outer::<T>(i) {
        i -= 1;
    }
    let branch = if r >= shell_mid::<T>(i) { Branch::Log } else { Branch::Quad };
    Ok((i, branch))
}

impl<T: Real> ShellPoint<T> {
    pub fn new(x1: T, r: T) -> Result<Self> {
        let (shell, branch) = locate(r)?;
        Ok(Self { shell, branch, r, x1 })
    }
}

/// The two flux terms whose difference is `F_i(eta)`.
#[derive(Debug, Clone, Copy)]
pub struct FluxMatching<T> {
    pub p: T,
    pub c_q: T,
    pub alpha: T,
}

impl<T: Real> FluxMatching<T> {
    /// `(ln a, ln b)` with `F_i = a - b`, as functions of `eps = 1 - eta`.
    pub fn log_terms(&self, i: usize, eps: T) -> (T, T) {
        let eta = T::one() - eps;
        let fi = T::from_count(i);
        let ip1 = fi + T::one();
        let ln4 = T::lit(4.0).ln();
        let half_pm2 = (self.p - T::lit(2.0)) * T::lit(0.5);
        let four_i = T::lit(4.0).powi(i as i32);

        let a1 = self.alpha * (fi + eta) / four_i;
        let a2 = self.c_q * eta;
        let ln_a = half_pm2 * T::lit(2.0) * a1.hypot(a2).ln() + a2.ln();

        let b1 = self.alpha * (fi + eta) / ip1;
        let b2 = T::lit(8.0) * eps * four_i / ip1;
        let ln_b = half_pm2 * T::lit(2.0) * b1.hypot(b2).ln()
            + (T::lit(8.0) * eps).ln()
            + T::lit(2.0) * fi * ln4
            - ip1.ln();
        (ln_a, ln_b)
    }

    /// `ln a - ln b`; same sign as `F_i`.
    pub fn log_gap(&self, i: usize, eps: T) -> T {
        let (a, b) = self.log_terms(i, eps);
        if a == T::neg_infinity() && b == T::neg_infinity() {
            return T::zero();
        }
        a - b
    }

    /// `F_i(eta)` evaluated literally.
    pub fn f(&self, i: usize, eta: T) -> T {
        let fi = T::from_count(i);
        let ip1 = fi + T::one();
        let four_i = T::lit(4.0).powi(i as i32);
        let pm2 = self.p - T::lit(2.0);
        let first = (self.alpha * (fi + eta) / four_i).hypot(self.c_q * eta).powf(pm2) * self.c_q * eta;
        let one_m = T::one() - eta;
        let second = (self.alpha * (fi + eta) / ip1)
            .hypot(T::lit(8.0) * one_m * four_i / ip1)
            .powf(pm2)
            * T::lit(8.0)
            * one_m
            * four_i
            * four_i
            / ip1;
        first - second
    }

    /// `|F_i| / max(a, b)` at `eps`.
    pub fn relative_residual(&self, i: usize, eps: T) -> T {
        let g = self.log_gap(i, eps).abs();
        -(-g).exp_m1()
    }
}

/// Largest root of `F_i`, expressed as `eps = 1 - eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaRoot<T> {
    pub eps: T,
    pub residual: T,
    /// Sign changes of `F_i` seen on the scan grid over `(0, 1)`.
    pub sign_changes: usize,
}

/// Finds the largest `eta in (0, 1]` with `F_i(eta) = 0`.
///
/// Scans `eta` downward from 1 in steps of [`ETA_SCAN_STEP`] to the first sign
/// change, then bisects. When the root lies in the first scan cell the lower
/// end of the bracket is found by halving `1 - eta`, so deep shells keep full
/// relative precision in `1 - eta`.
pub fn solve_eta<T: Real>(matching: &FluxMatching<T>, i: usize) -> Result<EtaRoot<T>> {
    let steps = (1.0 / ETA_SCAN_STEP).round() as usize;
    let step = T::lit(ETA_SCAN_STEP);
    let gap = |eps: T| matching.log_gap(i, eps);

    // g(eps) > 0 near eps = 0 (eta = 1) and < 0 near eps = 1.
    let mut first: Option<usize> = None;
    let mut changes = 0;
    let mut prev_positive = true;
    for k in 1..=steps {
        let eps = if k == steps { T::one() } else { T::from_count(k) * step };
        let positive = gap(eps) > T::zero();
        if positive != prev_positive {
            changes += 1;
            if first.is_none() && !positive {
                first = Some(k);
            }
        }
        prev_positive = positive;
    }
    let k = first.ok_or(Error::NoRoot { shell: i })?;

    let mut hi = if k == steps { T::one() } else { T::from_count(k) * step };
    let mut lo = T::from_count(k - 1) * step;
    if k == 1 {
        lo = hi * T::lit(0.5);
        while gap(lo) <= T::zero() {
            hi = lo;
            lo = lo * T::lit(0.5);
            if lo == T::zero() {
                return Err(Error::NoRoot { shell: i });
            }
        }
    }
    for _ in 0..ETA_BISECTION_STEPS {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = if gap(lo).abs() <= gap(hi).abs() { lo } else { hi };
    Ok(EtaRoot { eps, residual: matching.relative_residual(i, eps), sign_changes: changes })
}

/// Flux-matching parameters for shells `0..=i_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaTable<T> {
    pub alpha: T,
    pub i_max: usize,
    /// `1 - eta_i`.
    pub one_minus_eta: Vec<T>,
    pub residuals: Vec<T>,
    pub sign_changes: Vec<usize>,
}

impl<T: Real> EtaTable<T> {
    pub fn build(matching: &FluxMatching<T>, i_max: usize) -> Result<Self> {
        let mut table = EtaTable {
            alpha: matching.alpha,
            i_max,
            one_minus_eta: Vec::with_capacity(i_max + 1),
            residuals: Vec::with_capacity(i_max + 1),
            sign_changes: Vec::with_capacity(i_max + 1),
        };
        for i in 0..=i_max {
            let root = solve_eta(matching, i)?;
            table.one_minus_eta.push(root.eps);
            table.residuals.push(root.residual);
            table.sign_changes.push(root.sign_changes);
        }
        Ok(table)
    }

    pub fn eta(&self, i: usize) -> T {
        T::one() - self.one_minus_eta[i]
    }
}

/// Certified subsolution domain: shells `i >= j`, radius `rho = 4^{-j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certification<T> {
    pub j: usize,
    pub rho: T,
}

/// Value, gradient `(axial, radial)` and `|grad v|^{p-2} grad v` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue<T> {
    pub v: T,
    pub grad: [T; 2],
    pub flux: [T; 2],
}

/// A fully parameterised instance of the construction.
#[derive(Debug, Clone)]
pub struct CounterexampleSpec<T> {
    pub params: CounterexampleParams<T>,
    pub theta: T,
    pub alpha: T,
    pub etas: EtaTable<T>,
    pub certification: Option<Certification<T>>,
}

impl<T: Real> CounterexampleSpec<T> {
    /// Builds the weight/profile pair. `alpha` defaults to `alpha0(d, p)`.
    /// When `alpha >= alpha0` the subsolution domain is certified right
    /// away; smaller drift rates build an uncertified instance.
    pub fn new(d: u32, p: T, theta: T, alpha: Option<T>, i_max: usize) -> Result<Self> {
        let params = counterexample_params(d, p)?;
        if !(theta >= T::zero() && theta <= T::one()) {
            return Err(Error::config(format!("theta = {theta} must lie in [0, 1]")));
        }
        if i_max < 4 {
            return Err(Error::config(format!("i_max = {i_max} is below 4")));
        }
        let alpha = alpha.unwrap_or(params.alpha0);
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::config(format!("alpha = {alpha} must be positive")));
        }
        let matching = FluxMatching { p, c_q: params.c_q, alpha };
        let etas = EtaTable::build(&matching, i_max)?;
        let mut spec = Self { params, theta, alpha, etas, certification: None };
        if alpha >= params.alpha0 {
            let j = spec.determine_j(J_SAMPLES_PER_BRANCH)?;
            spec.certification = Some(Certification { j, rho: shell_outer(j) });
        }
        Ok(spec)
    }

    pub fn d(&self) -> u32 {
        self.params.d
    }

    pub fn p(&self) -> T {
        self.params.p
    }

    pub fn i_max(&self) -> usize {
        self.etas.i_max
    }

    pub fn matching(&self) -> FluxMatching<T> {
        FluxMatching { p: self.params.p, c_q: self.params.c_q, alpha: self.alpha }
    }

    /// Whether `(1 - theta) p < d - 1`, the finite-energy condition.
    pub fn finite_energy(&self) -> bool {
        (T::one() - self.theta) * self.p() < T::lit(f64::from(self.d()) - 1.0)
    }

    fn check_shell(&self, i: usize) -> Result<()> {
        if i > self.i_max() {
            return Err(Error::Domain(shell_outer::<T>(i).to_f64_lossy()));
        }
        Ok(())
    }

    /// `ln omega_theta` on a branch.
    pub fn ln_omega_branch(&self, i: usize, branch: Branch) -> T {
        let p = self.p();
        let ln_ip1 = T::from_count(i + 1).ln();
        let ln4i = T::from_count(i) * T::lit(4.0).ln();
        match branch {
            Branch::Log => (p - T::one()) * self.theta * ln_ip1 - p * ln4i * self.theta,
            Branch::Quad => (T::one() - self.theta) * (p * ln4i - (p - T::one()) * ln_ip1),
        }
    }

    pub fn omega_branch(&self, i: usize, branch: Branch) -> T {
        self.ln_omega_branch(i, branch).exp()
    }

    /// The weight `omega_theta(r)`.
    pub fn omega(&self, r: T) -> Result<T> {
        let (i, branch) = locate(r)?;
        Ok(self.omega_branch(i, branch))
    }

    /// Profile derivative of the given order on an explicit branch, valid on
    /// the closed branch interval.
    pub fn phi_branch(&self, i: usize, branch: Branch, r: T, order: u8) -> Result<T> {
        self.check_shell(i)?;
        let eps = self.etas.one_minus_eta[i];
        let eta = T::one() - eps;
        let q = self.params.q;
        let fi = T::from_count(i);
        let four_i = T::lit(4.0).powi(i as i32);
        let value = match branch {
            Branch::Log => {
                let coef = eta / (T::lit(2.0).powf(q) - T::one());
                let scaled = (four_i * r).powf(-q);
                match order {
                    0 => fi + coef * (scaled - T::one()),
                    1 => -q * coef * scaled / r,
                    2 => q * (q + T::one()) * coef * scaled / (r * r),
                    _ => return Err(Error::config(format!("derivative order {order} unsupported"))),
                }
            }
            Branch::Quad => {
                let four_ip1 = four_i * T::lit(4.0);
                let u = four_ip1 * r - T::one();
                match order {
                    0 => fi + T::one() - eps * u * u,
                    1 => -T::lit(2.0) * eps * four_ip1 * u,
                    2 => -T::lit(2.0) * eps * four_ip1 * four_ip1,
                    _ => return Err(Error::config(format!("derivative order {order} unsupported"))),
                }
            }
        };
        Ok(value)
    }

    /// Radial profile `phi` (order 0) and its derivatives (orders 1, 2).
    /// Derivatives at a branch interface are rejected because they jump there.
    pub fn phi(&self, r: T, order: u8) -> Result<T> {
        let (i, branch) = locate(r)?;
        if order > 0 && (r == shell_mid::<T>(i) || r == shell_inner::<T>(i) || r == shell_outer::<T>(i)) {
            return Err(Error::InterfaceDerivative { r: r.to_f64_lossy(), order });
        }
        self.phi_branch(i, branch, r, order)
    }

    pub fn field(&self, x1: T, r: T) -> Result<FieldValue<T>> {
        let phi = self.phi(r, 0)?;
        let dphi = self.phi(r, 1)?;
        let a = self.alpha;
        let e = (a * x1).exp();
        let norm = (a * phi).hypot(dphi);
        let flux_scale = norm.powf(self.p() - T::lit(2.0)) * (a * (self.p() - T::one()) * x1).exp();
        Ok(FieldValue {
            v: e * phi,
            grad: [a * phi * e, dphi * e],
            flux: [flux_scale * a * phi, flux_scale * dphi],
        })
    }

    /// `div(|grad v|^{p-2} grad v)` at an interior point of a branch, and a
    /// magnitude scale built from the absolute values of its terms.
    pub fn shell_divergence_with_scale(&self, pt: &ShellPoint<T>) -> Result<(T, T)> {
        let (i, b, r) = (pt.shell, pt.branch, pt.r);
        let phi = self.phi_branch(i, b, r, 0)?;
        let d1 = self.phi_branch(i, b, r, 1)?;
        let d2 = self.phi_branch(i, b, r, 2)?;
        let a2 = self.alpha * self.alpha;
        let p = self.p();
        let dm2 = T::lit(f64::from(self.d()) - 2.0);
        let n2 = a2 * phi * phi + d1 * d1;
        if n2 == T::zero() {
            return Err(Error::DegenerateGradient { shell: i, r: r.to_f64_lossy() });
        }
        let t1 = a2 * (p - T::one()) * n2 * phi;
        let t2 = (p - T::lit(2.0)) * d1 * d1 * (a2 * phi + d2);
        let t3 = n2 * (d2 + dm2 * d1 / r);
        let pref = n2.powf((p - T::lit(4.0)) * T::lit(0.5)) * (self.alpha * (p - T::one()) * pt.x1).exp();
        let scale = (t1.abs() + (p - T::lit(2.0)).abs() * d1 * d1 * (a2 * phi.abs() + d2.abs()) + n2 * (d2.abs() + dm2 * d1.abs() / r)) * pref;
        Ok(((t1 + t2 + t3) * pref, scale))
    }

    pub fn shell_divergence(&self, pt: &ShellPoint<T>) -> Result<T> {
        self.shell_divergence_with_scale(pt).map(|(v, _)| v)
    }

    /// `omega |grad v|^{p-2} d_r v` at `x_1 = 0` on an explicit branch.
    pub fn radial_flux_branch(&self, i: usize, branch: Branch, r: T) -> Result<T> {
        let phi = self.phi_branch(i, branch, r, 0)?;
        let d1 = self.phi_branch(i, branch, r, 1)?;
        if d1 == T::zero() {
            return Ok(T::zero());
        }
        let ln_mag = self.ln_omega_branch(i, branch)
            + (self.p() - T::lit(2.0)) * (self.alpha * phi).hypot(d1).ln()
            + d1.abs().ln();
        Ok(ln_mag.exp() * d1.signum())
    }

    /// Interface flux checks on shells in `range`.
    pub fn verify_flux_jumps(&self, range: std::ops::RangeInclusive<usize>) -> Result<FluxJumpReport<T>> {
        let mut rows = Vec::new();
        for i in range {
            self.check_shell(i)?;
            let gamma = shell_mid::<T>(i);
            let left = self.radial_flux_branch(i, Branch::Quad, gamma)?;
            let right = self.radial_flux_branch(i, Branch::Log, gamma)?;
            let scale = left.abs().max(right.abs());
            let ok = (left - right).abs() <= T::lit(FLUX_MATCH_TOL) * scale;
            rows.push(FluxJumpRow { shell: i, kind: InterfaceKind::Mid, gamma, left, right, ok });
            if i >= 1 {
                let gamma = shell_outer::<T>(i);
                let left = self.radial_flux_branch(i, Branch::Log, gamma)?;
                let right = self.radial_flux_branch(i - 1, Branch::Quad, gamma)?;
                let ok = right == T::zero() && left < T::zero();
                rows.push(FluxJumpRow { shell: i, kind: InterfaceKind::Outer, gamma, left, right, ok });
            }
        }
        let passed = rows.iter().all(|r| r.ok);
        Ok(FluxJumpReport { rows, passed })
    }

    /// `1 - eta` bound beyond which the lower bound on `eta_i` fails.
    pub fn eps_upper_bound(&self, i: usize) -> T {
        let p = self.p();
        let decay = T::lit(4.0).powi(-2 * i as i32) * T::from_count(i + 1) / T::lit(8.0);
        if p >= T::lit(2.0) {
            T::lit(4.0).powf(p - T::lit(2.0)) * self.params.c_q * decay
        } else {
            self.alpha * decay
        }
    }

    /// Whether the explicit lower bound on `eta_i` holds and lies in `(0, 1)`.
    /// The bound is asymptotically sharp at `p = 2`, hence the relative slack.
    pub fn eta_lower_bound_holds(&self, i: usize) -> bool {
        let bound = self.eps_upper_bound(i);
        bound > T::zero()
            && bound < T::one()
            && self.etas.one_minus_eta[i] <= bound * (T::one() + T::lit(ETA_BOUND_RTOL))
    }

    /// Minimum of `div / scale` over a deterministic interior sample of one branch.
    pub fn min_scaled_divergence(&self, i: usize, branch: Branch, samples: usize) -> Result<T> {
        let (lo, hi) = branch_interval::<T>(i, branch);
        let mut min = T::infinity();
        for k in 0..samples {
            let r = lo + (hi - lo) * (T::from_count(k) + T::lit(0.5)) / T::from_count(samples);
            let pt = ShellPoint { shell: i, branch, r, x1: T::zero() };
            let (div, scale) = self.shell_divergence_with_scale(&pt)?;
            min = min.min(div / scale);
        }
        Ok(min)
    }

    /// Smallest `j >= 2` such that every shell in `[j, i_max]` satisfies the
    /// `eta` lower bound and has sampled nonnegative divergence.
    pub fn determine_j(&self, samples_per_branch: usize) -> Result<usize> {
        let alpha0 = self.params.alpha0;
        if self.alpha < alpha0 {
            return Err(Error::AlphaBelowThreshold {
                alpha: self.alpha.to_f64_lossy(),
                alpha0: alpha0.to_f64_lossy(),
            });
        }
        let tol = T::lit(DIVERGENCE_TOL);
        let mut j = 2;
        for i in 2..=self.i_max() {
            let mut ok = self.eta_lower_bound_holds(i);
            for branch in [Branch::Log, Branch::Quad] {
                ok = ok && self.min_scaled_divergence(i, branch, samples_per_branch)? >= -tol;
            }
            if !ok {
                j = i + 1;
            }
        }
        if j > self.i_max() {
            return Err(Error::Verification(format!(
                "no certified shell index up to i_max = {}",
                self.i_max()
            )));
        }
        Ok(j)
    }

    /// A point on the axis where `v >= m`: `(x_1, r) = (0, 4^{-i})`, `i = ceil(m)`,
    /// with `v = i` exactly.
    pub fn unbounded_point(&self, m: T) -> Result<(T, T, T)> {
        let i = m.ceil().max(T::one()).to_f64_lossy() as usize;
        if i > self.i_max() {
            return Err(Error::Domain(shell_outer::<T>(i.min(1000)).to_f64_lossy()));
        }
        let r = shell_outer::<T>(i);
        let v = self.phi_branch(i, Branch::Log, r, 0)?;
        Ok((T::zero(), r, v))
    }

    /// Axis-cutoff commutator `int eta lambda |grad v|^{p-2} |grad v . grad psi_k(|x'|)|`
    /// over `{4^{-k}/2 < |x'| < 4^{-k}} cap B_1`, with the C^1 smoothstep cutoff
    /// `psi_k` (slope at most `3 * 4^k`).
    pub fn mollified_residual(&self, k: usize, test: &dyn Fn(T, T) -> T) -> Result<T> {
        self.check_shell(k)?;
        let (lo, hi) = branch_interval::<T>(k, Branch::Log);
        let width = hi - lo;
        let radial = GaussLegendre::<T>::new(16);
        let axial = GaussLegendre::<T>::new(16);
        let (radial_panels, axial_panels) = (4, 8);
        let p = self.p();
        let dm2 = i32::try_from(self.d()).unwrap_or(i32::MAX) - 2;
        let mut total = T::zero();
        for rp in 0..radial_panels {
            let a = lo + width * T::from_count(rp) / T::from_count(radial_panels);
            let b = lo + width * T::from_count(rp + 1) / T::from_count(radial_panels);
            for (r, wr) in radial.nodes_on(a, b) {
                let u = (r - lo) / width;
                let dpsi = T::lit(6.0) * u * (T::one() - u) / width;
                let phi = self.phi_branch(k, Branch::Log, r, 0)?;
                let d1 = self.phi_branch(k, Branch::Log, r, 1)?;
                let radial_part = self.omega_branch(k, Branch::Log)
                    * (self.alpha * phi).hypot(d1).powf(p - T::lit(2.0))
                    * d1.abs()
                    * dpsi
                    * r.powi(dm2);
                let half = (T::one() - r * r).sqrt();
                let mut inner = T::zero();
                for ap in 0..axial_panels {
                    let xa = -half + T::lit(2.0) * half * T::from_count(ap) / T::from_count(axial_panels);
                    let xb = -half + T::lit(2.0) * half * T::from_count(ap + 1) / T::from_count(axial_panels);
                    for (x1, wx) in axial.nodes_on(xa, xb) {
                        let t = test(x1, r);
                        if t != T::zero() {
                            inner = inner + wx * t * (self.alpha * (p - T::one()) * x1).exp();
                        }
                    }
                }
                total = total + wr * radial_part * inner;
            }
        }
        Ok(total * unit_sphere_area::<T>(self.d() - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceKind {
    /// `gamma = 4^{-i}/2`: flux must match.
    Mid,
    /// `gamma = 4^{-i}`: flux must jump upward.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxJumpRow<T> {
    pub shell: usize,
    pub kind: InterfaceKind,
    pub gamma: T,
    pub left: T,
    pub right: T,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxJumpReport<T> {
    pub rows: Vec<FluxJumpRow<T>>,
    pub passed: bool,
}
