//! Radial-axial quadrature on balls centred on the `x_1` axis.
//!
//! Axisymmetric integrands are written as `g(r) e^{kappa x_1}` with
//! `r = |x'|`; the axial factor is integrated in closed form and the radial
//! factor by Gauss-Legendre panels aligned with the dyadic branch boundaries.
//! Shells below the resolved depth are summed analytically from a
//! per-branch [`TailModel`] whose constant is fitted to the deepest shell.

use crate::counterexample::{branch_interval, Branch, CounterexampleSpec};
use crate::error::{Error, Result};
use crate::params::Exponent;
use crate::scalar::{unit_ball_volume, unit_sphere_area, Real};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `n`-point rule; nodes by Newton iteration on `P_n` in binary64.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for k in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for m in 2..=n {
                    let mf = m as f64;
                    let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm1 = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pm1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = T::lit(-x);
            nodes[n - 1 - k] = T::lit(x);
            weights[k] = T::lit(w);
            weights[n - 1 - k] = T::lit(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn nodes_on(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        self.nodes_on(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }

    /// Same as [`integrate`](Self::integrate) after `x = b - (b - a) tau^2`,
    /// which removes a square-root endpoint singularity at `b`.
    pub fn integrate_sqrt_end(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        let two = T::lit(2.0);
        self.integrate(T::zero(), T::one(), |tau| f(b - (b - a) * tau * tau) * two * (b - a) * tau)
    }
}

/// Hurwitz zeta `sum_{n >= 0} (n + q)^{-s}` for `s > 1`, `q > 0`.
pub fn hurwitz_zeta<T: Real>(s: T, q: T) -> T {
    assert!(s > T::one() && q > T::zero(), "hurwitz zeta needs s > 1, q > 0");
    const M: usize = 12;
    // B_{2k} / (2k)!
    const B: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let mut sum = T::zero();
    for n in 0..M {
        sum = sum + (q + T::from_count(n)).powf(-s);
    }
    let a = q + T::from_count(M);
    sum = sum + a.powf(T::one() - s) / (s - T::one()) + T::lit(0.5) * a.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times a^{-s-2k+1}
    let mut rising = s;
    let mut power = a.powf(-s - T::one());
    for (k, &b) in B.iter().enumerate() {
        sum = sum + T::lit(b) * rising * power;
        let kk = T::from_count(2 * k + 1);
        rising = rising * (s + kk) * (s + kk + T::one());
        power = power / (a * a);
    }
    sum
}

/// Per-shell asymptotics `c_i ~ C (i + 1)^power 4^{log4_ratio * i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel<T> {
    pub power: T,
    pub log4_ratio: T,
}

/// Exponents within this distance of zero are treated as exactly zero.
const RATIO_ZERO: f64 = 1e-12;
const MAX_TAIL_TERMS: usize = 2_000_000;

impl<T: Real> TailModel<T> {
    /// Shell volumes in `R^d`.
    pub fn volume(d: u32) -> Self {
        Self { power: T::zero(), log4_ratio: -T::lit(f64::from(d) - 1.0) }
    }

    pub fn summable(&self) -> bool {
        let e = self.log4_ratio;
        if e.abs() <= T::lit(RATIO_ZERO) {
            self.power < -T::one()
        } else {
            e < T::zero()
        }
    }

    /// `sum_{i > n} c_i / c_n`; infinite when the series diverges.
    pub fn tail_factor(&self, n: usize) -> T {
        if !self.summable() {
            return T::infinity();
        }
        let a = self.power;
        let base = T::from_count(n + 1);
        if self.log4_ratio.abs() <= T::lit(RATIO_ZERO) {
            return hurwitz_zeta(-a, T::from_count(n + 2)) * base.powf(-a);
        }
        let ratio = T::lit(4.0).powf(self.log4_ratio);
        let mut sum = T::zero();
        let mut geo = T::one();
        for m in 1..=MAX_TAIL_TERMS {
            geo = geo * ratio;
            let term = (T::from_count(n + 1 + m) / base).powf(a) * geo;
            sum = sum + term;
            if term <= sum * T::epsilon() * T::lit(0.01) {
                return sum;
            }
        }
        let last = (T::from_count(n + 1 + MAX_TAIL_TERMS) / base).powf(a) * geo;
        sum + last * ratio / (T::one() - ratio)
    }
}

/// Resolution of the shell quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellQuadRule {
    /// Deepest resolved shell index.
    pub depth: usize,
    /// Panels per shell, split evenly between the two branches.
    pub panels_per_shell: usize,
    pub nodes_per_panel: usize,
    pub rtol: f64,
}

impl Default for ShellQuadRule {
    fn default() -> Self {
        Self { depth: 48, panels_per_shell: 4, nodes_per_panel: 16, rtol: 1e-6 }
    }
}

impl ShellQuadRule {
    pub fn with_depth(depth: usize) -> Self {
        Self { depth, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 4 {
            return Err(Error::config(format!("depth = {} is below 4", self.depth)));
        }
        if self.panels_per_shell < 2 || self.panels_per_shell % 2 != 0 {
            return Err(Error::config(format!(
                "panels_per_shell = {} must be even and at least 2",
                self.panels_per_shell
            )));
        }
        if self.nodes_per_panel < 4 {
            return Err(Error::config(format!("nodes_per_panel = {} is below 4", self.nodes_per_panel)));
        }
        if !(self.rtol > 0.0) {
            return Err(Error::config("rtol must be positive"));
        }
        Ok(())
    }
}

/// An integral with shell-depth convergence evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult<T> {
    pub name: String,
    /// Resolved shells plus the analytic tail.
    pub value: T,
    /// Analytic contribution of shells beyond `depth`.
    pub tail_estimate: T,
    /// Disagreement of the tail between fits at the last two shells.
    pub tail_error: T,
    pub depth: usize,
    /// Extrapolated value with only shells `0..=k` resolved, for `k >= 4`.
    pub history: Vec<(usize, T)>,
    /// Resolved contribution of each shell.
    pub shells: Vec<T>,
    pub converged: bool,
}

impl<T: Real> IntegralResult<T> {
    pub fn value_at(&self, depth: usize) -> Option<T> {
        self.history.iter().find(|(k, _)| *k == depth).map(|(_, v)| *v)
    }

    pub fn diverges(&self) -> bool {
        !self.tail_estimate.is_finite()
    }

    /// `value^e`, with tail quantities propagated to first order.
    pub fn powf(mut self, e: T) -> Self {
        let v = self.value;
        if v.is_finite() && v > T::zero() {
            let scale = e.abs() * v.powf(e) / v;
            self.tail_estimate = self.tail_estimate * scale;
            self.tail_error = self.tail_error * scale;
        }
        self.value = if v.is_finite() { v.powf(e) } else { v };
        for h in &mut self.history {
            h.1 = if h.1.is_finite() { h.1.powf(e) } else { h.1 };
        }
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Relative change of the extrapolated value between two depths.
    pub fn relative_change(&self, from: usize, to: usize) -> Option<T> {
        let a = self.value_at(from)?;
        let b = self.value_at(to)?;
        Some(((b - a) / b.abs().max(T::min_positive_value())).abs())
    }
}

/// Ball `B_radius((center, 0))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<T> {
    pub center: T,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn unit() -> Self {
        Self { center: T::zero(), radius: T::one() }
    }

    pub fn volume(&self, d: u32) -> T {
        unit_ball_volume::<T>(d) * self.radius.powi(d as i32)
    }
}

/// `int_{center - L}^{center + L} e^{kappa x} dx`.
pub fn axial_factor<T: Real>(kappa: T, center: T, half: T) -> T {
    let z = kappa * half;
    let core = if z.abs() < T::lit(1e-6) {
        T::lit(2.0) * half * (T::one() + z * z / T::lit(6.0))
    } else {
        T::lit(2.0) * z.sinh() / kappa
    };
    core * (kappa * center).exp()
}

/// `int_0^R h(i, b, r) dr` over shells, with tail extrapolation.
/// `models[0]` describes LOG branches, `models[1]` QUAD branches.
fn shell_sum<T: Real>(
    name: &str,
    radius: T,
    rule: &ShellQuadRule,
    models: [TailModel<T>; 2],
    h: &dyn Fn(usize, Branch, T) -> T,
) -> Result<IntegralResult<T>> {
    rule.validate()?;
    let gl = GaussLegendre::<T>::new(rule.nodes_per_panel);
    let per_branch = rule.panels_per_shell / 2;
    let mut contrib = vec![[T::zero(); 2]; rule.depth + 1];
    for (i, c) in contrib.iter_mut().enumerate() {
        for (slot, branch) in [Branch::Log, Branch::Quad].into_iter().enumerate() {
            let (lo, hi) = branch_interval::<T>(i, branch);
            if lo >= radius {
                continue;
            }
            let at_edge = hi >= radius;
            let hi = if at_edge { radius } else { hi };
            let mut total = T::zero();
            for k in 0..per_branch {
                let a = lo + (hi - lo) * T::from_count(k) / T::from_count(per_branch);
                let b = lo + (hi - lo) * T::from_count(k + 1) / T::from_count(per_branch);
                let f = |r: T| h(i, branch, r);
                total = total
                    + if at_edge && k + 1 == per_branch { gl.integrate_sqrt_end(a, b, f) } else { gl.integrate(a, b, f) };
            }
            if !total.is_finite() {
                return Err(Error::NonFinite { shell: i, r: lo.to_f64_lossy() });
            }
            c[slot] = total;
        }
    }

    let fitted = |n: usize, slot: usize| -> T {
        let m = models[slot];
        let c = contrib[n][slot];
        if c == T::zero() {
            return T::zero();
        }
        c * m.tail_factor(n)
    };
    let tail_at = |n: usize| fitted(n, 0) + fitted(n, 1);
    let mut partial = vec![T::zero(); rule.depth + 1];
    let mut acc = T::zero();
    for (n, c) in contrib.iter().enumerate() {
        acc = acc + c[0] + c[1];
        partial[n] = acc;
    }
    let history: Vec<(usize, T)> = (4..=rule.depth).map(|n| (n, partial[n] + tail_at(n))).collect();
    let n = rule.depth;
    let tail = tail_at(n);
    let value = partial[n] + tail;
    // Tail predicted for shells > n from the fit at n - 1 versus the fit at n.
    let tail_error = if tail.is_finite() {
        let from_prev = tail_at(n - 1) - (contrib[n][0] + contrib[n][1]);
        (from_prev - tail).abs()
    } else {
        T::infinity()
    };
    let rtol = T::lit(rule.rtol);
    let scale = value.abs();
    let stable = history
        .iter()
        .find(|(k, _)| *k == n - 4)
        .map(|(_, v)| (value - *v).abs() <= rtol * scale)
        .unwrap_or(false);
    let converged = tail.is_finite() && tail_error <= rtol * scale && stable;
    Ok(IntegralResult {
        name: name.to_string(),
        value,
        tail_estimate: tail,
        tail_error,
        depth: n,
        history,
        shells: contrib.iter().map(|c| c[0] + c[1]).collect(),
        converged,
    })
}

/// `int_{B} g(i, b, r) e^{kappa x_1} dx` in `R^d` for a ball on the axis.
pub fn integrate_ball_radial<T: Real>(
    name: &str,
    d: u32,
    ball: Ball<T>,
    kappa: T,
    rule: &ShellQuadRule,
    models: [TailModel<T>; 2],
    g: &dyn Fn(usize, Branch, T) -> T,
) -> Result<IntegralResult<T>> {
    if d < 2 {
        return Err(Error::config("radial quadrature needs d >= 2"));
    }
    let sigma = unit_sphere_area::<T>(d - 1);
    let dm2 = d as i32 - 2;
    let r2 = ball.radius * ball.radius;
    let h = |i: usize, b: Branch, r: T| {
        let half = (r2 - r * r).max(T::zero()).sqrt();
        sigma * g(i, b, r) * r.powi(dm2) * axial_factor(kappa, ball.center, half)
    };
    shell_sum(name, ball.radius, rule, models, &h)
}

/// `int_0^1 g(r) r^{d-2} dr`.
pub fn integrate_radial<T: Real>(
    name: &str,
    d: u32,
    rule: &ShellQuadRule,
    models: [TailModel<T>; 2],
    g: &dyn Fn(usize, Branch, T) -> T,
) -> Result<IntegralResult<T>> {
    let dm2 = d as i32 - 2;
    let h = |i: usize, b: Branch, r: T| g(i, b, r) * r.powi(dm2);
    shell_sum(name, T::one(), rule, models, &h)
}

fn finite_exponent<T: Real>(e: Exponent<T>, what: &str) -> Result<T> {
    e.finite().copied().ok_or_else(|| Error::config(format!("{what} must be finite for an integral norm")))
}

/// `||lambda_theta||_{L^s(B)}` and `||lambda_theta^{-1}||_{L^t(B)}`.
pub fn weight_norms_on<T: Real>(
    spec: &CounterexampleSpec<T>,
    s: Exponent<T>,
    t: Exponent<T>,
    ball: Ball<T>,
    rule: &ShellQuadRule,
) -> Result<(IntegralResult<T>, IntegralResult<T>)> {
    let s = finite_exponent(s, "s")?;
    let t = finite_exponent(t, "t")?;
    let (d, p, th) = (spec.d(), spec.p(), spec.theta);
    let dm1 = T::lit(f64::from(d) - 1.0);
    let one = T::one();
    let model = |e: T| {
        [
            TailModel { power: (p - one) * th * e, log4_ratio: -p * th * e - dm1 },
            TailModel { power: -(p - one) * (one - th) * e, log4_ratio: p * (one - th) * e - dm1 },
        ]
    };
    let ln_w = |i: usize, b: Branch| spec.ln_omega_branch(i, b);
    let norm_s = integrate_ball_radial("weight_Ls", d, ball, T::zero(), rule, model(s), &|i, b, _| {
        (s * ln_w(i, b)).exp()
    })?
    .powf(one / s);
    let norm_t = integrate_ball_radial("inverse_weight_Lt", d, ball, T::zero(), rule, model(-t), &|i, b, _| {
        (-t * ln_w(i, b)).exp()
    })?
    .powf(one / t);
    Ok((norm_s, norm_t))
}

pub fn weight_norms<T: Real>(
    spec: &CounterexampleSpec<T>,
    s: Exponent<T>,
    t: Exponent<T>,
    rule: &ShellQuadRule,
) -> Result<(IntegralResult<T>, IntegralResult<T>)> {
    weight_norms_on(spec, s, t, Ball::unit(), rule)
}

/// `int_{B_1} lambda_theta |v|^p` and `int_{B_1} lambda_theta |grad v|^p`.
pub fn energy_integrals<T: Real>(
    spec: &CounterexampleSpec<T>,
    rule: &ShellQuadRule,
) -> Result<(IntegralResult<T>, IntegralResult<T>)> {
    let (d, p, th) = (spec.d(), spec.p(), spec.theta);
    if rule.depth > spec.i_max() {
        return Err(Error::config(format!("depth {} exceeds i_max {}", rule.depth, spec.i_max())));
    }
    let dm1 = T::lit(f64::from(d) - 1.0);
    let one = T::one();
    let quad_power = p - (p - one) * (one - th);
    let slow = p * (one - th) - dm1;
    let zeroth_models = [
        TailModel { power: (p - one) * th + p, log4_ratio: -p * th - dm1 },
        TailModel { power: quad_power, log4_ratio: slow },
    ];
    let first_models = [
        TailModel { power: (p - one) * th, log4_ratio: slow },
        TailModel { power: quad_power, log4_ratio: slow },
    ];
    let kappa = spec.alpha * p;
    let ball = Ball::unit();
    let zeroth = integrate_ball_radial("energy_zeroth", d, ball, kappa, rule, zeroth_models, &|i, b, r| {
        let phi = spec.phi_branch(i, b, r, 0).unwrap_or(T::nan());
        spec.omega_branch(i, b) * phi.abs().powf(p)
    })?;
    let first = integrate_ball_radial("energy_first", d, ball, kappa, rule, first_models, &|i, b, r| {
        let phi = spec.phi_branch(i, b, r, 0).unwrap_or(T::nan());
        let d1 = spec.phi_branch(i, b, r, 1).unwrap_or(T::nan());
        spec.omega_branch(i, b) * (spec.alpha * phi).hypot(d1).powf(p)
    })?;
    Ok((zeroth, first))
}

/// Polar Gauss-Legendre rule on a ball in the `(x_1, r)` half-plane, for
/// integrands smooth on the closed ball.
#[derive(Debug, Clone)]
pub struct PolarRule<T> {
    gl: GaussLegendre<T>,
    panels: usize,
}

impl<T: Real> PolarRule<T> {
    pub fn new(nodes: usize, panels: usize) -> Self {
        Self { gl: GaussLegendre::new(nodes), panels: panels.max(1) }
    }

    /// Calls `visit(x1, r, weight)` on every node; the weights sum to the
    /// ball volume in `R^d`.
    pub fn for_each(&self, d: u32, ball: Ball<T>, mut visit: impl FnMut(T, T, T)) {
        let sigma = unit_sphere_area::<T>(d - 1);
        let pi = T::lit(std::f64::consts::PI);
        let n = T::from_count(self.panels);
        for pr in 0..self.panels {
            let (ra, rb) = (ball.radius * T::from_count(pr) / n, ball.radius * T::from_count(pr + 1) / n);
            for (rho, wr) in self.gl.nodes_on(ra, rb) {
                for pa in 0..self.panels {
                    let (aa, ab) = (pi * T::from_count(pa) / n, pi * T::from_count(pa + 1) / n);
                    for (ang, wa) in self.gl.nodes_on(aa, ab) {
                        let r = rho * ang.sin();
                        let x1 = ball.center + rho * ang.cos();
                        let w = sigma * wr * wa * rho * r.powi(d as i32 - 2);
                        visit(x1, r, w);
                    }
                }
            }
        }
    }

    pub fn integrate(&self, d: u32, ball: Ball<T>, f: impl Fn(T, T) -> T) -> T {
        let mut acc = T::zero();
        self.for_each(d, ball, |x1, r, w| acc = acc + w * f(x1, r));
        acc
    }
}

impl<T: Real> Default for PolarRule<T> {
    fn default() -> Self {
        Self::new(16, 4)
    }
}

/// `R^{-d/gamma} ||u||_{L^gamma(B_R)} + R^{1-d/gamma} ||grad u||_{L^gamma(B_R)}`
/// from the two integrals `int |u|^gamma` and `int |grad u|^gamma`.
pub fn scaled_sobolev_norm<T: Real>(d: u32, gamma: T, radius: T, int_u: T, int_grad: T) -> Result<T> {
    if !(gamma >= T::one()) {
        return Err(Error::config(format!("gamma = {gamma} must be at least 1")));
    }
    let dg = T::lit(f64::from(d)) / gamma;
    let inv = T::one() / gamma;
    Ok(radius.powf(-dg) * int_u.powf(inv) + radius.powf(T::one() - dg) * int_grad.powf(inv))
}

/// Scale-invariant `W^{1,gamma}` norm of a smooth axisymmetric function given
/// as `f(x1, r) = (u, |grad u|)`.
pub fn sobolev_norm<T: Real>(
    d: u32,
    gamma: T,
    ball: Ball<T>,
    rule: &PolarRule<T>,
    f: impl Fn(T, T) -> (T, T),
) -> Result<T> {
    if !(gamma >= T::one()) {
        return Err(Error::config(format!("gamma = {gamma} must be at least 1")));
    }
    let (mut iu, mut ig) = (T::zero(), T::zero());
    rule.for_each(d, ball, |x1, r, w| {
        let (u, g) = f(x1, r);
        iu = iu + w * u.abs().powf(gamma);
        ig = ig + w * g.abs().powf(gamma);
    });
    scaled_sobolev_norm(d, gamma, ball.radius, iu, ig)
}

/// `(avg mu^s)^{1/s} (avg lambda^{-t})^{1/t}` on a ball; infinite exponents
/// take the sampled essential supremum.
pub fn lambda_functional<T: Real>(
    d: u32,
    ball: Ball<T>,
    s: Exponent<T>,
    t: Exponent<T>,
    rule: &PolarRule<T>,
    lambda: impl Fn(T, T) -> T,
    mu: impl Fn(T, T) -> T,
) -> Result<T> {
    let vol = ball.volume(d);
    let (mut ms, mut lt) = (T::zero(), T::zero());
    let (mut mu_sup, mut inv_sup) = (T::zero(), T::zero());
    let mut bad = None;
    rule.for_each(d, ball, |x1, r, w| {
        let (l, m) = (lambda(x1, r), mu(x1, r));
        if !(l > T::zero()) || !(m > T::zero()) {
            bad = Some((l, m));
            return;
        }
        if let Exponent::Finite(s) = s {
            ms = ms + w * m.powf(s);
        }
        if let Exponent::Finite(t) = t {
            lt = lt + w * l.powf(-t);
        }
        mu_sup = mu_sup.max(m);
        inv_sup = inv_sup.max(T::one() / l);
    });
    if let Some((l, m)) = bad {
        return Err(Error::config(format!("weights must be positive (lambda = {l}, mu = {m})")));
    }
    let mu_part = match s {
        Exponent::Finite(s) => (ms / vol).powf(T::one() / s),
        Exponent::Infinite => mu_sup,
    };
    let lambda_part = match t {
        Exponent::Finite(t) => (lt / vol).powf(T::one() / t),
        Exponent::Infinite => inv_sup,
    };
    Ok(mu_part * lambda_part)
}

/// `Lambda(B)` for `lambda = mu = lambda_theta`, by exact shell sums.
pub fn lambda_counterexample<T: Real>(
    spec: &CounterexampleSpec<T>,
    s: Exponent<T>,
    t: Exponent<T>,
    ball: Ball<T>,
    rule: &ShellQuadRule,
) -> Result<T> {
    let (ns, nt) = weight_norms_on(spec, s, t, ball, rule)?;
    let vol = ball.volume(spec.d());
    let s = finite_exponent(s, "s")?;
    let t = finite_exponent(t, "t")?;
    Ok(ns.value * vol.powf(-T::one() / s) * nt.value * vol.powf(-T::one() / t))
}
