use degenlab::counterexample::{branch_interval, Branch, CounterexampleSpec};
use degenlab::params::Exponent;
use degenlab::quadrature::{
    energy_integrals, integrate_ball_radial, sobolev_norm, weight_norms, Ball, PolarRule, ShellQuadRule, TailModel,
};
use std::f64::consts::PI;

/// `int_0^r t^2 sqrt(1 - t^2) dt`.
fn g4(r: f64) -> f64 {
    if r < 0.05 {
        // binomial series of sqrt(1 - t^2)
        let (mut c, mut sum) = (1.0, 0.0);
        for k in 0..30 {
            if k > 0 {
                c *= (k as f64 - 1.5) / k as f64;
            }
            sum += c * r.powi(2 * k + 3) / (2 * k + 3) as f64;
        }
        sum
    } else {
        (r.asin() - r * (1.0 - 2.0 * r * r) * (1.0 - r * r).sqrt()) / 8.0
    }
}

/// Volume of `{x in B_1 in R^4 : a <= |x'| < b}`.
fn slab_volume4(a: f64, b: f64) -> f64 {
    4.0 * PI * 2.0 * (g4(b) - g4(a))
}

/// `slab / (8 pi / 3 (hi^3 - lo^3))`; the branch radii halve, so `lo = hi / 2`.
fn g4_ratio(i: usize, b: Branch) -> f64 {
    let (lo, hi) = branch_interval::<f64>(i.min(20), b);
    if i > 20 {
        return 1.0;
    }
    slab_volume4(lo, hi) / (8.0 * PI / 3.0 * (hi.powi(3) - lo.powi(3)))
}

/// `int_{B_1} omega^e` in `R^4` as an explicit shell series, with an
/// Euler-Maclaurin tail for terms decaying like `(i + 1)^{-a}`.
fn weight_power_series(spec: &CounterexampleSpec<f64>, e: f64) -> f64 {
    let n = 200_000;
    let mut sum = 0.0;
    let mut last = [0.0; 2];
    for i in 0..n {
        for (slot, b) in [Branch::Log, Branch::Quad].into_iter().enumerate() {
            let ln_w = e * spec.ln_omega_branch(i, b);
            let term = if i < 5 {
                let (lo, hi) = branch_interval::<f64>(i, b);
                ln_w.exp() * slab_volume4(lo, hi)
            } else {
                // leading r^3 / 3 term in log space; 4^{-i} underflows deep down
                let ln_hi = -(i as f64) * 4f64.ln() - if b == Branch::Quad { 2f64.ln() } else { 0.0 };
                let shrink: f64 = 1.0 - 0.125;
                let correction = g4_ratio(i, b);
                (ln_w + (8.0 * PI / 3.0).ln() + 3.0 * ln_hi + shrink.ln()).exp() * correction
            };
            sum += term;
            last[slot] = term;
        }
    }
    // remaining terms behave like c (i + 1)^{-a} on the critical branch
    let (p, th) = (spec.p(), spec.theta);
    let nn = n as f64;
    for (slot, a) in [-(p - 1.0) * th * e, (p - 1.0) * (1.0 - th) * e].into_iter().enumerate() {
        if a > 1.0 && last[slot] > 0.0 {
            let c = last[slot] * nn.powf(a);
            sum += c * (nn + 0.5).powf(1.0 - a) / (a - 1.0);
        }
    }
    sum
}

#[test]
fn weight_norms_match_an_independent_series() {
    let spec = CounterexampleSpec::<f64>::new(4, 2.0, 0.5, None, 64).unwrap();
    let rule = ShellQuadRule::with_depth(48);
    let (ns, nt) = weight_norms(&spec, Exponent::Finite(3.0), Exponent::Finite(3.0), &rule).unwrap();
    assert!(ns.converged && nt.converged);
    let s_ref = weight_power_series(&spec, 3.0).powf(1.0 / 3.0);
    let t_ref = weight_power_series(&spec, -3.0).powf(1.0 / 3.0);
    assert!((ns.value / s_ref - 1.0).abs() <= 1e-6, "{} vs {s_ref}", ns.value);
    assert!((nt.value / t_ref - 1.0).abs() <= 1e-6, "{} vs {t_ref}", nt.value);
}

#[test]
fn divergent_norms_are_flagged() {
    let spec = CounterexampleSpec::<f64>::new(3, 2.0, 0.5, None, 64).unwrap();
    let rule = ShellQuadRule::with_depth(48);
    let (ns, nt) = weight_norms(&spec, Exponent::Finite(2.0), Exponent::Finite(2.0), &rule).unwrap();
    assert!(ns.diverges() && nt.diverges());
    assert!(!ns.converged && !nt.converged);
    assert!(weight_norms(&spec, Exponent::Infinite, Exponent::Finite(2.0), &rule).unwrap_err().is_config());
}

#[test]
fn energy_integrals_converge_and_stabilize() {
    let spec = CounterexampleSpec::<f64>::new(4, 2.0, 0.5, None, 64).unwrap();
    let (e0, e1) = energy_integrals(&spec, &ShellQuadRule::with_depth(48)).unwrap();
    assert!(e0.converged && e1.converged);
    for r in [&e0, &e1] {
        assert!(r.value.is_finite() && r.value > 0.0);
        assert!(r.relative_change(24, 48).unwrap() <= 1e-3);
    }
    let (deep, _) = energy_integrals(&spec, &ShellQuadRule::with_depth(60)).unwrap();
    assert!((deep.value / e0.value - 1.0).abs() <= 1e-9);
    assert!(energy_integrals(&spec, &ShellQuadRule::with_depth(65)).unwrap_err().is_config());
}

#[test]
fn shell_and_polar_rules_agree_on_smooth_integrands() {
    for d in [3u32, 4, 6] {
        let ball = Ball { center: 0.1, radius: 0.5 };
        let kappa = 1.3;
        let flat = TailModel::volume(d);
        let shell = integrate_ball_radial("smooth", d, ball, kappa, &ShellQuadRule::with_depth(48), [flat; 2], &|_, _, r| {
            1.0 + r * r
        })
        .unwrap();
        let polar = PolarRule::<f64>::new(24, 8).integrate(d, ball, |x1, r| (1.0 + r * r) * (kappa * x1).exp());
        assert!((shell.value / polar - 1.0).abs() <= 1e-10, "d={d}: {} vs {polar}", shell.value);
    }
}

#[test]
fn scaled_sobolev_norm_of_a_linear_function() {
    // u = x_1 on B_R in R^3: int |u|^2 = 4 pi R^5 / 15, int |grad u|^2 = 4 pi R^3 / 3
    let r: f64 = 0.7;
    let n = sobolev_norm(3, 2.0, Ball { center: 0.0, radius: r }, &PolarRule::default(), |x1, _| (x1, 1.0)).unwrap();
    let exact = r.powf(-1.5) * (4.0 * PI * r.powi(5) / 15.0).sqrt() + r.powf(-0.5) * (4.0 * PI * r.powi(3) / 3.0).sqrt();
    assert!((n / exact - 1.0).abs() <= 1e-12);
}
