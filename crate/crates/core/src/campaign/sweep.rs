//! Sharpness sweep over exponent pairs.
//!
//! Counterexample rows evaluate `sup_{B_{R/2}} v_k / (Lambda^e ||v_k||)` for
//! the truncations `v_k = min(phi, k) e^{alpha x_1}` on `B_R`, `R = 1/2`, with
//! `e = 1/(p delta)` when `delta > 0` and `e = 0` otherwise. Reference rows
//! take the `lambda = 1` minimizer with Dirichlet data `v_k` instead.

use std::sync::Arc;

use num_rational::BigRational;

use super::config::{float_exponent, to_float};
use super::{fmt_real, format_exponent, Family, Pair, RunConfig, Table};
use crate::counterexample::{Branch, CounterexampleSpec};
use crate::discrete::checks::moser_bound_check;
use crate::discrete::{minimize_energy, AxisymGrid, DirichletProblem};
use crate::error::{Error, Result};
use crate::params::{classify, delta, theta_from_st, ExponentConfig, RegimeTag};
use crate::quadrature::{integrate_ball_radial, lambda_counterexample, scaled_sobolev_norm, Ball, ShellQuadRule, TailModel};
use crate::scalar::Scalar;

pub const SWEEP_RADIUS: f64 = 0.5;
/// Largest `max/min` ratio variation still reported as flat.
pub const FLAT_VARIATION: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub s: Exponent,
    pub t: Exponent,
    pub inverse_sum: f64,
    pub regime: RegimeTag,
    pub delta: f64,
    pub family: Family,
    /// `Lambda(B_R)`; NaN when not evaluated.
    pub lambda: f64,
    pub ratios: Vec<f64>,
}

type Exponent = crate::params::Exponent<BigRational>;

impl SweepRow {
    /// `max/min` of the ratios.
    pub fn variation(&self) -> f64 {
        let max = self.ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }

    /// Last ratio over first ratio.
    pub fn growth(&self) -> f64 {
        match (self.ratios.first(), self.ratios.last()) {
            (Some(a), Some(b)) => b / a,
            _ => f64::NAN,
        }
    }

    pub fn increasing(&self) -> bool {
        self.ratios.windows(2).all(|w| w[1] > w[0])
    }

    pub fn trend(&self) -> &'static str {
        if self.variation() < FLAT_VARIATION {
            "flat"
        } else if self.increasing() {
            "growing"
        } else {
            "irregular"
        }
    }
}

fn resolve_family(requested: Family, tag: RegimeTag) -> Family {
    match requested {
        Family::Auto if tag.is_counterexample() => Family::Counterexample,
        Family::Auto => Family::Reference,
        other => other,
    }
}

fn profile_spec(cfg: &RunConfig, exact: &ExponentConfig<BigRational>, family: Family) -> Result<CounterexampleSpec<f64>> {
    let theta = match (cfg.theta, family) {
        (Some(t), _) => t,
        (None, Family::Counterexample) => theta_from_st(exact)?.theta.as_f64(),
        // the profile does not depend on theta
        _ => 0.5,
    };
    CounterexampleSpec::new(exact.d(), exact.p().as_f64(), theta, cfg.alpha, cfg.i_max)
}

/// `min(phi, k)` and its radial derivative.
fn truncated_profile(spec: &CounterexampleSpec<f64>, k: usize, i: usize, b: Branch, r: f64) -> (f64, f64) {
    if i >= k {
        return (k as f64, 0.0);
    }
    let phi = spec.phi_branch(i, b, r, 0).unwrap_or(f64::NAN);
    let d1 = spec.phi_branch(i, b, r, 1).unwrap_or(f64::NAN);
    (phi, d1)
}

fn counterexample_ratios(
    cfg: &RunConfig,
    fc: &ExponentConfig<f64>,
    spec: &CounterexampleSpec<f64>,
    delta: f64,
) -> Result<(f64, Vec<f64>)> {
    let rule = ShellQuadRule::with_depth(cfg.depth);
    if cfg.depths.last().is_some_and(|&k| k >= rule.depth) {
        return Err(Error::config("truncation depths must stay below the quadrature depth"));
    }
    let ball = Ball { center: 0.0, radius: SWEEP_RADIUS };
    let (d, p, alpha) = (fc.d(), *fc.p(), spec.alpha);
    let gamma = fc.bound_exponent();
    let lambda = match (fc.s().finite(), fc.t().finite()) {
        (Some(_), Some(_)) => lambda_counterexample(spec, *fc.s(), *fc.t(), ball, &rule)?,
        _ => f64::NAN,
    };
    let e = if delta > 0.0 { 1.0 / (p * delta) } else { 0.0 };
    let lambda_factor = if e == 0.0 { 1.0 } else { lambda.powf(e) };
    // shells beyond the truncation carry a constant profile
    let flat = TailModel { power: 0.0, log4_ratio: -(f64::from(d) - 1.0) };
    let kappa = alpha * gamma;
    let mut ratios = Vec::with_capacity(cfg.depths.len());
    for &k in &cfg.depths {
        let iu = integrate_ball_radial("truncation", d, ball, kappa, &rule, [flat; 2], &|i, b, r| {
            truncated_profile(spec, k, i, b, r).0.abs().powf(gamma)
        })?;
        let ig = integrate_ball_radial("truncation_gradient", d, ball, kappa, &rule, [flat; 2], &|i, b, r| {
            let (phi, d1) = truncated_profile(spec, k, i, b, r);
            (alpha * phi).hypot(d1).powf(gamma)
        })?;
        if !iu.converged || !ig.converged {
            return Err(Error::Verification(format!("truncation norm at depth {k} did not converge")));
        }
        let norm = scaled_sobolev_norm(d, gamma, SWEEP_RADIUS, iu.value, ig.value)?;
        // phi_k peaks at k on the axis and e^{alpha x_1} at x_1 = R/2
        let sup = k as f64 * (alpha * SWEEP_RADIUS / 2.0).exp();
        ratios.push(sup / (lambda_factor * norm));
    }
    Ok((lambda, ratios))
}

fn reference_ratios(cfg: &RunConfig, fc: &ExponentConfig<f64>, spec: &CounterexampleSpec<f64>) -> Result<(f64, Vec<f64>)> {
    let grid = Arc::new(AxisymGrid::ball(fc.d(), 0.0, SWEEP_RADIUS, cfg.h)?);
    let ones = vec![1.0; grid.cell_count()];
    let alpha = spec.alpha;
    let mut ratios = Vec::with_capacity(cfg.depths.len());
    for &k in &cfg.depths {
        let cap = crate::counterexample::shell_outer::<f64>(k);
        let mut prob = DirichletProblem::uniform(grid.clone(), *fc.p(), |x, r| {
            let phi = if r <= cap { k as f64 } else { spec.phi(r, 0).unwrap_or(f64::NAN) };
            phi * (alpha * x).exp()
        });
        prob.tol = cfg.tol;
        prob.max_iterations = cfg.max_iterations;
        let (u, rep) = minimize_energy(&prob)?;
        if !rep.converged {
            return Err(Error::NoConvergence {
                iterations: rep.iterations,
                energy: rep.energy_history.last().copied().unwrap_or(f64::NAN),
            });
        }
        ratios.push(moser_bound_check(&u, &ones, &ones, fc, 0.0, SWEEP_RADIUS)?.ratio);
    }
    Ok((1.0, ratios))
}

/// One row per `(s, t)` pair of the configuration.
pub fn sweep_rows(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    if cfg.pairs.is_empty() {
        return Err(Error::config("the sweep grid is empty"));
    }
    if cfg.depths.is_empty() {
        return Err(Error::config("no truncation depths"));
    }
    cfg.pairs.iter().map(|pair| sweep_row(cfg, pair)).collect()
}

fn sweep_row(cfg: &RunConfig, (s, t): &Pair) -> Result<SweepRow> {
    let exact = ExponentConfig::new(cfg.d, cfg.p.clone(), s.clone(), t.clone())?;
    let fc = to_float(cfg.d, &cfg.p, s, t)?;
    let tag = classify(&exact).tag;
    let delta = delta(&exact).as_f64();
    let family = resolve_family(cfg.family, tag);
    let spec = profile_spec(cfg, &exact, family)?;
    let (lambda, ratios) = match family {
        Family::Counterexample => counterexample_ratios(cfg, &fc, &spec, delta)?,
        _ => reference_ratios(cfg, &fc, &spec)?,
    };
    Ok(SweepRow {
        s: s.clone(),
        t: t.clone(),
        inverse_sum: float_exponent(s).recip() + float_exponent(t).recip(),
        regime: tag,
        delta,
        family,
        lambda,
        ratios,
    })
}

/// Rows must be flat for references and increasing for counterexamples.
pub(crate) fn sweep(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let rows = sweep_rows(cfg)?;
    let mut header: Vec<String> =
        ["s", "t", "inverse_sum", "regime", "delta", "family", "lambda"].iter().map(|s| s.to_string()).collect();
    header.extend(cfg.depths.iter().map(|k| format!("ratio_k{k}")));
    header.extend(["growth", "trend", "pass"].iter().map(|s| s.to_string()));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    let mut failures = Vec::new();
    for row in &rows {
        let ok = match row.family {
            Family::Counterexample => row.increasing(),
            _ => row.variation() < FLAT_VARIATION,
        };
        if !ok {
            failures.push(format!(
                "pair s={} t={} ({}): ratios {:?} are not {}",
                format_exponent(&row.s),
                format_exponent(&row.t),
                row.family.as_str(),
                row.ratios,
                if row.family == Family::Counterexample { "increasing" } else { "bounded" }
            ));
        }
        let mut fields = vec![
            format_exponent(&row.s),
            format_exponent(&row.t),
            fmt_real(row.inverse_sum),
            row.regime.as_str().into(),
            fmt_real(row.delta),
            row.family.as_str().into(),
            fmt_real(row.lambda),
        ];
        fields.extend(row.ratios.iter().map(|&r| fmt_real(r)));
        fields.extend([fmt_real(row.growth()), row.trend().into(), ok.to_string()]);
        table.row(fields);
    }
    Ok((table.render()?, failures))
}
