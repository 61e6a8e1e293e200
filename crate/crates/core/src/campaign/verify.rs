use num_rational::BigRational;

use super::{counterexample_spec, fmt_real, RunConfig, Table};
use crate::counterexample::{
    shell_mid, shell_outer, Branch, FluxJumpRow, InterfaceKind, J_SAMPLES_PER_BRANCH,
};
use crate::error::Result;
use crate::quadrature::{energy_integrals, weight_norms, ShellQuadRule};

const RESIDUAL_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-12;
const CONTINUITY_TOL: f64 = 1e-12;
const DIVERGENCE_TOL: f64 = 1e-9;
const INTEGRAL_CHANGE_TOL: f64 = 1e-3;
/// Shells past `j` sampled at the full per-shell count.
const DENSE_SHELLS: usize = 10;

/// `1 - eta_i` in closed form at `p = 2`.
fn closed_form_eps(i: usize, c_q: f64) -> f64 {
    1.0 / (1.0 + 8.0 * 16f64.powi(i as i32) / ((i as f64 + 1.0) * c_q))
}

/// Certification report of the counterexample, one row per shell branch.
pub fn verify_counterexample(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let spec = counterexample_spec(cfg)?;
    let i_max = spec.i_max();
    let matching = spec.matching();
    let mut failures = Vec::new();
    let j = match &spec.certification {
        Some(c) => Some(c.j),
        None => {
            failures.push(format!("alpha = {} is below alpha0 = {}: no certified shell index", spec.alpha, spec.params.alpha0));
            None
        }
    };
    let p_is_two = cfg.p == BigRational::from_integer(2.into());

    let flux = spec.verify_flux_jumps(0..=i_max)?;
    let flux_row = |i: usize, kind: InterfaceKind| -> Option<&FluxJumpRow<f64>> {
        flux.rows.iter().find(|r| r.shell == i && r.kind == kind)
    };

    let mut t = Table::new(&[
        "shell",
        "branch",
        "eta",
        "residual",
        "min_scaled_divergence",
        "interface_r",
        "flux_left",
        "flux_right",
        "pass",
    ]);
    for i in 0..=i_max {
        let eps = spec.etas.one_minus_eta[i];
        let residual = matching.relative_residual(i, eps);
        let mut shell_ok = true;
        if !(residual <= RESIDUAL_TOL) {
            failures.push(format!("shell {i}: flux-matching residual {residual:e} exceeds {RESIDUAL_TOL:e}"));
            shell_ok = false;
        }
        if p_is_two {
            let want = closed_form_eps(i, spec.params.c_q);
            if !((eps - want).abs() <= CLOSED_FORM_TOL) {
                failures.push(format!("shell {i}: eta = {} differs from the closed form {}", 1.0 - eps, 1.0 - want));
                shell_ok = false;
            }
        }
        let certified = j.is_some_and(|j| i >= j);
        if certified && !spec.eta_lower_bound_holds(i) {
            failures.push(format!("shell {i}: eta lower bound fails (1 - eta = {eps:e}, bound {:e})", spec.eps_upper_bound(i)));
            shell_ok = false;
        }
        let axis_value = spec.phi_branch(i, Branch::Log, shell_outer(i), 0)?;
        if axis_value != i as f64 {
            failures.push(format!("shell {i}: v(0, 4^-i) = {axis_value} instead of {i}"));
            shell_ok = false;
        }

        let dense = j.is_some_and(|j| i >= j && i <= j + DENSE_SHELLS);
        let samples = if dense { cfg.samples.div_ceil(2) } else { J_SAMPLES_PER_BRANCH };
        for branch in [Branch::Log, Branch::Quad] {
            let mut ok = shell_ok;
            let min_div = spec.min_scaled_divergence(i, branch, samples)?;
            if certified && !(min_div >= -DIVERGENCE_TOL) {
                failures.push(format!("shell {i} {}: scaled divergence {min_div:e} below -{DIVERGENCE_TOL:e}", branch.as_str()));
                ok = false;
            }
            // LOG ends at 4^-i, QUAD starts at 4^-i / 2
            let (gamma, a, b) = match branch {
                Branch::Log => (shell_outer(i), (i, Branch::Log), i.checked_sub(1).map(|k| (k, Branch::Quad))),
                Branch::Quad => (shell_mid(i), (i, Branch::Log), Some((i, Branch::Quad))),
            };
            if let Some(b) = b {
                let va = spec.phi_branch(a.0, a.1, gamma, 0)?;
                let vb = spec.phi_branch(b.0, b.1, gamma, 0)?;
                if (va - vb).abs() > CONTINUITY_TOL * va.abs().max(1.0) {
                    failures.push(format!("profile jumps by {:e} at r = {gamma:e}", va - vb));
                    ok = false;
                }
            }
            let kind = match branch {
                Branch::Log => InterfaceKind::Outer,
                Branch::Quad => InterfaceKind::Mid,
            };
            let (fl, fr) = match flux_row(i, kind) {
                Some(row) => {
                    if !row.ok {
                        failures.push(format!(
                            "shell {i}: flux condition fails at r = {:e} (left {:e}, right {:e})",
                            row.gamma, row.left, row.right
                        ));
                        ok = false;
                    }
                    (fmt_real(row.left), fmt_real(row.right))
                }
                None => (String::new(), String::new()),
            };
            t.row(vec![
                i.to_string(),
                branch.as_str().into(),
                fmt_real(1.0 - eps),
                fmt_real(residual),
                fmt_real(min_div),
                fmt_real(gamma),
                fl,
                fr,
                ok.to_string(),
            ]);
        }
    }

    t.comment(format!("j={} alpha={} alpha0={} theta={}", j.map_or("none".into(), |j| j.to_string()), spec.alpha, spec.params.alpha0, spec.theta));
    let fc = cfg.float_config()?;
    if fc.s().finite().is_some() && fc.t().finite().is_some() {
        let rule = ShellQuadRule::with_depth(cfg.depth.min(i_max));
        let half = (rule.depth / 2).max(4);
        let (ns, nt) = weight_norms(&spec, *fc.s(), *fc.t(), &rule)?;
        let (e0, e1) = energy_integrals(&spec, &rule)?;
        for r in [&ns, &nt, &e0, &e1] {
            let change = r.relative_change(half, rule.depth).unwrap_or(f64::NAN);
            t.comment(format!("{} value={} converged={} change_{half}_{}={change:e}", r.name, fmt_real(r.value), r.converged, rule.depth));
            if !r.converged || !(change < INTEGRAL_CHANGE_TOL) {
                failures.push(format!("{} not certified finite (value {}, change {change:e})", r.name, r.value));
            }
        }
    }
    Ok((t.render()?, failures))
}
