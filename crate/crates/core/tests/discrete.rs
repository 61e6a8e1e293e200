use std::sync::Arc;

use degenlab::counterexample::{shell_mid, shell_outer, Branch, CounterexampleSpec};
use degenlab::discrete::calibration::{
    reference_boundary, reference_coefficients, reference_solution, CALIBRATION_FACTOR, GOLDEN,
};
use degenlab::discrete::checks::{
    caccioppoli_check, corollary_check, cutoff_optimize, moser_bound_check, planar_bound, smooth_cutoff,
    sphere_max_bound,
};
use degenlab::discrete::energy::{energy_gradient, regularized_energy};
use degenlab::discrete::{energy, minimize_energy, sample_cells, weak_residual, AxisymGrid, DirichletProblem, GridField};
use degenlab::params::{Exponent, ExponentConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ball(d: u32, h: f64) -> Arc<AxisymGrid<f64>> {
    Arc::new(AxisymGrid::ball(d, 0.0, 1.0, h).unwrap())
}

/// Random field on free nodes, zero elsewhere.
fn random_test_fn(grid: &Arc<AxisymGrid<f64>>, rng: &mut ChaCha8Rng, lo: f64) -> GridField<f64> {
    let values = (0..grid.len()).map(|k| if grid.is_free(k) { rng.gen_range(lo..1.0) } else { 0.0 }).collect();
    GridField::new(grid.clone(), values).unwrap()
}

fn cfg(d: u32, p: f64, s: Exponent<f64>, t: Exponent<f64>) -> ExponentConfig<f64> {
    ExponentConfig::new(d, p, s, t).unwrap()
}

#[test]
fn affine_functions_have_zero_residual() {
    let g = ball(3, 1.0 / 16.0);
    let u = GridField::from_fn(g.clone(), |x, _| 0.3 - 2.0 * x);
    let lambda = vec![1.0; g.cell_count()];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [1.5, 2.0, 3.0] {
        for _ in 0..10 {
            let phi = random_test_fn(&g, &mut rng, -1.0);
            let a = weak_residual(&u, &phi, &lambda, p).unwrap();
            assert!(a.abs() <= 1e-10, "p={p} residual {a}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weak_residual_is_linear_in_the_test_function(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0, p in 1.2f64..4.0) {
        let g = ball(3, 0.125);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_test_fn(&g, &mut rng, -1.0);
        let f1 = random_test_fn(&g, &mut rng, -1.0);
        let f2 = random_test_fn(&g, &mut rng, -1.0);
        let lambda = sample_cells(&g, |x, r| 1.0 + x * x + r);
        let combo = GridField::new(g.clone(), f1.values.iter().zip(&f2.values).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let lhs = weak_residual(&u, &combo, &lambda, p).unwrap();
        let r1 = weak_residual(&u, &f1, &lambda, p).unwrap();
        let r2 = weak_residual(&u, &f2, &lambda, p).unwrap();
        let scale = (a * r1).abs() + (b * r2).abs() + 1e-300;
        prop_assert!((lhs - a * r1 - b * r2).abs() <= 1e-12 * scale);
    }
}

#[test]
fn energy_gradient_matches_finite_differences_at_random_states() {
    let g = Arc::new(AxisymGrid::<f64>::cylinder(3, (-0.5, 0.5), (0.25, 1.0), 6, 5).unwrap());
    let lambda = sample_cells(&g, |x, r| 1.0 + 0.5 * x + r * r);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-6;
    for state in 0..100 {
        let p = [1.5, 2.0, 3.0][state % 3];
        let u: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (grad, _) = energy_gradient(&g, &u, &lambda, p, 0.0);
        for k in (0..g.len()).filter(|&k| g.is_free(k)) {
            let (mut up, mut dn) = (u.clone(), u.clone());
            up[k] += h;
            dn[k] -= h;
            let fd = (regularized_energy(&g, &up, &lambda, p, 0.0) - regularized_energy(&g, &dn, &lambda, p, 0.0)) / (2.0 * h);
            assert!((fd - grad[k]).abs() <= 1e-5 * grad[k].abs().max(1e-3), "state {state} node {k}: {fd} vs {}", grad[k]);
        }
    }
}

#[test]
fn residual_against_itself_is_p_times_energy() {
    let g = ball(3, 1.0 / 16.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_test_fn(&g, &mut rng, -1.0);
    let lambda = sample_cells(&g, |x, r| 2.0 + x.sin() * r);
    for p in [1.5, 2.0, 3.0] {
        let a = weak_residual(&u, &u, &lambda, p).unwrap();
        let e = energy(&u, &lambda, p).unwrap();
        assert!((a - p * e).abs() <= 1e-10 * a.abs());
    }
}

#[test]
fn counterexample_is_a_discrete_subsolution_on_a_certified_cylinder() {
    let spec = CounterexampleSpec::<f64>::new(4, 2.0, 0.5, None, 40).unwrap();
    let j = spec.certification.as_ref().unwrap().j;
    // {4^-j / 2 < r < 4^-j} is the power-law branch of shell j
    let (lo, hi) = (shell_mid::<f64>(j), shell_outer::<f64>(j));
    let g = Arc::new(AxisymGrid::<f64>::cylinder(4, (-0.25, 0.25), (lo, hi), 65, 33).unwrap());
    let v = GridField::from_fn(g.clone(), |x, r| {
        spec.phi_branch(j, Branch::Log, r, 0).unwrap() * (spec.alpha * x).exp()
    });
    let lambda = vec![spec.omega_branch(j, Branch::Log); g.cell_count()];
    let p = spec.p();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let phi = random_test_fn(&g, &mut rng, 0.0);
        let a = weak_residual(&v, &phi, &lambda, p).unwrap();
        // same sum with absolute values: the natural size of the residual
        let abs_phi = GridField::new(g.clone(), phi.values.clone()).unwrap();
        let scale: f64 = g
            .active_cells()
            .iter()
            .map(|&c| {
                let gv = g.cell_gradient(&v.values, c);
                let gp = g.cell_gradient(&abs_phi.values, c);
                g.cell_weight(c) * lambda[c] * gv[0].hypot(gv[1]).powf(p - 1.0) * gp[0].hypot(gp[1])
            })
            .sum();
        assert!(a <= 1e-6 * scale, "A(v, phi) = {a:e}, scale {scale:e}");
    }
}

/// `A(u, phi)` and `A(u_+, phi)` for `phi = eta^p u_+^beta`, on uniform-sign
/// cells and on all cells.
fn truncation_pair(h: f64) -> (f64, f64, f64, f64) {
    let p = 2.5;
    let beta = 2.0;
    let u = reference_solution(3, p, h, 0).unwrap();
    let g = u.grid.clone();
    let up = u.positive_part();
    let eta = smooth_cutoff(g.clone(), 0.0, 0.25, 0.75);
    let phi = GridField::new(
        g.clone(),
        (0..g.len()).map(|k| eta.values[k].powf(p) * up.values[k].powf(beta)).collect(),
    )
    .unwrap();
    let mut changes_sign = false;
    let uniform: Vec<f64> = (0..g.cell_count())
        .map(|c| {
            let corners = g.cell_corners(c).map(|k| u.values[k]);
            let pos = corners.iter().all(|&x| x >= 0.0);
            let neg = corners.iter().all(|&x| x <= 0.0);
            changes_sign |= !pos && !neg;
            if pos || neg {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    assert!(changes_sign, "reference member 0 should change sign");
    let ones = vec![1.0; g.cell_count()];
    (
        weak_residual(&u, &phi, &uniform, p).unwrap(),
        weak_residual(&up, &phi, &uniform, p).unwrap(),
        weak_residual(&u, &phi, &ones, p).unwrap(),
        weak_residual(&up, &phi, &ones, p).unwrap(),
    )
}

#[test]
fn truncation_is_compatible_with_the_weak_form() {
    let (a, b, full_a, full_b) = truncation_pair(1.0 / 32.0);
    assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}");
    // cells where u changes sign contribute a discretization error that shrinks with h
    let (_, _, fine_a, fine_b) = truncation_pair(1.0 / 64.0);
    let coarse = (full_a - full_b).abs() / full_a.abs();
    let fine = (fine_a - fine_b).abs() / fine_a.abs();
    assert!(fine < coarse, "mixed-cell gap {coarse:e} -> {fine:e}");
}

#[test]
fn minimizers_obey_the_maximum_principle() {
    for p in [1.5, 2.0, 3.0] {
        for k in 0..6 {
            let u = reference_solution(3, p, 1.0 / 32.0, k).unwrap();
            let g = &u.grid;
            let (mut bmax, mut bmin) = (f64::NEG_INFINITY, f64::INFINITY);
            let (mut imax, mut imin) = (f64::NEG_INFINITY, f64::INFINITY);
            for (n, &v) in u.values.iter().enumerate() {
                if g.is_free(n) {
                    imax = imax.max(v);
                    imin = imin.min(v);
                } else if g.active_cells().iter().any(|&c| g.cell_corners(c).contains(&n)) {
                    bmax = bmax.max(v);
                    bmin = bmin.min(v);
                }
            }
            assert!(imax <= bmax + 1e-8 && imin >= bmin - 1e-8, "p={p} k={k}: [{imin}, {imax}] vs [{bmin}, {bmax}]");
        }
    }
}

#[test]
fn cutoff_minimum_is_monotone_in_mu() {
    let g = ball(3, 1.0 / 32.0);
    let v = GridField::from_fn(g.clone(), reference_boundary(reference_coefficients(0)));
    let mu1 = sample_cells(&g, |x, r| 1.0 + 0.5 * (3.0 * x).sin() * r);
    let mu2: Vec<f64> = mu1.iter().enumerate().map(|(c, m)| m * (1.0 + 0.3 * ((c % 7) as f64) / 7.0)).collect();
    for sigma in [1.0, 0.75] {
        let a = cutoff_optimize(&mu1, &v, 0.0, 0.5, sigma, 2.0, 2.0, 16).unwrap();
        let b = cutoff_optimize(&mu2, &v, 0.0, 0.5, sigma, 2.0, 2.0, 16).unwrap();
        assert!(a.j_min <= b.j_min * (1.0 + 1e-10), "sigma={sigma}: {} > {}", a.j_min, b.j_min);
        assert!(a.j_min <= a.j_ramp && b.j_min <= b.j_ramp);
    }
}

#[test]
fn caccioppoli_holds_across_beta_and_p() {
    let h = 1.0 / 32.0;
    let g = ball(3, h);
    let eta = smooth_cutoff(g.clone(), 0.0, 0.4, 0.9);
    let ones = vec![1.0; g.cell_count()];
    for p in [1.5, 2.0, 3.0] {
        let prob = DirichletProblem::uniform(g.clone(), p, |x, r| 0.3 + x + 0.5 * x * x - r * r);
        let (u, rep) = minimize_energy(&prob).unwrap();
        assert!(rep.converged);
        let mut last_prefactor = f64::INFINITY;
        for beta in [1.0, 2.0, 5.0] {
            let prefactor = (p / beta).powf(p);
            assert!(prefactor < last_prefactor);
            last_prefactor = prefactor;
            let c = caccioppoli_check(&u, &ones, &ones, &eta, beta, p).unwrap();
            assert!(c.holds(1.0 + 10.0 * h), "p={p} beta={beta}: {c:?}");
        }
    }
}

#[test]
fn moser_ratio_is_mesh_stable() {
    let c = cfg(3, 2.0, Exponent::Infinite, Exponent::Infinite);
    let ratios: Vec<f64> = [32.0, 64.0, 128.0]
        .iter()
        .map(|n| {
            let g = ball(3, 1.0 / n);
            let (u, _) = minimize_energy(&DirichletProblem::uniform(g.clone(), 2.0, |x, _| x)).unwrap();
            let ones = vec![1.0; g.cell_count()];
            moser_bound_check(&u, &ones, &ones, &c, 0.0, 1.0).unwrap().ratio
        })
        .collect();
    for r in &ratios {
        assert!((r / ratios[2] - 1.0).abs() <= 0.2, "{ratios:?}");
    }
}

#[test]
fn negative_subsolutions_have_zero_ratio() {
    let g = ball(3, 1.0 / 16.0);
    let u = GridField::from_fn(g.clone(), |x, r| -1.0 - x * x - r);
    let ones = vec![1.0; g.cell_count()];
    let rep = moser_bound_check(&u, &ones, &ones, &cfg(3, 2.0, Exponent::Infinite, Exponent::Infinite), 0.0, 1.0).unwrap();
    assert!(rep.sup_val <= 0.0 && rep.bound_val == 0.0 && rep.ratio == 0.0);
}

#[test]
fn sphere_route_for_affine_and_minimized_data() {
    let c = cfg(3, 3.0, Exponent::Infinite, Exponent::Infinite);
    let g = ball(3, 1.0 / 64.0);
    let affine = GridField::from_fn(g.clone(), |x, _| x);
    let rep = sphere_max_bound(&affine, &c, 0.0, 1.0, 1e-6).unwrap();
    // nodes strictly inside B_{1/2}
    assert!(rep.interior_sup < 0.5 && rep.interior_sup >= 0.5 - 2.0 / 64.0);
    assert!(rep.sphere_sup >= rep.interior_sup && rep.r0 >= 0.5 && rep.max_principle_ok);
    for k in 0..3 {
        let u = reference_solution(3, 3.0, 1.0 / 64.0, k).unwrap();
        let rep = sphere_max_bound(&u, &c, 0.0, 1.0, 1e-6).unwrap();
        assert!(rep.max_principle_ok && rep.fubini_ok, "member {k}: {rep:?}");
    }
    let bad = cfg(3, 2.0, Exponent::Infinite, Exponent::Infinite);
    assert!(sphere_max_bound(&affine, &bad, 0.0, 1.0, 1e-6).unwrap_err().is_config());
}

#[test]
fn corollary_bounds() {
    let g = ball(3, 1.0 / 16.0);
    let one = GridField::from_fn(g.clone(), |_, _| 1.0);
    let lambda = sample_cells(&g, |x, r| 1.0 + 0.5 * (x + r).cos());
    let mu = sample_cells(&g, |x, r| 2.0 + x * r);
    let c = cfg(3, 2.0, Exponent::Finite(8.0), Exponent::Finite(8.0));
    let mut last = 0.0;
    for gamma in [2.0, 1.0, 0.5, 0.25] {
        let rep = corollary_check(&one, &lambda, &mu, &c, gamma, 0.0, 1.0).unwrap();
        assert_eq!(rep.sup_val, 1.0);
        assert!(rep.bound_val >= 1.0 && rep.ratio <= 1.0);
        // (avg 1^gamma)^{1/gamma} = 1, so bound_val = Lambda^{e(gamma)} with e ~ 1/gamma
        assert!(rep.bound_val > last, "gamma={gamma}");
        last = rep.bound_val;
    }
    let s_one = cfg(3, 2.0, Exponent::Finite(1.0), Exponent::Finite(8.0));
    assert!(corollary_check(&one, &lambda, &mu, &s_one, 1.0, 0.0, 1.0).is_err());

    // gamma = p against the sup bound on the same data
    let unit = cfg(3, 2.0, Exponent::Infinite, Exponent::Infinite);
    let u = reference_solution(3, 2.0, 1.0 / 32.0, 0).unwrap();
    let ones = vec![1.0; u.grid.cell_count()];
    let cor = corollary_check(&u, &ones, &ones, &unit, 2.0, 0.0, 1.0).unwrap();
    let mos = moser_bound_check(&u, &ones, &ones, &unit, 0.0, 1.0).unwrap();
    assert!(mos.sup_val > 0.0);
    let k = cor.ratio / mos.ratio;
    assert!(k > 0.1 && k < 10.0, "corollary {} vs moser {}", cor.ratio, mos.ratio);
}

#[test]
fn calibrated_constants_cover_unseen_members() {
    let limit = |c: f64| CALIBRATION_FACTOR * c;
    for p in [1.5, 2.0, 3.0] {
        let c = cfg(3, p, Exponent::Infinite, Exponent::Infinite);
        for k in 20..24 {
            let u = reference_solution(3, p, 1.0 / 32.0, k).unwrap();
            let ones = vec![1.0; u.grid.cell_count()];
            let m = moser_bound_check(&u, &ones, &ones, &c, 0.0, 1.0).unwrap();
            assert!(m.ratio <= limit(GOLDEN.moser), "moser p={p} k={k}: {}", m.ratio);
            for gamma in [0.5, 1.0, 2.0, p] {
                let r = corollary_check(&u, &ones, &ones, &c, gamma, 0.0, 1.0).unwrap().ratio;
                assert!(r <= limit(GOLDEN.corollary), "corollary p={p} k={k} gamma={gamma}: {r}");
            }
            let u2 = reference_solution(2, p, 1.0 / 32.0, k).unwrap();
            let (_, _, r) = planar_bound(&u2, 0.0, 1.0).unwrap();
            assert!(r <= limit(GOLDEN.planar), "planar p={p} k={k}: {r}");
        }
    }
}

#[test]
fn field_binary_round_trip() {
    let g = Arc::new(AxisymGrid::<f64>::cylinder(3, (-1.0, 0.5), (0.125, 0.75), 7, 5).unwrap());
    let u = GridField::from_fn(g.clone(), |x, r| x * 3.0 - r.powi(3));
    let mut buf = Vec::new();
    u.write_binary(&mut buf).unwrap();
    assert_eq!(buf.len(), 8 + 32 + 4 + 8 * g.len());
    let back = GridField::<f64>::read_binary(buf.as_slice()).unwrap();
    assert_eq!(back.values, u.values);
    assert_eq!((back.grid.nx, back.grid.nr, back.grid.d), (7, 5, 3));
    assert!(GridField::<f64>::read_binary(&buf[..20]).is_err());
}
