//! Verification campaigns behind the command-line front end.
//!
//! Every campaign is a pure function of its [`RunConfig`] returning a CSV
//! document and the list of failed assertions, so equal configurations give
//! byte-identical output.

mod config;
mod sweep;
mod verify;

use std::sync::Arc;

use num_rational::BigRational;

pub use config::{
    format_exponent, format_rational, parse_exponent, parse_rational, BoundaryData, Command, Family, Pair, RunConfig,
};
pub use sweep::{sweep_rows, SweepRow};
pub use verify::verify_counterexample;

use crate::counterexample::CounterexampleSpec;
use crate::discrete::calibration::{reference_boundary, reference_coefficients};
use crate::discrete::{minimize_energy, AxisymGrid, DirichletProblem};
use crate::error::{Error, Result};
use crate::params::{classify, moser_constants, theta_from_st, MoserConstants};
use crate::quadrature::{energy_integrals, weight_norms, IntegralResult, ShellQuadRule};
use crate::scalar::Scalar;

pub const CSV_HEADER: &str = "# degenlab-csv v1";

/// Result of a campaign that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: Command,
    pub csv: String,
    /// Failed assertions, one line each.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `0` on success, `1` for failed assertions or numerical failures, `2` for
/// invalid configurations.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) if o.passed() => 0,
        Ok(_) => 1,
        Err(e) if e.is_config() => 2,
        Err(_) => 1,
    }
}

/// Real numbers in shortest round-trip scientific notation.
pub(crate) fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// CSV document with the versioned header and trailing `#` comment lines.
#[derive(Debug, Clone, Default)]
pub(crate) struct Table {
    rows: Vec<Vec<String>>,
    comments: Vec<String>,
}

impl Table {
    pub(crate) fn new(header: &[&str]) -> Self {
        Self { rows: vec![header.iter().map(|s| s.to_string()).collect()], comments: Vec::new() }
    }

    pub(crate) fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.rows[0].len());
        self.rows.push(fields);
    }

    pub(crate) fn comment(&mut self, line: String) {
        self.comments.push(line);
    }

    pub(crate) fn render(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.write_record(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        let mut out = format!("{CSV_HEADER}\n");
        out.push_str(&String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?);
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let (csv, failures) = match cfg.command {
        Command::Constants => constants(cfg)?,
        Command::Classify => classify_campaign(cfg)?,
        Command::CounterexampleVerify => verify_counterexample(cfg)?,
        Command::Norms => norms(cfg)?,
        Command::Solve => solve(cfg)?,
        Command::MoserCheck => {
            let mut single = cfg.clone();
            single.pairs = vec![(cfg.s.clone(), cfg.t.clone())];
            sweep::sweep(&single)?
        }
        Command::Sweep => sweep::sweep(cfg)?,
    };
    Ok(Outcome { command: cfg.command, csv, failures })
}

fn constants(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let mc: MoserConstants<BigRational> = moser_constants(&cfg.exact_config()?)?;
    let mut t = Table::new(&["quantity", "value", "exact"]);
    let mut put = |name: &str, v: &BigRational| t.row(vec![name.into(), fmt_real(v.as_f64()), format_rational(v)]);
    put("s_star", &mc.s_star);
    put("delta", &mc.delta);
    put("chi", &mc.chi);
    put("sup_exponent", &mc.sup_exponent);
    if !cfg.s.is_infinite() {
        if let Ok(e) = mc.corollary_exponent(cfg.p.clone()) {
            put("corollary_exponent_gamma_p", &e);
        }
    }
    Ok((t.render()?, Vec::new()))
}

fn classify_campaign(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let regime = classify(&cfg.exact_config()?);
    let mut t = Table::new(&["d", "p", "s", "t", "regime", "reasons"]);
    t.row(vec![
        cfg.d.to_string(),
        format_rational(&cfg.p),
        format_exponent(&cfg.s),
        format_exponent(&cfg.t),
        regime.tag.as_str().into(),
        regime.reasons.join("; "),
    ]);
    Ok((t.render()?, Vec::new()))
}

/// Counterexample instance for the configured exponents; `theta` comes from
/// the configuration when given and from `(s, t)` otherwise.
pub(crate) fn counterexample_spec(cfg: &RunConfig) -> Result<CounterexampleSpec<f64>> {
    let theta = match cfg.theta {
        Some(t) => t,
        None => theta_from_st(&cfg.exact_config()?)?.theta.as_f64(),
    };
    CounterexampleSpec::new(cfg.d, cfg.p.as_f64(), theta, cfg.alpha, cfg.i_max)
}

pub(crate) fn integral_row(r: &IntegralResult<f64>) -> Vec<String> {
    let change = r.relative_change((r.depth / 2).max(4), r.depth);
    vec![
        r.name.clone(),
        fmt_real(r.value),
        fmt_real(r.tail_estimate),
        fmt_real(r.tail_error),
        r.depth.to_string(),
        fmt_real(change.unwrap_or(f64::NAN)),
        r.converged.to_string(),
    ]
}

pub(crate) const INTEGRAL_HEADER: [&str; 7] =
    ["name", "value", "tail", "tail_error", "depth", "relative_change_half_depth", "converged"];

fn norms(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let spec = counterexample_spec(cfg)?;
    let rule = ShellQuadRule::with_depth(cfg.depth);
    let fc = cfg.float_config()?;
    let (ns, nt) = weight_norms(&spec, *fc.s(), *fc.t(), &rule)?;
    let (e0, e1) = energy_integrals(&spec, &rule)?;
    let mut t = Table::new(&INTEGRAL_HEADER);
    let mut failures = Vec::new();
    for r in [&ns, &nt, &e0, &e1] {
        t.row(integral_row(r));
        if !r.converged {
            let why = if r.diverges() { "diverges" } else { "did not converge" };
            failures.push(format!("{} {why} (value {}, tail {})", r.name, r.value, r.tail_estimate));
        }
    }
    t.comment(format!("theta={} alpha={} finite_energy={}", spec.theta, spec.alpha, spec.finite_energy()));
    Ok((t.render()?, failures))
}

fn solve(cfg: &RunConfig) -> Result<(String, Vec<String>)> {
    let p = cfg.p.as_f64();
    let grid = Arc::new(AxisymGrid::ball(cfg.d, 0.0, 1.0, cfg.h)?);
    let mut prob = match cfg.boundary {
        BoundaryData::Affine => DirichletProblem::uniform(grid, p, |x, _| x),
        BoundaryData::Reference(k) => DirichletProblem::uniform(grid, p, reference_boundary(reference_coefficients(k))),
    };
    prob.tol = cfg.tol;
    prob.max_iterations = cfg.max_iterations;
    let (u, rep) = minimize_energy(&prob)?;
    if let Some(path) = &cfg.field_output {
        let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        u.write_binary(std::io::BufWriter::new(f))?;
    }
    let mut failures = Vec::new();
    if !rep.converged {
        failures.push(format!(
            "solver stopped after {} iterations with residual {:e}",
            rep.iterations, rep.final_residual
        ));
    }
    // the report already carries the versioned header
    Ok((rep.to_csv(), failures))
}
