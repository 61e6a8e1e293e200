use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::params::{Exponent, ExponentConfig};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Constants,
    Classify,
    CounterexampleVerify,
    Norms,
    Solve,
    MoserCheck,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Constants,
        Command::Classify,
        Command::CounterexampleVerify,
        Command::Norms,
        Command::Solve,
        Command::MoserCheck,
        Command::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Classify => "classify",
            Command::CounterexampleVerify => "counterexample-verify",
            Command::Norms => "norms",
            Command::Solve => "solve",
            Command::MoserCheck => "moser-check",
            Command::Sweep => "sweep",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown command `{s}`")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Test family for sweep rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Counterexample truncations for counterexample regimes, references otherwise.
    Auto,
    Counterexample,
    Reference,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Auto => "auto",
            Family::Counterexample => "counterexample",
            Family::Reference => "reference",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Family::Auto),
            "counterexample" => Ok(Family::Counterexample),
            "reference" => Ok(Family::Reference),
            _ => Err(Error::config(format!("unknown family `{s}`"))),
        }
    }
}

/// Boundary data for `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryData {
    /// `g = x_1`.
    Affine,
    /// Member of the calibration reference family.
    Reference(usize),
}

impl FromStr for BoundaryData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "affine" {
            return Ok(BoundaryData::Affine);
        }
        s.strip_prefix("reference:")
            .and_then(|k| k.parse().ok())
            .map(BoundaryData::Reference)
            .ok_or_else(|| Error::config(format!("boundary data `{s}` is neither `affine` nor `reference:<k>`")))
    }
}

/// Exact value of a decimal or fraction literal such as `2`, `-0.25` or `10/3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::config(format!("`{s}` is not a decimal or fraction"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (parse_rational(n)?, parse_rational(d)?);
        if d.is_zero() {
            return Err(Error::config(format!("zero denominator in `{s}`")));
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = BigRational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// `inf` or a positive rational literal.
pub fn parse_exponent(s: &str) -> Result<Exponent<BigRational>> {
    match s.trim() {
        "inf" | "infinity" => Ok(Exponent::Infinite),
        other => {
            let v = parse_rational(other)?;
            if !v.is_positive() {
                return Err(Error::config(format!("exponent `{s}` must be positive")));
            }
            Ok(Exponent::Finite(v))
        }
    }
}

/// `a/b` for non-integers, the integer otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_exponent(e: &Exponent<BigRational>) -> String {
    match e {
        Exponent::Finite(v) => format_rational(v),
        Exponent::Infinite => "inf".into(),
    }
}

/// Exponent pair `(s, t)` of a sweep grid.
pub type Pair = (Exponent<BigRational>, Exponent<BigRational>);

fn parse_pairs(s: &str) -> Result<Vec<Pair>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| Error::config(format!("pair `{item}` is not of the form s:t")))?;
            Ok((parse_exponent(a)?, parse_exponent(b)?))
        })
        .collect()
}

/// `s = t = 2 / sigma` for each reciprocal sum `sigma`.
fn parse_inverse_sums(s: &str) -> Result<Vec<Pair>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|item| {
            let sigma = parse_rational(item)?;
            if !sigma.is_positive() {
                return Err(Error::config(format!("reciprocal sum `{item}` must be positive")));
            }
            let e = Exponent::Finite(BigRational::from_integer(2.into()) / sigma);
            Ok((e.clone(), e))
        })
        .collect()
}

fn parse_depths(s: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| Error::config(format!("bad depth range `{s}`")))?;
        let b: usize = b.trim().parse().map_err(|_| Error::config(format!("bad depth range `{s}`")))?;
        return Ok((a..=b).collect());
    }
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::config(format!("bad depth `{x}`"))))
        .collect()
}

fn parse_num<N: FromStr>(key: &str, v: &str) -> Result<N> {
    v.trim().parse().map_err(|_| Error::config(format!("`{v}` is not a valid value for `{key}`")))
}

fn parse_real(key: &str, v: &str) -> Result<f64> {
    parse_rational(v).map(|r| r.as_f64()).map_err(|_| Error::config(format!("`{v}` is not a valid value for `{key}`")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub d: u32,
    pub p: BigRational,
    pub s: Exponent<BigRational>,
    pub t: Exponent<BigRational>,
    /// Weight interpolation exponent; derived from `(s, t)` when absent.
    pub theta: Option<f64>,
    /// Drift rate; `alpha0(d, p)` when absent.
    pub alpha: Option<f64>,
    /// Shell quadrature depth.
    pub depth: usize,
    pub i_max: usize,
    /// Divergence samples per shell branch.
    pub samples: usize,
    /// Grid spacing of discrete campaigns.
    pub h: f64,
    pub tol: f64,
    pub max_iterations: usize,
    pub boundary: BoundaryData,
    pub pairs: Vec<Pair>,
    pub depths: Vec<usize>,
    pub family: Family,
    pub output: Option<PathBuf>,
    /// Binary dump of the `solve` field.
    pub field_output: Option<PathBuf>,
}

impl RunConfig {
    pub const KEYS: [&'static str; 20] = [
        "command", "d", "p", "s", "t", "theta", "alpha", "depth", "imax", "samples", "h", "tol", "max-iterations",
        "boundary", "pairs", "inv-sums", "depths", "family", "output", "field-output",
    ];

    pub fn new(command: Command) -> Self {
        let int = |v: i64| BigRational::from_integer(v.into());
        Self {
            command,
            d: 4,
            p: int(2),
            s: Exponent::Finite(int(3)),
            t: Exponent::Finite(int(3)),
            theta: None,
            alpha: None,
            depth: 48,
            i_max: 64,
            samples: 10_000,
            h: 1.0 / 32.0,
            tol: 1e-9,
            max_iterations: 200,
            boundary: BoundaryData::Affine,
            pairs: Vec::new(),
            depths: (4..=12).collect(),
            family: Family::Auto,
            output: None,
            field_output: None,
        }
    }

    /// Sets one knob; unknown keys are rejected. Keys accept `_` for `-`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let v = value.trim();
        match key.as_str() {
            "command" => self.command = v.parse()?,
            "d" => self.d = parse_num(&key, v)?,
            "p" => self.p = parse_rational(v)?,
            "s" => self.s = parse_exponent(v)?,
            "t" => self.t = parse_exponent(v)?,
            "theta" => self.theta = Some(parse_real(&key, v)?),
            "alpha" => self.alpha = Some(parse_real(&key, v)?),
            "depth" => self.depth = parse_num(&key, v)?,
            "imax" | "i-max" => self.i_max = parse_num(&key, v)?,
            "samples" => self.samples = parse_num(&key, v)?,
            "h" => self.h = parse_real(&key, v)?,
            "tol" => self.tol = parse_real(&key, v)?,
            "max-iterations" => self.max_iterations = parse_num(&key, v)?,
            "boundary" => self.boundary = v.parse()?,
            "pairs" => self.pairs = parse_pairs(v)?,
            "inv-sums" => self.pairs = parse_inverse_sums(v)?,
            "depths" => self.depths = parse_depths(v)?,
            "family" => self.family = v.parse()?,
            "output" => self.output = Some(PathBuf::from(v)),
            "field-output" => self.field_output = Some(PathBuf::from(v)),
            _ => return Err(Error::config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", n + 1)))?;
            self.apply(k, v).map_err(|e| Error::config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// Range checks on the numeric knobs.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::config(msg.to_string())) };
        check((2..=16).contains(&self.d), "d must lie in [2, 16]")?;
        check((4..=200).contains(&self.depth), "depth must lie in [4, 200]")?;
        check((4..=400).contains(&self.i_max), "imax must lie in [4, 400]")?;
        check((1..=1_000_000).contains(&self.samples), "samples must lie in [1, 10^6]")?;
        check(self.h > 0.0 && self.h <= 0.25, "h must lie in (0, 1/4]")?;
        check(self.tol > 0.0 && self.tol < 1.0, "tol must lie in (0, 1)")?;
        check(self.max_iterations >= 1, "max-iterations must be positive")?;
        check(self.theta.map_or(true, |t| (0.0..=1.0).contains(&t)), "theta must lie in [0, 1]")?;
        check(self.alpha.map_or(true, |a| a > 0.0 && a.is_finite()), "alpha must be positive")?;
        check(self.depths.iter().all(|&k| (1..=self.i_max).contains(&k)), "depths must lie in [1, imax]")?;
        check(self.depths.windows(2).all(|w| w[0] < w[1]), "depths must be increasing")?;
        self.exact_config().map(|_| ())
    }

    pub fn exact_config(&self) -> Result<ExponentConfig<BigRational>> {
        ExponentConfig::new(self.d, self.p.clone(), self.s.clone(), self.t.clone())
    }

    pub fn float_config(&self) -> Result<ExponentConfig<f64>> {
        to_float(self.d, &self.p, &self.s, &self.t)
    }
}

pub(crate) fn float_exponent(e: &Exponent<BigRational>) -> Exponent<f64> {
    e.map(|v| v.as_f64())
}

pub(crate) fn to_float(
    d: u32,
    p: &BigRational,
    s: &Exponent<BigRational>,
    t: &Exponent<BigRational>,
) -> Result<ExponentConfig<f64>> {
    ExponentConfig::new(d, p.as_f64(), float_exponent(s), float_exponent(t))
}
