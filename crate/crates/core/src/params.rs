//! Exponent bookkeeping: admissibility of `(d, p, s, t)`, the Moser-iteration
//! constants, the counterexample parameters and the weight interpolation
//! exponent `theta`.
//!
//! Everything except [`counterexample_params`] uses field operations only, so
//! it is exact when instantiated with a rational type.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// An integrability exponent in `[1, inf]`. Infinity is a distinct variant
/// so that `1/inf = 0` holds without relying on IEEE infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Exponent<T> {
    pub fn recip(&self) -> T {
        match self {
            Exponent::Finite(x) => T::one() / x.clone(),
            Exponent::Infinite => T::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Exponent::Finite(x) => Some(x),
            Exponent::Infinite => None,
        }
    }

    /// Builds the exponent whose reciprocal is `r`; `r = 0` maps to infinity.
    pub fn from_recip(r: T) -> Self {
        if r.is_zero() {
            Exponent::Infinite
        } else {
            Exponent::Finite(T::one() / r)
        }
    }

    /// `x / (x - 1)` with the conventions `inf -> 1`; `None` for `x = 1`.
    pub fn conjugate_ratio(&self) -> Option<T> {
        match self {
            Exponent::Infinite => Some(T::one()),
            Exponent::Finite(x) => {
                let den = x.clone() - T::one();
                if den.is_zero() {
                    None
                } else {
                    Some(x.clone() / den)
                }
            }
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(x) => x.as_f64(),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Exponent<U> {
        match self {
            Exponent::Finite(x) => Exponent::Finite(f(x)),
            Exponent::Infinite => Exponent::Infinite,
        }
    }
}

impl<T: Scalar> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(x) => write!(f, "{x}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// The exponent tuple `(d, p, s, t)`: dimension, growth, integrability of
/// `mu` and integrability of `1/lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentConfig<T> {
    d: u32,
    p: T,
    s: Exponent<T>,
    t: Exponent<T>,
}

impl<T: Scalar> ExponentConfig<T> {
    pub fn new(d: u32, p: T, s: Exponent<T>, t: Exponent<T>) -> Result<Self> {
        if d < 2 {
            return Err(Error::config(format!("dimension d = {d} violates d >= 2")));
        }
        if p <= T::one() {
            return Err(Error::config(format!("growth exponent p = {p} violates p > 1")));
        }
        if let Exponent::Finite(s) = &s {
            if *s < T::one() {
                return Err(Error::config(format!("exponent s = {s} violates s >= 1")));
            }
        }
        if let Exponent::Finite(tv) = &t {
            let bound = T::one() / (p.clone() - T::one());
            if *tv <= bound {
                return Err(Error::config(format!(
                    "exponent t = {tv} violates t > 1/(p-1) = {bound}"
                )));
            }
        }
        Ok(Self { d, p, s, t })
    }

    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn p(&self) -> &T {
        &self.p
    }
    pub fn s(&self) -> &Exponent<T> {
        &self.s
    }
    pub fn t(&self) -> &Exponent<T> {
        &self.t
    }

    fn dm1(&self) -> T {
        T::from_int(i64::from(self.d) - 1)
    }

    /// `1/s + 1/t`.
    pub fn reciprocal_sum(&self) -> T {
        self.s.recip() + self.t.recip()
    }

    /// `p / (d - 1)`, the right-hand side of the sharp condition.
    pub fn critical_value(&self) -> T {
        self.p.clone() / self.dm1()
    }

    /// `t p / (t + 1)`, the Sobolev exponent in the bound.
    pub fn bound_exponent(&self) -> T {
        self.p.clone() / (T::one() + self.t.recip())
    }
}

/// Regime of an exponent configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// `1/s + 1/t < p/(d-1)`: local boundedness holds.
    TheoremAdmissible,
    /// On the critical line but the counterexample hypotheses fail.
    Critical,
    /// Strictly beyond the line with `p <= 1 + 1/(d-2)`.
    CounterexampleStrict,
    /// On or beyond the line with `p > 1 + 1/(d-2)`.
    CounterexampleCritical,
    Outside,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::TheoremAdmissible => "THEOREM_ADMISSIBLE",
            RegimeTag::Critical => "CRITICAL",
            RegimeTag::CounterexampleStrict => "COUNTEREXAMPLE_STRICT",
            RegimeTag::CounterexampleCritical => "COUNTEREXAMPLE_CRITICAL",
            RegimeTag::Outside => "OUTSIDE",
        }
    }

    pub fn is_counterexample(self) -> bool {
        matches!(self, RegimeTag::CounterexampleStrict | RegimeTag::CounterexampleCritical)
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub reasons: Vec<String>,
}

/// Where `1/s + 1/t` sits relative to `p/(d-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineSide {
    Below,
    On,
    Above,
}

fn line_side<T: Scalar>(config: &ExponentConfig<T>) -> LineSide {
    let sum = config.reciprocal_sum();
    let crit = config.critical_value();
    let tol = T::line_tolerance() * crit.clone().max_of(T::one());
    if sum.clone() < crit.clone() - tol.clone() {
        LineSide::Below
    } else if sum > crit + tol {
        LineSide::Above
    } else {
        LineSide::On
    }
}

fn predicate(reasons: &mut Vec<String>, name: &str, ok: bool) -> bool {
    reasons.push(format!("{name}: {}", if ok { "holds" } else { "fails" }));
    ok
}

/// Classifies `(d, p, s, t)` against the sharp condition and the
/// hypotheses of the unbounded-subsolution construction.
pub fn classify<T: Scalar>(config: &ExponentConfig<T>) -> Regime {
    let mut reasons = Vec::new();
    let side = line_side(config);
    let sum = config.reciprocal_sum();
    let crit = config.critical_value();
    reasons.push(format!("1/s + 1/t = {sum}, p/(d-1) = {crit}"));

    if predicate(&mut reasons, "1/s + 1/t < p/(d-1)", side == LineSide::Below) {
        return Regime { tag: RegimeTag::TheoremAdmissible, reasons };
    }

    let d = config.d();
    let dim_ok = predicate(&mut reasons, "d >= 3", d >= 3);
    let tt_ok = predicate(
        &mut reasons,
        "(t/(t+1)) p < d-1",
        config.bound_exponent() < T::from_int(i64::from(d) - 1),
    );
    let tag = if dim_ok && tt_ok {
        let threshold = T::one() + T::one() / T::from_int(i64::from(d) - 2);
        let high_p = predicate(&mut reasons, "p > 1 + 1/(d-2)", *config.p() > threshold);
        if high_p {
            RegimeTag::CounterexampleCritical
        } else if predicate(&mut reasons, "1/s + 1/t > p/(d-1) strictly", side == LineSide::Above) {
            RegimeTag::CounterexampleStrict
        } else {
            RegimeTag::Critical
        }
    } else if side == LineSide::On {
        RegimeTag::Critical
    } else {
        RegimeTag::Outside
    };
    Regime { tag, reasons }
}

/// Constants of the Moser iteration for an admissible configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MoserConstants<T> {
    pub s_star: T,
    pub delta: T,
    pub chi: T,
    /// Exponent `1/(p delta)` on `Lambda` in the sup bound.
    pub sup_exponent: T,
    d: u32,
    p: T,
    s: Exponent<T>,
    t: Exponent<T>,
}

impl<T: Scalar> MoserConstants<T> {
    /// Exponent `(1/gamma) (s/(s-1)) (1 + 1/delta)` of the `L^inf - L^gamma` estimate.
    pub fn corollary_exponent(&self, gamma: T) -> Result<T> {
        if gamma <= T::zero() {
            return Err(Error::config(format!("gamma = {gamma} must be positive")));
        }
        let ratio = self
            .s
            .conjugate_ratio()
            .ok_or_else(|| Error::config("the L^inf - L^gamma estimate requires s > 1"))?;
        Ok(T::one() / gamma * ratio * (T::one() + T::one() / self.delta.clone()))
    }

    /// Covering exponent `kappa(alpha)`.
    pub fn kappa(&self, alpha: T) -> T {
        let inv_s = self.s.recip();
        let inv_t = self.t.recip();
        let inner = (inv_t + inv_s.clone()) * (T::one() + T::one() / self.delta.clone()) + T::one() - inv_s;
        T::from_int(i64::from(self.d)) / (alpha * self.p.clone()) * inner
    }
}

/// `s_* = max{1, ((1/p)(1 - 1/s) + 1/(d-1))^{-1}}`.
pub fn s_star<T: Scalar>(config: &ExponentConfig<T>) -> T {
    let inv = T::one() / config.p().clone() * (T::one() - config.s().recip())
        + T::one() / config.dm1();
    (T::one() / inv).max_of(T::one())
}

/// `delta = 1/s_* - (1/p)(1 + 1/t)`.
pub fn delta<T: Scalar>(config: &ExponentConfig<T>) -> T {
    T::one() / s_star(config) - T::one() / config.p().clone() * (T::one() + config.t().recip())
}

pub fn moser_constants<T: Scalar>(config: &ExponentConfig<T>) -> Result<MoserConstants<T>> {
    let s_star = s_star(config);
    let delta = delta(config);
    let regime = classify(config);
    if regime.tag != RegimeTag::TheoremAdmissible || delta <= T::zero() {
        return Err(Error::NotAdmissible { delta: delta.as_f64() });
    }
    let chi = T::one() + delta.clone();
    let sup_exponent = T::one() / (config.p().clone() * delta.clone());
    Ok(MoserConstants {
        s_star,
        delta,
        chi,
        sup_exponent,
        d: config.d(),
        p: config.p().clone(),
        s: config.s().clone(),
        t: config.t().clone(),
    })
}

/// Parameters of the explicit weight/profile construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleParams<T> {
    pub d: u32,
    pub p: T,
    /// Decay exponent of the power-law branch of the profile.
    pub q: T,
    pub c_q: T,
    /// Smallest certified drift rate.
    pub alpha0: T,
}

pub fn counterexample_params<T: Real>(d: u32, p: T) -> Result<CounterexampleParams<T>> {
    if d < 3 {
        return Err(Error::config(format!(
            "the construction needs d >= 3 (got d = {d})"
        )));
    }
    if p <= T::one() {
        return Err(Error::config(format!("p = {p} violates p > 1")));
    }
    let two = T::lit(2.0);
    let dd = T::lit(f64::from(d));
    let q = if p >= two {
        (dd - T::lit(3.0)).max(T::one())
    } else {
        (dd - two) / (p - T::one()) - T::one()
    };
    if q <= T::zero() {
        return Err(Error::config(format!("profile exponent Q = {q} is not positive")));
    }
    let two_q = two.powf(q);
    let c_q = q * two_q * two / (two_q - T::one());
    let pm1 = p - T::one();
    let candidates = [
        T::one(),
        c_q,
        two.powf((two - p) / pm1) * c_q,
        two.powf(p) * (c_q * (T::one() + (dd - two) / pm1)).sqrt(),
        T::lit(8.0) * (dd - T::one()) / pm1,
    ];
    let alpha0 = candidates.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(CounterexampleParams { d, p, q, c_q, alpha0 })
}

/// Interpolation exponent of the weight together with the auxiliary pair
/// `(s_bar, t_bar)` on the critical line that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaChoice<T> {
    pub theta: T,
    pub s_bar: Exponent<T>,
    pub t_bar: Exponent<T>,
}

/// Chooses `theta` for a counterexample configuration.
///
/// On the critical line `theta = (1/t)(d-1)/p`. Strictly beyond it the pair
/// `(1/s, 1/t)` is scaled toward the origin until it meets the line, which
/// yields `s_bar > s` and `t_bar > t`.
pub fn theta_from_st<T: Scalar>(config: &ExponentConfig<T>) -> Result<ThetaChoice<T>> {
    let regime = classify(config);
    if !regime.tag.is_counterexample() {
        return Err(Error::config(format!(
            "theta is only defined for counterexample regimes (got {})",
            regime.tag
        )));
    }
    let crit = config.critical_value();
    let (inv_s, inv_t) = match line_side(config) {
        LineSide::On => (config.s().recip(), config.t().recip()),
        _ => {
            let scale = crit.clone() / config.reciprocal_sum();
            (config.s().recip() * scale.clone(), config.t().recip() * scale)
        }
    };
    let dm1 = config.dm1();
    let p = config.p().clone();
    let theta = inv_t.clone() * dm1.clone() / p.clone();
    let margin = (T::one() - theta.clone()) * p;
    if margin >= dm1 {
        return Err(Error::Verification(format!(
            "(1 - theta) p = {margin} is not below d - 1 = {dm1}"
        )));
    }
    Ok(ThetaChoice {
        theta: theta.max_of(T::zero()).min_of(T::one()),
        s_bar: Exponent::from_recip(inv_s),
        t_bar: Exponent::from_recip(inv_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    fn cfg(d: u32, p: f64, s: f64, t: f64) -> ExponentConfig<f64> {
        let e = |x: f64| if x.is_infinite() { Exponent::Infinite } else { Exponent::Finite(x) };
        ExponentConfig::new(d, p, e(s), e(t)).unwrap()
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExponentConfig::new(1, 2.0, Exponent::Infinite, Exponent::Infinite).is_err());
        assert!(ExponentConfig::new(3, 1.0, Exponent::Infinite, Exponent::Infinite).is_err());
        let e = ExponentConfig::new(3, 2.0, Exponent::Finite(2.0), Exponent::Finite(1.0)).unwrap_err();
        assert!(e.to_string().contains("t > 1/(p-1)"));
        assert!(ExponentConfig::new(3, 2.0, Exponent::Finite(0.5), Exponent::Infinite).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&cfg(4, 2.0, 4.0, 4.0)).tag, RegimeTag::TheoremAdmissible);
        assert_eq!(classify(&cfg(4, 2.0, 3.0, 3.0)).tag, RegimeTag::CounterexampleCritical);
        let inf = f64::INFINITY;
        assert_eq!(classify(&cfg(4, 2.0, inf, inf)).tag, RegimeTag::TheoremAdmissible);
        // d = 3, p = 2 on the line: construction fails there.
        assert_eq!(classify(&cfg(3, 2.0, 2.0, 2.0)).tag, RegimeTag::Critical);
        // strict regime for small p
        assert_eq!(classify(&cfg(3, 1.2, 1.25, 10.0)).tag, RegimeTag::CounterexampleStrict);
        // d = 2 is always admissible
        assert_eq!(classify(&cfg(2, 1.5, 1.0, 2.5)).tag, RegimeTag::TheoremAdmissible);
    }

    #[test]
    fn classify_rational_on_line() {
        let c = ExponentConfig::new(4, q(2, 1), Exponent::Finite(q(3, 1)), Exponent::Finite(q(3, 1))).unwrap();
        let r = classify(&c);
        assert_eq!(r.tag, RegimeTag::CounterexampleCritical);
        assert!(r.reasons.iter().any(|s| s.contains("p > 1 + 1/(d-2): holds")));
    }

    #[test]
    fn moser_constants_exact() {
        let c = ExponentConfig::new(4, q(2, 1), Exponent::Finite(q(4, 1)), Exponent::Finite(q(4, 1))).unwrap();
        let m = moser_constants(&c).unwrap();
        assert_eq!(m.s_star, q(24, 17));
        assert_eq!(m.delta, q(1, 12));
        assert_eq!(m.chi, q(13, 12));
        assert_eq!(m.sup_exponent, q(6, 1));
        // (1/gamma)(4/3)(13) at gamma = 1
        assert_eq!(m.corollary_exponent(q(1, 1)).unwrap(), q(52, 3));

        let c = ExponentConfig::new(3, q(2, 1), Exponent::Infinite, Exponent::Infinite).unwrap();
        let m = moser_constants(&c).unwrap();
        assert_eq!(m.s_star, q(1, 1));
        assert_eq!(m.delta, q(1, 2));
        assert_eq!(m.chi, q(3, 2));

        let c = ExponentConfig::new(4, q(2, 1), Exponent::Finite(q(3, 1)), Exponent::Finite(q(3, 1))).unwrap();
        match moser_constants(&c) {
            Err(Error::NotAdmissible { delta }) => assert_eq!(delta, 0.0),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn corollary_requires_s_above_one() {
        let c = ExponentConfig::new(3, q(3, 1), Exponent::Finite(q(1, 1)), Exponent::Infinite).unwrap();
        let m = moser_constants(&c).unwrap();
        assert!(m.corollary_exponent(q(1, 1)).is_err());
    }

    #[test]
    fn counterexample_params_examples() {
        let c = counterexample_params(4, 2.0_f64).unwrap();
        assert_eq!(c.q, 1.0);
        assert!((c.c_q - 4.0).abs() < 1e-14);
        assert!((c.alpha0 - 24.0).abs() < 1e-12);
        let c = counterexample_params(5, 3.0_f64).unwrap();
        assert_eq!(c.q, 2.0);
        assert!((c.c_q - 16.0 / 3.0).abs() < 1e-13);
        let c = counterexample_params(4, 1.5_f64).unwrap();
        assert!((c.q - 3.0).abs() < 1e-14);
        assert!((c.c_q - 48.0 / 7.0).abs() < 1e-13);
        assert!(counterexample_params(2, 2.0_f64).is_err());
    }

    #[test]
    fn theta_examples() {
        let c = ExponentConfig::new(4, q(2, 1), Exponent::Finite(q(3, 1)), Exponent::Finite(q(3, 1))).unwrap();
        let th = theta_from_st(&c).unwrap();
        assert_eq!(th.theta, q(1, 2));
        assert_eq!((q(1, 1) - th.theta) * q(2, 1), q(1, 1));

        let c = ExponentConfig::new(4, q(2, 1), Exponent::Infinite, Exponent::Finite(q(3, 2))).unwrap();
        assert_eq!(theta_from_st(&c).unwrap().theta, q(1, 1));

        // strict regime: (1/s, 1/t) = (4/5, 1/10) scaled by 0.6/0.9
        let c = ExponentConfig::new(3, q(6, 5), Exponent::Finite(q(5, 4)), Exponent::Finite(q(10, 1))).unwrap();
        let th = theta_from_st(&c).unwrap();
        assert_eq!(th.s_bar, Exponent::Finite(q(15, 8)));
        assert_eq!(th.t_bar, Exponent::Finite(q(15, 1)));
        assert_eq!(th.theta, q(1, 9));

        // admissible pair has no theta
        let c = ExponentConfig::new(3, q(6, 5), Exponent::Finite(q(10, 1)), Exponent::Finite(q(10, 1))).unwrap();
        assert!(theta_from_st(&c).is_err());
    }
}
