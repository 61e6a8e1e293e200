//! Scalar abstractions.
//!
//! Exponent bookkeeping only needs field operations and an order, so it is
//! written against [`Scalar`] and runs unchanged on `f32`, `f64` and exact
//! rationals. Everything that needs `exp`, `ln`, `sqrt` or powers with real
//! exponents is written against [`Real`].

use std::fmt::{Debug, Display};

use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field used for exponent arithmetic.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Signed {
    fn from_int(value: i64) -> Self;

    /// Half-width of the band treated as "equal" when comparing against the
    /// critical line. Zero for exact types.
    fn line_tolerance() -> Self;

    fn as_f64(&self) -> f64;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Floating-point scalar used by all transcendental computations.
pub trait Real: Scalar + Float + FromPrimitive + Copy + Send + Sync + 'static {
    /// Lossless-enough conversion of a literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("representable index")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn from_int(value: i64) -> Self {
                value as $t
            }
            #[inline]
            fn line_tolerance() -> Self {
                64.0 * <$t>::EPSILON
            }
            #[inline]
            fn as_f64(&self) -> f64 {
                *self as f64
            }
        }
        impl Real for $t {}
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for Ratio<i64> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(value)
    }
    fn line_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn as_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Scalar for BigRational {
    fn from_int(value: i64) -> Self {
        BigRational::from_integer(value.into())
    }
    fn line_tolerance() -> Self {
        BigRational::from_integer(0.into())
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Area of the unit sphere `S^{m-1}` in `R^m`, i.e. `2 pi^{m/2} / Gamma(m/2)`.
pub fn unit_sphere_area<T: Real>(m: u32) -> T {
    assert!(m >= 1, "ambient dimension must be positive");
    let pi = T::lit(std::f64::consts::PI);
    // Gamma at integers and half-integers by the recurrence.
    let mut gamma = if m % 2 == 0 { T::one() } else { pi.sqrt() };
    let mut arg = if m % 2 == 0 { T::one() } else { T::lit(0.5) };
    let target = T::lit(f64::from(m) / 2.0);
    while arg < target {
        gamma = gamma * arg;
        arg = arg + T::one();
    }
    T::lit(2.0) * pi.powf(target) / gamma
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume<T: Real>(d: u32) -> T {
    unit_sphere_area::<T>(d) / T::lit(f64::from(d))
}
