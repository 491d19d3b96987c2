use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand for building an exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A nonlinearity exponent or a derived quantity: exact when built from
/// rationals, otherwise an `f64` approximation (e.g. the Strauss exponent).
#[derive(Debug, Clone, PartialEq)]
pub enum Power {
    Exact(BigRational),
    Approx(f64),
}

impl Power {
    pub fn exact(num: i64, den: i64) -> Self {
        Power::Exact(ratio(num, den))
    }

    /// Exact dyadic conversion of a finite float.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Power::Exact)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Power::Exact(r) => rational_to_f64(r),
            Power::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Power::Exact(r) => Some(r),
            Power::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Power::Exact(_))
    }

    /// Sign of the value; approximate values within `tol` of zero count as zero.
    pub fn signum_with_tol(&self, tol: f64) -> i8 {
        match self {
            Power::Exact(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Power::Approx(x) => {
                if x.abs() < tol {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub(crate) fn greater_than_one(&self) -> bool {
        match self {
            Power::Exact(r) => *r > BigRational::one(),
            Power::Approx(x) => *x > 1.0,
        }
    }

    /// Applies `exact` when both operands are exact and `approx` otherwise.
    pub(crate) fn combine(
        a: &Power,
        b: &Power,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        approx: impl FnOnce(f64, f64) -> f64,
    ) -> Power {
        match (a, b) {
            (Power::Exact(x), Power::Exact(y)) => Power::Exact(exact(x, y)),
            _ => Power::Approx(approx(a.to_f64(), b.to_f64())),
        }
    }

    pub(crate) fn max(a: Power, b: Power) -> Power {
        match (&a, &b) {
            (Power::Exact(x), Power::Exact(y)) => {
                if x >= y {
                    a
                } else {
                    b
                }
            }
            _ => Power::Approx(a.to_f64().max(b.to_f64())),
        }
    }

    pub(crate) fn neg_recip(&self) -> Power {
        match self {
            Power::Exact(r) => Power::Exact(-r.recip()),
            Power::Approx(x) => Power::Approx(-1.0 / x),
        }
    }
}

impl Power {
    pub fn int(k: i64) -> Self {
        Power::exact(k, 1)
    }

    /// `self^k` by repeated multiplication.
    pub fn powi(&self, k: u32) -> Power {
        let mut acc = Power::int(1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Power {
        match self {
            Power::Exact(r) => Power::Exact(r.recip()),
            Power::Approx(x) => Power::Approx(1.0 / x),
        }
    }
}

macro_rules! power_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl core::ops::$tr<&Power> for &Power {
            type Output = Power;
            fn $method(self, rhs: &Power) -> Power {
                Power::combine(self, rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }

        impl core::ops::$tr<Power> for Power {
            type Output = Power;
            fn $method(self, rhs: Power) -> Power {
                &self $op &rhs
            }
        }

        impl core::ops::$tr<&Power> for Power {
            type Output = Power;
            fn $method(self, rhs: &Power) -> Power {
                &self $op rhs
            }
        }

        impl core::ops::$tr<Power> for &Power {
            type Output = Power;
            fn $method(self, rhs: Power) -> Power {
                self $op &rhs
            }
        }

        impl core::ops::$tr<i64> for &Power {
            type Output = Power;
            fn $method(self, rhs: i64) -> Power {
                self $op &Power::int(rhs)
            }
        }

        impl core::ops::$tr<i64> for Power {
            type Output = Power;
            fn $method(self, rhs: i64) -> Power {
                &self $op &Power::int(rhs)
            }
        }
    };
}

power_binop!(Add, add, +);
power_binop!(Sub, sub, -);
power_binop!(Mul, mul, *);
power_binop!(Div, div, /);

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Power::Exact(r) => write!(f, "{}", r),
            Power::Approx(x) => write!(f, "{}", x),
        }
    }
}

impl From<BigRational> for Power {
    fn from(r: BigRational) -> Self {
        Power::Exact(r)
    }
}

/// Converts a big rational to the nearest-ish `f64` without overflowing on
/// large numerators and denominators.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down by a shared power of two.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        return if r.is_positive() { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(3) * BigInt::from(10).pow(400), BigInt::from(10).pow(400));
        assert!((rational_to_f64(&big) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn arithmetic_stays_exact() {
        let p = Power::exact(3, 2);
        assert_eq!(&p * &p - 1, Power::exact(5, 4));
        assert_eq!(p.powi(3), Power::exact(27, 8));
        assert_eq!(p.recip() / 2, Power::exact(1, 3));
        let x = Power::Approx(2.0) + Power::exact(1, 2);
        assert_eq!(x, Power::Approx(2.5));
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        assert_eq!(Power::from_f64_exact(1.5), Some(Power::exact(3, 2)));
    }
}
