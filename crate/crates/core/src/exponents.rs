//! Critical-curve calculus for the weakly coupled system.
//!
//! Every function here is exact when `p` and `q` are rationals and falls back
//! to `f64` arithmetic as soon as one of them is irrational (typically the
//! Strauss exponent).

use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{ratio, Error, Power, Result};

/// Tolerance below which an approximate `max{F, F}` counts as zero.
pub const CRITICAL_TOL: f64 = 1e-12;

/// The tuple `(n, p, q, R, ε)` shared by every formula.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub n: u32,
    pub p: Power,
    pub q: Power,
    /// Radius of the ball containing the support of the initial data.
    pub radius: f64,
    pub eps: f64,
}

impl SystemParams {
    pub fn new(n: u32, p: Power, q: Power, radius: f64, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension);
        }
        check_exponent("p", &p)?;
        check_exponent("q", &q)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter { name: "R", reason: "must be positive".to_string() });
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter { name: "eps", reason: "must be positive".to_string() });
        }
        Ok(Self { n, p, q, radius, eps })
    }

    /// Same system with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self { p: self.q.clone(), q: self.p.clone(), ..self.clone() }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..self.clone() }
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64()
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64()
    }

    /// `p == q`, exactly for rationals, within `1e-12` otherwise.
    pub fn symmetric(&self) -> bool {
        match (&self.p, &self.q) {
            (Power::Exact(a), Power::Exact(b)) => a == b,
            _ => (self.p_f64() - self.q_f64()).abs() < 1e-12,
        }
    }
}

fn check_exponent(name: &'static str, value: &Power) -> Result<()> {
    if value.greater_than_one() {
        Ok(())
    } else {
        Err(Error::ExponentNotAboveOne { name, value: value.to_f64() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    SubcriticalBlowup,
    CriticalBlowup,
    Unknown,
}

/// Classification of `(n, p, q)` together with `(F(n,p,q), F(n,q,p))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionClass {
    pub tag: RegionTag,
    pub f_values: (Power, Power),
}

impl RegionClass {
    pub fn max_f(&self) -> Power {
        Power::max(self.f_values.0.clone(), self.f_values.1.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawForm {
    /// `T(ε) ≤ C ε^exponent`.
    PowerLaw,
    /// `T(ε) ≤ exp(C ε^exponent)`.
    ExponentialLaw,
}

/// Which estimate produced a lifespan law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawBasis {
    /// `-1 / max{F(n,p,q), F(n,q,p)}`.
    Subcritical,
    /// Both initial speeds have nonzero mass, `n = 1` or `n = 2, 1 < p, q < 2`.
    BothSpeedsLowDim,
    /// `∫u₁ ≠ 0`, `n = 2, 1 < p < 2 ≤ q`.
    USpeedPlanar,
    /// `∫v₁ ≠ 0`, `n = 2, 1 < q < 2 ≤ p`.
    VSpeedPlanar,
    /// Exponential law on the critical curve.
    Critical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifespanLaw {
    pub form: LawForm,
    pub exponent: Power,
    pub basis: LawBasis,
}

/// Which initial speeds have a nonvanishing integral.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpeedFlags {
    pub u1_nonzero: bool,
    pub v1_nonzero: bool,
}

fn f_exact(n: u32, p: &BigRational, q: &BigRational) -> BigRational {
    let one = BigRational::one();
    (p + ratio(2, 1) + q.recip()) / (p * q - &one) - ratio(n as i64 - 1, 2)
}

fn f_approx(n: u32, p: f64, q: f64) -> f64 {
    (p + 2.0 + 1.0 / q) / (p * q - 1.0) - (n as f64 - 1.0) / 2.0
}

fn g_exact(n: u32, p: &BigRational, q: &BigRational) -> BigRational {
    let one = BigRational::one();
    let n_r = ratio(n as i64, 1);
    ratio(2, 1) * (&one + p.recip()) / (p * q - &one) - &n_r / p + n_r - ratio(2, 1)
}

fn g_approx(n: u32, p: f64, q: f64) -> f64 {
    let n = n as f64;
    2.0 * (1.0 + 1.0 / p) / (p * q - 1.0) - n / p + n - 2.0
}

fn check_pair(n: u32, p: &Power, q: &Power) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension);
    }
    check_exponent("p", p)?;
    check_exponent("q", q)
}

/// `F(n,p,q) = (p + 2 + 1/q)/(pq − 1) − (n − 1)/2`.
pub fn compute_f(n: u32, p: &Power, q: &Power) -> Result<Power> {
    check_pair(n, p, q)?;
    Ok(Power::combine(p, q, |a, b| f_exact(n, a, b), |a, b| f_approx(n, a, b)))
}

/// `G(n,p,q) = 2(1 + 1/p)/(pq − 1) − n/p + n − 2`.
///
/// Only meaningful for `n ∈ {1, 2}`; larger dimensions log a warning and still
/// return the value.
pub fn compute_g(n: u32, p: &Power, q: &Power) -> Result<Power> {
    check_pair(n, p, q)?;
    if n >= 3 {
        log::warn!("G(n,p,q) carries no lifespan claim for n = {n} >= 3");
    }
    Ok(Power::combine(p, q, |a, b| g_exact(n, a, b), |a, b| g_approx(n, a, b)))
}

/// Positive root of `(n−1)p² − (n+1)p − 2 = 0`; `+∞` for `n = 1`, where every
/// `p > 1` leads to blow-up.
///
/// # Panics
/// If `n == 0`.
pub fn strauss_exponent(n: u32) -> f64 {
    assert!(n >= 1, "dimension must be at least 1");
    if n == 1 {
        return f64::INFINITY;
    }
    let a = (n - 1) as f64;
    let b = (n + 1) as f64;
    (b + libm::sqrt(b * b + 8.0 * a)) / (2.0 * a)
}

/// `(p + 2 + 1/q)/(pq − 1)`, the coupled rate entering the critical curve.
pub fn coupled_rate(p: &Power, q: &Power) -> Power {
    let one = BigRational::one();
    Power::combine(
        p,
        q,
        |a, b| (a + ratio(2, 1) + b.recip()) / (a * b - &one),
        |a, b| (a + 2.0 + 1.0 / b) / (a * b - 1.0),
    )
}

/// `(1 + 1/p)/(p − 1)`, the single-equation rate.
pub fn single_rate(p: &Power) -> Power {
    match p {
        Power::Exact(a) => {
            let one = BigRational::one();
            Power::Exact((&one + a.recip()) / (a - &one))
        }
        Power::Approx(a) => Power::Approx((1.0 + 1.0 / a) / (a - 1.0)),
    }
}

/// Both coupled rates against both single-equation rates.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveComparison {
    pub coupled_max: Power,
    pub single_max: Power,
    pub single_min: Power,
}

impl CurveComparison {
    pub fn new(p: &Power, q: &Power) -> Self {
        let c1 = coupled_rate(p, q);
        let c2 = coupled_rate(q, p);
        let s1 = single_rate(p);
        let s2 = single_rate(q);
        let single_min = match (&s1, &s2) {
            (Power::Exact(a), Power::Exact(b)) => Power::Exact(a.min(b).clone()),
            _ => Power::Approx(s1.to_f64().min(s2.to_f64())),
        };
        Self { coupled_max: Power::max(c1, c2), single_max: Power::max(s1, s2), single_min }
    }

    /// `max coupled ≥ max single`.
    pub fn dominates_single_max(&self) -> bool {
        ge(&self.coupled_max, &self.single_max)
    }

    /// `max coupled ≥ min single`.
    pub fn dominates_single_min(&self) -> bool {
        ge(&self.coupled_max, &self.single_min)
    }
}

fn ge(a: &Power, b: &Power) -> bool {
    match (a, b) {
        (Power::Exact(x), Power::Exact(y)) => x >= y,
        _ => a.to_f64() >= b.to_f64() - 1e-12,
    }
}

/// Places `(n, p, q)` relative to the critical curve.
pub fn classify(params: &SystemParams) -> RegionClass {
    let f1 = Power::combine(&params.p, &params.q, |a, b| f_exact(params.n, a, b), |a, b| {
        f_approx(params.n, a, b)
    });
    let f2 = Power::combine(&params.q, &params.p, |a, b| f_exact(params.n, a, b), |a, b| {
        f_approx(params.n, a, b)
    });
    let max = Power::max(f1.clone(), f2.clone());
    let tag = match max.signum_with_tol(CRITICAL_TOL) {
        1 => RegionTag::SubcriticalBlowup,
        0 => RegionTag::CriticalBlowup,
        _ => RegionTag::Unknown,
    };
    RegionClass { tag, f_values: (f1, f2) }
}

fn in_open_unit_interval_above_one(x: &Power, upper: i64) -> bool {
    match x {
        Power::Exact(r) => *r > BigRational::one() && *r < ratio(upper, 1),
        Power::Approx(v) => *v > 1.0 && *v < upper as f64,
    }
}

fn at_least(x: &Power, bound: i64) -> bool {
    match x {
        Power::Exact(r) => *r >= ratio(bound, 1),
        Power::Approx(v) => *v >= bound as f64,
    }
}

/// Upper lifespan law (exponent of `ε`) for the region of `params`.
///
/// With speed flags set, the low-dimensional improvements replace the
/// subcritical rate when `(n, p, q)` lies in their range. An improvement whose
/// rate is not positive cannot produce a power law; the subcritical law is
/// returned instead.
pub fn lifespan_law(params: &SystemParams, speeds: SpeedFlags) -> Result<LifespanLaw> {
    let class = classify(params);
    let (n, p, q) = (params.n, &params.p, &params.q);
    match class.tag {
        RegionTag::Unknown => Err(Error::UnknownRegion),
        RegionTag::CriticalBlowup => {
            let exponent = if params.symmetric() {
                Power::combine(p, p, |a, _| -(a * (a - BigRational::one())), |a, _| -(a * (a - 1.0)))
            } else {
                let pq1 = Power::combine(p, q, |a, b| a * b - BigRational::one(), |a, b| a * b - 1.0);
                let qa = Power::combine(q, &pq1, |a, b| a * b, |a, b| a * b);
                let pa = Power::combine(p, &pq1, |a, b| a * b, |a, b| a * b);
                let smaller = match (&qa, &pa) {
                    (Power::Exact(x), Power::Exact(y)) => Power::Exact(x.min(y).clone()),
                    _ => Power::Approx(qa.to_f64().min(pa.to_f64())),
                };
                Power::combine(&smaller, &smaller, |a, _| -a, |a, _| -a)
            };
            Ok(LifespanLaw { form: LawForm::ExponentialLaw, exponent, basis: LawBasis::Critical })
        }
        RegionTag::SubcriticalBlowup => {
            let base = class.max_f();
            let subcritical =
                LifespanLaw { form: LawForm::PowerLaw, exponent: base.neg_recip(), basis: LawBasis::Subcritical };
            if !speeds.u1_nonzero && !speeds.v1_nonzero {
                return Ok(subcritical);
            }
            let planar = n == 2;
            let improved = if speeds.u1_nonzero
                && speeds.v1_nonzero
                && (n == 1 || (planar && in_open_unit_interval_above_one(p, 2) && in_open_unit_interval_above_one(q, 2)))
            {
                let g = Power::max(compute_g(n, p, q)?, compute_g(n, q, p)?);
                Some((g, LawBasis::BothSpeedsLowDim))
            } else if speeds.u1_nonzero && planar && in_open_unit_interval_above_one(p, 2) && at_least(q, 2) {
                let rate = Power::max(compute_f(n, p, q)?, compute_g(n, p, q)?);
                Some((rate, LawBasis::USpeedPlanar))
            } else if speeds.v1_nonzero && planar && in_open_unit_interval_above_one(q, 2) && at_least(p, 2) {
                let rate = Power::max(compute_f(n, q, p)?, compute_g(n, q, p)?);
                Some((rate, LawBasis::VSpeedPlanar))
            } else {
                None
            };
            match improved {
                None => Err(Error::SpeedFlagsOutOfRange),
                Some((rate, basis)) => {
                    if rate.signum_with_tol(0.0) <= 0 {
                        log::warn!("improved rate {rate} is not positive; keeping the subcritical law");
                        Ok(subcritical)
                    } else {
                        Ok(LifespanLaw { form: LawForm::PowerLaw, exponent: rate.neg_recip(), basis })
                    }
                }
            }
        }
    }
}

/// Smallest integer `≥ x` for an exact rational.
pub(crate) fn ceil_rational(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}
