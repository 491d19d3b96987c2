use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::auxiliary::sphere_area;
use crate::damping::DampingProfile;
use crate::exponents::{classify, compute_f, RegionTag, SystemParams};
use crate::{Error, Power, Result};

/// One frame `U ≥ D_j (1+t)^{−a_j} t^{b_j}`, `V ≥ Δ_j (1+t)^{−α_j} t^{β_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcriticalState {
    pub j: usize,
    pub a: Power,
    pub b: Power,
    pub alpha: Power,
    pub beta: Power,
    pub log_d: f64,
    pub log_delta: f64,
}

/// How the first frame is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseCase {
    /// From the lower bounds of the nonlinear masses.
    Standard,
    /// From convexity, `U ≥ U'(0) t`, in one and two dimensions. Components
    /// outside the range `n = 1` or `n = 2, exponent < 2` keep the standard
    /// frame.
    LowDim {
        /// `∫ u₁`.
        speed_u: f64,
        /// `∫ v₁`.
        speed_v: f64,
        c1_tilde: f64,
        k1_tilde: f64,
    },
}

/// Frame, envelope and threshold constants for one `(n, p, q, R)` and a pair
/// of damping profiles. None of them depend on `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationConstants {
    pub c0: f64,
    pub k0: f64,
    pub c1: f64,
    pub k1: f64,
    pub m1_0: f64,
    pub m2_0: f64,
    /// Envelope `b_j < B̄₀ (pq)^{⌈(j−1)/2⌉}`.
    pub b0bar: f64,
    /// Envelope for `β_j`.
    pub b0tilde: f64,
    pub log_ctilde: f64,
    pub log_ktilde: f64,
    pub s_pq: f64,
    pub s_pq_tilde: f64,
    pub j0: i64,
    /// `log Ĉ`, present when `F(n, q, p) > 0`.
    pub log_chat: Option<f64>,
    /// `log K̂`, present when `F(n, p, q) > 0`.
    pub log_khat: Option<f64>,
}

/// `(B̄₀, B̃₀)` as exact values when possible.
fn envelope_constants(params: &SystemParams) -> (Power, Power) {
    let n = Power::int(params.n as i64);
    let pq = &params.p * &params.q;
    let tail = |e: &Power| (e + 1) * Power::int(2) / (&pq - 1);
    (&n + 2 + tail(&params.p), &n + 2 + tail(&params.q))
}

impl IterationConstants {
    /// Builds every derived scalar from the frame constants.
    pub fn with_frame(params: &SystemParams, c0: f64, k0: f64, c1: f64, k1: f64, m1_0: f64, m2_0: f64) -> Result<Self> {
        for (name, v) in [("C0", c0), ("K0", k0), ("C1", c1), ("K1", k1), ("m1(0)", m1_0), ("m2(0)", m2_0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name: "iteration constant", reason: format!("{name} = {v}") });
            }
        }
        let (p, q) = (params.p_f64(), params.q_f64());
        let n = params.n as f64;
        let pq = p * q;
        let (bbar, btilde) = envelope_constants(params);
        let (b0bar, b0tilde) = (bbar.to_f64(), btilde.to_f64());
        let log_ctilde = c0.ln() + p * k0.ln() - 2.0 * b0bar.ln() - 2.0 * p * b0tilde.ln();
        let log_ktilde = k0.ln() + q * c0.ln() - 2.0 * b0tilde.ln() - 2.0 * q * b0bar.ln();
        let lpq = pq.ln();
        let s_pq = 2.0 * pq * (p + 1.0) * lpq / (pq - 1.0).powi(2) - log_ctilde / (pq - 1.0);
        let s_pq_tilde = 2.0 * pq * (q + 1.0) * lpq / (pq - 1.0).powi(2) - log_ktilde / (pq - 1.0);

        let j0 = if log_ctilde == 0.0 && log_ktilde == 0.0 && params.p.is_exact() && params.q.is_exact() {
            let pqx = &params.p * &params.q;
            let x = Power::int(1) - Power::int(2) * &pqx / (&pqx - 1);
            crate::exponents::ceil_rational(x.as_exact().expect("exact inputs"))
                .try_into()
                .unwrap_or(i64::MAX)
        } else {
            let m = (log_ctilde / (p + 1.0)).max(log_ktilde / (q + 1.0));
            (m / lpq - 2.0 * pq / (pq - 1.0) + 1.0).ceil() as i64
        };

        let f_qp = compute_f(params.n, &params.q, &params.p)?.to_f64();
        let f_pq = compute_f(params.n, &params.p, &params.q)?.to_f64();
        let nn1 = (n * (n + 1.0)).ln();
        let log_chat = (f_qp > 0.0).then(|| {
            (nn1 - (m1_0 * k1).ln() + (n + (n - 1.0) * p / 2.0) * core::f64::consts::LN_2 + s_pq) / (p * f_qp)
        });
        let log_khat = (f_pq > 0.0).then(|| {
            (nn1 - (m2_0 * c1).ln() + (n + (n - 1.0) * q / 2.0) * core::f64::consts::LN_2 + s_pq_tilde) / (q * f_pq)
        });
        Ok(Self {
            c0,
            k0,
            c1,
            k1,
            m1_0,
            m2_0,
            b0bar,
            b0tilde,
            log_ctilde,
            log_ktilde,
            s_pq,
            s_pq_tilde,
            j0,
            log_chat,
            log_khat,
        })
    }

    /// `C₀ = m₁(0) |B₁|^{1−p} R^{−n(p−1)}` and its mirror `K₀`.
    pub fn from_damping(
        params: &SystemParams,
        b1: &DampingProfile,
        b2: &DampingProfile,
        c1: f64,
        k1: f64,
    ) -> Result<Self> {
        let n = params.n as f64;
        let ball = sphere_area(params.n - 1) / n;
        let (p, q) = (params.p_f64(), params.q_f64());
        let (m1, m2) = (b1.multiplier().at_zero(), b2.multiplier().at_zero());
        let c0 = m1 * ball.powf(1.0 - p) * params.radius.powf(-n * (p - 1.0));
        let k0 = m2 * ball.powf(1.0 - q) * params.radius.powf(-n * (q - 1.0));
        Self::with_frame(params, c0, k0, c1, k1, m1, m2)
    }

    /// All frame constants equal to one.
    pub fn unit(params: &SystemParams) -> Result<Self> {
        Self::with_frame(params, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    }
}

fn standard_exponents(params: &SystemParams) -> (Power, Power, Power, Power) {
    let n = params.n as i64;
    let half = Power::exact(n - 1, 2);
    (&half * &params.p, Power::int(n + 1), &half * &params.q, Power::int(n + 1))
}

fn low_dim_applies(n: u32, e: &Power) -> bool {
    n == 1 || (n == 2 && e.to_f64() < 2.0)
}

/// First frame `j = 1`.
pub fn subcritical_base(params: &SystemParams, consts: &IterationConstants, base: &BaseCase) -> Result<SubcriticalState> {
    if classify(params).tag != RegionTag::SubcriticalBlowup {
        return Err(Error::WrongRegion { expected: "subcritical" });
    }
    let n = params.n as f64;
    let (p, q) = (params.p_f64(), params.q_f64());
    let log_eps = params.eps.ln();
    let (a, b, alpha, beta) = standard_exponents(params);
    let mut state = SubcriticalState {
        j: 1,
        a,
        b,
        alpha,
        beta,
        log_d: (consts.m1_0 * consts.k1 / (n * (n + 1.0))).ln() + p * log_eps,
        log_delta: (consts.m2_0 * consts.c1 / (n * (n + 1.0))).ln() + q * log_eps,
    };
    if let BaseCase::LowDim { speed_u, speed_v, c1_tilde, k1_tilde } = *base {
        let u_side = low_dim_applies(params.n, &params.p);
        let v_side = low_dim_applies(params.n, &params.q);
        if !u_side && !v_side {
            return Err(Error::SpeedFlagsOutOfRange);
        }
        let nm1 = Power::int(params.n as i64 - 1);
        if u_side {
            if !(speed_v > 0.0) {
                return Err(Error::InvalidParameter { name: "speed_v", reason: format!("∫v₁ = {speed_v} must be > 0") });
            }
            state.a = params.p.clone();
            state.b = &nm1 * &params.p;
            state.log_d = k1_tilde.ln() + p * (speed_v.ln() + log_eps);
        }
        if v_side {
            if !(speed_u > 0.0) {
                return Err(Error::InvalidParameter { name: "speed_u", reason: format!("∫u₁ = {speed_u} must be > 0") });
            }
            state.alpha = params.q.clone();
            state.beta = &nm1 * &params.q;
            state.log_delta = c1_tilde.ln() + q * (speed_u.ln() + log_eps);
        }
    }
    Ok(state)
}

/// `ln((x + 1)(x + 2))` without forming the product.
fn log_pair(x: f64) -> f64 {
    (x + 1.0).ln() + (x + 2.0).ln()
}

/// One step `j → j + 1` of both recursions.
pub fn subcritical_step(state: &SubcriticalState, params: &SystemParams, consts: &IterationConstants) -> SubcriticalState {
    let n = params.n as i64;
    let (p, q) = (&params.p, &params.q);
    let bp = &state.beta * p;
    let bq = &state.b * q;
    SubcriticalState {
        j: state.j + 1,
        a: (p - 1) * Power::int(n) + &state.alpha * p,
        b: &bp + 2,
        alpha: (q - 1) * Power::int(n) + &state.a * q,
        beta: &bq + 2,
        log_d: consts.c0.ln() + p.to_f64() * state.log_delta - log_pair(bp.to_f64()),
        log_delta: consts.k0.ln() + q.to_f64() * state.log_d - log_pair(bq.to_f64()),
    }
}

/// A closed-form entry; `a_j` and `α_j` have no closed form for even `j`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedValue {
    Value(Power),
    NotDerived,
}

impl ClosedValue {
    pub fn value(&self) -> Option<&Power> {
        match self {
            ClosedValue::Value(v) => Some(v),
            ClosedValue::NotDerived => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubcriticalExponents {
    pub j: usize,
    pub a: ClosedValue,
    pub b: Power,
    pub alpha: ClosedValue,
    pub beta: Power,
}

/// Closed forms for the standard first frame.
pub fn subcritical_closed_form(params: &SystemParams, j: usize) -> Result<SubcriticalExponents> {
    let (a, b, alpha, beta) = standard_exponents(params);
    let base = SubcriticalState { j: 1, a, b, alpha, beta, log_d: 0.0, log_delta: 0.0 };
    subcritical_closed_form_from(params, &base, j)
}

/// Closed forms in terms of the exponents of an arbitrary first frame.
pub fn subcritical_closed_form_from(
    params: &SystemParams,
    base: &SubcriticalState,
    j: usize,
) -> Result<SubcriticalExponents> {
    if j == 0 {
        return Err(Error::IndexOutOfRange { index: j, reason: "the frames start at j = 1" });
    }
    let (p, q) = (&params.p, &params.q);
    let n = Power::int(params.n as i64);
    let pq = p * q;
    let tail_p = (p + 1) * Power::int(2) / (&pq - 1);
    let tail_q = (q + 1) * Power::int(2) / (&pq - 1);
    let odd = |k: usize| {
        let g = pq.powi(((k - 1) / 2) as u32);
        (
            (&n + &base.a) * &g - &n,
            (&base.b + &tail_p) * &g - &tail_p,
            (&n + &base.alpha) * &g - &n,
            (&base.beta + &tail_q) * &g - &tail_q,
        )
    };
    Ok(if j % 2 == 1 {
        let (a, b, alpha, beta) = odd(j);
        SubcriticalExponents { j, a: ClosedValue::Value(a), b, alpha: ClosedValue::Value(alpha), beta }
    } else {
        let (_, b_prev, _, beta_prev) = odd(j - 1);
        SubcriticalExponents {
            j,
            a: ClosedValue::NotDerived,
            b: &beta_prev * p + 2,
            alpha: ClosedValue::NotDerived,
            beta: &b_prev * q + 2,
        }
    })
}

/// `(Σ_{k=1}^{(j−1)/2} (j+1−2k)(pq)^{k−1}, closed form)` for odd `j ≥ 3`.
pub fn weighted_sum_identity(p: &Power, q: &Power, j: usize) -> Result<(Power, Power)> {
    if j < 3 || j.is_multiple_of(2) {
        return Err(Error::IndexOutOfRange { index: j, reason: "the identity needs an odd j >= 3" });
    }
    let pq = p * q;
    let half = (j - 1) / 2;
    let mut lhs = Power::int(0);
    let mut g = Power::int(1);
    for k in 1..=half {
        lhs = lhs + Power::int((j + 1 - 2 * k) as i64) * &g;
        g = &g * &pq;
    }
    let inner = Power::int(2) * &pq * (pq.powi(half as u32) - 1) / (&pq - 1) - Power::int(j as i64 - 1);
    Ok((lhs, inner / (&pq - 1)))
}

/// `b_j`, `β_j` below their envelopes `B̄₀ (pq)^{⌈(j−1)/2⌉}`, `B̃₀ (pq)^{⌈(j−1)/2⌉}`.
pub fn envelope_holds(params: &SystemParams, state: &SubcriticalState) -> bool {
    let (bbar, btilde) = envelope_constants(params);
    let g = (&params.p * &params.q).powi((state.j / 2) as u32);
    let above = |x: Power| x.signum_with_tol(0.0) > 0;
    above(&bbar * &g - &state.b) && above(&btilde * &g - &state.beta)
}

/// Recursive log-amplitudes at an odd `j` next to their closed lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBoundReport {
    pub j: usize,
    pub log_d: f64,
    pub log_d_bound: f64,
    pub log_delta: f64,
    pub log_delta_bound: f64,
}

impl LogBoundReport {
    pub fn holds(&self) -> bool {
        let slack = |x: f64| 1e-12 * x.abs().max(1.0);
        self.log_d >= self.log_d_bound - slack(self.log_d_bound)
            && self.log_delta >= self.log_delta_bound - slack(self.log_delta_bound)
    }
}

/// Runs the recursion from `base` to `j` and evaluates
/// `log D_j ≥ (pq)^{(j−1)/2}(log D₁ − S)` and its mirror.
pub fn subcritical_logd_bound(
    params: &SystemParams,
    consts: &IterationConstants,
    base: &SubcriticalState,
    j: usize,
) -> Result<LogBoundReport> {
    if j.is_multiple_of(2) {
        return Err(Error::IndexOutOfRange { index: j, reason: "the bound is stated for odd j" });
    }
    if (j as i64) <= consts.j0 {
        return Err(Error::IndexOutOfRange { index: j, reason: "the bound is claimed only for j > j0" });
    }
    let mut state = base.clone();
    while state.j < j {
        state = subcritical_step(&state, params, consts);
    }
    let g = (params.p_f64() * params.q_f64()).powi(((j - 1) / 2) as i32);
    Ok(LogBoundReport {
        j,
        log_d: state.log_d,
        log_d_bound: g * (base.log_d - consts.s_pq),
        log_delta: state.log_delta,
        log_delta_bound: g * (base.log_delta - consts.s_pq_tilde),
    })
}

/// `min{Ĉ ε^{−1/F(n,q,p)}, K̂ ε^{−1/F(n,p,q)}}` over the branches with `F > 0`.
pub fn blowup_threshold_subcritical(params: &SystemParams, consts: &IterationConstants) -> Result<f64> {
    threshold(params, consts.log_chat, consts.log_khat)
}

/// Same law with the prefactors `Ĉ`, `K̂` supplied directly.
pub fn blowup_threshold_with_prefactors(params: &SystemParams, chat: f64, khat: f64) -> Result<f64> {
    threshold(params, Some(chat.ln()), Some(khat.ln()))
}

fn threshold(params: &SystemParams, log_chat: Option<f64>, log_khat: Option<f64>) -> Result<f64> {
    let f_qp = compute_f(params.n, &params.q, &params.p)?.to_f64();
    let f_pq = compute_f(params.n, &params.p, &params.q)?.to_f64();
    let le = params.eps.ln();
    let mut best: Option<f64> = None;
    for (f, lc) in [(f_qp, log_chat), (f_pq, log_khat)] {
        if let (true, Some(lc)) = (f > 0.0, lc) {
            let v = lc - le / f;
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best.map(f64::exp).ok_or(Error::WrongRegion { expected: "subcritical" })
}
