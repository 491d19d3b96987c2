use alloc::format;

use core::f64::consts::LN_2;
use num_bigint::BigInt;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::One;

use crate::exponents::{classify, RegionTag, SystemParams};
use crate::{ratio, Error, Power, Result};

/// Which slicing recursion applies. `p < q` is handled by the caller by
/// exchanging the roles of the two components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalCase {
    PGreaterQ,
    PEqualsQ,
}

impl CriticalCase {
    pub fn of(params: &SystemParams) -> Result<Self> {
        if params.symmetric() {
            Ok(CriticalCase::PEqualsQ)
        } else if params.p_f64() > params.q_f64() {
            Ok(CriticalCase::PGreaterQ)
        } else {
            Err(Error::InvalidParameter {
                name: "p",
                reason: format!("p = {} < q = {}; swap the components first", params.p, params.q),
            })
        }
    }
}

/// Constants of the coupled integral inequalities (`C`, `K`) and of the
/// logarithmic lower bound (`C̃`); no values are known, so they are inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConstants {
    pub c: f64,
    pub k: f64,
    pub c_tilde: f64,
}

impl Default for CriticalConstants {
    fn default() -> Self {
        Self { c: 1.0, k: 1.0, c_tilde: 1.0 }
    }
}

/// `𝒰(t) ≥ C_j (log⟨t⟩)^{−b_j} (log(t/ℓ_{2j}))^{a_j}` for `t ≥ ℓ_{2j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalState {
    pub j: usize,
    pub a: Power,
    pub b: Power,
    pub log_c: f64,
    pub case: CriticalCase,
}

/// `log Θ` and `log M` of `C_j ≥ M Θ^{−j} C_{j−1}^{pq}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEnvelope {
    pub log_theta: f64,
    pub log_m: f64,
}

impl CriticalEnvelope {
    pub fn new(params: &SystemParams, consts: &CriticalConstants) -> Result<Self> {
        let case = CriticalCase::of(params)?;
        let (p, q) = (params.p_f64(), params.q_f64());
        let n = params.n as f64;
        let pq = p * q;
        let ck = consts.c.ln() + p * consts.k.ln();
        Ok(match case {
            CriticalCase::PGreaterQ => Self {
                log_theta: 2.0 * (2.0 * p + 1.0) * LN_2 + pq.ln(),
                log_m: -((3.0 * n + 4.0) * p + 6.0) * LN_2 + ck + ((pq - 1.0) / pq).ln(),
            },
            CriticalCase::PEqualsQ => Self {
                log_theta: 2.0 * (p + 1.0) * LN_2 + (p + 1.0) * pq.ln(),
                log_m: -(5.0 * p + 6.0) * LN_2 + ck + (p + 1.0) * (pq - 1.0).ln()
                    - p.ln()
                    - (p + 1.0) * (q + 1.0).ln()
                    - (p + 1.0) * pq.ln(),
            },
        })
    }
}

/// `ℓ_j = 2 − 2^{−(j+1)}`.
pub fn slicing_level(j: u32) -> BigRational {
    ratio(2, 1) - BigRational::new(BigInt::one(), BigInt::one() << (j as usize + 1))
}

/// `j = 0`: `a₀ = 1`, `b₀ = 0`, `C₀ = C̃ ε^{pq}` (`p > q`) or `C̃ ε^p` (`p = q`).
pub fn critical_base(params: &SystemParams, consts: &CriticalConstants) -> Result<CriticalState> {
    let case = CriticalCase::of(params)?;
    let power = match case {
        CriticalCase::PGreaterQ => params.p_f64() * params.q_f64(),
        CriticalCase::PEqualsQ => params.p_f64(),
    };
    Ok(CriticalState {
        j: 0,
        a: Power::int(1),
        b: Power::int(0),
        log_c: consts.c_tilde.ln() + power * params.eps.ln(),
        case,
    })
}

/// One slicing step `j → j + 1`.
pub fn critical_step(state: &CriticalState, params: &SystemParams, consts: &CriticalConstants) -> Result<CriticalState> {
    let case = CriticalCase::of(params)?;
    if case != state.case {
        return Err(Error::InvalidParameter { name: "case", reason: format!("state is {:?}, params give {case:?}", state.case) });
    }
    let (p, q) = (&params.p, &params.q);
    let (pf, qf) = (p.to_f64(), q.to_f64());
    let n = params.n as f64;
    let j = state.j as f64;
    let pq = p * q;
    let ck = consts.c.ln() + pf * consts.k.ln();
    let apq = &state.a * &pq;
    Ok(match case {
        CriticalCase::PGreaterQ => {
            let a_next = &apq + 1;
            let log_c = -((2.0 * pf + 1.0) * 2.0 * j + (3.0 * n + 8.0) * pf + 8.0) * LN_2 + ck
                + pq.to_f64() * state.log_c
                - a_next.to_f64().ln();
            CriticalState {
                j: state.j + 1,
                b: p * (q - 1) + &state.b * &pq,
                a: a_next,
                log_c,
                case,
            }
        }
        CriticalCase::PEqualsQ => {
            let a_next = &apq + p + 1;
            let aq1 = (&state.a * q + 1).to_f64();
            let log_c = -((pf + 1.0) * 2.0 * j + 7.0 * pf + 8.0) * LN_2 + ck + pq.to_f64() * state.log_c
                - pf * aq1.ln()
                - a_next.to_f64().ln();
            let _ = qf;
            CriticalState { j: state.j + 1, b: (&pq - 1) + &state.b * &pq, a: a_next, log_c, case }
        }
    })
}

/// `(A, B)` of `a_j = A(pq)^j + 1 − A`, `b_j = B(pq)^j − B`.
fn closed_coefficients(params: &SystemParams, case: CriticalCase) -> (Power, Power) {
    let (p, q) = (&params.p, &params.q);
    let pq = p * q;
    match case {
        CriticalCase::PGreaterQ => (&pq / (&pq - 1), p * (q - 1) / (&pq - 1)),
        CriticalCase::PEqualsQ => ((p + 1) / (&pq - 1) + 1, Power::int(1)),
    }
}

/// `(a_j, b_j)` from the closed form.
pub fn critical_closed_form(params: &SystemParams, j: usize) -> Result<(Power, Power)> {
    let case = CriticalCase::of(params)?;
    let (a, b) = closed_coefficients(params, case);
    let g = (&params.p * &params.q).powi(j as u32);
    Ok((&a * &g + 1 - &a, &b * &g - &b))
}

/// `S = Σ_{k≥1} k/(pq)^k = pq/(pq − 1)²`.
pub fn geometric_weight_limit(pq: f64) -> f64 {
    pq / (pq - 1.0).powi(2)
}

/// `S_j = Σ_{k=1}^{j} k/(pq)^k`.
pub fn geometric_partial_sum(pq: f64, j: usize) -> f64 {
    (1..=j).map(|k| k as f64 * pq.powi(-(k as i32))).sum()
}

/// `(pq)^j (log C₀ − S log Θ + log M/(pq−1)) − log M/(pq−1)`.
pub fn log_c_lower_bound(params: &SystemParams, env: &CriticalEnvelope, log_c0: f64, j: usize) -> f64 {
    let pq = params.p_f64() * params.q_f64();
    let lm = env.log_m / (pq - 1.0);
    pq.powi(j as i32) * (log_c0 - geometric_weight_limit(pq) * env.log_theta + lm) - lm
}

/// `log E = −(A + B) log 2 + log C̃ − S log Θ + (pq − 1) log M`.
pub fn log_e(params: &SystemParams, consts: &CriticalConstants) -> Result<f64> {
    let params = &normalized(params);
    let case = CriticalCase::of(params)?;
    let env = CriticalEnvelope::new(params, consts)?;
    let (a, b) = closed_coefficients(params, case);
    let pq = params.p_f64() * params.q_f64();
    Ok(-(a.to_f64() + b.to_f64()) * LN_2 + consts.c_tilde.ln() - geometric_weight_limit(pq) * env.log_theta
        + (pq - 1.0) * env.log_m)
}

fn normalized(params: &SystemParams) -> SystemParams {
    if !params.symmetric() && params.p_f64() < params.q_f64() {
        params.swapped()
    } else {
        params.clone()
    }
}

/// `log T` of the critical lifespan bound for a given `E > 0`.
pub fn log_blowup_threshold_critical(params: &SystemParams, e: f64) -> Result<f64> {
    if classify(params).tag != RegionTag::CriticalBlowup {
        return Err(Error::WrongRegion { expected: "critical" });
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::InvalidParameter { name: "E", reason: format!("{e} must be finite and > 0") });
    }
    let params = &normalized(params);
    let (p, q) = (params.p_f64(), params.q_f64());
    let le = params.eps.ln();
    Ok(match CriticalCase::of(params)? {
        CriticalCase::PGreaterQ => (-(p * q - 1.0) / p * e.ln() - q * (p * q - 1.0) * le).exp(),
        CriticalCase::PEqualsQ => (-(p - 1.0) * e.ln() - p * (p - 1.0) * le).exp(),
    })
}

/// `exp(E^{−(pq−1)/p} ε^{−q(pq−1)})` or `exp(E^{−(p−1)} ε^{−p(p−1)})`; may be `+∞`.
pub fn blowup_threshold_critical(params: &SystemParams, e: f64) -> Result<f64> {
    log_blowup_threshold_critical(params, e).map(f64::exp)
}
