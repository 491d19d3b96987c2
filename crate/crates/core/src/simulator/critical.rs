use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::grid::{init_state, DataSpec, GridConfig, GridState};
use super::run::{drive, LifespanRecord, RunConfig};
use crate::auxiliary::{Eigenfunction, KernelConfig, KernelRule};
use crate::auxiliary::kernels::{eta_weight, xi_weight};
use crate::damping::DampingProfile;
use crate::exponents::SystemParams;
use crate::{Error, Result};

/// Settings for [`verify_critical_inequalities`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCheckConfig {
    pub lambda0: f64,
    pub quad_nodes: usize,
    /// Order for `𝒱`; defaults to `(n−1)/2 − 1/p` when `p = q` and
    /// `(n−1)/2 − 1/p + 1/100` when `p > q`.
    pub r2: Option<f64>,
    pub sample_every: usize,
    /// Window `[t_start, t_end]` for the logarithmic lower bound.
    pub log_window: (f64, f64),
    pub threshold: f64,
}

impl Default for CriticalCheckConfig {
    fn default() -> Self {
        Self {
            lambda0: 1.0,
            quad_nodes: 64,
            r2: None,
            sample_every: 10,
            log_window: (5.0, 40.0),
            threshold: super::run::DEFAULT_THRESHOLD,
        }
    }
}

/// Both sides of the two weighted lower bounds at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSample {
    pub t: f64,
    /// `𝒰(t) = ∫ u η_{r₁}(t,t,x) dx`.
    pub u_functional: f64,
    pub u_bound: f64,
    /// `𝒱(t) = ∫ v η_{r₂}(t,t,x) dx`.
    pub v_functional: f64,
    pub v_bound: f64,
}

impl CriticalSample {
    fn holds(lhs: f64, rhs: f64) -> bool {
        lhs >= rhs - 1e-12 * lhs.abs().max(rhs.abs())
    }

    pub fn bounds_hold(&self) -> bool {
        Self::holds(self.u_functional, self.u_bound) && Self::holds(self.v_functional, self.v_bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalReport {
    pub r1: f64,
    pub r2: f64,
    pub samples: Vec<CriticalSample>,
    /// `min 𝒰(t) / log(2t/3)` over the window; `None` if no sample falls in it.
    pub log_growth_min: Option<f64>,
    pub record: LifespanRecord,
}

impl CriticalReport {
    /// First sample where a lower bound fails.
    pub fn first_violation(&self) -> Option<&CriticalSample> {
        self.samples.iter().find(|s| !s.bounds_hold())
    }
}

/// `λ`-moments `∫ f Φ(λ_k |x|) dx` for every quadrature node.
struct Moments {
    phi: Vec<Vec<f64>>,
}

impl Moments {
    fn new(n: u32, rule: &KernelRule, state: &GridState) -> Self {
        let e = Eigenfunction::new(n);
        let phi = rule
            .lambdas
            .iter()
            .map(|&l| state.radii().iter().zip(state.weights()).map(|(&r, &w)| w * e.eval(l * r)).collect())
            .collect();
        Self { phi }
    }

    fn of(&self, f: impl Fn(usize) -> f64) -> Vec<f64> {
        self.phi.iter().map(|row| row.iter().enumerate().map(|(i, w)| w * f(i)).sum()).collect()
    }
}

struct Side {
    rule: KernelRule,
    moments: Moments,
    l1: f64,
    data0: Vec<f64>,
    data1: Vec<f64>,
    /// Source moments `∫ |·|^e Φ(λ_k|x|)` at each sample.
    source: Vec<Vec<f64>>,
    functional: Vec<f64>,
}

impl Side {
    fn lhs(&self, t: f64, radius: f64, m: &[f64]) -> f64 {
        self.rule.iter().zip(m).map(|((l, w), mk)| w * (-l * (t + radius)).exp() * mk).sum()
    }

    fn rhs(&self, k: usize, times: &[f64], radius: f64, eps: f64) -> f64 {
        let t = times[k];
        let (c1, c2) = ((-self.l1).exp(), (-2.0 * self.l1).exp());
        let mut data = 0.0;
        for (j, (l, w)) in self.rule.iter().enumerate() {
            data += w * (c1 * xi_weight(l, t, radius) * self.data0[j] + c2 * t * eta_weight(l, t, 0.0, radius) * self.data1[j]);
        }
        let mut src = 0.0;
        for i in 0..k {
            let f = |s_idx: usize| -> f64 {
                let s = times[s_idx];
                (t - s)
                    * self
                        .rule
                        .iter()
                        .zip(&self.source[s_idx])
                        .map(|((l, w), m)| w * eta_weight(l, t, s, radius) * m)
                        .sum::<f64>()
            };
            src += 0.5 * (f(i) + f(i + 1)) * (times[i + 1] - times[i]);
        }
        eps * data + c2 * src
    }
}

/// Runs the simulation and evaluates the weighted lower bounds for `𝒰`, `𝒱`
/// at every sample, together with the logarithmic growth of `𝒰`.
pub fn verify_critical_inequalities(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
    cfg: &CriticalCheckConfig,
) -> Result<CriticalReport> {
    if params.n < 2 {
        return Err(Error::InvalidDimension);
    }
    if !b1.is_c1() || !b2.is_c1() {
        return Err(Error::Unsupported("the critical-case checks need C¹ damping profiles"));
    }
    let (params, b1, b2, data) = if !params.symmetric() && params.p_f64() < params.q_f64() {
        let d = DataSpec { u0: data.v0, u1: data.v1, v0: data.u0, v1: data.u1 };
        (params.swapped(), b2.clone(), b1.clone(), d)
    } else {
        (params.clone(), b1.clone(), b2.clone(), *data)
    };
    let n = params.n as f64;
    let (p, q) = (params.p_f64(), params.q_f64());
    let r1 = (n - 1.0) / 2.0 - 1.0 / q;
    let r2 = cfg.r2.unwrap_or(if params.symmetric() {
        (n - 1.0) / 2.0 - 1.0 / p
    } else {
        (n - 1.0) / 2.0 - 1.0 / p + 0.01
    });
    let bound = (n - 3.0) / 2.0;
    for r in [r1, r2] {
        if !(r > bound) || !(r > -1.0) {
            return Err(Error::KernelOrder { r, bound: bound.max(-1.0) });
        }
    }
    let radius = params.radius;
    let kcfg = |r: f64| KernelConfig { lambda0: cfg.lambda0, radius, r, quad_nodes: cfg.quad_nodes };
    let (rule1, rule2) = (KernelRule::new(&kcfg(r1))?, KernelRule::new(&kcfg(r2))?);

    let mut state = init_state(&params, &b1, &b2, &data, grid)?;
    let eps = params.eps;
    let unit = |c: f64| -> Vec<f64> { state.radii().iter().map(|&r| super::grid::bump(c, radius, r)).collect() };
    let (u0, u1, v0, v1) = (unit(data.u0), unit(data.u1), unit(data.v0), unit(data.v1));
    let mk_side = |rule: KernelRule, l1: f64, d0: &[f64], d1: &[f64]| {
        let moments = Moments::new(params.n, &rule, &state);
        let data0 = moments.of(|i| d0[i]);
        let data1 = moments.of(|i| d1[i]);
        Side { rule, moments, l1, data0, data1, source: Vec::new(), functional: Vec::new() }
    };
    let mut su = mk_side(rule1, b1.l1(), &u0, &u1);
    let mut sv = mk_side(rule2, b2.l1(), &v0, &v1);
    let mut times = Vec::new();
    let run = RunConfig { threshold: cfg.threshold, sample_every: cfg.sample_every };
    let record = drive(&mut state, grid.horizon, &run, |s| {
        times.push(s.t);
        let (u, v) = (s.u(), s.v());
        let mu = su.moments.of(|i| u[i]);
        let mv = sv.moments.of(|i| v[i]);
        su.functional.push(su.lhs(s.t, radius, &mu));
        sv.functional.push(sv.lhs(s.t, radius, &mv));
        su.source.push(su.moments.of(|i| v[i].abs().powf(p)));
        sv.source.push(sv.moments.of(|i| u[i].abs().powf(q)));
    })?;

    let samples: Vec<CriticalSample> = (0..times.len())
        .map(|k| CriticalSample {
            t: times[k],
            u_functional: su.functional[k],
            u_bound: su.rhs(k, &times, radius, eps),
            v_functional: sv.functional[k],
            v_bound: sv.rhs(k, &times, radius, eps),
        })
        .collect();
    let (lo, hi) = cfg.log_window;
    if !(lo > 1.5 && hi > lo) {
        return Err(Error::InvalidParameter { name: "log_window", reason: format!("[{lo}, {hi}] must satisfy 1.5 < lo < hi") });
    }
    let log_growth_min = samples
        .iter()
        .filter(|s| s.t >= lo && s.t <= hi)
        .map(|s| s.u_functional / (2.0 * s.t / 3.0).ln())
        .reduce(f64::min);
    Ok(CriticalReport { r1, r2, samples, log_growth_min, record })
}
