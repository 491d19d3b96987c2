use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::grid::{init_state, DataSpec, GridConfig};
use super::run::{drive, FunctionalTrace, RunConfig};
use crate::damping::DampingProfile;
use crate::exponents::SystemParams;
use crate::{Error, Result};

/// Residuals and fitted constants of the functional identities along a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `max |U'' + b₁U' − N_v|` by centered differences over interior samples.
    pub residual_u: f64,
    pub residual_v: f64,
    /// `max |residual − Σ w Δ_h| / (1 + |second difference| + |source|)` over
    /// both components: how far the trace is from the discrete identity,
    /// which is exact for traces sampled at every step.
    pub identity_excess: f64,
    /// `min (U − m₁(0) ∬ N_v) / max(|U|, |bound|)`.
    pub frame_slack_u: f64,
    pub frame_slack_v: f64,
    /// `min N_u (1+t)^{(n−1)q/2 − (n−1)} / ε^q` over `t > 0`.
    pub c1_fit: f64,
    /// `min N_v (1+t)^{(n−1)p/2 − (n−1)} / ε^p` over `t > 0`.
    pub k1_fit: f64,
    /// `U, V > 0` at every sample with `t > 0`.
    pub positive: bool,
}

impl IdentityReport {
    pub fn frame_holds(&self, tol: f64) -> bool {
        self.frame_slack_u >= -tol && self.frame_slack_v >= -tol
    }
}

fn cumulative(t: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; t.len()];
    for i in 1..t.len() {
        out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
    }
    out
}

fn frame_slack(w: &[f64], bound: &[f64]) -> f64 {
    w.iter()
        .zip(bound)
        .map(|(&x, &b)| {
            let scale = x.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - b) / scale
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Checks the functional ODEs, the integrated frame inequalities and fits the
/// nonlinear-mass constants.
pub fn verify_identities(
    trace: &FunctionalTrace,
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
) -> Result<IdentityReport> {
    let len = trace.len();
    if len < 5 {
        return Err(Error::TraceTooShort(len));
    }
    let t = &trace.t;
    let mut residual_u: f64 = 0.0;
    let mut residual_v: f64 = 0.0;
    let mut identity_excess: f64 = 0.0;
    for k in 1..len - 1 {
        let h = t[k + 1] - t[k];
        let second = |w: &[f64]| (w[k + 1] - 2.0 * w[k] + w[k - 1]) / (h * h);
        let ode = |w: &[f64], b: f64, src: f64| second(w) + b * (w[k + 1] - w[k - 1]) / (2.0 * h) - src;
        let ru = ode(&trace.u, b1.b(t[k]), trace.n_v[k]);
        let rv = ode(&trace.v, b2.b(t[k]), trace.n_u[k]);
        residual_u = residual_u.max(ru.abs());
        residual_v = residual_v.max(rv.abs());
        let eu = (ru - trace.defect_u[k]).abs() / (1.0 + second(&trace.u).abs() + trace.n_v[k].abs());
        let ev = (rv - trace.defect_v[k]).abs() / (1.0 + second(&trace.v).abs() + trace.n_u[k].abs());
        identity_excess = identity_excess.max(eu).max(ev);
    }

    let double = |f: &[f64], m0: f64| -> Vec<f64> { cumulative(t, &cumulative(t, f)).into_iter().map(|x| m0 * x).collect() };
    let frame_slack_u = frame_slack(&trace.u, &double(&trace.n_v, b1.multiplier().at_zero()));
    let frame_slack_v = frame_slack(&trace.v, &double(&trace.n_u, b2.multiplier().at_zero()));

    let n = params.n as f64;
    let (p, q) = (params.p_f64(), params.q_f64());
    let eps = params.eps;
    let mut c1_fit = f64::INFINITY;
    let mut k1_fit = f64::INFINITY;
    let mut positive = true;
    #[allow(clippy::needless_range_loop)]
    for k in 0..len {
        if t[k] <= 0.0 {
            continue;
        }
        let g = 1.0 + t[k];
        c1_fit = c1_fit.min(trace.n_u[k] * g.powf((n - 1.0) * q / 2.0 - (n - 1.0)) / eps.powf(q));
        k1_fit = k1_fit.min(trace.n_v[k] * g.powf((n - 1.0) * p / 2.0 - (n - 1.0)) / eps.powf(p));
        positive &= trace.u[k] > 0.0 && trace.v[k] > 0.0;
    }
    Ok(IdentityReport { residual_u, residual_v, identity_excess, frame_slack_u, frame_slack_v, c1_fit, k1_fit, positive })
}

/// `log₂(coarse / fine)`: observed order under halving the step.
pub fn convergence_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Largest `|u|, |v|` found at `r > t + R + 2 dr` over a whole run.
pub fn cone_leakage(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
    run: &RunConfig,
) -> Result<f64> {
    let mut state = init_state(params, b1, b2, data, grid)?;
    let margin = 2.0 * grid.dr;
    let mut worst: f64 = 0.0;
    let sampling = RunConfig { sample_every: 1, ..*run };
    drive(&mut state, grid.horizon, &sampling, |s| worst = worst.max(s.outside_cone(margin)))?;
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::run::run_until_blowup;
    use crate::Power;

    fn sys(n: u32) -> SystemParams {
        SystemParams::new(n, Power::exact(2, 1), Power::exact(2, 1), 1.0, 1.0).unwrap()
    }

    #[test]
    fn linear_mode_keeps_u_on_its_line() {
        let z = DampingProfile::Zero;
        for n in [1, 3] {
            let grid = GridConfig::new(0.01, 0.5, 4.0).linear();
            let (_, tr) =
                run_until_blowup(&sys(n), &z, &z, &DataSpec::uniform(1.0), &grid, &RunConfig { sample_every: 5, ..Default::default() })
                    .unwrap();
            let slope = (tr.u[1] - tr.u[0]) / (tr.t[1] - tr.t[0]);
            for k in 0..tr.len() {
                let line = tr.u[0] + slope * tr.t[k];
                assert!((tr.u[k] - line).abs() < 1e-6, "n = {n}, t = {}", tr.t[k]);
            }
        }
    }

    #[test]
    fn residual_equals_spatial_defect_for_dense_traces() {
        let b = DampingProfile::polynomial_tail(1.0, 2.0).unwrap();
        let grid = GridConfig::new(0.02, 0.5, 2.0);
        let sp = sys(2).with_eps(0.5);
        let run = RunConfig { sample_every: 1, ..Default::default() };
        let (_, tr) = run_until_blowup(&sp, &b, &b, &DataSpec::uniform(1.0), &grid, &run).unwrap();
        let rep = verify_identities(&tr, &sp, &b, &b).unwrap();
        let defect = tr.defect_u[1..tr.len() - 1].iter().fold(0.0f64, |a, d| a.max(d.abs()));
        assert!((rep.residual_u - defect).abs() < 1e-6 * defect.max(1.0), "{} vs {defect}", rep.residual_u);
        assert!(rep.identity_excess < 1e-9, "{rep:?}");
        assert!(rep.frame_holds(1e-3), "{rep:?}");
        assert!(rep.positive && rep.c1_fit > 0.0 && rep.k1_fit > 0.0);
    }

    #[test]
    fn short_trace_rejected() {
        let sp = sys(1);
        let z = DampingProfile::Zero;
        let tr = FunctionalTrace { t: alloc::vec![0.0; 3], ..Default::default() };
        assert!(matches!(verify_identities(&tr, &sp, &z, &z), Err(Error::TraceTooShort(3))));
    }

    #[test]
    fn order_of_exact_halving() {
        assert!((convergence_order(4.0, 1.0) - 2.0).abs() < 1e-15);
    }
}
