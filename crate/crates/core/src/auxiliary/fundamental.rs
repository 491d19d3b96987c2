use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::kernels::sinhc;
use crate::damping::DampingProfile;
use crate::{Error, Result};

/// Largest accepted `λ h`.
const MAX_LAMBDA_STEP: f64 = 0.1;
/// Step in `s` for the finite-difference identity checks.
const FD_DELTA: f64 = 1e-4;
/// Number of `t` nodes at which identity (iv) is sampled.
const IDENTITY_SAMPLES: usize = 20;

/// Solutions of `y'' + b(t) y' − λ² y = 0` from `t = s` with unit data.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalPair {
    pub s: f64,
    pub lambda: f64,
    pub t: Vec<f64>,
    pub y1: Vec<f64>,
    pub dy1: Vec<f64>,
    pub y2: Vec<f64>,
    pub dy2: Vec<f64>,
}

type Frame = [f64; 4];

fn rhs(profile: &DampingProfile, l2: f64, t: f64, y: &Frame) -> Frame {
    let b = profile.b(t);
    [y[1], l2 * y[0] - b * y[1], y[3], l2 * y[2] - b * y[3]]
}

fn rk4(profile: &DampingProfile, l2: f64, t: f64, h: f64, y: &Frame) -> Frame {
    let add = |a: &Frame, k: &Frame, c: f64| -> Frame { core::array::from_fn(|i| a[i] + c * k[i]) };
    let k1 = rhs(profile, l2, t, y);
    let k2 = rhs(profile, l2, t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = rhs(profile, l2, t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = rhs(profile, l2, t + h, &add(y, &k3, h));
    core::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from `s` to `t` in `steps` equal steps; returns `(y1, y1', y2, y2')`.
fn integrate(profile: &DampingProfile, lambda: f64, s: f64, t: f64, steps: usize) -> Frame {
    let h = (t - s) / steps as f64;
    let l2 = lambda * lambda;
    let mut y = [1.0, 0.0, 0.0, 1.0];
    for k in 0..steps {
        y = rk4(profile, l2, s + k as f64 * h, h, &y);
    }
    y
}

/// Integrates both initial-value problems over `grid` with classical RK4.
pub fn solve_fundamental_pair(profile: &DampingProfile, lambda: f64, s: f64, grid: &[f64]) -> Result<FundamentalPair> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter { name: "lambda", reason: format!("{lambda} must be finite and > 0") });
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter { name: "s", reason: format!("{s} must be >= 0") });
    }
    if grid.first() != Some(&s) {
        return Err(Error::InvalidGrid(format!("grid must start at s = {s}")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    if let Some(h) = grid.windows(2).map(|w| w[1] - w[0]).reduce(f64::max) {
        if lambda * h > MAX_LAMBDA_STEP {
            return Err(Error::StepTooLarge(lambda * h));
        }
    }
    let l2 = lambda * lambda;
    let n = grid.len();
    let mut pair = FundamentalPair {
        s,
        lambda,
        t: grid.to_vec(),
        y1: Vec::with_capacity(n),
        dy1: Vec::with_capacity(n),
        y2: Vec::with_capacity(n),
        dy2: Vec::with_capacity(n),
    };
    let mut y: Frame = [1.0, 0.0, 0.0, 1.0];
    for i in 0..n {
        pair.y1.push(y[0]);
        pair.dy1.push(y[1]);
        pair.y2.push(y[2]);
        pair.dy2.push(y[3]);
        if i + 1 < n {
            y = rk4(profile, l2, grid[i], grid[i + 1] - grid[i], &y);
        }
    }
    Ok(pair)
}

/// Largest relative residual of an identity and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub max_residual: f64,
    pub at: f64,
}

/// Outcome of [`verify_fundamental_bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalReport {
    /// `min (y1 − e^{−‖b‖} cosh λ(t−s)) / max(1, bound)` over the grid.
    pub y1_slack: f64,
    /// `min (y2 − e^{−2‖b‖} sinh(λ(t−s))/λ) / max(1, bound)` over the grid.
    pub y2_slack: f64,
    /// First node where either slack drops below `−1e−6`.
    pub first_violation: Option<(usize, f64)>,
    /// `y1(t,s) = b(s) y2(t,s) − ∂_s y2(t,s)`.
    pub identity_iv: IdentityCheck,
    /// `∂_s y2(t,t) = −1`, sampled at `t = s + 2`.
    pub identity_v: IdentityCheck,
}

impl FundamentalReport {
    pub const SLACK_TOL: f64 = -1e-6;

    pub fn passes(&self, identity_tol: f64) -> bool {
        self.first_violation.is_none()
            && self.identity_iv.max_residual <= identity_tol
            && self.identity_v.max_residual <= identity_tol
    }
}

/// Checks the lower bounds on `y1`, `y2` node by node and the two
/// `s`-derivative identities by one-sided three-point differences.
pub fn verify_fundamental_bounds(pair: &FundamentalPair, profile: &DampingProfile) -> Result<FundamentalReport> {
    if pair.t.len() < 2 {
        return Err(Error::InvalidGrid("pair needs at least 2 nodes".into()));
    }
    let (lambda, s) = (pair.lambda, pair.s);
    let l1 = profile.l1();
    let (c1, c2) = ((-l1).exp(), (-2.0 * l1).exp());
    let mut y1_slack = f64::INFINITY;
    let mut y2_slack = f64::INFINITY;
    let mut first_violation = None;
    for (i, &t) in pair.t.iter().enumerate() {
        let tau = t - s;
        let b1 = c1 * (lambda * tau).cosh();
        let b2 = c2 * tau * sinhc(lambda * tau);
        let r1 = (pair.y1[i] - b1) / b1.max(1.0);
        let r2 = (pair.y2[i] - b2) / b2.max(1.0);
        y1_slack = y1_slack.min(r1);
        y2_slack = y2_slack.min(r2);
        if first_violation.is_none() && r1.min(r2) < FundamentalReport::SLACK_TOL {
            first_violation = Some((i, t));
        }
    }

    let h_min = pair.t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let t_end = *pair.t.last().unwrap_or(&s);
    let mut identity_iv = IdentityCheck { max_residual: 0.0, at: s };
    for k in 1..=IDENTITY_SAMPLES {
        let t = s + (t_end - s) * k as f64 / IDENTITY_SAMPLES as f64;
        if t - s <= 2.0 * FD_DELTA {
            continue;
        }
        let steps = ((t - s) / h_min).ceil().max(1.0) as usize;
        let f0 = integrate(profile, lambda, s, t, steps);
        let f1 = integrate(profile, lambda, s + FD_DELTA, t, steps)[2];
        let f2 = integrate(profile, lambda, s + 2.0 * FD_DELTA, t, steps)[2];
        let ds_y2 = (-3.0 * f0[2] + 4.0 * f1 - f2) / (2.0 * FD_DELTA);
        let r = (f0[0] - (profile.b(s) * f0[2] - ds_y2)).abs() / f0[0].abs().max(1.0);
        if r > identity_iv.max_residual {
            identity_iv = IdentityCheck { max_residual: r, at: t };
        }
    }

    let t = s + 2.0;
    let y2_back = |d: f64| integrate(profile, lambda, t - d, t, 8)[2];
    let ds_diag = (-4.0 * y2_back(FD_DELTA) + y2_back(2.0 * FD_DELTA)) / (2.0 * FD_DELTA);
    let identity_v = IdentityCheck { max_residual: (ds_diag + 1.0).abs(), at: t };

    Ok(FundamentalReport { y1_slack, y2_slack, first_violation, identity_iv, identity_v })
}
