//! Scattering damping coefficients `b(t) ≥ 0`, `b ∈ L¹`, and the multipliers
//! `m(t) = exp(−∫_t^∞ b)`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A nonnegative summable damping coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum DampingProfile {
    Zero,
    /// `b(t) = μ (1 + t)^{−β}` with `μ ≥ 0`, `β > 1`.
    PolynomialTail { mu: f64, beta: f64 },
    /// Piecewise-linear interpolant of samples, zero past the last node.
    Tabulated(Table),
}

/// Samples `(t_i, b_i)` with cumulative tail integrals at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    b: Vec<f64>,
    /// `tail[i] = ∫_{t_i}^∞ b` of the interpolant.
    tail: Vec<f64>,
}

impl Table {
    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.b
    }
}

impl DampingProfile {
    pub fn polynomial_tail(mu: f64, beta: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter { name: "mu", reason: format!("{mu} must be finite and >= 0") });
        }
        if !(beta > 1.0) {
            return Err(Error::NotSummable(format!("beta = {beta} must exceed 1")));
        }
        Ok(DampingProfile::PolynomialTail { mu, beta })
    }

    /// Builds a tabulated profile; `t` must start at 0 and increase strictly.
    pub fn tabulated(t: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if t.len() != b.len() || t.len() < 2 {
            return Err(Error::InvalidGrid(format!("need >= 2 matching samples, got {} and {}", t.len(), b.len())));
        }
        if t[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("table must start at t = 0, starts at {}", t[0])));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("t must be strictly increasing".into()));
        }
        if b.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter { name: "b", reason: "samples must be finite and >= 0".into() });
        }
        let mut tail = alloc::vec![0.0; t.len()];
        for i in (0..t.len() - 1).rev() {
            tail[i] = tail[i + 1] + 0.5 * (b[i] + b[i + 1]) * (t[i + 1] - t[i]);
        }
        Ok(DampingProfile::Tabulated(Table { t, b, tail }))
    }

    /// Samples `b` on `t` and tabulates the result.
    pub fn tabulate_from(&self, t: Vec<f64>) -> Result<Self> {
        let b = t.iter().map(|&s| self.b(s)).collect();
        Self::tabulated(t, b)
    }

    pub fn b(&self, t: f64) -> f64 {
        match self {
            DampingProfile::Zero => 0.0,
            DampingProfile::PolynomialTail { mu, beta } => mu * (1.0 + t).powf(-beta),
            DampingProfile::Tabulated(tab) => match locate(&tab.t, t) {
                Locate::Before => tab.b[0],
                Locate::After => 0.0,
                Locate::Inside(i, w) => tab.b[i] + w * (tab.b[i + 1] - tab.b[i]),
            },
        }
    }

    /// `∫_t^∞ b(τ) dτ`.
    pub fn tail(&self, t: f64) -> f64 {
        match self {
            DampingProfile::Zero => 0.0,
            DampingProfile::PolynomialTail { mu, beta } => mu * (1.0 + t).powf(1.0 - beta) / (beta - 1.0),
            DampingProfile::Tabulated(tab) => match locate(&tab.t, t) {
                Locate::Before => tab.tail[0] + tab.b[0] * (tab.t[0] - t),
                Locate::After => 0.0,
                Locate::Inside(i, w) => {
                    let h = tab.t[i + 1] - tab.t[i];
                    let bt = tab.b[i] + w * (tab.b[i + 1] - tab.b[i]);
                    tab.tail[i + 1] + 0.5 * (bt + tab.b[i + 1]) * (1.0 - w) * h
                }
            },
        }
    }

    /// `‖b‖_{L¹} = ∫_0^∞ b`.
    pub fn l1(&self) -> f64 {
        self.tail(0.0)
    }

    /// The profile has a continuous derivative, which the critical-case
    /// identities need.
    pub fn is_c1(&self) -> bool {
        !matches!(self, DampingProfile::Tabulated(_))
    }

    pub fn multiplier(&self) -> Multiplier<'_> {
        Multiplier { profile: self }
    }
}

enum Locate {
    Before,
    After,
    Inside(usize, f64),
}

fn locate(nodes: &[f64], t: f64) -> Locate {
    let last = nodes.len() - 1;
    if t < nodes[0] {
        return Locate::Before;
    }
    if t >= nodes[last] {
        return Locate::After;
    }
    let i = nodes.partition_point(|&x| x <= t) - 1;
    Locate::Inside(i, (t - nodes[i]) / (nodes[i + 1] - nodes[i]))
}

/// `m(t) = exp(−∫_t^∞ b)`, nondecreasing with `m(0) ≤ m(t) ≤ 1`.
#[derive(Debug, Clone, Copy)]
pub struct Multiplier<'a> {
    profile: &'a DampingProfile,
}

impl Multiplier<'_> {
    pub fn eval(&self, t: f64) -> f64 {
        (-self.profile.tail(t)).exp()
    }

    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }
}

/// `m(t)` for `t ≥ 0`.
pub fn multiplier_eval(profile: &DampingProfile, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    profile.multiplier().eval(t)
}

/// Result of checking `m' = b m` on a grid by centered differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    /// `max |(m(t+h) − m(t−h))/(t_{i+1} − t_{i−1}) − b m| / m` over interior nodes.
    pub max_relative: f64,
    pub at: f64,
}

/// Checks the derivative relation `m'(t) = b(t) m(t)` on the interior of `grid`.
pub fn verify_multiplier_ode(profile: &DampingProfile, grid: &[f64]) -> Result<OdeResidual> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {}", grid.len())));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    let m = profile.multiplier();
    let values: Vec<f64> = grid.iter().map(|&t| m.eval(t)).collect();
    let mut worst = OdeResidual { max_relative: 0.0, at: grid[1] };
    for i in 1..grid.len() - 1 {
        let d = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1]);
        let r = (d - profile.b(grid[i]) * values[i]).abs() / values[i];
        if r > worst.max_relative {
            worst = OdeResidual { max_relative: r, at: grid[i] };
        }
    }
    Ok(worst)
}

/// `start, start + h, …` up to and including `end` (within rounding).
pub fn uniform_grid(start: f64, end: f64, h: f64) -> Vec<f64> {
    let steps = ((end - start) / h).round() as usize;
    (0..=steps).map(|i| start + i as f64 * h).collect()
}
