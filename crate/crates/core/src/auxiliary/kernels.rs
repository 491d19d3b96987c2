use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::phi::Eigenfunction;
use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

/// `|z|` below which `sinh(z)/z` switches to its even series.
const SINHC_SWITCH: f64 = 1e-4;

/// `sinh(z)/z`, with `1 + z²/6 + z⁴/120` near zero.
pub fn sinhc(z: f64) -> f64 {
    if z.abs() < SINHC_SWITCH {
        let z2 = z * z;
        1.0 + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// `⟨y⟩ = 3 + |y|`.
pub fn bracket(y: f64) -> f64 {
    3.0 + y.abs()
}

/// Parameters shared by `ξ_r` and `η_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Upper limit `λ₀` of the spectral integral.
    pub lambda0: f64,
    pub radius: f64,
    /// Kernel order `r > −1`.
    pub r: f64,
    pub quad_nodes: usize,
}

impl KernelConfig {
    pub fn new(lambda0: f64, radius: f64, r: f64) -> Self {
        Self { lambda0, radius, r, quad_nodes: 64 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0) {
            return Err(Error::InvalidParameter { name: "lambda0", reason: format!("{} must be > 0", self.lambda0) });
        }
        if !(self.radius > 0.0) {
            return Err(Error::InvalidParameter { name: "R", reason: format!("{} must be > 0", self.radius) });
        }
        if !(self.r > -1.0) {
            return Err(Error::KernelOrder { r: self.r, bound: -1.0 });
        }
        if self.quad_nodes < 4 {
            return Err(Error::InvalidParameter { name: "quad_nodes", reason: format!("{} < 4", self.quad_nodes) });
        }
        Ok(())
    }
}

/// Quadrature for `∫_0^{λ₀} f(λ) λ^r dλ`: the weights absorb `λ^r`.
///
/// For `r ∈ (−1, 0)` the substitution `λ = λ₀ u^{1/(r+1)}` turns `λ^r dλ` into
/// a constant multiple of `du`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRule {
    pub lambdas: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KernelRule {
    pub fn new(cfg: &KernelConfig) -> Result<Self> {
        cfg.validate()?;
        let gl = GaussLegendre::new(cfg.quad_nodes);
        let (lambdas, weights) = if cfg.r < 0.0 {
            let e = 1.0 / (cfg.r + 1.0);
            let scale = cfg.lambda0.powf(cfg.r + 1.0) / (cfg.r + 1.0);
            gl.mapped(0.0, 1.0).map(|(u, w)| (cfg.lambda0 * u.powf(e), w * scale)).unzip()
        } else {
            gl.mapped(0.0, cfg.lambda0).map(|(l, w)| (l, w * l.powf(cfg.r))).unzip()
        };
        Ok(Self { lambdas, weights })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lambdas.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `e^{−λ(t+R)} cosh(λt)`, written without overflow.
pub(crate) fn xi_weight(lambda: f64, t: f64, radius: f64) -> f64 {
    0.5 * ((-lambda * radius).exp() + (-lambda * (2.0 * t + radius)).exp())
}

/// `e^{−λ(t+R)} sinh(λ(t−s)) / (λ(t−s))`.
pub(crate) fn eta_weight(lambda: f64, t: f64, s: f64, radius: f64) -> f64 {
    let z = lambda * (t - s);
    if z.abs() < SINHC_SWITCH {
        (-lambda * (t + radius)).exp() * sinhc(z)
    } else {
        0.5 * ((-lambda * (s + radius)).exp() - (-lambda * (2.0 * t - s + radius)).exp()) / z
    }
}

/// `ξ_r(t, x)` at `|x| = x_radius` in dimension `n`.
pub fn xi_eval(cfg: &KernelConfig, n: u32, t: f64, x_radius: f64) -> Result<f64> {
    let rule = KernelRule::new(cfg)?;
    Ok(Kernels::new(*cfg, n, rule).xi(t, x_radius))
}

/// `η_r(t, s, x)` at `|x| = x_radius`; requires `t ≥ s`.
pub fn eta_eval(cfg: &KernelConfig, n: u32, t: f64, s: f64, x_radius: f64) -> Result<f64> {
    if t < s {
        return Err(Error::InvalidParameter { name: "t", reason: format!("t = {t} < s = {s}") });
    }
    let rule = KernelRule::new(cfg)?;
    Ok(Kernels::new(*cfg, n, rule).eta(t, s, x_radius))
}

/// Reusable evaluator holding the rule and the eigenfunction.
#[derive(Debug, Clone)]
pub(crate) struct Kernels {
    cfg: KernelConfig,
    rule: KernelRule,
    phi: Eigenfunction,
}

impl Kernels {
    pub(crate) fn new(cfg: KernelConfig, n: u32, rule: KernelRule) -> Self {
        Self { cfg, rule, phi: Eigenfunction::new(n) }
    }

    pub(crate) fn xi(&self, t: f64, x: f64) -> f64 {
        self.rule.iter().map(|(l, w)| w * xi_weight(l, t, self.cfg.radius) * self.phi.eval(l * x)).sum()
    }

    pub(crate) fn eta(&self, t: f64, s: f64, x: f64) -> f64 {
        self.rule.iter().map(|(l, w)| w * eta_weight(l, t, s, self.cfg.radius) * self.phi.eval(l * x)).sum()
    }
}

/// Sample points for [`fit_kernel_bounds`]. Radii are given as fractions of
/// the largest admissible `|x|` for each estimate (`R`, `s + R` or `t + R`).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub x_fractions: Vec<f64>,
}

impl KernelGrid {
    /// `points` equally spaced values on `[0, t_max]` for both `t` and `s`.
    pub fn uniform(t_max: f64, points: usize, x_fractions: Vec<f64>) -> Self {
        let t: Vec<f64> = (0..points).map(|i| t_max * i as f64 / (points - 1).max(1) as f64).collect();
        Self { s: t.clone(), t, x_fractions }
    }
}

/// Empirical constants of the kernel estimates; `None` when the grid holds no
/// admissible point for that estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBounds {
    /// `min ξ_r(t, x)` over `|x| ≤ R`.
    pub a0: Option<f64>,
    /// `min η_r(t, 0, x) ⟨t⟩` over `|x| ≤ R`.
    pub b0: Option<f64>,
    /// `min η_r(t, s, x) ⟨t⟩ ⟨s⟩^r` over `t > s`, `|x| ≤ s + R`.
    pub b1: Option<f64>,
    /// `max η_r(t, t, x) ⟨t⟩^{(n−1)/2} ⟨t − |x|⟩^{r − (n−3)/2}` over `|x| ≤ t + R`, `t > 0`.
    pub b2: Option<f64>,
}

impl KernelBounds {
    pub fn all_positive(&self) -> bool {
        [self.a0, self.b0, self.b1, self.b2].iter().all(|c| matches!(c, Some(v) if *v > 0.0 && v.is_finite()))
    }
}

fn fold_min(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.min(v)))
}

/// Fits the four kernel constants over `grid`.
pub fn fit_kernel_bounds(cfg: &KernelConfig, n: u32, grid: &KernelGrid) -> Result<KernelBounds> {
    let upper_order = (n as f64 - 3.0) / 2.0;
    if !(cfg.r > upper_order) {
        return Err(Error::KernelOrder { r: cfg.r, bound: upper_order });
    }
    let rule = KernelRule::new(cfg)?;
    let k = Kernels::new(*cfg, n, rule);
    let radius = cfg.radius;
    let mut out = KernelBounds { a0: None, b0: None, b1: None, b2: None };
    for &t in &grid.t {
        for &f in &grid.x_fractions {
            let x = f * radius;
            out.a0 = fold_min(out.a0, k.xi(t, x));
            out.b0 = fold_min(out.b0, k.eta(t, 0.0, x) * bracket(t));
        }
        for &s in grid.s.iter().filter(|&&s| s < t) {
            for &f in &grid.x_fractions {
                let x = f * (s + radius);
                out.b1 = fold_min(out.b1, k.eta(t, s, x) * bracket(t) * bracket(s).powf(cfg.r));
            }
        }
        if t > 0.0 {
            for &f in &grid.x_fractions {
                let x = f * (t + radius);
                let v = k.eta(t, t, x)
                    * bracket(t).powf((n as f64 - 1.0) / 2.0)
                    * bracket(t - x).powf(cfg.r - upper_order);
                out.b2 = Some(out.b2.map_or(v, |a: f64| a.max(v)));
            }
        }
    }
    Ok(out)
}
