//! JSON experiment configuration.

use std::path::Path;

use blowup_core::damping::DampingProfile;
use blowup_core::exponents::{strauss_exponent, SystemParams};
use blowup_core::simulator::{DataSpec, GridConfig, RunConfig, DEFAULT_THRESHOLD, MAX_CFL};
use blowup_core::Power;
use serde::Deserialize;

use crate::LabError;

/// An exponent given as a JSON number (taken exactly), an `"a/b"` or decimal
/// string (exact), or `"strauss"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ExponentValue {
    Number(f64),
    Text(String),
}

impl ExponentValue {
    pub fn resolve(&self, name: &str, n: u32) -> Result<Power, LabError> {
        let bad = |why: String| LabError::Config(format!("{name}: {why}"));
        match self {
            ExponentValue::Number(x) => Power::from_f64_exact(*x).ok_or_else(|| bad(format!("{x} is not finite"))),
            ExponentValue::Text(s) => {
                let s = s.trim();
                if s.eq_ignore_ascii_case("strauss") {
                    let p0 = strauss_exponent(n);
                    if !p0.is_finite() {
                        return Err(bad(format!("the Strauss exponent is infinite for n = {n}")));
                    }
                    return Ok(Power::Approx(p0));
                }
                parse_rational(s).ok_or_else(|| bad(format!("cannot parse {s:?} as a rational")))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<Power> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0).then(|| Power::exact(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if frac.len() > 17 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().ok()?;
    Some(Power::exact(if neg { -num } else { num }, den))
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DampingSpec {
    Zero {},
    PolynomialTail { mu: f64, beta: f64 },
}

impl Default for DampingSpec {
    fn default() -> Self {
        DampingSpec::Zero {}
    }
}

impl DampingSpec {
    pub fn profile(&self) -> Result<DampingProfile, LabError> {
        match *self {
            DampingSpec::Zero {} => Ok(DampingProfile::Zero),
            DampingSpec::PolynomialTail { mu, beta } => Ok(DampingProfile::polynomial_tail(mu, beta)?),
        }
    }
}

/// Bump amplitudes of `u₀, u₁, v₀, v₁` before scaling by `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataBlock {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Default for DataBlock {
    fn default() -> Self {
        Self { u0: 1.0, u1: 0.0, v0: 1.0, v1: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelBlock {
    pub lambda0: f64,
    pub quad_nodes: usize,
    /// Upper end of the `t, s` sample grid.
    pub t_max: f64,
    pub points: usize,
    /// `λ` values for the fundamental pair.
    pub lambdas: Vec<f64>,
    /// End of the fundamental-pair grid and its step.
    pub t_end: f64,
    pub h: f64,
}

impl Default for KernelBlock {
    fn default() -> Self {
        Self {
            lambda0: 1.0,
            quad_nodes: 64,
            t_max: 50.0,
            points: 11,
            lambdas: vec![0.5, 1.0, 2.0],
            t_end: 10.0,
            h: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriticalBlock {
    pub lambda0: f64,
    pub quad_nodes: usize,
    pub r2: Option<f64>,
    /// Start of the logarithmic-growth window; it ends at the horizon.
    pub log_start: f64,
}

impl Default for CriticalBlock {
    fn default() -> Self {
        Self { lambda0: 1.0, quad_nodes: 64, r2: None, log_start: 5.0 }
    }
}

fn one() -> f64 {
    1.0
}
fn default_dr() -> f64 {
    0.02
}
fn default_cfl() -> f64 {
    MAX_CFL
}
fn default_horizon() -> f64 {
    50.0
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}
fn default_sample_every() -> usize {
    10
}
fn default_j_max() -> usize {
    9
}
fn default_cone_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u32,
    pub p: ExponentValue,
    pub q: ExponentValue,
    #[serde(rename = "R", default = "one")]
    pub radius: f64,
    #[serde(default = "one")]
    pub eps: f64,
    /// Damping of the `u` equation, and of the `v` equation unless
    /// `damping_v` is given.
    #[serde(default)]
    pub damping: DampingSpec,
    #[serde(default)]
    pub damping_v: Option<DampingSpec>,
    #[serde(default = "default_dr")]
    pub dr: f64,
    #[serde(rename = "CFL", default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub data: DataBlock,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    /// Amplitudes for `sweep`.
    #[serde(default)]
    pub eps_list: Option<Vec<f64>>,
    /// Last iteration index for `iterate`.
    #[serde(default = "default_j_max")]
    pub j_max: usize,
    #[serde(default)]
    pub kernels: KernelBlock,
    #[serde(default)]
    pub critical: CriticalBlock,
    /// Largest admissible `|u|, |v|` outside the cone in `verify`.
    #[serde(default = "default_cone_tol")]
    pub cone_tolerance: f64,
}

/// Everything the commands need, checked once.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub params: SystemParams,
    pub b1: DampingProfile,
    pub b2: DampingProfile,
    pub data: DataSpec,
    pub grid: GridConfig,
    pub run: RunConfig,
}

fn positive(name: &str, x: f64) -> Result<(), LabError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(LabError::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Range checks and conversion to the core types.
    pub fn validate(self) -> Result<Experiment, LabError> {
        if self.n == 0 {
            return Err(LabError::Config("n must be at least 1".into()));
        }
        let p = self.p.resolve("p", self.n)?;
        let q = self.q.resolve("q", self.n)?;
        positive("R", self.radius)?;
        positive("eps", self.eps)?;
        positive("dr", self.dr)?;
        positive("horizon", self.horizon)?;
        positive("threshold", self.threshold)?;
        positive("cone_tolerance", self.cone_tolerance)?;
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(LabError::Config(format!("CFL must lie in (0, {MAX_CFL}], got {}", self.cfl)));
        }
        if self.sample_every == 0 {
            return Err(LabError::Config("sample_every must be at least 1".into()));
        }
        if !(1..=60).contains(&self.j_max) {
            return Err(LabError::Config(format!("j_max must lie in 1..=60, got {}", self.j_max)));
        }
        if let Some(list) = &self.eps_list {
            for &e in list {
                positive("eps_list entry", e)?;
            }
        }
        let k = &self.kernels;
        positive("kernels.lambda0", k.lambda0)?;
        positive("kernels.t_max", k.t_max)?;
        positive("kernels.t_end", k.t_end)?;
        positive("kernels.h", k.h)?;
        for &l in &k.lambdas {
            positive("kernels.lambdas entry", l)?;
        }
        if k.points < 2 {
            return Err(LabError::Config("kernels.points must be at least 2".into()));
        }
        positive("critical.lambda0", self.critical.lambda0)?;
        positive("critical.log_start", self.critical.log_start)?;

        let params = SystemParams::new(self.n, p, q, self.radius, self.eps)?;
        let b1 = self.damping.profile()?;
        let b2 = self.damping_v.unwrap_or(self.damping).profile()?;
        let d = self.data;
        let data = DataSpec { u0: d.u0, u1: d.u1, v0: d.v0, v1: d.v1 };
        data.validate()?;
        let grid = GridConfig::new(self.dr, self.cfl, self.horizon);
        let run = RunConfig { threshold: self.threshold, sample_every: self.sample_every };
        Ok(Experiment { config: self, params, b1, b2, data, grid, run })
    }
}
