use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::grid::{init_state, DataSpec, GridConfig, GridState};
use crate::damping::DampingProfile;
use crate::exponents::SystemParams;
use crate::{Error, Result};

/// Default sup-norm threshold for blow-up detection.
pub const DEFAULT_THRESHOLD: f64 = 1e10;

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    ThresholdCross,
    NonFinite,
    Survived,
}

impl Detection {
    pub fn as_str(&self) -> &'static str {
        match self {
            Detection::ThresholdCross => "ThresholdCross",
            Detection::NonFinite => "NonFinite",
            Detection::Survived => "Survived",
        }
    }

    pub fn blew_up(&self) -> bool {
        !matches!(self, Detection::Survived)
    }
}

/// One lifespan measurement. For `Survived` runs `t_blow` is the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifespanRecord {
    pub eps: f64,
    pub t_blow: f64,
    pub detection: Detection,
    pub dr: f64,
    pub dt: f64,
    pub steps: usize,
}

/// Spatial functionals sampled along a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FunctionalTrace {
    pub t: Vec<f64>,
    /// `U(t) = ∫ u`.
    pub u: Vec<f64>,
    /// `V(t) = ∫ v`.
    pub v: Vec<f64>,
    /// `N_u(t) = ∫ |u|^q`.
    pub n_u: Vec<f64>,
    /// `N_v(t) = ∫ |v|^p`.
    pub n_v: Vec<f64>,
    pub sup: Vec<f64>,
    /// `Σ w Δ_h u`, the spatial defect entering the ODE identity for `U`.
    pub defect_u: Vec<f64>,
    pub defect_v: Vec<f64>,
}

impl FunctionalTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn push(&mut self, s: &GridState) {
        let (du, dv) = s.laplacian_defect();
        self.t.push(s.t);
        self.u.push(s.u_integral());
        self.v.push(s.v_integral());
        self.n_u.push(s.u_mass());
        self.n_v.push(s.v_mass());
        self.sup.push(s.sup_norm());
        self.defect_u.push(du);
        self.defect_v.push(dv);
    }
}

/// Stopping rule and trace cadence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub threshold: f64,
    /// A trace sample is taken every `sample_every` steps.
    pub sample_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { threshold: DEFAULT_THRESHOLD, sample_every: 10 }
    }
}

/// Steps `state` until blow-up or `horizon`, calling `on_sample` at `t = 0`
/// and every `sample_every` steps before blow-up.
pub fn drive(
    state: &mut GridState,
    horizon: f64,
    run: &RunConfig,
    mut on_sample: impl FnMut(&GridState),
) -> Result<LifespanRecord> {
    if run.sample_every == 0 {
        return Err(Error::InvalidParameter { name: "sample_every", reason: "must be >= 1".into() });
    }
    let initial = state.sup_norm();
    if !(run.threshold > initial) {
        return Err(Error::InvalidParameter {
            name: "threshold",
            reason: format!("{} must exceed the initial sup-norm {initial}", run.threshold),
        });
    }
    on_sample(state);
    let total = (horizon / state.dt).ceil() as usize;
    let record = |s: &GridState, detection, t_blow| LifespanRecord {
        eps: s.params.eps,
        t_blow,
        detection,
        dr: s.dr,
        dt: s.dt,
        steps: s.steps,
    };
    while state.steps < total {
        state.step();
        let sup = state.sup_norm();
        if sup.is_nan() {
            return Ok(record(state, Detection::NonFinite, state.t));
        }
        if sup > run.threshold {
            return Ok(record(state, Detection::ThresholdCross, state.t));
        }
        if state.steps.is_multiple_of(run.sample_every) {
            on_sample(state);
        }
    }
    Ok(record(state, Detection::Survived, horizon))
}

/// One full run with its functional trace.
pub fn run_until_blowup(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
    run: &RunConfig,
) -> Result<(LifespanRecord, FunctionalTrace)> {
    let mut state = init_state(params, b1, b2, data, grid)?;
    let mut trace = FunctionalTrace::default();
    let rec = drive(&mut state, grid.horizon, run, |s| trace.push(s))?;
    Ok((rec, trace))
}
