use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::auxiliary::sphere_area;
use crate::damping::DampingProfile;
use crate::exponents::SystemParams;
use crate::{Error, Result};

/// Largest accepted Courant number `dt / dr`.
pub const MAX_CFL: f64 = 0.5;
/// Extra radial nodes kept beyond `horizon + R`.
pub const CONE_MARGIN_NODES: usize = 20;

/// Amplitudes of the built-in bump `c (1 − (r/R)²)⁴` for each datum; zero
/// switches a datum off.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DataSpec {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl DataSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The same bump amplitude `c` for all four data.
    pub fn uniform(c: f64) -> Self {
        Self { u0: c, u1: c, v0: c, v1: c }
    }

    /// Positions only, zero initial speeds.
    pub fn positions(c: f64) -> Self {
        Self { u0: c, u1: 0.0, v0: c, v1: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [("u0", self.u0), ("u1", self.u1), ("v0", self.v0), ("v1", self.v1)] {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("bump amplitude {c} must be finite and >= 0") });
            }
        }
        Ok(())
    }
}

/// `c (1 − (r/R)²)⁴` on `r < R`, zero outside.
pub fn bump(c: f64, radius: f64, r: f64) -> f64 {
    if r >= radius {
        0.0
    } else {
        let s = 1.0 - (r / radius).powi(2);
        c * s.powi(4)
    }
}

/// Discretisation of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub dr: f64,
    pub cfl: f64,
    pub horizon: f64,
    /// Domain radius; defaults to `horizon + R` plus a margin of
    /// [`CONE_MARGIN_NODES`] nodes.
    pub rmax: Option<f64>,
    /// `false` drops the power sources (linear test mode).
    pub nonlinear: bool,
}

impl GridConfig {
    pub fn new(dr: f64, cfl: f64, horizon: f64) -> Self {
        Self { dr, cfl, horizon, rmax: None, nonlinear: true }
    }

    pub fn linear(self) -> Self {
        Self { nonlinear: false, ..self }
    }
}

/// Radial snapshot of `(u, v)` on two leapfrog time levels.
#[derive(Debug, Clone)]
pub struct GridState {
    pub t: f64,
    pub steps: usize,
    pub dr: f64,
    pub dt: f64,
    pub rmax: f64,
    pub params: SystemParams,
    pub b1: DampingProfile,
    pub b2: DampingProfile,
    pub nonlinear: bool,
    r: Vec<f64>,
    weights: Vec<f64>,
    u_old: Vec<f64>,
    u: Vec<f64>,
    v_old: Vec<f64>,
    v: Vec<f64>,
    /// Initial speeds, used by the Taylor start only.
    u1: Vec<f64>,
    v1: Vec<f64>,
    scratch_u: Vec<f64>,
    scratch_v: Vec<f64>,
}

/// Trapezoid weights of `∫ f dx` for radial `f`, with measure `|S^{n−1}| r^{n−1} dr`.
pub fn radial_weights(n: u32, dr: f64, nodes: usize) -> Vec<f64> {
    let area = sphere_area(n - 1);
    (0..nodes)
        .map(|i| {
            let end = if i == 0 || i + 1 == nodes { 0.5 } else { 1.0 };
            end * area * (i as f64 * dr).powi(n as i32 - 1) * dr
        })
        .collect()
}

/// Builds the initial state with the data scaled by `ε`.
pub fn init_state(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
) -> Result<GridState> {
    data.validate()?;
    if !(grid.dr > 0.0 && grid.dr.is_finite()) {
        return Err(Error::InvalidGrid(format!("dr = {} must be > 0", grid.dr)));
    }
    if !(grid.cfl > 0.0 && grid.cfl <= MAX_CFL) {
        return Err(Error::InvalidGrid(format!("CFL = {} must lie in (0, {MAX_CFL}]", grid.cfl)));
    }
    if !(grid.horizon > 0.0 && grid.horizon.is_finite()) {
        return Err(Error::InvalidParameter { name: "horizon", reason: format!("{} must be > 0", grid.horizon) });
    }
    let needed = grid.horizon + params.radius + 2.0 * grid.dr;
    let rmax = grid.rmax.unwrap_or(grid.horizon + params.radius + CONE_MARGIN_NODES as f64 * grid.dr);
    if rmax < needed {
        return Err(Error::ConeExitsGrid { needed, rmax });
    }
    let nodes = (rmax / grid.dr).ceil() as usize + 1;
    let r: Vec<f64> = (0..nodes).map(|i| i as f64 * grid.dr).collect();
    let eps = params.eps;
    let profile = |c: f64| -> Vec<f64> {
        let mut f: Vec<f64> = r.iter().map(|&x| eps * bump(c, params.radius, x)).collect();
        f[nodes - 1] = 0.0;
        f
    };
    let u = profile(data.u0);
    let v = profile(data.v0);
    Ok(GridState {
        t: 0.0,
        steps: 0,
        dr: grid.dr,
        dt: grid.cfl * grid.dr,
        rmax: (nodes - 1) as f64 * grid.dr,
        params: params.clone(),
        b1: b1.clone(),
        b2: b2.clone(),
        nonlinear: grid.nonlinear,
        weights: radial_weights(params.n, grid.dr, nodes),
        u_old: u.clone(),
        v_old: v.clone(),
        u,
        v,
        u1: profile(data.u1),
        v1: profile(data.v1),
        scratch_u: alloc::vec![0.0; nodes],
        scratch_v: alloc::vec![0.0; nodes],
        r,
    })
}

/// Radial Laplacian `f'' + (n−1) f'/r` at node `i` (not the outer node).
#[inline]
fn laplacian(f: &[f64], i: usize, n: f64, dr: f64) -> f64 {
    let h2 = dr * dr;
    if i == 0 {
        n * 2.0 * (f[1] - f[0]) / h2
    } else {
        let r = i as f64 * dr;
        (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2 + (n - 1.0) * (f[i + 1] - f[i - 1]) / (2.0 * dr * r)
    }
}

impl GridState {
    pub fn nodes(&self) -> usize {
        self.r.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Backward difference `(u(t) − u(t − dt))/dt`; the initial speed at `t = 0`.
    pub fn u_t(&self) -> Vec<f64> {
        if self.steps == 0 {
            self.u1.clone()
        } else {
            self.u.iter().zip(&self.u_old).map(|(a, b)| (a - b) / self.dt).collect()
        }
    }

    pub fn v_t(&self) -> Vec<f64> {
        if self.steps == 0 {
            self.v1.clone()
        } else {
            self.v.iter().zip(&self.v_old).map(|(a, b)| (a - b) / self.dt).collect()
        }
    }

    /// `∫ f dx` with the shared trapezoid weights.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * f(i)).sum()
    }

    /// `U(t) = ∫ u dx`.
    pub fn u_integral(&self) -> f64 {
        self.integrate(|i| self.u[i])
    }

    pub fn v_integral(&self) -> f64 {
        self.integrate(|i| self.v[i])
    }

    /// `∫ |u|^q dx`.
    pub fn u_mass(&self) -> f64 {
        let q = self.params.q_f64();
        self.integrate(|i| self.u[i].abs().powf(q))
    }

    /// `∫ |v|^p dx`.
    pub fn v_mass(&self) -> f64 {
        let p = self.params.p_f64();
        self.integrate(|i| self.v[i].abs().powf(p))
    }

    /// `max(|u|, |v|)` over the grid; NaN if any value is not finite.
    pub fn sup_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for x in self.u.iter().chain(&self.v) {
            if !x.is_finite() {
                return f64::NAN;
            }
            m = m.max(x.abs());
        }
        m
    }

    /// `max(|u|, |v|)` over nodes with `r > t + R + margin`.
    pub fn outside_cone(&self, margin: f64) -> f64 {
        let edge = self.t + self.params.radius + margin;
        self.r
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > edge)
            .map(|(i, _)| self.u[i].abs().max(self.v[i].abs()))
            .fold(0.0, f64::max)
    }

    /// `Σ wᵢ (Δ_h u)ᵢ` over the updated nodes: the discrete defect of `∫ Δu = 0`.
    pub fn laplacian_defect(&self) -> (f64, f64) {
        let n = self.params.n as f64;
        let last = self.nodes() - 1;
        let mut du = 0.0;
        let mut dv = 0.0;
        for i in 0..last {
            du += self.weights[i] * laplacian(&self.u, i, n, self.dr);
            dv += self.weights[i] * laplacian(&self.v, i, n, self.dr);
        }
        (du, dv)
    }

    /// Advances both components by one leapfrog step.
    pub fn step(&mut self) {
        let n = self.params.n as f64;
        let (p, q) = (self.params.p_f64(), self.params.q_f64());
        let (dt, dr) = (self.dt, self.dr);
        let dt2 = dt * dt;
        let last = self.nodes() - 1;
        let hb1 = 0.5 * dt * self.b1.b(self.t);
        let hb2 = 0.5 * dt * self.b2.b(self.t);
        let src = |x: f64, e: f64, on: bool| if on { x.abs().powf(e) } else { 0.0 };
        if self.steps == 0 {
            let (b1, b2) = (2.0 * hb1 / dt, 2.0 * hb2 / dt);
            for i in 0..last {
                let lu = laplacian(&self.u, i, n, dr);
                let lv = laplacian(&self.v, i, n, dr);
                self.scratch_u[i] = self.u[i]
                    + dt * self.u1[i]
                    + 0.5 * dt2 * (lu - b1 * self.u1[i] + src(self.v[i], p, self.nonlinear));
                self.scratch_v[i] = self.v[i]
                    + dt * self.v1[i]
                    + 0.5 * dt2 * (lv - b2 * self.v1[i] + src(self.u[i], q, self.nonlinear));
            }
        } else {
            for i in 0..last {
                let lu = laplacian(&self.u, i, n, dr);
                let lv = laplacian(&self.v, i, n, dr);
                self.scratch_u[i] = (2.0 * self.u[i] - (1.0 - hb1) * self.u_old[i]
                    + dt2 * (lu + src(self.v[i], p, self.nonlinear)))
                    / (1.0 + hb1);
                self.scratch_v[i] = (2.0 * self.v[i] - (1.0 - hb2) * self.v_old[i]
                    + dt2 * (lv + src(self.u[i], q, self.nonlinear)))
                    / (1.0 + hb2);
            }
        }
        self.scratch_u[last] = 0.0;
        self.scratch_v[last] = 0.0;
        core::mem::swap(&mut self.u_old, &mut self.u);
        core::mem::swap(&mut self.u, &mut self.scratch_u);
        core::mem::swap(&mut self.v_old, &mut self.v);
        core::mem::swap(&mut self.v, &mut self.scratch_v);
        self.steps += 1;
        self.t = self.steps as f64 * dt;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Power;

    fn sys(n: u32) -> SystemParams {
        SystemParams::new(n, Power::exact(2, 1), Power::exact(2, 1), 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let z = DampingProfile::Zero;
        let mut s = init_state(&sys(3), &z, &z, &DataSpec::zero(), &GridConfig::new(0.05, 0.5, 2.0)).unwrap();
        for _ in 0..40 {
            s.step();
        }
        assert_eq!(s.sup_norm(), 0.0);
    }

    #[test]
    fn u_bump_only() {
        let z = DampingProfile::Zero;
        let data = DataSpec { u0: 1.0, ..DataSpec::zero() };
        let cfg = GridConfig::new(0.01, 0.5, 1.0);
        let s = init_state(&sys(2), &z, &z, &data, &cfg).unwrap();
        assert!(s.u_integral() > 0.0 && s.v_integral() == 0.0);
        let s2 = init_state(&sys(2).with_eps(2.0), &z, &z, &data, &cfg).unwrap();
        assert!((s2.u_integral() - 2.0 * s.u_integral()).abs() < 1e-14);
    }

    #[test]
    fn bump_integral_in_one_dimension() {
        // ∫_{−1}^{1} (1 − x²)⁴ dx = 256/315
        let w = radial_weights(1, 1e-3, 1001);
        let s: f64 = w.iter().enumerate().map(|(i, w)| w * bump(1.0, 1.0, i as f64 * 1e-3)).sum();
        assert!((s - 256.0 / 315.0).abs() < 1e-6);
    }

    #[test]
    fn laplacian_defect_vanishes_in_odd_dimensions() {
        let z = DampingProfile::Zero;
        for n in [1, 3] {
            let s = init_state(&sys(n), &z, &z, &DataSpec::uniform(1.0), &GridConfig::new(0.02, 0.5, 1.0)).unwrap();
            let (du, dv) = s.laplacian_defect();
            assert!(du.abs() < 1e-10 && dv.abs() < 1e-10, "n = {n}: {du}, {dv}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let z = DampingProfile::Zero;
        let d = DataSpec::zero();
        assert!(init_state(&sys(1), &z, &z, &d, &GridConfig::new(0.01, 0.6, 1.0)).is_err());
        let mut cfg = GridConfig::new(0.01, 0.5, 5.0);
        cfg.rmax = Some(3.0);
        assert!(matches!(init_state(&sys(1), &z, &z, &d, &cfg), Err(Error::ConeExitsGrid { .. })));
        assert!(init_state(&sys(1), &z, &z, &DataSpec { u0: -1.0, ..d }, &GridConfig::new(0.01, 0.5, 1.0)).is_err());
    }
}
