use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::GaussLegendre;

/// Nodes per panel of the angular rule.
const PANEL_NODES: usize = 32;

/// Surface measure `|S^k|` of the unit sphere in `R^{k+1}`.
pub fn sphere_area(k: u32) -> f64 {
    let half = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(half) / libm::tgamma(half)
}

/// Radial profile of `Φ(x) = ∫_{S^{n−1}} e^{ω·x} dS_ω` (and `e^x + e^{−x}` on
/// the line), which satisfies `ΔΦ = Φ`.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    n: u32,
    rule: GaussLegendre,
    shell: f64,
}

impl Eigenfunction {
    /// # Panics
    /// If `n == 0`.
    pub fn new(n: u32) -> Self {
        assert!(n >= 1);
        let shell = if n >= 3 { sphere_area(n - 2) } else { 1.0 };
        Self { n, rule: GaussLegendre::new(PANEL_NODES), shell }
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// `Φ` at radius `rho`; even in `rho`.
    pub fn eval(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        match self.n {
            1 => rho.exp() + (-rho).exp(),
            2 => {
                let panels = 2 * panels_for(rho);
                self.rule.integrate_composite(0.0, 2.0 * PI, panels, |th| (rho * th.cos()).exp())
            }
            n => {
                let k = (n - 2) as i32;
                let panels = panels_for(rho);
                self.shell
                    * self.rule.integrate_composite(0.0, PI, panels, |th| (rho * th.cos()).exp() * th.sin().powi(k))
            }
        }
    }
}

fn panels_for(rho: f64) -> usize {
    1 + (rho / 4.0).ceil() as usize
}

/// `Φ` in dimension `n` at radius `rho`.
pub fn phi_eval(n: u32, rho: f64) -> f64 {
    Eigenfunction::new(n).eval(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianResidual {
    pub max_relative: f64,
    pub at: f64,
}

/// Largest `|Φ'' + (n−1)Φ'/ρ − Φ| / Φ` over `ρ ∈ [0, rho_max]` with centered
/// differences of step `h` (`nΦ''` at the origin).
pub fn phi_laplacian_residual(n: u32, rho_max: f64, h: f64) -> LaplacianResidual {
    let phi = Eigenfunction::new(n);
    let steps = (rho_max / h).round() as usize;
    let mut prev = phi.eval(h); // even extension
    let mut cur = phi.eval(0.0);
    let mut worst = LaplacianResidual { max_relative: 0.0, at: 0.0 };
    let nf = n as f64;
    for i in 0..=steps {
        let rho = i as f64 * h;
        let next = phi.eval(rho + h);
        let second = (next - 2.0 * cur + prev) / (h * h);
        let lap = if i == 0 { nf * second } else { second + (nf - 1.0) / rho * (next - prev) / (2.0 * h) };
        let r = (lap - cur).abs() / cur;
        if r > worst.max_relative {
            worst = LaplacianResidual { max_relative: r, at: rho };
        }
        prev = cur;
        cur = next;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(phi_eval(1, 0.0), 2.0);
        assert!((phi_eval(2, 0.0) - 2.0 * PI).abs() < 1e-13);
        assert!((phi_eval(3, 0.0) - 4.0 * PI).abs() < 1e-13);
        assert!((phi_eval(4, 0.0) - sphere_area(3)).abs() < 1e-12);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn three_dimensional_closed_form() {
        // ∫_0^π e^{ρ cos θ} sin θ dθ = 2 sinh(ρ)/ρ
        let phi = Eigenfunction::new(3);
        let mut rho = 1e-3;
        while rho <= 10.0 {
            let exact = 4.0 * PI * rho.sinh() / rho;
            assert!((phi.eval(rho) / exact - 1.0).abs() < 1e-8, "rho = {rho}");
            rho *= 1.3;
        }
    }

    #[test]
    fn even_and_positive() {
        for n in 1..=5 {
            let phi = Eigenfunction::new(n);
            for rho in [0.0, 0.5, 3.0, 20.0] {
                assert!(phi.eval(rho) > 0.0);
                assert_eq!(phi.eval(rho), phi.eval(-rho));
            }
        }
    }

    #[test]
    fn two_dimensional_against_bessel_series() {
        // Φ = 2π I₀(ρ) in the plane.
        let rho: f64 = 7.5;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= (rho / 2.0).powi(2) / (k as f64 * k as f64);
            sum += term;
        }
        assert!((phi_eval(2, rho) / (2.0 * PI * sum) - 1.0).abs() < 1e-12);
    }
}
