use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::grid::{DataSpec, GridConfig};
use super::run::{run_until_blowup, LifespanRecord, RunConfig};
use crate::damping::DampingProfile;
use crate::exponents::SystemParams;
use crate::{Error, Result};

/// Least-squares line `log y = intercept + slope · log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// Points dropped for being non-finite or nonpositive.
    pub dropped: usize,
}

impl LogLogFit {
    pub fn eval(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Fits a line through `(ln x, ln y)` over the finite positive points.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<LogLogFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite() && *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let dropped = points.len() - logs.len();
    let m = logs.len();
    if m < 2 {
        return Err(Error::InvalidParameter { name: "points", reason: format!("{m} usable points, need 2") });
    }
    let mf = m as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter { name: "points", reason: "all abscissae coincide".into() });
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(LogLogFit { slope, intercept: my - slope * mx, points: m, dropped })
}

/// Summary of a lifespan sweep against a power law `T ≈ C ε^κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub fit: LogLogFit,
    pub law_exponent: f64,
    /// `exp(mean log(T ε^{−κ}))`.
    pub constant: f64,
    /// Largest `T / (C ε^κ) − 1` over the blown-up runs.
    pub envelope_excess: f64,
    /// Lifespans do not increase with `ε` by more than one time step.
    pub monotone: bool,
    /// Amplitudes whose run reached the horizon.
    pub survived: Vec<f64>,
}

impl SweepSummary {
    pub fn slope_error(&self) -> f64 {
        (self.fit.slope - self.law_exponent).abs()
    }

    pub fn envelope_holds(&self, tol: f64) -> bool {
        self.envelope_excess <= tol
    }
}

/// Fits blown-up runs and compares them with the exponent `law_exponent`.
pub fn summarize_sweep(records: &[LifespanRecord], law_exponent: f64) -> Result<SweepSummary> {
    let blown: Vec<&LifespanRecord> = records.iter().filter(|r| r.detection.blew_up()).collect();
    let survived = records.iter().filter(|r| !r.detection.blew_up()).map(|r| r.eps).collect();
    let pts: Vec<(f64, f64)> = blown.iter().map(|r| (r.eps, r.t_blow)).collect();
    let fit = fit_loglog(&pts)?;
    let logs: Vec<f64> = blown.iter().map(|r| r.t_blow.ln() - law_exponent * r.eps.ln()).collect();
    let constant = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    let envelope_excess = blown
        .iter()
        .map(|r| r.t_blow / (constant * r.eps.powf(law_exponent)) - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut sorted: Vec<&LifespanRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    let monotone = sorted.windows(2).all(|w| w[1].t_blow <= w[0].t_blow + w[0].dt.max(w[1].dt));
    Ok(SweepSummary { fit, law_exponent, constant, envelope_excess, monotone, survived })
}

/// Runs one simulation per amplitude, in order.
pub fn lifespan_sweep(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
    run: &RunConfig,
    eps: &[f64],
) -> Result<Vec<LifespanRecord>> {
    eps.iter()
        .map(|&e| {
            let sp = params.with_eps(e);
            let run = RunConfig { sample_every: usize::MAX, ..*run };
            run_until_blowup(&sp, b1, b2, data, grid, &run).map(|(rec, _)| rec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::run::Detection;
    use proptest::prelude::*;

    fn rec(eps: f64, t: f64) -> LifespanRecord {
        LifespanRecord { eps, t_blow: t, detection: Detection::ThresholdCross, dr: 0.1, dt: 0.05, steps: 1 }
    }

    #[test]
    fn exact_power_law_recovered() {
        let recs: Vec<_> = [0.1, 0.2, 0.4, 0.8].iter().map(|&e: &f64| rec(e, 3.0 * e.powf(-2.0))).collect();
        let s = summarize_sweep(&recs, -2.0).unwrap();
        assert!(s.slope_error() < 1e-12);
        assert!((s.constant - 3.0).abs() < 1e-12);
        assert!(s.envelope_holds(1e-12) && s.monotone && s.survived.is_empty());
    }

    #[test]
    fn nonfinite_points_dropped() {
        let f = fit_loglog(&[(1.0, 1.0), (2.0, 4.0), (f64::NAN, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!((f.points, f.dropped), (2, 2));
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!(fit_loglog(&[(1.0, 1.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn survivors_flagged_and_monotonicity_checked() {
        let mut recs = alloc::vec![rec(0.5, 4.0), rec(1.0, 2.0), rec(1.5, 2.04), rec(2.0, 3.0)];
        recs.push(LifespanRecord { detection: Detection::Survived, ..rec(0.1, 50.0) });
        let s = summarize_sweep(&recs, -1.0).unwrap();
        assert_eq!(s.survived, alloc::vec![0.1]);
        assert!(!s.monotone);
    }

    proptest! {
        #[test]
        fn slope_and_intercept_recovered(k in -4.0f64..-0.1, c in 0.1f64..10.0) {
            let pts: Vec<(f64, f64)> = (1..6).map(|i| { let x = 0.1 * i as f64; (x, c * x.powf(k)) }).collect();
            let f = fit_loglog(&pts).unwrap();
            prop_assert!((f.slope - k).abs() < 1e-10);
            prop_assert!((f.eval(0.3) / (c * 0.3f64.powf(k)) - 1.0).abs() < 1e-10);
        }
    }
}
