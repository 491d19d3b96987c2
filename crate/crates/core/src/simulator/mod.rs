//! Radial finite-difference solver and the numerical checks built on it.

mod critical;
mod fit;
mod grid;
mod identities;
mod run;

pub use critical::{verify_critical_inequalities, CriticalCheckConfig, CriticalReport, CriticalSample};
pub use fit::{fit_loglog, lifespan_sweep, summarize_sweep, LogLogFit, SweepSummary};
pub use grid::{bump, init_state, radial_weights, DataSpec, GridConfig, GridState, CONE_MARGIN_NODES, MAX_CFL};
pub use identities::{cone_leakage, convergence_order, verify_identities, IdentityReport};
pub use run::{drive, run_until_blowup, Detection, FunctionalTrace, LifespanRecord, RunConfig, DEFAULT_THRESHOLD};
