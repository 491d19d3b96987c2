//! Numerical laboratory for blow-up of weakly coupled semilinear damped wave
//! systems
//!
//! ```text
//! u_tt - Δu + b1(t) u_t = |v|^p
//! v_tt - Δv + b2(t) v_t = |u|^q
//! ```
//!
//! with nonnegative, summable damping coefficients.
//!
//! The crate is `no_std` (it needs `alloc`). All file formats, process-level
//! parallelism and the command line live in the `blowup-lab` companion crate.
//!
//! Float math goes through `num_traits::Float` (backed by `libm`). Those
//! imports are marked `allow(unused_imports)`: once `std` is anywhere in the
//! build, its inherent `f64` methods take precedence.
//!
//! Module map:
//!
//! * [`exponents`]: critical-curve functions, region classification and
//!   lifespan laws, exact over rationals.
//! * [`damping`]: scattering damping profiles and their multipliers.
//! * [`quadrature`]: Gauss–Legendre rules.
//! * [`auxiliary`]: the Laplace eigenfunction, the `ξ_r`/`η_r` kernels and the
//!   fundamental solution pair of the damped Klein–Gordon ODE.
//! * [`iteration`]: subcritical and critical iteration schemes as executable
//!   recurrences.
//! * [`simulator`]: radial leapfrog solver, functional traces, inequality
//!   checks and lifespan fitting.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod auxiliary;
pub mod damping;
mod error;
pub mod exponents;
pub mod iteration;
mod number;
pub mod quadrature;
pub mod simulator;

pub use error::{Error, Result};
pub use number::{ratio, Power};
