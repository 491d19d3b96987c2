//! Auxiliary functions for the critical-case functionals: the Laplace
//! eigenfunction `Φ`, the kernels `ξ_r` and `η_r`, and the fundamental pair
//! `y₁, y₂` of `∂_t² + b(t)∂_t − λ²`.

mod fundamental;
pub(crate) mod kernels;
mod phi;

pub use fundamental::{
    solve_fundamental_pair, verify_fundamental_bounds, FundamentalPair, FundamentalReport, IdentityCheck,
};
pub use kernels::{
    bracket, eta_eval, fit_kernel_bounds, sinhc, xi_eval, KernelBounds, KernelConfig, KernelGrid, KernelRule,
};
pub use phi::{phi_eval, phi_laplacian_residual, sphere_area, Eigenfunction, LaplacianResidual};
