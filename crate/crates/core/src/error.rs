use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("exponent {name} = {value} must exceed 1")]
    ExponentNotAboveOne { name: &'static str, value: f64 },
    #[error("spatial dimension must be at least 1")]
    InvalidDimension,
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("(n, p, q) lies in the region where no blow-up is claimed")]
    UnknownRegion,
    #[error("operation requires the {expected} region")]
    WrongRegion { expected: &'static str },
    #[error("initial-speed flags set outside every low-dimensional improvement range")]
    SpeedFlagsOutOfRange,
    #[error("damping profile is not summable: {0}")]
    NotSummable(String),
    #[error("grid is invalid: {0}")]
    InvalidGrid(String),
    #[error("index {index} is outside the supported range: {reason}")]
    IndexOutOfRange { index: usize, reason: &'static str },
    #[error("step too large: lambda * h = {0} exceeds 0.1")]
    StepTooLarge(f64),
    #[error("kernel order r = {r} must exceed {bound}")]
    KernelOrder { r: f64, bound: f64 },
    #[error("cone of radius {needed} leaves the grid of radius {rmax}")]
    ConeExitsGrid { needed: f64, rmax: f64 },
    #[error("trace too short: {0} samples")]
    TraceTooShort(usize),
    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
