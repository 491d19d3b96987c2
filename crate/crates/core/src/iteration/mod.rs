//! The iteration schemes as executable recurrences.
//!
//! Exponents are [`Power`](crate::Power) values and stay exact when `p` and
//! `q` are rational; amplitudes grow doubly exponentially and are kept as
//! logarithms.

mod critical;
mod subcritical;

pub use critical::{
    blowup_threshold_critical, critical_base, critical_closed_form, critical_step, geometric_partial_sum,
    geometric_weight_limit, log_blowup_threshold_critical, log_c_lower_bound, log_e, slicing_level, CriticalCase,
    CriticalConstants, CriticalEnvelope, CriticalState,
};
pub use subcritical::{
    blowup_threshold_subcritical, blowup_threshold_with_prefactors, envelope_holds, subcritical_base,
    subcritical_closed_form, subcritical_closed_form_from, subcritical_logd_bound, subcritical_step,
    weighted_sum_identity, BaseCase, ClosedValue, IterationConstants, LogBoundReport, SubcriticalExponents,
    SubcriticalState,
};
