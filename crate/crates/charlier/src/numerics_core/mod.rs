//! Overflow-proof value types and the extended-precision arithmetic they build on.

mod log_complex;
mod mp;
mod precision;
mod scalar;
mod signed_log;

pub use log_complex::{lc_from_polar_of_log, normalize_phase, LogComplex};
pub use mp::{rel_diff, MpComplex, MpFloat};
pub use precision::PrecisionPolicy;
pub use scalar::{cos_pi, dist_to_unit_segment, lit, sin_pi, Real};
pub(crate) use scalar::{is_odd, to_f64};
pub use signed_log::{slv_add, LogScalar, Sign, SignedLogValue};
