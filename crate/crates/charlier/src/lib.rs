//! Charlier polynomials C_n^{(a)}(x) in monic normalization.
//!
//! The crate pairs an extended-precision reference oracle ([`exact_eval`])
//! with closed-form large-n approximations valid in different parts of the
//! complex plane:
//!
//! | region                         | module                  |
//! |--------------------------------|-------------------------|
//! | away from y = x/n in [0, 1]    | [`non_oscillatory`]     |
//! | y near 1, off the real cut     | [`intermediate_region`] |
//! | turning points t = +-2 sqrt(a) | [`turning_points`]      |
//!
//! [`region_router`] picks the applicable formula for a point and [`zeros`]
//! locates and predicts zeros. Every approximation returns a [`LogComplex`],
//! so magnitudes of size n^n never overflow.
//!
//! Formula code is generic over [`Real`] (`f32`, `f64`); the oracle runs on
//! [`MpFloat`]. The aliases below fix the common `f64` instantiation.

pub mod error;
pub mod exact_eval;
pub mod intermediate_region;
pub mod non_oscillatory;
pub mod numerics_core;
pub mod region_router;
pub mod special_fn;
pub mod turning_points;
pub mod zeros;

mod approx;

pub use approx::{ApproxResult, ErrorOrder, FormulaTag};
pub use error::{Error, Result};
pub use exact_eval::{CharlierParams, EvalPoint};
pub use numerics_core::{LogComplex, MpComplex, MpFloat, PrecisionPolicy, Real, Sign, SignedLogValue};

/// Complex point type used throughout.
pub type C64 = num_complex::Complex<f64>;
pub type Params = CharlierParams<f64>;
pub type Value = LogComplex<f64>;
pub type Approx = ApproxResult<f64>;
pub type SignedLog = SignedLogValue<f64>;
