//! Log-gamma and Airy functions.

mod airy;
mod gamma;

pub use airy::{
    airy_ai_complex, airy_ai_zero, airy_bracket, airy_eval, airy_log, airy_rotated, AiryPair, Rotation,
    RotatedAiryValue, SERIES_RADIUS,
};
pub use gamma::{is_pole, ln_gamma, ln_sin_pi, log_gamma, log_gamma_ratio, SHIFT_THRESHOLD};
