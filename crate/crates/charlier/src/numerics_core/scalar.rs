use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Hardware float used by the asymptotic formulas and special functions.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Significand width including the implicit bit.
    const MANTISSA_BITS: u32;
}

impl Real for f32 {
    const MANTISSA_BITS: u32 = 24;
}

impl Real for f64 {
    const MANTISSA_BITS: u32 = 53;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal representable")
}

#[inline]
pub(crate) fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Distance from a complex point to the closed segment [0, 1].
pub fn dist_to_unit_segment<T: Real>(y: num_complex::Complex<T>) -> T {
    let re = y.re.max(T::zero()).min(T::one());
    ((y.re - re).powi(2) + y.im.powi(2)).sqrt()
}

/// sin(pi x) with the integer part of x removed exactly before rounding.
pub fn sin_pi<T: Real>(x: T) -> T {
    let m = x.round();
    let r = x - m;
    let s = (T::PI() * r).sin();
    if is_odd(m) {
        -s
    } else {
        s
    }
}

/// cos(pi x) with the integer part of x removed exactly before rounding.
pub fn cos_pi<T: Real>(x: T) -> T {
    let m = x.round();
    let r = x - m;
    let c = (T::PI() * r).cos();
    if is_odd(m) {
        -c
    } else {
        c
    }
}

pub(crate) fn is_odd<T: Real>(m: T) -> bool {
    (m / lit(2.0)).fract() != T::zero()
}
