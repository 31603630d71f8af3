use num_complex::Complex;

use super::scalar::{lit, Real};
use super::signed_log::{Sign, SignedLogValue};
use crate::error::{Error, Result};

/// A complex number held as `exp(log_mod + i*phase)`, phase in (-pi, pi].
///
/// `log_mod = -inf` is exact zero and `+inf` an infinite value (a pole of a
/// gamma ratio); neither is produced by [`lc_from_polar_of_log`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex<T: Real> {
    pub log_mod: T,
    pub phase: T,
}

/// Reduces a phase into (-pi, pi], ties going to +pi.
pub fn normalize_phase<T: Real>(phi: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = phi % two_pi;
    if r <= -T::PI() {
        r = r + two_pi;
    } else if r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// `exp(re_log_part + i*im_phase_part)`.
pub fn lc_from_polar_of_log<T: Real>(re_log_part: T, im_phase_part: T) -> Result<LogComplex<T>> {
    if !re_log_part.is_finite() || !im_phase_part.is_finite() {
        return Err(Error::Domain(format!("non-finite log-polar input ({re_log_part}, {im_phase_part})")));
    }
    Ok(LogComplex { log_mod: re_log_part, phase: normalize_phase(im_phase_part) })
}

impl<T: Real> LogComplex<T> {
    pub fn zero() -> Self {
        Self { log_mod: T::neg_infinity(), phase: T::zero() }
    }

    pub fn infinity() -> Self {
        Self { log_mod: T::infinity(), phase: T::zero() }
    }

    pub fn one() -> Self {
        Self { log_mod: T::zero(), phase: T::zero() }
    }

    /// `exp(z)` for a complex logarithm `z`; the imaginary part is reduced.
    pub fn exp_of(z: Complex<T>) -> Self {
        Self { log_mod: z.re, phase: normalize_phase(z.im) }
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            return Self::zero();
        }
        Self { log_mod: z.norm().ln(), phase: normalize_phase(z.arg()) }
    }

    pub fn from_real(v: T) -> Self {
        Self::from_complex(Complex::new(v, T::zero()))
    }

    pub fn from_signed_log(v: &SignedLogValue<T>) -> Self {
        match v.sign() {
            Sign::Zero => Self::zero(),
            Sign::Positive => Self { log_mod: *v.log_abs(), phase: T::zero() },
            Sign::Negative => Self { log_mod: *v.log_abs(), phase: T::PI() },
        }
    }

    /// Builds `re + i*im` from log-space parts without overflow.
    pub fn from_parts(re: &SignedLogValue<T>, im: &SignedLogValue<T>) -> Self {
        if re.is_zero() && im.is_zero() {
            return Self::zero();
        }
        let lr = if re.is_zero() { T::neg_infinity() } else { *re.log_abs() };
        let li = if im.is_zero() { T::neg_infinity() } else { *im.log_abs() };
        let m = lr.max(li);
        let xr = T::from_i8(re.sign().as_i8()).unwrap() * (lr - m).exp();
        let xi = T::from_i8(im.sign().as_i8()).unwrap() * (li - m).exp();
        let z = Complex::new(xr, xi);
        Self { log_mod: m + z.norm().ln(), phase: z.arg() }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mod == T::neg_infinity()
    }

    pub fn is_finite(&self) -> bool {
        self.log_mod.is_finite() && self.phase.is_finite()
    }

    /// Plain complex value; overflows for large `log_mod`.
    pub fn to_complex(&self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.log_mod.exp(), self.phase)
    }

    /// The complex logarithm `log_mod + i*phase`.
    pub fn ln(&self) -> Complex<T> {
        Complex::new(self.log_mod, self.phase)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self { log_mod: self.log_mod + o.log_mod, phase: normalize_phase(self.phase + o.phase) }
    }

    pub fn div(&self, o: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { log_mod: self.log_mod - o.log_mod, phase: normalize_phase(self.phase - o.phase) }
    }

    pub fn powi(&self, k: i32) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::one() } else { Self::zero() };
        }
        let kk: T = lit(k as f64);
        Self { log_mod: self.log_mod * kk, phase: normalize_phase(self.phase * kk) }
    }

    pub fn conj(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self { log_mod: self.log_mod, phase: normalize_phase(-self.phase) }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self { log_mod: self.log_mod, phase: normalize_phase(self.phase + T::PI()) }
    }

    /// `self + o` anchored at the larger modulus.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let m = self.log_mod.max(o.log_mod);
        let z = Complex::from_polar((self.log_mod - m).exp(), self.phase)
            + Complex::from_polar((o.log_mod - m).exp(), o.phase);
        if z.norm() <= T::epsilon() * lit(4.0) {
            return Self::zero();
        }
        let s = Self::from_complex(z);
        Self { log_mod: s.log_mod + m, phase: s.phase }
    }

    /// `self / o` as an ordinary complex number.
    pub fn ratio(&self, o: &Self) -> Complex<T> {
        self.div(o).to_complex()
    }

    /// |self / exact - 1|.
    pub fn rel_err(&self, exact: &Self) -> T {
        if exact.is_zero() {
            return if self.is_zero() { T::zero() } else { T::infinity() };
        }
        (self.ratio(exact) - Complex::new(T::one(), T::zero())).norm()
    }

    /// Real value when the phase is 0 or pi within `tol`.
    pub fn to_signed_log(&self, tol: T) -> Result<SignedLogValue<T>> {
        if self.is_zero() {
            return Ok(SignedLogValue::zero());
        }
        if self.phase.abs() <= tol {
            Ok(SignedLogValue::new(Sign::Positive, self.log_mod))
        } else if (T::PI() - self.phase.abs()) <= tol {
            Ok(SignedLogValue::new(Sign::Negative, self.log_mod))
        } else {
            Err(Error::Domain(format!("phase {} is not real", self.phase)))
        }
    }

    /// log10 of the modulus.
    pub fn log10_mod(&self) -> T {
        self.log_mod / T::LN_10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polar_examples() {
        let one = lc_from_polar_of_log(0.0_f64, 0.0).unwrap();
        assert_eq!((one.log_mod, one.phase), (0.0, 0.0));
        let w = lc_from_polar_of_log(0.0_f64, 3.0 * PI).unwrap();
        assert!((w.phase - PI).abs() < 1e-15);
        let h = lc_from_polar_of_log(2f64.ln(), PI / 2.0).unwrap();
        assert_eq!(h.phase, PI / 2.0);
        assert!(lc_from_polar_of_log(f64::NAN, 0.0).is_err());
        assert!(lc_from_polar_of_log(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn phase_ties_go_up() {
        assert_eq!(normalize_phase(-PI), PI);
        assert_eq!(normalize_phase(PI), PI);
    }

    #[test]
    fn real_conversion() {
        let v = LogComplex::from_real(-4.0_f64);
        let s = v.to_signed_log(1e-12).unwrap();
        assert_eq!(s.sign(), Sign::Negative);
        assert!(LogComplex::from_complex(num_complex::Complex64::new(1.0, 1.0)).to_signed_log(1e-12).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = LogComplex::from_complex(num_complex::Complex64::new(3.0, 4.0));
        let b = LogComplex::from_complex(num_complex::Complex64::new(-1.0, 2.0));
        let s = a.add(&b).to_complex();
        assert!((s.re - 2.0).abs() < 1e-14 && (s.im - 6.0).abs() < 1e-14);
        let p = a.mul(&b).to_complex();
        assert!((p.re + 11.0).abs() < 1e-13 && (p.im - 2.0).abs() < 1e-13);
        assert!(a.add(&a.neg()).is_zero());
        assert!(a.mul(&LogComplex::zero()).is_zero());
    }
}
