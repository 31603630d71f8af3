use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::mp::MpFloat;
use super::scalar::{lit, Real};

/// Scalars that can carry the logarithm inside a [`SignedLogValue`].
pub trait LogScalar:
    Clone + PartialOrd + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn from_f64_like(&self, v: f64) -> Self;
    fn ln_abs(&self) -> Self;
    fn exp(&self) -> Self;
    fn abs(&self) -> Self;
    fn signum_i8(&self) -> i8;
    /// ln(1 + e^{-d}) for d >= 0.
    fn ln_1p_exp_neg(d: &Self) -> Self;
    /// ln(1 - e^{-d}) for d > 0.
    fn ln_1m_exp_neg(d: &Self) -> Self;
    /// 2^{1-p} for the carried precision p.
    fn epsilon_like(&self) -> Self;
}

impl<T: Real> LogScalar for T {
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn from_f64_like(&self, v: f64) -> Self {
        lit(v)
    }
    fn ln_abs(&self) -> Self {
        self.abs().ln()
    }
    fn exp(&self) -> Self {
        num_traits::Float::exp(*self)
    }
    fn abs(&self) -> Self {
        num_traits::Float::abs(*self)
    }
    fn signum_i8(&self) -> i8 {
        if *self > T::zero() {
            1
        } else if *self < T::zero() {
            -1
        } else {
            0
        }
    }
    fn ln_1p_exp_neg(d: &Self) -> Self {
        (-*d).exp().ln_1p()
    }
    fn ln_1m_exp_neg(d: &Self) -> Self {
        (-(-*d).exp_m1()).ln()
    }
    fn epsilon_like(&self) -> Self {
        T::epsilon() * lit(2.0)
    }
}

impl LogScalar for MpFloat {
    fn zero_like(&self) -> Self {
        MpFloat::zero(self.bits())
    }
    fn from_f64_like(&self, v: f64) -> Self {
        MpFloat::from_f64(v, self.bits())
    }
    fn ln_abs(&self) -> Self {
        // Guard bits keep exp(ln|v|) accurate to the precision of v itself.
        MpFloat::abs(self).ln_with_bits(self.bits() + 64)
    }
    fn exp(&self) -> Self {
        MpFloat::exp(self)
    }
    fn abs(&self) -> Self {
        MpFloat::abs(self)
    }
    fn signum_i8(&self) -> i8 {
        self.signum()
    }
    fn ln_1p_exp_neg(d: &Self) -> Self {
        (-d).exp().add_f64(1.0).ln()
    }
    fn ln_1m_exp_neg(d: &Self) -> Self {
        (-(-d).exp()).add_f64(1.0).ln()
    }
    fn epsilon_like(&self) -> Self {
        let two = MpFloat::from_f64(2.0, self.bits());
        MpFloat::one(self.bits()) / two.powi(self.bits() - 1)
    }
}

/// Sign of a [`SignedLogValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    pub fn from_i8(s: i8) -> Self {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * o.as_i8())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_i8(-self.as_i8())
    }
}

/// A real number held as `sign * exp(log_abs)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedLogValue<T: LogScalar> {
    sign: Sign,
    log_abs: T,
}

impl<T: LogScalar> SignedLogValue<T> {
    pub fn new(sign: Sign, log_abs: T) -> Self {
        if sign == Sign::Zero {
            let z = log_abs.zero_like();
            Self { sign, log_abs: z }
        } else {
            Self { sign, log_abs }
        }
    }

    pub fn zero_like(like: &T) -> Self {
        Self { sign: Sign::Zero, log_abs: like.zero_like() }
    }

    pub fn from_real(v: &T) -> Self {
        match v.signum_i8() {
            0 => Self::zero_like(v),
            s => Self::new(Sign::from_i8(s), v.ln_abs()),
        }
    }

    pub fn to_real(&self) -> T {
        let m = self.log_abs.exp();
        match self.sign {
            Sign::Zero => self.log_abs.zero_like(),
            Sign::Positive => m,
            Sign::Negative => -m,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn log_abs(&self) -> &T {
        &self.log_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.sign, self.log_abs.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.sign * o.sign, self.log_abs.clone() + o.log_abs.clone())
    }

    /// Division; dividing by zero yields zero sign, callers check `is_zero` first.
    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.sign * o.sign, self.log_abs.clone() - o.log_abs.clone())
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::new(Sign::Positive, self.log_abs.zero_like());
        }
        let sign = if k % 2 == 0 && self.sign != Sign::Zero { Sign::Positive } else { self.sign };
        Self::new(sign, self.log_abs.from_f64_like(k as f64) * self.log_abs.clone())
    }
}

impl<T: Real> SignedLogValue<T> {
    pub fn zero() -> Self {
        Self::zero_like(&T::zero())
    }

    pub fn from_f(v: T) -> Self {
        Self::from_real(&v)
    }
}

/// `x + y` via log-sum-exp anchored at the larger magnitude.
pub fn slv_add<T: LogScalar>(x: &SignedLogValue<T>, y: &SignedLogValue<T>) -> SignedLogValue<T> {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    let (big, small) = if x.log_abs >= y.log_abs { (x, y) } else { (y, x) };
    let d = big.log_abs.clone() - small.log_abs.clone();
    if big.sign == small.sign {
        return SignedLogValue::new(big.sign, big.log_abs.clone() + T::ln_1p_exp_neg(&d));
    }
    let one = d.from_f64_like(1.0);
    let scale = if big.log_abs.abs() > one { big.log_abs.abs() } else { one };
    if d <= d.epsilon_like() * scale {
        return SignedLogValue::zero_like(&d);
    }
    SignedLogValue::new(big.sign, big.log_abs.clone() + T::ln_1m_exp_neg(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integer_sum() {
        let s = slv_add(&SignedLogValue::from_f(2.0_f64), &SignedLogValue::from_f(3.0));
        assert_eq!(s.sign(), Sign::Positive);
        assert!((s.log_abs() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_cancellation() {
        let a = SignedLogValue::new(Sign::Positive, 12.5_f64);
        let b = SignedLogValue::new(Sign::Negative, 12.5_f64);
        let s = slv_add(&a, &b);
        assert_eq!(s.sign(), Sign::Zero);
        assert_eq!(*s.log_abs(), 0.0);
    }

    #[test]
    fn dominated_sum() {
        let a = SignedLogValue::new(Sign::Positive, 1000.0_f64);
        let b = SignedLogValue::new(Sign::Positive, 0.0_f64);
        let s = slv_add(&a, &b);
        assert_eq!(s.sign(), Sign::Positive);
        assert_eq!(*s.log_abs(), 1000.0);
    }

    #[test]
    fn log_space_products_do_not_overflow() {
        let a = SignedLogValue::new(Sign::Negative, 9.0e5_f64);
        let p = a.mul(&a).powi(3);
        assert_eq!(p.sign(), Sign::Positive);
        assert_eq!(*p.log_abs(), 5.4e6);
        assert_eq!(a.powi(3).sign(), Sign::Negative);
        assert!(a.div(&a).log_abs().abs() < 1e-300);
    }

    #[test]
    fn opposite_sign_partial_cancellation() {
        let s = slv_add(&SignedLogValue::from_f(5.0_f64), &SignedLogValue::from_f(-3.0));
        assert!((s.to_real() - 2.0).abs() < 1e-15);
        let s = slv_add(&SignedLogValue::from_f(-5.0_f64), &SignedLogValue::from_f(3.0));
        assert!((s.to_real() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn extended_precision_round_trip() {
        let v = MpFloat::parse("-1.234567890123456789012345678901234567890e-250", 256);
        let back = SignedLogValue::from_real(&v).to_real();
        let err = ((back - v.clone()) / v).abs().to_f64();
        assert!(err <= 2f64.powi(1 - 256), "{err:e}");
    }
}
