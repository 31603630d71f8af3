//! Extended-precision real and complex numbers on top of `astro-float`.
//!
//! Binary exponents are 32-bit, so magnitudes like n! for n in the tens of
//! thousands are represented directly without any log-space bookkeeping.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const RM: RoundingMode = RoundingMode::ToEven;
const LN2_HI: f64 = 6.931_471_803_691_238_164_9e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;
const TWO64: f64 = 18_446_744_073_709_551_616.0;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real number carried at a fixed binary precision.
#[derive(Clone)]
pub struct MpFloat {
    v: BigFloat,
    bits: usize,
}

impl MpFloat {
    pub fn from_f64(v: f64, bits: usize) -> Self {
        Self { v: BigFloat::from_f64(v, bits), bits }
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self { v: BigFloat::from_i64(v, bits), bits }
    }

    pub fn from_u64(v: u64, bits: usize) -> Self {
        Self { v: BigFloat::from_u64(v, bits), bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_u64(0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_u64(1, bits)
    }

    /// Parses a decimal literal.
    pub fn parse(s: &str, bits: usize) -> Self {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc));
        Self { v, bits }
    }

    pub fn pi(bits: usize) -> Self {
        let v = with_consts(|cc| cc.pi(bits, RM));
        Self { v, bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        let mut v = self.v.clone();
        if v.is_negative() {
            v = v.neg();
        }
        Self { v, bits: self.bits }
    }

    pub fn sqrt(&self) -> Self {
        Self { v: self.v.sqrt(self.bits, RM), bits: self.bits }
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.v.ln(self.bits, RM, cc));
        Self { v, bits: self.bits }
    }

    /// Natural log computed and stored at `bits` of precision.
    pub fn ln_with_bits(&self, bits: usize) -> Self {
        let v = with_consts(|cc| self.v.ln(bits, RM, cc));
        Self { v, bits }
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.v.exp(self.bits, RM, cc));
        Self { v, bits: self.bits }
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.bits, RM, cc));
        Self { v, bits: self.bits }
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.v.cos(self.bits, RM, cc));
        Self { v, bits: self.bits }
    }

    pub fn powi(&self, k: usize) -> Self {
        Self { v: self.v.powi(k, self.bits, RM), bits: self.bits }
    }

    pub fn mul_f64(&self, c: f64) -> Self {
        self * &Self::from_f64(c, self.bits)
    }

    pub fn add_f64(&self, c: f64) -> Self {
        self + &Self::from_f64(c, self.bits)
    }

    /// Top 128 bits of the significand as a fraction in [1/2, 1) and the binary exponent.
    fn frexp(&self) -> Option<(f64, i64)> {
        let (words, _, _, e, _) = self.v.as_raw_parts()?;
        let top = *words.last()?;
        if top == 0 {
            return None;
        }
        let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
        let frac = (top as f64 + next as f64 / TWO64) / TWO64;
        Some((frac, e as i64))
    }

    /// Natural log of |v| rounded to `f64`; `-inf` for zero.
    pub fn ln_abs_f64(&self) -> f64 {
        match self.frexp() {
            None if self.v.is_zero() => f64::NEG_INFINITY,
            None => f64::NAN,
            Some((frac, e)) => {
                let e = e as f64;
                frac.ln() + e * LN2_HI + e * LN2_LO
            }
        }
    }

    /// Nearest `f64`, saturating to infinity or flushing to zero outside its range.
    pub fn to_f64(&self) -> f64 {
        match self.frexp() {
            None if self.v.is_zero() => 0.0,
            None => f64::NAN,
            Some((frac, e)) => {
                let mag = if e > 1100 {
                    f64::INFINITY
                } else if e < -1100 {
                    0.0
                } else {
                    let half = (e / 2) as i32;
                    frac * 2f64.powi(half) * 2f64.powi(e as i32 - half)
                };
                if self.v.is_negative() {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn p2(&self, o: &Self) -> usize {
        self.bits.max(o.bits)
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpFloat({:e} @{}b)", self.to_f64(), self.bits)
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, o: &Self) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&MpFloat> for &MpFloat {
            type Output = MpFloat;
            fn $m(self, o: &MpFloat) -> MpFloat {
                let p = self.p2(o);
                MpFloat { v: self.v.$m(&o.v, p, RM), bits: p }
            }
        }
        impl $tr for MpFloat {
            type Output = MpFloat;
            fn $m(self, o: MpFloat) -> MpFloat {
                (&self).$m(&o)
            }
        }
        impl $tr<&MpFloat> for MpFloat {
            type Output = MpFloat;
            fn $m(self, o: &MpFloat) -> MpFloat {
                (&self).$m(o)
            }
        }
    };
}

mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat { v: self.v.neg(), bits: self.bits }
    }
}

impl Neg for &MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat { v: self.v.clone().neg(), bits: self.bits }
    }
}

/// A complex number with [`MpFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: MpFloat,
    pub im: MpFloat,
}

impl MpComplex {
    pub fn new(re: MpFloat, im: MpFloat) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        Self::new(MpFloat::from_f64(re, bits), MpFloat::from_f64(im, bits))
    }

    pub fn real(re: MpFloat) -> Self {
        let bits = re.bits();
        Self::new(re, MpFloat::zero(bits))
    }

    pub fn bits(&self) -> usize {
        self.re.bits().max(self.im.bits())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, c: &MpFloat) -> Self {
        Self::new(&self.re * c, &self.im * c)
    }

    pub fn norm_sqr(&self) -> MpFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> MpFloat {
        self.norm_sqr().sqrt()
    }

    /// Natural log of the modulus and the argument, both rounded to `f64`.
    pub fn log_polar_f64(&self) -> (f64, f64) {
        let lr = self.re.ln_abs_f64();
        let li = self.im.ln_abs_f64();
        let m = lr.max(li);
        if m == f64::NEG_INFINITY {
            return (f64::NEG_INFINITY, 0.0);
        }
        let xr = self.re.signum() as f64 * (lr - m).exp();
        let xi = self.im.signum() as f64 * (li - m).exp();
        (m + 0.5 * (xr * xr + xi * xi).ln(), xi.atan2(xr))
    }
}

macro_rules! mpc_addsub {
    ($tr:ident, $m:ident) => {
        impl $tr<&MpComplex> for &MpComplex {
            type Output = MpComplex;
            fn $m(self, o: &MpComplex) -> MpComplex {
                MpComplex::new((&self.re).$m(&o.re), (&self.im).$m(&o.im))
            }
        }
        impl $tr for MpComplex {
            type Output = MpComplex;
            fn $m(self, o: MpComplex) -> MpComplex {
                (&self).$m(&o)
            }
        }
    };
}

mpc_addsub!(Add, add);
mpc_addsub!(Sub, sub);

impl Mul<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn mul(self, o: &MpComplex) -> MpComplex {
        MpComplex::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Mul for MpComplex {
    type Output = MpComplex;
    fn mul(self, o: MpComplex) -> MpComplex {
        &self * &o
    }
}

impl Div<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn div(self, o: &MpComplex) -> MpComplex {
        let d = o.norm_sqr();
        let num = self * &o.conj();
        MpComplex::new(&num.re / &d, &num.im / &d)
    }
}

impl Div for MpComplex {
    type Output = MpComplex;
    fn div(self, o: MpComplex) -> MpComplex {
        &self / &o
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(-self.re, -self.im)
    }
}

/// |a - b| / max(|a|, |b|), zero when both vanish.
pub fn rel_diff(a: &MpComplex, b: &MpComplex) -> f64 {
    let (la, _) = a.log_polar_f64();
    let (lb, _) = b.log_polar_f64();
    let scale = la.max(lb);
    if scale == f64::NEG_INFINITY {
        return 0.0;
    }
    let (ld, _) = (a - b).log_polar_f64();
    (ld - scale).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_and_conversion_round_trip() {
        for v in [1.0, -3.5, 1e-300, 7.25e300, 0.1] {
            let m = MpFloat::from_f64(v, 128);
            assert_eq!(m.to_f64(), v);
            assert!((m.ln_abs_f64() - v.abs().ln()).abs() < 1e-15 * v.abs().ln().abs().max(1.0));
        }
        assert_eq!(MpFloat::zero(64).ln_abs_f64(), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_exponents_survive() {
        // 2^(2^20) is far outside f64 but an ordinary MpFloat.
        let two = MpFloat::from_f64(2.0, 128);
        let big = two.powi(1 << 20);
        let expected = (1u64 << 20) as f64 * std::f64::consts::LN_2;
        assert!((big.ln_abs_f64() - expected).abs() < 1e-9);
        assert_eq!(big.to_f64(), f64::INFINITY);
    }

    #[test]
    fn transcendental_accuracy() {
        let bits = 256;
        let x = MpFloat::parse("0.7", bits);
        let back = x.ln().exp();
        assert!(rel_diff(&MpComplex::real(back), &MpComplex::real(x)) < 1e-70);
        let s = MpFloat::pi(bits).mul_f64(0.5).sin();
        assert!((s.to_f64() - 1.0).abs() < 1e-16);
    }

    #[test]
    fn complex_polar() {
        let z = MpComplex::from_f64(3.0, 4.0, 128);
        let (l, ph) = z.log_polar_f64();
        assert!((l - 5f64.ln()).abs() < 1e-15);
        assert!((ph - 4f64.atan2(3.0)).abs() < 1e-15);
        let q = &z / &z;
        assert!(rel_diff(&q, &MpComplex::from_f64(1.0, 0.0, 128)) < 1e-35);
    }
}
