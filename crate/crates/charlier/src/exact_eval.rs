//! Reference values of C_n(x) from the three-term recurrence and the explicit sum.
//!
//! Both run in extended precision with doubling until two levels agree, so the
//! result is trustworthy even where the recurrence cancels heavily.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics_core::{lit, rel_diff, to_f64, LogComplex, MpComplex, MpFloat, PrecisionPolicy, Real};

/// Parameter a of the Poisson weight a^k/k!, plus the oracle precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharlierParams<T: Real> {
    a: T,
    precision: PrecisionPolicy,
    sum_cap: usize,
}

impl<T: Real> CharlierParams<T> {
    pub const DEFAULT_SUM_CAP: usize = 200;

    pub fn new(a: T) -> Result<Self> {
        Self::with_precision(a, PrecisionPolicy::default())
    }

    pub fn with_precision(a: T, precision: PrecisionPolicy) -> Result<Self> {
        if !(a > T::zero() && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("a must be positive and finite, got {a}")));
        }
        Ok(Self { a, precision, sum_cap: Self::DEFAULT_SUM_CAP })
    }

    pub fn with_sum_cap(mut self, cap: usize) -> Self {
        self.sum_cap = cap;
        self
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn sqrt_a(&self) -> T {
        self.a.sqrt()
    }

    pub fn precision(&self) -> &PrecisionPolicy {
        &self.precision
    }

    pub fn sum_cap(&self) -> usize {
        self.sum_cap
    }

    fn a_mp(&self, bits: usize) -> MpFloat {
        MpFloat::from_f64(to_f64(self.a), bits)
    }
}

/// A degree and an evaluation point; the scaled variables are derived on demand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint<T: Real> {
    pub n: usize,
    pub x: Complex<T>,
}

impl<T: Real> EvalPoint<T> {
    pub fn new(n: usize, x: Complex<T>) -> Self {
        Self { n, x }
    }

    pub fn from_y(n: usize, y: Complex<T>) -> Self {
        Self { n, x: y * lit::<T>(n as f64) }
    }

    /// x = n (1 + t / sqrt n)
    pub fn from_t(n: usize, t: Complex<T>) -> Self {
        let nf: T = lit(n as f64);
        Self { n, x: (t / nf.sqrt() + T::one()) * nf }
    }

    fn nf(&self) -> Result<T> {
        if self.n == 0 {
            return Err(Error::Domain("scaled variables need n >= 1".into()));
        }
        Ok(lit(self.n as f64))
    }

    pub fn y(&self) -> Result<Complex<T>> {
        Ok(self.x / self.nf()?)
    }

    pub fn t(&self) -> Result<Complex<T>> {
        let nf = self.nf()?;
        Ok((self.x / nf - T::one()) * nf.sqrt())
    }
}

/// Arithmetic the recurrence needs, over real or complex extended precision.
trait RecField: Clone {
    fn shift(&self, c: &MpFloat) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scale(&self, c: &MpFloat) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn unit(bits: usize) -> Self;
    fn nought(bits: usize) -> Self;
}

impl RecField for MpFloat {
    fn shift(&self, c: &MpFloat) -> Self {
        self - c
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &MpFloat) -> Self {
        self * c
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn unit(bits: usize) -> Self {
        MpFloat::one(bits)
    }
    fn nought(bits: usize) -> Self {
        MpFloat::zero(bits)
    }
}

impl RecField for MpComplex {
    fn shift(&self, c: &MpFloat) -> Self {
        MpComplex::new(&self.re - c, self.im.clone())
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &MpFloat) -> Self {
        MpComplex::scale(self, c)
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn unit(bits: usize) -> Self {
        MpComplex::real(MpFloat::one(bits))
    }
    fn nought(bits: usize) -> Self {
        MpComplex::real(MpFloat::zero(bits))
    }
}

/// C_{k+1} = (x - k - a) C_k - a k C_{k-1}, at a fixed precision.
fn forward<F: RecField>(n: usize, x: &F, a: &MpFloat, bits: usize) -> F {
    let mut prev = F::nought(bits);
    let mut cur = F::unit(bits);
    for k in 0..n {
        let kf = MpFloat::from_u64(k as u64, bits);
        let coef = x.shift(&(&kf + a));
        let next = coef.times(&cur).minus(&prev.scale(&(a * &kf)));
        prev = cur;
        cur = next;
    }
    cur
}

fn real_rel_diff(a: &MpFloat, b: &MpFloat) -> f64 {
    rel_diff(&MpComplex::real(a.clone()), &MpComplex::real(b.clone()))
}

/// C_n at a real extended-precision point, escalating until stable.
pub fn eval_recurrence_real_mp<T: Real>(params: &CharlierParams<T>, n: usize, x: &MpFloat) -> Result<MpFloat> {
    let (v, _) = params.precision.escalate(
        |bits| {
            let xb = x.clone() * MpFloat::one(bits);
            forward(n, &xb, &params.a_mp(bits), bits)
        },
        real_rel_diff,
    )?;
    Ok(v)
}

/// Sign of C_n(x) from one pass at the working precision; 0 only for an exact zero.
pub(crate) fn sign_real<T: Real>(params: &CharlierParams<T>, n: usize, x: f64) -> i8 {
    let bits = params.precision.working_bits();
    forward(n, &MpFloat::from_f64(x, bits), &params.a_mp(bits), bits).signum()
}

/// C_n(x) and C_n'(x), escalating until both are stable.
pub(crate) fn value_and_derivative_mp<T: Real>(params: &CharlierParams<T>, n: usize, x: f64) -> Result<(MpFloat, MpFloat)> {
    let (v, _) = params.precision.escalate(
        |bits| {
            let xb = MpFloat::from_f64(x, bits);
            let a = params.a_mp(bits);
            let (mut c_prev, mut c) = (MpFloat::zero(bits), MpFloat::one(bits));
            let (mut d_prev, mut d) = (MpFloat::zero(bits), MpFloat::zero(bits));
            for k in 0..n {
                let kf = MpFloat::from_u64(k as u64, bits);
                let coef = &xb - &(&kf + &a);
                let ak = &a * &kf;
                let d_next = &(&c + &(&coef * &d)) - &(&ak * &d_prev);
                let c_next = &(&coef * &c) - &(&ak * &c_prev);
                d_prev = std::mem::replace(&mut d, d_next);
                c_prev = std::mem::replace(&mut c, c_next);
            }
            (c, d)
        },
        |p, q| real_rel_diff(&p.0, &q.0).max(real_rel_diff(&p.1, &q.1)),
    )?;
    Ok(v)
}

/// C_n at a complex extended-precision point, escalating until stable.
pub fn eval_recurrence_mp<T: Real>(params: &CharlierParams<T>, n: usize, x: &MpComplex) -> Result<MpComplex> {
    if x.im.is_zero() {
        return eval_recurrence_real_mp(params, n, &x.re).map(MpComplex::real);
    }
    let (v, _) = params.precision.escalate(
        |bits| {
            let one = MpFloat::one(bits);
            let xb = MpComplex::new(&x.re * &one, &x.im * &one);
            forward(n, &xb, &params.a_mp(bits), bits)
        },
        rel_diff,
    )?;
    Ok(v)
}

pub(crate) fn mp_to_log_complex<T: Real>(v: &MpComplex) -> LogComplex<T> {
    let (l, ph) = v.log_polar_f64();
    if l == f64::NEG_INFINITY {
        return LogComplex::zero();
    }
    LogComplex { log_mod: lit(l), phase: lit(ph) }
}

fn point_mp<T: Real>(x: Complex<T>, bits: usize) -> MpComplex {
    MpComplex::from_f64(to_f64(x.re), to_f64(x.im), bits)
}

/// Monic C_n(x) by forward recurrence.
pub fn eval_recurrence<T: Real>(params: &CharlierParams<T>, n: usize, x: Complex<T>) -> Result<LogComplex<T>> {
    let v = eval_recurrence_mp(params, n, &point_mp(x, params.precision.working_bits()))?;
    Ok(mp_to_log_complex(&v))
}

fn explicit_sum_at<F: RecField>(n: usize, x: &F, a: &MpFloat, bits: usize) -> F {
    // k-th term binom(n,k) (x)_k (-a)^{n-k}, built from k = 0 upward.
    let neg_a = -a;
    let mut falling = F::unit(bits);
    let mut binom = MpFloat::one(bits);
    let mut sum = F::nought(bits);
    for k in 0..=n {
        let term = falling.scale(&(&binom * &neg_a.powi(n - k)));
        sum = sum.plus(&term);
        if k < n {
            let kf = MpFloat::from_u64(k as u64, bits);
            falling = falling.times(&x.shift(&kf));
            binom = &(&binom * &MpFloat::from_u64((n - k) as u64, bits)) / &MpFloat::from_u64(k as u64 + 1, bits);
        }
    }
    sum
}

/// C_n at an extended-precision point from the explicit finite sum.
pub fn eval_explicit_sum_mp<T: Real>(params: &CharlierParams<T>, n: usize, x: &MpComplex) -> Result<MpComplex> {
    if n > params.sum_cap {
        return Err(Error::SumCap { n, cap: params.sum_cap });
    }
    let (v, _) = params.precision.escalate(
        |bits| {
            let one = MpFloat::one(bits);
            let xb = MpComplex::new(&x.re * &one, &x.im * &one);
            explicit_sum_at(n, &xb, &params.a_mp(bits), bits)
        },
        rel_diff,
    )?;
    Ok(v)
}

/// Monic C_n(x) from the explicit sum over falling factorials.
pub fn eval_explicit_sum<T: Real>(params: &CharlierParams<T>, n: usize, x: Complex<T>) -> Result<LogComplex<T>> {
    let v = eval_explicit_sum_mp(params, n, &point_mp(x, params.precision.working_bits()))?;
    Ok(mp_to_log_complex(&v))
}

/// Relative deviation of sum_k C_n(k) C_m(k) a^k/k! from e^a a^n n! delta_{nm}.
pub fn orthogonality_check<T: Real>(params: &CharlierParams<T>, n: usize, m: usize, k_max: usize) -> Result<f64> {
    let bits = params.precision.working_bits();
    let a = params.a_mp(bits);
    let term = |k: usize, w: &MpFloat| -> MpFloat {
        let kx = MpFloat::from_u64(k as u64, bits);
        let cn = forward(n, &kx, &a, bits);
        let cm = forward(m, &kx, &a, bits);
        &(&cn * &cm) * w
    };
    let mut weight = MpFloat::one(bits);
    let mut sum = MpFloat::zero(bits);
    for k in 0..=k_max {
        sum = &sum + &term(k, &weight);
        weight = &(&weight * &a) / &MpFloat::from_u64(k as u64 + 1, bits);
    }
    let scale = &(&a.exp() * &a.powi(n)) * &(1..=n).fold(MpFloat::one(bits), |f, j| &f * &MpFloat::from_u64(j as u64, bits));
    let log_scale = scale.ln_abs_f64();

    // Tail beyond k_max, summed until its terms stop mattering.
    let limit = (1e-30f64).ln();
    let mut tail = MpFloat::zero(bits);
    let mut k = k_max + 1;
    let mut suggested = None;
    loop {
        let t = term(k, &weight);
        let lt = t.ln_abs_f64();
        tail = &tail + &t;
        if lt - log_scale < limit + (-40.0) && k as f64 > 2.0 * to_f64(params.a) + (n + m) as f64 {
            break;
        }
        if suggested.is_none() && lt - log_scale < limit - 10.0 && k as f64 > to_f64(params.a) + (n + m) as f64 {
            suggested = Some(k);
        }
        weight = &(&weight * &a) / &MpFloat::from_u64(k as u64 + 1, bits);
        k += 1;
    }
    if tail.ln_abs_f64() - log_scale > limit {
        return Err(Error::TailInsufficient { suggested: suggested.unwrap_or(k).max(k_max + 1) });
    }
    let target = if n == m { scale.clone() } else { MpFloat::zero(bits) };
    let dev = &sum - &target;
    Ok((dev.ln_abs_f64() - log_scale).exp())
}
