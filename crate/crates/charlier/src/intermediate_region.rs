//! Forms in the scaling x = n + sqrt(n) t, away from the turning points t = +-2 sqrt(a).

use num_complex::Complex;

use crate::approx::{ApproxResult, FormulaTag};
use crate::error::{Error, Result};
use crate::exact_eval::CharlierParams;
use crate::numerics_core::{lit, to_f64, LogComplex, Real, Sign, SignedLogValue};
use crate::special_fn::ln_gamma;

/// sqrt(t^2 - 4a) with its cut on [-2 sqrt a, 2 sqrt a], and log((t - sqrt(t^2 - 4a)) / (2 sqrt a)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntermediatePhase<T: Real> {
    pub t: Complex<T>,
    pub sqrt_disc: Complex<T>,
    pub log_factor: Complex<T>,
}

impl<T: Real> IntermediatePhase<T> {
    pub fn new(a: T, t: Complex<T>) -> Self {
        let two_sqrt_a = a.sqrt() * lit::<T>(2.0);
        let s = (t - two_sqrt_a).sqrt() * (t + two_sqrt_a).sqrt();
        // t - s = 4a / (t + s), which does not cancel when |t| is large.
        let diff = if (t + s).norm() >= (t - s).norm() { (t + s).inv() * (a * lit::<T>(4.0)) } else { t - s };
        Self { t, sqrt_disc: s, log_factor: (diff / two_sqrt_a).ln() }
    }

    /// t log((t - s)/(2 sqrt a)) + s, the coefficient of sqrt(n) in the exponent.
    pub fn exponent(&self) -> Complex<T> {
        self.t * self.log_factor + self.sqrt_disc
    }
}

/// log of C / sqrt(w(x)) with C = (2a)^{n/2} Gamma((n+1)/2)/Gamma(1/2) 2^{-3/4} pi^{-1/4} e^{a/2}.
fn log_prefactor<T: Real>(a: T, n: usize, x: Complex<T>) -> Result<Complex<T>> {
    let nf: T = lit(n as f64);
    let half: T = lit(0.5);
    let ln_pi = T::PI().ln();
    let ln2: T = T::LN_2();
    let lg_half_n = ln_gamma(Complex::new((nf + T::one()) * half, T::zero()))?.re;
    let ln_c = half * nf * (a * lit::<T>(2.0)).ln() + lg_half_n - half * ln_pi - lit::<T>(0.75) * ln2
        - lit::<T>(0.25) * ln_pi
        + half * a;
    let lg_x = ln_gamma(x + T::one())?;
    Ok(Complex::new(ln_c, T::zero()) + lg_x * half - x * (half * a.ln()))
}

fn x_of_t<T: Real>(n: usize, t: Complex<T>) -> Complex<T> {
    let nf: T = lit(n as f64);
    t * nf.sqrt() + nf
}

fn on_cut<T: Real>(a: T, t: Complex<T>) -> bool {
    t.im == T::zero() && t.re <= a.sqrt() * lit::<T>(2.0)
}

/// Leading form for t off (-inf, 2 sqrt a], x = n + sqrt(n) t.
pub fn intermediate_formula<T: Real>(params: &CharlierParams<T>, n: usize, t: Complex<T>) -> Result<ApproxResult<T>> {
    let a = params.a();
    if on_cut(a, t) {
        return Err(Error::Branch(format!("t = {} lies on the cut (-inf, 2 sqrt a]", to_f64(t.re))));
    }
    let ph = IntermediatePhase::new(a, t);
    let sqrt_n: T = lit::<T>(n as f64).sqrt();
    let quarter: T = lit(0.25);
    let l = log_prefactor(a, n, x_of_t(n, t))? + ph.exponent() * sqrt_n - ph.sqrt_disc.ln() * lit::<T>(0.5)
        + t * ph.sqrt_disc * quarter;
    Ok(ApproxResult::new(LogComplex::exp_of(l), FormulaTag::Intermediate))
}

/// The second formal solution relative to the first, log(P~_n / P_n) without constants.
///
/// Its real part is positive for real t > 2 sqrt a, where the first solution is recessive.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn second_solution_log_ratio<T: Real>(a: T, n: usize, t: Complex<T>) -> Complex<T> {
    let ph = IntermediatePhase::new(a, t);
    let sqrt_n: T = lit::<T>(n as f64).sqrt();
    -(ph.exponent() * sqrt_n * lit::<T>(2.0)) - t * ph.sqrt_disc * lit::<T>(0.5)
}

/// Cosine form inside the band, t = 2 sqrt(a) cos(theta).
pub fn band_cosine_formula<T: Real>(params: &CharlierParams<T>, n: usize, theta: T) -> Result<ApproxResult<T>> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::Domain(format!("band form needs theta in (0, pi), got {theta}")));
    }
    let a = params.a();
    let (sin, cos) = theta.sin_cos();
    let sqrt_a = a.sqrt();
    let t = sqrt_a * lit::<T>(2.0) * cos;
    let nf: T = lit(n as f64);
    let phase = lit::<T>(2.0) * (a * nf).sqrt() * (sin - theta * cos) + a * sin * cos - T::FRAC_PI_4();
    let c = phase.cos();
    if c.abs() <= T::epsilon() * lit::<T>(4.0) * phase.abs().max(T::one()) {
        return Ok(ApproxResult::new(LogComplex::zero(), FormulaTag::Band));
    }
    let pre = log_prefactor(a, n, Complex::new(x_of_t(n, Complex::new(t, T::zero())).re, T::zero()))?.re;
    // (4a - t^2)^{1/4} = (2 sqrt(a) sin theta)^{1/2}
    let log_abs = T::LN_2() + pre - lit::<T>(0.5) * (lit::<T>(2.0) * sqrt_a * sin).ln() + c.abs().ln();
    let sign = if c > T::zero() { Sign::Positive } else { Sign::Negative };
    Ok(ApproxResult::new(LogComplex::from_signed_log(&SignedLogValue::new(sign, log_abs)), FormulaTag::Band))
}
