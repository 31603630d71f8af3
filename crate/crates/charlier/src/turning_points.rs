//! Airy-type forms at the turning points t = 2 sqrt(a) and t = -2 sqrt(a), x = n + sqrt(n) t.
//!
//! Both conformal maps are built from one a-independent series. With
//! t = 2 sqrt(a) (1 + v),
//!
//! ```text
//! (2/3) eta^{3/2} = 2 sqrt(a) * integral_0^v arccosh(1 + w) dw
//! eta = 2 a^{1/3} v S(v)^{2/3}
//! ```
//!
//! and the left map is the reflection eta~(t) = eta(-t), Phi~(t) = -Phi(-t).

use std::sync::LazyLock;

use num_complex::{Complex, Complex64};

use crate::approx::{ApproxResult, FormulaTag};
use crate::error::{Error, Result};
use crate::exact_eval::CharlierParams;
use crate::numerics_core::{cos_pi, lit, sin_pi, to_f64, LogComplex, Real, SignedLogValue};
use crate::special_fn::{airy_ai_complex, airy_bracket, airy_log, airy_rotated, ln_gamma, Rotation};

/// Below this distance from a turning point (in units of sqrt(a)) the maps use the series.
pub const SERIES_SWITCH_RADIUS: f64 = 0.25;
/// Largest |t + 2 sqrt a| / sqrt(a) accepted by [`airy_formula_left`].
pub const LEFT_VALIDITY_RADIUS: f64 = 0.75;
/// Smallest modulus ratio accepted by [`airy_formula_left_complex`].
pub const DOMINANCE_RATIO: f64 = 100.0;

const SERIES_TERMS: usize = 28;

// S(v) = 1 + sum_k c_k (3/2)/(k + 3/2) v^k, where arccosh(1 + w) = sqrt(2w) sum_k c_k w^k.
static S_COEFFS: LazyLock<[f64; SERIES_TERMS]> = LazyLock::new(|| {
    let mut d = [0.0; SERIES_TERMS];
    d[0] = 1.0;
    let mut central = 1.0;
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        central *= (2.0 * kf - 1.0) / (2.0 * kf);
        let ck = central / (2.0 * kf + 1.0) / 2f64.powi(k as i32);
        let ck = if k % 2 == 0 { ck } else { -ck };
        *dk = ck * 1.5 / (kf + 1.5);
    }
    d
});

/// eta, Phi and A0 of the right turning point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurningMapRight<T: Real> {
    pub eta: Complex<T>,
    pub phi: Complex<T>,
    pub a0: Complex<T>,
    pub t: Complex<T>,
}

/// eta~, Phi~ and A0~ of the left turning point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurningMapLeft<T: Real> {
    pub eta_tilde: Complex<T>,
    pub phi_tilde: Complex<T>,
    pub a0_tilde: Complex<T>,
    pub t: Complex<T>,
}

impl<T: Real> TurningMapRight<T> {
    fn conj(self) -> Self {
        Self { eta: self.eta.conj(), phi: self.phi.conj(), a0: self.a0.conj(), t: self.t.conj() }
    }
}

fn third<T: Real>() -> T {
    T::one() / lit::<T>(3.0)
}

fn series_right<T: Real>(a: T, t: Complex<T>) -> TurningMapRight<T> {
    let two: T = lit(2.0);
    let two_sqrt_a = a.sqrt() * two;
    let v = (t - two_sqrt_a) / two_sqrt_a;
    let s = S_COEFFS.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &d| acc * v + lit::<T>(d));
    let h = (s.ln() * (two * third::<T>())).exp();
    let a13 = a.powf(third());
    let one = Complex::new(T::one(), T::zero());
    let eta = v * h * (two * a13);
    let phi = -(v + one) * ((v + two) / two).sqrt() / h.sqrt() * a.powf(lit(5.0 / 6.0));
    let a0 = (h * (two * a13) / (v + two)).powf(lit(0.25));
    TurningMapRight { eta, phi, a0, t }
}

// Closed forms for Im t >= 0 off the band, including real t > 2 sqrt a.
fn direct_upper<T: Real>(a: T, t: Complex<T>) -> TurningMapRight<T> {
    let two_sqrt_a = a.sqrt() * lit::<T>(2.0);
    let s = (t - two_sqrt_a).sqrt() * (t + two_sqrt_a).sqrt();
    let g = (t * ((t + s) / two_sqrt_a).ln() - s) * lit::<T>(1.5);
    let mut arg = g.arg();
    if arg < -T::FRAC_PI_4() {
        arg = arg + T::PI() * lit::<T>(2.0);
    }
    let two_thirds = lit::<T>(2.0) * third::<T>();
    let ln_eta = Complex::new(g.norm().ln() * two_thirds, arg * two_thirds);
    let eta = ln_eta.exp();
    let sqrt_eta = (ln_eta * lit::<T>(0.5)).exp();
    let phi = -(t * s) / (sqrt_eta * lit::<T>(4.0));
    // log(t^2 - 4a) taken as 2 log s so that A0 continues analytically from the turning point.
    let ln_a0 = -(s.ln() * lit::<T>(2.0) - ln_eta - (a * lit::<T>(4.0)).ln()) * lit::<T>(0.25);
    TurningMapRight { eta, phi, a0: ln_a0.exp(), t }
}

// Real t strictly inside (-2 sqrt a, 2 sqrt a), t = 2 sqrt(a) cos(theta).
fn band_right<T: Real>(a: T, t: T) -> TurningMapRight<T> {
    let sqrt_a = a.sqrt();
    let theta = (t / (sqrt_a * lit::<T>(2.0))).acos();
    let (sin, cos) = theta.sin_cos();
    let m = sqrt_a * lit::<T>(3.0) * (sin - theta * cos);
    let neg_eta = m.powf(lit::<T>(2.0) * third::<T>());
    let phi = -a * sin * cos / neg_eta.sqrt();
    let a0 = (neg_eta / (sin * sin)).powf(lit(0.25));
    let re = |v: T| Complex::new(v, T::zero());
    TurningMapRight { eta: re(-neg_eta), phi: re(phi), a0: re(a0), t: re(t) }
}

fn direct_right<T: Real>(a: T, t: Complex<T>) -> Result<TurningMapRight<T>> {
    let two_sqrt_a = a.sqrt() * lit::<T>(2.0);
    if t.im == T::zero() {
        let t = Complex::new(t.re, T::zero());
        if t.re > two_sqrt_a {
            Ok(direct_upper(a, t))
        } else if t.re > -two_sqrt_a {
            Ok(band_right(a, t.re))
        } else {
            Err(Error::Branch(format!("t = {} lies on the cut (-inf, -2 sqrt a]", to_f64(t.re))))
        }
    } else if t.im > T::zero() {
        Ok(direct_upper(a, t))
    } else {
        Ok(direct_upper(a, t.conj()).conj())
    }
}

fn right_map<T: Real>(a: T, t: Complex<T>) -> Result<TurningMapRight<T>> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::Domain("t must be finite".into()));
    }
    let sqrt_a = a.sqrt();
    if (t - sqrt_a * lit::<T>(2.0)).norm() <= sqrt_a * lit::<T>(SERIES_SWITCH_RADIUS) {
        Ok(series_right(a, t))
    } else {
        direct_right(a, t)
    }
}

/// The right turning-point map, analytic off (-inf, -2 sqrt a].
pub fn map_right<T: Real>(params: &CharlierParams<T>, t: Complex<T>) -> Result<TurningMapRight<T>> {
    right_map(params.a(), t)
}

/// The left turning-point map, analytic off [2 sqrt a, inf).
pub fn map_left<T: Real>(params: &CharlierParams<T>, t: Complex<T>) -> Result<TurningMapLeft<T>> {
    let a = params.a();
    if t.im == T::zero() && t.re >= a.sqrt() * lit::<T>(2.0) {
        return Err(Error::Branch(format!("t = {} lies on the cut [2 sqrt a, inf)", to_f64(t.re))));
    }
    let m = right_map(a, -t)?;
    Ok(TurningMapLeft { eta_tilde: m.eta, phi_tilde: -m.phi, a0_tilde: m.a0, t })
}

/// ln C_{K,n} + (1/12) ln x + (1/2) ln Gamma(x + 1) - (x/2) ln a.
fn log_prefactor<T: Real>(a: T, n: usize, x: Complex<T>) -> Result<Complex<T>> {
    let nf: T = lit(n as f64);
    let half: T = lit(0.5);
    let ln_pi = T::PI().ln();
    let two_a = a * lit::<T>(2.0);
    let lg = ln_gamma(Complex::new((nf + T::one()) * half, T::zero()))?.re;
    let ln_c = half * nf * two_a.ln() + lg - half * ln_pi + lit::<T>(0.25) * (ln_pi - two_a.ln()) + half * a;
    Ok(Complex::new(ln_c, T::zero()) + x.ln() / lit::<T>(12.0) + ln_gamma(x + T::one())? * half
        - x * (half * a.ln()))
}

fn x_of_t<T: Real>(n: usize, t: Complex<T>) -> Complex<T> {
    let nf: T = lit(n as f64);
    t * nf.sqrt() + nf
}

// n^{1/3} eta + n^{-1/6} Phi
fn airy_argument<T: Real>(n: usize, eta: Complex<T>, phi: Complex<T>) -> Complex<T> {
    let nf: T = lit(n as f64);
    eta * nf.powf(third()) + phi / nf.powf(lit(1.0 / 6.0))
}

fn lift<T: Real>(v: LogComplex<f64>) -> LogComplex<T> {
    LogComplex { log_mod: lit(v.log_mod), phase: lit(v.phase) }
}

fn c64<T: Real>(z: Complex<T>) -> Complex64 {
    Complex64::new(to_f64(z.re), to_f64(z.im))
}

fn require_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("turning-point forms need n >= 1".into()));
    }
    Ok(())
}

/// Uniform Airy form at t = 2 sqrt a.
pub fn airy_formula_right<T: Real>(params: &CharlierParams<T>, n: usize, t: Complex<T>) -> Result<ApproxResult<T>> {
    require_degree(n)?;
    let m = map_right(params, t)?;
    let x = x_of_t(n, t);
    let pre = LogComplex::exp_of(log_prefactor(params.a(), n, x)? + m.a0.ln());
    let ai = lift(airy_ai_complex(c64(airy_argument(n, m.eta, m.phi))));
    Ok(ApproxResult::new(pre.mul(&ai), FormulaTag::TurnRight))
}

// (-1)^n C x^{1/12} A0~ / sqrt(w) and Theta for the left forms.
fn left_parts<T: Real>(params: &CharlierParams<T>, n: usize, t: Complex<T>) -> Result<(LogComplex<T>, Complex<T>)> {
    require_degree(n)?;
    let m = map_left(params, t)?;
    let mut pre = LogComplex::exp_of(log_prefactor(params.a(), n, x_of_t(n, t))? + m.a0_tilde.ln());
    if n % 2 == 1 {
        pre = pre.neg();
    }
    Ok((pre, airy_argument(n, m.eta_tilde, m.phi_tilde)))
}

fn check_left_radius<T: Real>(a: T, t: T) -> Result<()> {
    let radius = a.sqrt() * lit::<T>(LEFT_VALIDITY_RADIUS);
    if (t + a.sqrt() * lit::<T>(2.0)).abs() > radius {
        return Err(Error::OutOfNeighborhood { t: to_f64(t), radius: to_f64(radius) });
    }
    Ok(())
}

/// Real-line form at t = -2 sqrt a: a combination cos(x pi) Ai - sin(x pi) Bi.
pub fn airy_formula_left<T: Real>(params: &CharlierParams<T>, n: usize, t: T) -> Result<ApproxResult<T>> {
    check_left_radius(params.a(), t)?;
    let tc = Complex::new(t, T::zero());
    let (pre, theta) = left_parts(params, n, tc)?;
    let x = x_of_t(n, tc).re;
    let br = airy_bracket(to_f64(theta.re), to_f64(cos_pi(x)), to_f64(sin_pi(x)));
    let br = LogComplex::from_signed_log(&SignedLogValue::new(br.sign(), lit::<T>(*br.log_abs())));
    Ok(ApproxResult::new(pre.mul(&br), FormulaTag::TurnLeft))
}

/// The left real form with Ai dropped, -sin(x pi) Bi(Theta), for real t < -2 sqrt a.
///
/// No neighborhood restriction: this is the reduction that matches the interior form.
pub fn airy_formula_left_bi_dominant<T: Real>(params: &CharlierParams<T>, n: usize, t: T) -> Result<ApproxResult<T>> {
    let a = params.a();
    if !(t < -a.sqrt() * lit::<T>(2.0)) {
        return Err(Error::Domain(format!("Bi-dominant form needs t < -2 sqrt a, got {}", to_f64(t))));
    }
    let tc = Complex::new(t, T::zero());
    let (pre, theta) = left_parts(params, n, tc)?;
    let x = x_of_t(n, tc).re;
    let (_, bi) = airy_log(to_f64(theta.re));
    let s = SignedLogValue::from_f(-to_f64(sin_pi(x))).mul(&bi);
    let v = LogComplex::from_signed_log(&SignedLogValue::new(s.sign(), lit::<T>(*s.log_abs())));
    Ok(ApproxResult::new(pre.mul(&v), FormulaTag::TurnLeft))
}

// e^{-(x pi + pi/3) i} Ai(omega Theta) and its mirror e^{(x pi + pi/3) i} Ai(Theta / omega).
fn left_terms<T: Real>(n: usize, t: Complex<T>, theta: Complex<T>) -> (LogComplex<f64>, LogComplex<f64>) {
    let x = c64(x_of_t(n, t));
    let r = x.re - 2.0 * (x.re / 2.0).round();
    let pi = std::f64::consts::PI;
    let theta = c64(theta);
    let (ai_up, ai_down) = if theta.im == 0.0 {
        (airy_rotated(theta.re, Rotation::Omega).value, airy_rotated(theta.re, Rotation::OmegaSquared).value)
    } else {
        let omega = Complex64::from_polar(1.0, 2.0 * pi / 3.0);
        (airy_ai_complex(theta * omega), airy_ai_complex(theta * omega.conj()))
    };
    let up = LogComplex::exp_of(Complex64::new(pi * x.im, -pi * r - pi / 3.0)).mul(&ai_up);
    let down = LogComplex::exp_of(Complex64::new(-pi * x.im, pi * r + pi / 3.0)).mul(&ai_down);
    (up, down)
}

/// One-sided dominant form at t = -2 sqrt a for complex t.
pub fn airy_formula_left_complex<T: Real>(params: &CharlierParams<T>, n: usize, t: Complex<T>) -> Result<ApproxResult<T>> {
    let (pre, theta) = left_parts(params, n, t)?;
    let (up, down) = left_terms(n, t, theta);
    let (keep, drop) = if t.im > T::zero() { (up, down) } else { (down, up) };
    let ratio = (keep.log_mod - drop.log_mod).exp();
    if !(ratio >= DOMINANCE_RATIO) {
        return Err(Error::AmbiguousDominance { ratio });
    }
    Ok(ApproxResult::new(pre.mul(&lift(keep)), FormulaTag::TurnLeft))
}

/// Both terms of the left form; equals [`airy_formula_left`] on the real line.
pub fn airy_formula_left_two_term<T: Real>(params: &CharlierParams<T>, n: usize, t: Complex<T>) -> Result<ApproxResult<T>> {
    let (pre, theta) = left_parts(params, n, t)?;
    let (up, down) = left_terms(n, t, theta);
    Ok(ApproxResult::new(pre.mul(&lift(up.add(&down))), FormulaTag::TurnLeft))
}
