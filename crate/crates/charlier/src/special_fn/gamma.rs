use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics_core::{lit, LogComplex, Real};

/// Real part from which the Stirling series is used directly.
pub const SHIFT_THRESHOLD: f64 = 10.0;

/// B_{2k} / (2k (2k-1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

pub fn is_pole<T: Real>(z: Complex<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re.fract() == T::zero()
}

fn stirling<T: Real>(z: Complex<T>) -> Complex<T> {
    let half: T = lit(0.5);
    let ln2pi: T = lit((2.0 * std::f64::consts::PI).ln());
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut pow = zi;
    let mut series = Complex::new(T::zero(), T::zero());
    for c in STIRLING {
        series = series + pow * lit::<T>(c);
        pow = pow * zi2;
    }
    (z - half) * z.ln() - z + ln2pi * half + series
}

/// log sin(pi z), reduced so the integer part of Re z is removed exactly.
///
/// Only defined modulo 2 pi i.
pub fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.round();
    let r = Complex::new(z.re - m, z.im);
    let w = r * T::PI();
    let parity = if crate::numerics_core::is_odd(m) { T::PI() } else { T::zero() };
    let i = Complex::new(T::zero(), T::one());
    let big: T = lit(15.0);
    let body = if w.im.abs() < big {
        w.sin().ln()
    } else if w.im > T::zero() {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        -i * w + Complex::new(lit::<T>(0.5).ln(), T::FRAC_PI_2()) + (Complex::new(T::one(), T::zero()) - (i * w * lit::<T>(2.0)).exp()).ln()
    } else {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        i * w + Complex::new(lit::<T>(0.5).ln(), -T::FRAC_PI_2()) + (Complex::new(T::one(), T::zero()) - (-i * w * lit::<T>(2.0)).exp()).ln()
    };
    body + Complex::new(T::zero(), parity)
}

/// log Gamma(z), continuous in the right half plane.
///
/// For Re z < 0 the reflection formula is used and the imaginary part is only
/// meaningful modulo 2 pi.
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{}", crate::numerics_core::to_f64(z.re))));
    }
    if z.re < T::zero() {
        let one = Complex::new(T::one(), T::zero());
        let refl = ln_gamma(one - z)?;
        return Ok(Complex::new(T::PI().ln(), T::zero()) - ln_sin_pi(z) - refl);
    }
    let thr: T = lit(SHIFT_THRESHOLD);
    if z.re >= thr {
        return Ok(stirling(z));
    }
    let m = (thr - z.re).ceil().to_usize().unwrap_or(0);
    let mut modulus = T::one();
    let mut arg = T::zero();
    for k in 0..m {
        let w = z + lit::<T>(k as f64);
        modulus = modulus * w.norm();
        arg = arg + w.arg();
    }
    Ok(stirling(z + lit::<T>(m as f64)) - Complex::new(modulus.ln(), arg))
}

/// Gamma(z) in log-polar form.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<LogComplex<T>> {
    ln_gamma(z).map(LogComplex::exp_of)
}

/// Gamma(num) / Gamma(den) with explicit pole bookkeeping.
///
/// A pole in the denominator alone gives exact zero, a pole in the numerator
/// alone gives `LogComplex::infinity()`, and two poles are indeterminate.
pub fn log_gamma_ratio<T: Real>(num: Complex<T>, den: Complex<T>) -> Result<LogComplex<T>> {
    match (is_pole(num), is_pole(den)) {
        (true, true) => Err(Error::Indeterminate),
        (false, true) => Ok(LogComplex::zero()),
        (true, false) => Ok(LogComplex::infinity()),
        (false, false) => Ok(LogComplex::exp_of(ln_gamma(num)? - ln_gamma(den)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integer_and_half_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!((ln_gamma(c(6.0, 0.0)).unwrap().re - 120f64.ln()).abs() < 1e-14);
        let g = ln_gamma(c(0.5, 0.0)).unwrap().re;
        assert!((g - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14, "{g:e}");
        let g = log_gamma(c(-0.5, 0.0)).unwrap();
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!((g.log_mod - (2.0 * std::f64::consts::PI.sqrt()).ln()).abs() < 1e-14);
        assert!((g.phase.abs() - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn poles() {
        assert!(matches!(ln_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(ln_gamma(c(-7.0, 0.0)), Err(Error::Pole(_))));
        assert!(log_gamma_ratio(c(2.0, 0.0), c(0.0, 0.0)).unwrap().is_zero());
        assert!(log_gamma_ratio(c(-2.0, 0.0), c(1.5, 0.0)).unwrap().log_mod.is_infinite());
        assert_eq!(log_gamma_ratio(c(-2.0, 0.0), c(-1.0, 0.0)), Err(Error::Indeterminate));
    }

    #[test]
    fn ratio_examples() {
        let r = log_gamma_ratio(c(5.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((r.log_mod - 12f64.ln()).abs() < 1e-14 && r.phase.abs() < 1e-14);
        // Gamma(n - x) / Gamma(-x) at x = 2.5, n = 10 against the direct product.
        let (n, x) = (10, 2.5);
        let prod: f64 = (1..=n).map(|k| (k - 1) as f64 - x).product();
        let r = log_gamma_ratio(c(n as f64 - x, 0.0), c(-x, 0.0)).unwrap();
        let v = r.to_complex();
        assert!((v.re / prod - 1.0).abs() < 1e-13, "{v} vs {prod}");
        assert!(v.im.abs() < 1e-12 * prod.abs());
    }

    #[test]
    fn large_real_arguments() {
        // log Gamma(20001) = log(20000!) against a direct sum.
        let direct: f64 = (1..=20000).map(|k| (k as f64).ln()).sum();
        let g = ln_gamma(c(20001.0, 0.0)).unwrap().re;
        assert!((g - direct).abs() < 1e-8 * direct);
    }

    #[test]
    fn single_precision_instantiation() {
        let g = ln_gamma(num_complex::Complex32::new(6.0, 0.0)).unwrap();
        assert!((g.re - 120f32.ln()).abs() < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn recurrence(r in 0.5f64..50.0, th in -3.1f64..3.1) {
            let z = Complex64::from_polar(r, th);
            prop_assume!((z - z.re.round()).norm() > 1e-3);
            let q = (ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap()).exp();
            prop_assert!((q / z - 1.0).norm() < 1e-12, "z = {z}, q = {q}");
        }

        #[test]
        fn reflection(re in -20.0f64..20.0, im in 0.05f64..8.0, flip in any::<bool>()) {
            let z = c(re, if flip { -im } else { im });
            let lhs = ln_gamma(z).unwrap() + ln_gamma(1.0 - z).unwrap();
            let rhs = c(std::f64::consts::PI.ln(), 0.0) - ln_sin_pi(z);
            let d = lhs - rhs;
            let turns = d.im / (2.0 * std::f64::consts::PI);
            prop_assert!(d.re.abs() < 1e-11 * (1.0 + lhs.re.abs()));
            prop_assert!((turns - turns.round()).abs() < 1e-11 * (1.0 + lhs.im.abs()));
        }
    }
}
