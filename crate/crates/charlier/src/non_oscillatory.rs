//! Large-n forms away from the turning points: the ratio ladder w_k = C_k / C_{k-1},
//! the outer closed form, the Gamma-ratio form near the origin and the
//! oscillatory form inside (0, 1).

use num_complex::Complex;

use crate::approx::{ApproxResult, FormulaTag};
use crate::error::{Error, Result};
use crate::exact_eval::CharlierParams;
use crate::numerics_core::{dist_to_unit_segment, lit, sin_pi, to_f64, LogComplex, MpComplex, MpFloat, Real, Sign, SignedLogValue};
use crate::special_fn::log_gamma_ratio;

/// Constants M0, M1, N bounding the ladder corrections for n > N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderBounds<T> {
    pub r: T,
    pub m0: T,
    pub m1: T,
    pub n_min: T,
}

impl<T: Real> LadderBounds<T> {
    /// Bounds for points keeping distance r > 0 from [0, 1].
    pub fn new(a: T, r: T) -> Option<Self> {
        if !(r > T::zero()) {
            return None;
        }
        let three: T = lit(3.0);
        let two: T = lit(2.0);
        let m0 = (T::one() - a).abs() / r + three * a / (r * r) + a / (r * r * r);
        let m1 = a * (T::one() + r + two * r * m0) / (r * r * r);
        Some(Self { r, m0, m1, n_min: two * m0 })
    }
}

/// The ratios w_k = C_k / C_{k-1} for k = 1..n, with their corrections.
///
/// `w[k-1]` holds w_k. `delta[k-1]` is w_k/(x-k) - 1, and `eps[k-1]` is what is
/// left of it after removing (1-a)/(x-k) - a k/(x-k)^2.
#[derive(Clone, Debug, PartialEq)]
pub struct WkLadder<T: Real> {
    pub w: Vec<Complex<T>>,
    pub delta: Vec<Complex<T>>,
    pub eps: Vec<Complex<T>>,
    pub bounds: Option<LadderBounds<T>>,
    product: LogComplex<T>,
}

impl<T: Real> WkLadder<T> {
    /// The product of all w_k, which is C_n(x).
    pub fn product(&self) -> LogComplex<T> {
        self.product
    }

    /// Whether every delta_k and eps_k stays within its proven bound.
    pub fn within_bounds(&self) -> Option<bool> {
        let b = self.bounds?;
        let n: T = lit(self.w.len() as f64);
        let ok_d = self.delta.iter().all(|d| d.norm() <= b.m0 / n);
        let ok_e = self.eps.iter().all(|e| e.norm() <= b.m1 / (n * n));
        Some(ok_d && ok_e)
    }
}

/// Builds w_1..w_n from w_{k+1} = x - (k + a) - a k / w_k in extended precision.
pub fn wk_ladder<T: Real>(params: &CharlierParams<T>, n: usize, x: Complex<T>) -> Result<WkLadder<T>> {
    let bits = params.precision().working_bits();
    let a = MpFloat::from_f64(to_f64(params.a()), bits);
    let xm = MpComplex::from_f64(to_f64(x.re), to_f64(x.im), bits);
    let mut w = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    let mut eps = Vec::with_capacity(n);
    let mut prod = MpComplex::real(MpFloat::one(bits));
    let mut cur = MpComplex::new(&xm.re - &a, xm.im.clone());
    let af = to_f64(params.a());
    for k in 1..=n {
        if cur.is_zero() {
            return Err(Error::LadderBreakdown { k });
        }
        prod = &prod * &cur;
        let wk = Complex::new(cur.re.to_f64(), cur.im.to_f64());
        let xk = Complex::new(to_f64(x.re) - k as f64, to_f64(x.im));
        let d = wk / xk - 1.0;
        let e = d - (1.0 - af) / xk + af * k as f64 / (xk * xk);
        w.push(Complex::new(lit(wk.re), lit(wk.im)));
        delta.push(Complex::new(lit(d.re), lit(d.im)));
        eps.push(Complex::new(lit(e.re), lit(e.im)));
        if k < n {
            let kf = MpFloat::from_u64(k as u64, bits);
            let ak = MpComplex::real(&a * &kf);
            let shifted = MpComplex::new(&(&xm.re - &kf) - &a, xm.im.clone());
            cur = &shifted - &(&ak / &cur);
        }
    }
    let (l, ph) = prod.log_polar_f64();
    let product = if l == f64::NEG_INFINITY { LogComplex::zero() } else { LogComplex { log_mod: lit(l), phase: lit(ph) } };
    let bounds = if n == 0 {
        None
    } else {
        LadderBounds::new(params.a(), dist_to_unit_segment(x / lit::<T>(n as f64)))
    };
    Ok(WkLadder { w, delta, eps, bounds, product })
}

fn on_unit_segment<T: Real>(y: Complex<T>) -> bool {
    y.im == T::zero() && y.re >= T::zero() && y.re <= T::one()
}

/// n^n sqrt(y/(y-1)) e^{-a/(y-1)} e^{n[y log(y/(y-1)) - 1]} (y-1)^n, off [0, 1].
pub fn outer_formula<T: Real>(params: &CharlierParams<T>, n: usize, y: Complex<T>) -> Result<ApproxResult<T>> {
    if on_unit_segment(y) {
        return Err(Error::Branch(format!("y = {} lies on the cut [0, 1]", to_f64(y.re))));
    }
    let nf: T = lit(n as f64);
    let half: T = lit(0.5);
    let ym1 = y - T::one();
    let ratio_ln = (y / ym1).ln();
    let l = Complex::new(if n == 0 { T::zero() } else { nf * nf.ln() }, T::zero()) + ratio_ln * half
        - ym1.inv() * params.a()
        + (y * ratio_ln - T::one()) * nf
        + ym1.ln() * nf;
    Ok(ApproxResult::new(LogComplex::exp_of(l), FormulaTag::Outer))
}

/// (-1)^n e^{a/(1-y)} Gamma(n - ny) / Gamma(-ny), valid for y away from 1.
///
/// For Re y >= 1/2 the equal form Gamma(x + 1) / Gamma(1 + x - n) is used, which
/// keeps the Gamma arguments off the negative real axis.
pub fn origin_gamma_formula<T: Real>(params: &CharlierParams<T>, n: usize, y: Complex<T>) -> Result<ApproxResult<T>> {
    let nf: T = lit(n as f64);
    let x = y * nf;
    let one = Complex::new(T::one(), T::zero());
    let prefactor = LogComplex::exp_of((one - y).inv() * params.a());
    let reflected = || log_gamma_ratio(x + T::one(), x + T::one() - nf);
    let ratio = if y.re >= lit(0.5) {
        reflected()
    } else {
        match log_gamma_ratio(Complex::new(nf, T::zero()) - x, -x) {
            Err(Error::Indeterminate) => reflected(),
            other => other.map(|r| if n % 2 == 1 { r.neg() } else { r }),
        }
    };
    let ratio = match ratio {
        Err(Error::Indeterminate) => LogComplex::zero(),
        other => other?,
    };
    Ok(ApproxResult::new(prefactor.mul(&ratio), FormulaTag::Origin))
}

/// Leading oscillatory form for real y in (0, 1).
pub fn interior_oscillatory_formula<T: Real>(params: &CharlierParams<T>, n: usize, y: T) -> Result<ApproxResult<T>> {
    if !(y > T::zero() && y < T::one()) {
        return Err(Error::Domain(format!("interior form needs y in (0, 1), got {y}")));
    }
    let nf: T = lit(n as f64);
    let s = -sin_pi(nf * y);
    if s == T::zero() {
        return Ok(ApproxResult::new(LogComplex::zero(), FormulaTag::Interior));
    }
    let one_m_y = T::one() - y;
    let half: T = lit(0.5);
    let two: T = lit(2.0);
    let log_abs = two.ln()
        + nf * nf.ln()
        + half * (y / one_m_y).ln()
        + params.a() / one_m_y
        + nf * (y * (y / one_m_y).ln() - T::one())
        + nf * one_m_y.ln()
        + s.abs().ln();
    let parity = if n % 2 == 1 { Sign::Negative } else { Sign::Positive };
    let sign = parity * if s > T::zero() { Sign::Positive } else { Sign::Negative };
    let v = SignedLogValue::new(sign, log_abs);
    Ok(ApproxResult::new(LogComplex::from_signed_log(&v), FormulaTag::Interior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_eval::eval_recurrence;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn params(a: f64) -> CharlierParams<f64> {
        CharlierParams::new(a).unwrap()
    }

    fn err_vs_oracle(p: &CharlierParams<f64>, n: usize, y: Complex64, v: &LogComplex<f64>) -> f64 {
        let exact = eval_recurrence(p, n, y * n as f64).unwrap();
        v.rel_err(&exact)
    }

    #[test]
    fn ladder_first_step_and_exactness() {
        let p = params(1.3);
        let x = Complex64::new(250.0, 40.0);
        let l = wk_ladder(&p, 100, x).unwrap();
        assert_eq!(l.w[0], x - 1.3);
        let exact = eval_recurrence(&p, 100, x).unwrap();
        assert!(l.product().rel_err(&exact) < 1e-13);
    }

    #[test]
    fn ladder_bounds_at_y2() {
        let p = params(1.0);
        let l = wk_ladder(&p, 100, Complex64::new(200.0, 0.0)).unwrap();
        let b = l.bounds.unwrap();
        assert!((b.r - 1.0).abs() < 1e-15);
        assert!(l.delta.iter().all(|d| d.norm() <= b.m0 / 100.0));
        assert_eq!(l.within_bounds(), Some(true));
    }

    #[test]
    fn ladder_breakdown() {
        // w_1 = x - a vanishes at x = a.
        let p = params(2.0);
        assert_eq!(wk_ladder(&p, 3, Complex64::new(2.0, 0.0)), Err(Error::LadderBreakdown { k: 1 }));
    }

    #[test]
    fn outer_real_and_accurate() {
        let p = params(1.0);
        let r = outer_formula(&p, 200, Complex64::new(2.0, 0.0)).unwrap();
        assert!(r.value.phase == 0.0 || r.value.phase.abs() == std::f64::consts::PI);
        let e = err_vs_oracle(&p, 200, Complex64::new(2.0, 0.0), &r.value);
        assert!(e * 200.0 < 1.0, "n err = {}", e * 200.0);
        assert!(matches!(outer_formula(&p, 10, Complex64::new(0.5, 0.0)), Err(Error::Branch(_))));
        assert!(matches!(outer_formula(&p, 10, Complex64::new(1.0, 0.0)), Err(Error::Branch(_))));
    }

    #[test]
    fn outer_error_halves_with_n() {
        let p = params(1.0);
        let y = Complex64::new(2.0, 0.0);
        let errs: Vec<f64> = [128, 256, 512]
            .iter()
            .map(|&n| err_vs_oracle(&p, n, y, &outer_formula(&p, n, y).unwrap().value))
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn origin_zero_at_small_integers() {
        let p = params(1.0);
        for x in [0.0, 1.0, 5.0] {
            let r = origin_gamma_formula(&p, 40, Complex64::new(x / 40.0, 0.0)).unwrap();
            assert!(r.value.is_zero(), "x = {x}");
        }
    }

    #[test]
    fn origin_accuracy_left_of_origin() {
        let p = params(1.0);
        let n = 300;
        let y = Complex64::new(-0.5, 0.0);
        let r = origin_gamma_formula(&p, n, y).unwrap();
        let e = err_vs_oracle(&p, n, y, &r.value);
        assert!(e * n as f64 <= 1.0, "n err = {}", e * n as f64);
    }

    #[test]
    fn origin_paths_agree() {
        let p = params(0.7);
        let n = 60;
        let y = Complex64::new(0.45, 0.02);
        let direct = {
            let nf = n as f64;
            let x = y * nf;
            let pre = LogComplex::exp_of((1.0 - y).inv() * 0.7);
            pre.mul(&log_gamma_ratio(nf - x, -x).unwrap())
        };
        let v = origin_gamma_formula(&p, n, Complex64::new(0.55, 0.02)).unwrap().value;
        let w = origin_gamma_formula(&p, n, y).unwrap().value;
        assert!(w.rel_err(&direct) < 1e-11);
        let reflected = {
            let x = Complex64::new(0.55, 0.02) * n as f64;
            let pre = LogComplex::exp_of((1.0 - Complex64::new(0.55, 0.02)).inv() * 0.7);
            let r = log_gamma_ratio(n as f64 - x, -x).unwrap();
            pre.mul(&r)
        };
        assert!(v.rel_err(&reflected) < 1e-10);
    }

    #[test]
    fn interior_domain_and_zero() {
        let p = params(1.0);
        assert!(matches!(interior_oscillatory_formula(&p, 10, 1.0), Err(Error::Domain(_))));
        assert!(matches!(interior_oscillatory_formula(&p, 10, 0.0), Err(Error::Domain(_))));
        assert!(interior_oscillatory_formula(&p, 10, 0.5).unwrap().value.is_zero());
    }

    #[test]
    fn interior_matches_origin_form() {
        let p = params(1.0);
        let n = 500;
        for x in [200.3, 200.5, 201.7] {
            let y = x / n as f64;
            let a = interior_oscillatory_formula(&p, n, y).unwrap().value;
            let b = origin_gamma_formula(&p, n, Complex64::new(y, 0.0)).unwrap().value;
            assert!(a.rel_err(&b) * (n as f64) < 10.0, "x = {x}: {}", a.rel_err(&b));
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let p = CharlierParams::new(1.0_f32).unwrap();
        let r = outer_formula(&p, 20, num_complex::Complex32::new(2.0, 0.0)).unwrap();
        let r64 = outer_formula(&params(1.0), 20, Complex64::new(2.0, 0.0)).unwrap();
        assert!((r.value.log_mod as f64 - r64.value.log_mod).abs() < 1e-4 * r64.value.log_mod);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn ladder_reproduces_oracle(n in 1usize..300, yr in -2.0f64..3.0, yi in -1.5f64..1.5, a in 0.2f64..3.0) {
            let y = Complex64::new(yr, yi);
            prop_assume!(dist_to_unit_segment(y) > 0.3);
            let p = params(a);
            let x = y * n as f64;
            let l = wk_ladder(&p, n, x).unwrap();
            let exact = eval_recurrence(&p, n, x).unwrap();
            prop_assert!(l.product().rel_err(&exact) < 1e-13);
            if let Some(b) = l.bounds {
                if n as f64 > b.n_min {
                    prop_assert_eq!(l.within_bounds(), Some(true));
                }
            }
        }
    }
}
