use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::numerics_core::{lit, slv_add, to_f64, LogComplex, MpComplex, MpFloat, Real, Sign, SignedLogValue};

/// |z| up to which the Maclaurin series is summed.
pub const SERIES_RADIUS: f64 = 9.0;
const SERIES_BITS: usize = 256;
const AI0: &str = "0.35502805388781723926006318600418317639797917419917724058332651030081004245012671295717";
const NEG_AI1: &str = "0.25881940379280679840518356018920396347909113835493458221000181385610277267679028065419";
const LN_2_SQRT_PI: f64 = 1.265_512_123_484_645_4;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Ai, Ai', Bi, Bi' at one real point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryPair<T> {
    pub ai: T,
    pub ai_prime: T,
    pub bi: T,
    pub bi_prime: T,
}

impl<T: Real> AiryPair<T> {
    pub fn wronskian(&self) -> T {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }

    fn cast(p: AiryPair<f64>) -> Self {
        AiryPair { ai: lit(p.ai), ai_prime: lit(p.ai_prime), bi: lit(p.bi), bi_prime: lit(p.bi_prime) }
    }
}

/// Ai, Bi and their derivatives at a real point.
pub fn airy_eval<T: Real>(z: T) -> AiryPair<T> {
    let z = to_f64(z);
    let p = if z.abs() <= SERIES_RADIUS { airy_series(z) } else { airy_asymptotic(z) };
    AiryPair::cast(p)
}

fn mp_constants(bits: usize) -> (MpFloat, MpFloat) {
    (MpFloat::parse(AI0, bits), MpFloat::parse(NEG_AI1, bits))
}

/// Maclaurin sums f, f', g, g' in extended precision.
fn maclaurin_real(z: f64) -> [MpFloat; 4] {
    let bits = SERIES_BITS;
    let zm = MpFloat::from_f64(z, bits);
    let z3 = &(&zm * &zm) * &zm;
    let mut t = MpFloat::one(bits);
    let mut u = &(&zm * &zm) / &MpFloat::from_u64(6, bits);
    let mut v = MpFloat::one(bits);
    let mut f = MpFloat::one(bits);
    let mut fp = &u * &MpFloat::from_u64(3, bits);
    let mut g = zm.clone();
    let mut gp = MpFloat::one(bits);
    let tiny = (-(bits as f64 + 16.0)) * std::f64::consts::LN_2;
    for k in 1..2000u64 {
        let d1 = MpFloat::from_u64((3 * k - 1) * (3 * k), bits);
        let d2 = MpFloat::from_u64((3 * k) * (3 * k + 1), bits);
        t = &(&t * &z3) / &d1;
        v = &(&v * &z3) / &d2;
        f = &f + &t;
        g = &g + &(&v * &zm);
        gp = &gp + &(&v * &MpFloat::from_u64(3 * k + 1, bits));
        if k >= 2 {
            let d3 = MpFloat::from_u64((3 * k - 1) * (3 * k), bits);
            u = &(&u * &z3) / &d3;
            fp = &fp + &(&u * &MpFloat::from_u64(3 * k, bits));
        }
        let scale = [&f, &g, &fp, &gp].iter().map(|x| x.ln_abs_f64()).fold(0.0, f64::max);
        let term = t.ln_abs_f64().max(v.ln_abs_f64());
        if k > 4 && term - scale < tiny {
            break;
        }
    }
    [f, fp, g, gp]
}

fn airy_series(z: f64) -> AiryPair<f64> {
    let [f, fp, g, gp] = maclaurin_real(z);
    let (c1, c2) = mp_constants(SERIES_BITS);
    let sqrt3 = MpFloat::from_u64(3, SERIES_BITS).sqrt();
    let ai = &(&c1 * &f) - &(&c2 * &g);
    let aip = &(&c1 * &fp) - &(&c2 * &gp);
    let bi = &sqrt3 * &(&(&c1 * &f) + &(&c2 * &g));
    let bip = &sqrt3 * &(&(&c1 * &fp) + &(&c2 * &gp));
    AiryPair { ai: ai.to_f64(), ai_prime: aip.to_f64(), bi: bi.to_f64(), bi_prime: bip.to_f64() }
}

/// u_k and v_k coefficients of the large-argument expansions.
fn uv_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Sum of c_k s^k truncated at the smallest term.
fn truncated_sum(c: &[f64], s: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for &ck in c {
        let term = ck * pow;
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = term.abs();
        pow *= s;
    }
    sum
}

fn alternating(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).collect()
}

/// Even and odd parts of sum (-1)^k c_{2k} s^{2k}, sum (-1)^k c_{2k+1} s^{2k+1}.
fn oscillatory_parts(c: &[f64], zeta: f64) -> (f64, f64) {
    let even: Vec<f64> = c.iter().step_by(2).enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).collect();
    let odd: Vec<f64> = c.iter().skip(1).step_by(2).enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).collect();
    let s2 = 1.0 / (zeta * zeta);
    (truncated_sum(&even, s2), truncated_sum(&odd, s2) / zeta)
}

fn airy_asymptotic(z: f64) -> AiryPair<f64> {
    let (u, v) = uv_coefficients(40);
    if z > 0.0 {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let q = z.powf(0.25);
        let s = 1.0 / zeta;
        let ea = (-zeta).exp();
        let eb = zeta.exp();
        let sqpi = PI.sqrt();
        AiryPair {
            ai: ea / (2.0 * sqpi * q) * truncated_sum(&alternating(&u), s),
            ai_prime: -q * ea / (2.0 * sqpi) * truncated_sum(&alternating(&v), s),
            bi: eb / (sqpi * q) * truncated_sum(&u, s),
            bi_prime: q * eb / sqpi * truncated_sum(&v, s),
        }
    } else {
        let x = -z;
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let q = x.powf(0.25);
        let (p, qq) = oscillatory_parts(&u, zeta);
        let (pv, qv) = oscillatory_parts(&v, zeta);
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        let sqpi = PI.sqrt();
        AiryPair {
            ai: (c * p + s * qq) / (sqpi * q),
            ai_prime: q / sqpi * (s * pv - c * qv),
            bi: (-s * p + c * qq) / (sqpi * q),
            bi_prime: q / sqpi * (c * pv + s * qv),
        }
    }
}

/// Ai and Bi in log-space; exact for arguments where they over/underflow.
pub fn airy_log(z: f64) -> (SignedLogValue<f64>, SignedLogValue<f64>) {
    if z > SERIES_RADIUS {
        let (u, _) = uv_coefficients(40);
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let s = 1.0 / zeta;
        let lq = 0.25 * z.ln();
        let ai = -zeta - LN_2_SQRT_PI - lq + truncated_sum(&alternating(&u), s).ln();
        let bi = zeta - LN_SQRT_PI - lq + truncated_sum(&u, s).ln();
        (SignedLogValue::new(Sign::Positive, ai), SignedLogValue::new(Sign::Positive, bi))
    } else {
        let p = airy_eval(z);
        (SignedLogValue::from_f(p.ai), SignedLogValue::from_f(p.bi))
    }
}

/// Ai at a complex point, in log-polar form.
pub fn airy_ai_complex(z: Complex64) -> LogComplex<f64> {
    if z.im == 0.0 {
        return LogComplex::from_signed_log(&airy_log(z.re).0);
    }
    if z.norm() <= SERIES_RADIUS {
        return airy_ai_series_complex(z);
    }
    airy_ai_asymptotic_complex(z)
}

fn airy_ai_asymptotic_complex(z: Complex64) -> LogComplex<f64> {
    let (u, _) = uv_coefficients(40);
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        let zeta = z.powf(1.5) * (2.0 / 3.0);
        let sum = complex_truncated_sum(&alternating(&u), zeta.inv());
        let l = -zeta - LN_2_SQRT_PI - 0.25 * z.ln() + sum.ln();
        LogComplex::exp_of(l)
    } else {
        let w = -z;
        let zeta = w.powf(1.5) * (2.0 / 3.0);
        let even: Vec<f64> = u.iter().step_by(2).enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).collect();
        let odd: Vec<f64> = u.iter().skip(1).step_by(2).enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).collect();
        let s2 = (zeta * zeta).inv();
        let p = complex_truncated_sum(&even, s2);
        let q = complex_truncated_sum(&odd, s2) / zeta;
        // cos(phi) P + sin(phi) Q = (e^{i phi}(P - iQ) + e^{-i phi}(P + iQ)) / 2
        let i = Complex64::new(0.0, 1.0);
        let phi = zeta - FRAC_PI_4;
        let a = LogComplex::exp_of(i * phi).mul(&LogComplex::from_complex((p - i * q) * 0.5));
        let b = LogComplex::exp_of(-i * phi).mul(&LogComplex::from_complex((p + i * q) * 0.5));
        let pref = LogComplex::exp_of(Complex64::new(-LN_SQRT_PI, 0.0) - 0.25 * w.ln());
        pref.mul(&a.add(&b))
    }
}

fn complex_truncated_sum(c: &[f64], s: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for &ck in c {
        let term = pow * ck;
        if term.norm() > last {
            break;
        }
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        last = term.norm();
        pow *= s;
    }
    sum
}

fn airy_ai_series_complex(z: Complex64) -> LogComplex<f64> {
    let bits = SERIES_BITS;
    let zm = MpComplex::from_f64(z.re, z.im, bits);
    let z3 = &(&zm * &zm) * &zm;
    let mut t = MpComplex::from_f64(1.0, 0.0, bits);
    let mut s = zm.clone();
    let mut f = t.clone();
    let mut g = s.clone();
    let tiny = (-(bits as f64 + 16.0)) * std::f64::consts::LN_2;
    for k in 1..2000u64 {
        t = (&t * &z3).scale(&(MpFloat::one(bits) / MpFloat::from_u64((3 * k - 1) * (3 * k), bits)));
        s = (&s * &z3).scale(&(MpFloat::one(bits) / MpFloat::from_u64((3 * k) * (3 * k + 1), bits)));
        f = &f + &t;
        g = &g + &s;
        let scale = f.log_polar_f64().0.max(g.log_polar_f64().0).max(0.0);
        let term = t.log_polar_f64().0.max(s.log_polar_f64().0);
        if k > 4 && term - scale < tiny {
            break;
        }
    }
    let (c1, c2) = mp_constants(bits);
    let ai = &f.scale(&c1) - &g.scale(&c2);
    let (l, ph) = ai.log_polar_f64();
    if l == f64::NEG_INFINITY {
        return LogComplex::zero();
    }
    LogComplex::exp_of(Complex64::new(l, ph))
}

/// A rotation of the real axis by omega = e^{2 pi i/3} or its square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    Omega,
    OmegaSquared,
}

/// Ai(s * rotation) for real s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatedAiryValue {
    pub value: LogComplex<f64>,
    pub rotation: Rotation,
}

/// Ai(s omega^{+-1}) from real-axis values: e^{-+pi i/3} Ai(s e^{+-2 pi i/3}) = (Ai(s) -+ i Bi(s))/2.
pub fn airy_rotated(s: f64, rotation: Rotation) -> RotatedAiryValue {
    let (ai, bi) = airy_log(s);
    let half = SignedLogValue::new(Sign::Positive, -std::f64::consts::LN_2);
    let (im, turn) = match rotation {
        Rotation::Omega => (bi.neg(), PI / 3.0),
        Rotation::OmegaSquared => (bi, -PI / 3.0),
    };
    let comb = LogComplex::from_parts(&ai.mul(&half), &im.mul(&half));
    let value = comb.mul(&LogComplex::exp_of(Complex64::new(0.0, turn)));
    RotatedAiryValue { value, rotation }
}

/// cos(a) Ai(z) - sin(a) Bi(z) computed without overflow, with (cos a, sin a) given.
pub fn airy_bracket(z: f64, cos_a: f64, sin_a: f64) -> SignedLogValue<f64> {
    let (ai, bi) = airy_log(z);
    slv_add(&ai.mul(&SignedLogValue::from_f(cos_a)), &bi.mul(&SignedLogValue::from_f(-sin_a)))
}

/// The j-th negative zero of Ai, by bisection.
pub fn airy_ai_zero(j: usize) -> f64 {
    assert!(j >= 1, "Airy zeros are numbered from 1");
    let guess = -(3.0 * PI * (4.0 * j as f64 - 1.0) / 8.0).powf(2.0 / 3.0);
    let (mut lo, mut hi) = (guess - 0.3, guess + 0.3);
    let mut flo = airy_eval(lo).ai;
    while (hi - lo) > 1e-15 * lo.abs() {
        let mid = 0.5 * (lo + hi);
        let fm = airy_eval(mid).ai;
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn values_at_origin() {
        let p = airy_eval(0.0_f64);
        assert!((p.ai - 0.355028053887817).abs() < 1e-15);
        assert!((p.bi - 0.614926627446001).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // Independent high-precision values.
        let cases = [
            (2.0_f64, 0.034924130423274379135_f64),
            (-9.0, -0.022133721547341403674),
            (9.0, 2.4711684308724898433e-9),
        ];
        for (z, ai) in cases {
            let p = airy_eval(z);
            assert!((p.ai / ai - 1.0).abs() < 1e-13, "Ai({z}) = {}", p.ai);
        }
        assert!((airy_eval(2.0_f64).bi / 3.2980949999782147103 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn switch_radius_stitch() {
        for z in [SERIES_RADIUS, -SERIES_RADIUS] {
            let s = airy_series(z);
            let a = airy_asymptotic(z);
            let env = (s.ai * s.ai + s.bi * s.bi).sqrt();
            let envp = (s.ai_prime * s.ai_prime + s.bi_prime * s.bi_prime).sqrt();
            if z > 0.0 {
                assert!((s.ai / a.ai - 1.0).abs() < 1e-10);
                assert!((s.bi / a.bi - 1.0).abs() < 1e-10);
                assert!((s.ai_prime / a.ai_prime - 1.0).abs() < 1e-10);
                assert!((s.bi_prime / a.bi_prime - 1.0).abs() < 1e-10);
            } else {
                assert!((s.ai - a.ai).abs() < 1e-10 * env);
                assert!((s.bi - a.bi).abs() < 1e-10 * env);
                assert!((s.ai_prime - a.ai_prime).abs() < 1e-10 * envp);
                assert!((s.bi_prime - a.bi_prime).abs() < 1e-10 * envp);
            }
        }
    }

    #[test]
    fn log_form_matches_plain_values() {
        for z in [9.5, 20.0, 40.0] {
            let (ai, bi) = airy_log(z);
            let p = airy_eval(z);
            assert!((ai.log_abs() - p.ai.ln()).abs() < 1e-13);
            assert!((bi.log_abs() - p.bi.ln()).abs() < 1e-13);
        }
        let (ai, _) = airy_log(200.0);
        assert!(ai.log_abs().is_finite() && *ai.log_abs() < -1800.0);
    }

    #[test]
    fn rotated_examples() {
        let p0 = airy_eval(0.0);
        let r = airy_rotated(0.0, Rotation::Omega).value.to_complex();
        let want = Complex64::from_polar(1.0, PI / 3.0) * Complex64::new(p0.ai, -p0.bi) * 0.5;
        assert!((r - want).norm() < 1e-15);
        let r = airy_rotated(2.0, Rotation::Omega).value.to_complex();
        let want = Complex64::from_polar(1.0, PI / 3.0) * Complex64::new(0.034924130423274379135, -3.2980949999782147103) * 0.5;
        assert!((r / want - 1.0).norm() < 1e-14);
        for s in [-12.0, -1.5, 0.3, 7.0, 25.0] {
            let a = airy_rotated(s, Rotation::Omega).value;
            let b = airy_rotated(s, Rotation::OmegaSquared).value;
            assert!((a.log_mod - b.log_mod).abs() < 1e-14);
            assert!((a.phase + b.phase).abs() < 1e-13 || (a.phase.abs() - PI).abs() < 1e-13);
        }
    }

    #[test]
    fn rotated_matches_complex_evaluation() {
        let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        for s in [-11.0, -4.0, -0.7, 0.0, 1.3, 5.0, 8.5, 12.0] {
            let via_identity = airy_rotated(s, Rotation::Omega).value;
            let direct = airy_ai_complex(omega * s);
            assert!(direct.rel_err(&via_identity) < 1e-10, "s = {s}");
        }
    }

    #[test]
    fn complex_branches_agree_across_radius() {
        for th in [0.3, 1.2, 2.0, 2.5, 3.0] {
            let z = Complex64::from_polar(SERIES_RADIUS, th);
            let a = airy_ai_series_complex(z);
            let b = airy_ai_asymptotic_complex(z);
            assert!(a.rel_err(&b) < 1e-9, "theta = {th}: {}", a.rel_err(&b));
        }
    }

    #[test]
    fn airy_zeros() {
        assert!((airy_ai_zero(1) + 2.338107410459767).abs() < 1e-13);
        assert!((airy_ai_zero(3) + 5.5205598280955511).abs() < 1e-12);
    }

    #[test]
    fn single_precision_instantiation() {
        let p = airy_eval(1.0_f32);
        assert!((p.wronskian() - std::f32::consts::FRAC_1_PI).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn wronskian(z in -15.0f64..15.0) {
            let p = airy_eval(z);
            prop_assert!((p.wronskian() * PI - 1.0).abs() < 1e-12, "z = {z}: {}", p.wronskian() * PI - 1.0);
        }
    }
}
