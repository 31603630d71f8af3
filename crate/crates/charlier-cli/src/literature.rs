//! Earlier leading-order forms from the literature (Bo and Wong; Goh), used as cross-checks.
//!
//! All three return the monic C_n(x). The right and left edge forms are
//! parametrized by s:
//!
//! ```text
//! right: x = n + 2 sqrt(an) + s n^{1/6} + a
//! left:  x = n - 2 sqrt(an) + s n^{1/6} + a
//! ```

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;

use charlier::numerics_core::{cos_pi, sin_pi};
use charlier::special_fn::{airy_ai_complex, airy_log, ln_gamma};
use charlier::{LogComplex, SignedLogValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Against {
    /// Oscillatory form for real y in (0, 1).
    #[value(name = "bo-wong-0")]
    BoWong0,
    /// Airy form at the largest zeros.
    #[value(name = "bo-wong-right")]
    BoWongRight,
    /// Airy form at the smallest-scale left edge.
    #[value(name = "bo-wong-left")]
    BoWongLeft,
}

impl Against {
    pub fn as_str(self) -> &'static str {
        match self {
            Against::BoWong0 => "bo-wong-0",
            Against::BoWongRight => "bo-wong-right",
            Against::BoWongLeft => "bo-wong-left",
        }
    }

    /// The form's own variable at x: y for the interior form, s for the edges.
    pub fn param(self, a: f64, n: usize, x: f64) -> f64 {
        match self {
            Against::BoWong0 => x / n as f64,
            Against::BoWongRight => s_right(a, n, x),
            Against::BoWongLeft => s_left(a, n, x),
        }
    }

    pub fn value_at(self, a: f64, n: usize, x: f64) -> LogComplex<f64> {
        let p = self.param(a, n, x);
        match self {
            Against::BoWong0 => interior_form(a, n, p),
            Against::BoWongRight => right_form(a, n, p),
            Against::BoWongLeft => left_form(a, n, p),
        }
    }

    /// The default comparison point (s = 0 for the edge forms).
    pub fn default_x(self, a: f64, n: usize) -> Option<f64> {
        match self {
            Against::BoWong0 => None,
            Against::BoWongRight => Some(right_point(a, n, 0.0)),
            Against::BoWongLeft => Some(left_point(a, n, 0.0)),
        }
    }
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(Complex64::new(n as f64 + 1.0, 0.0)).map(|z| z.re).unwrap_or(f64::NAN)
}

pub fn right_point(a: f64, n: usize, s: f64) -> f64 {
    let nf = n as f64;
    nf + 2.0 * (a * nf).sqrt() + s * nf.powf(1.0 / 6.0) + a
}

pub fn left_point(a: f64, n: usize, s: f64) -> f64 {
    let nf = n as f64;
    nf - 2.0 * (a * nf).sqrt() + s * nf.powf(1.0 / 6.0) + a
}

pub fn s_right(a: f64, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    (x - nf - 2.0 * (a * nf).sqrt() - a) / nf.powf(1.0 / 6.0)
}

pub fn s_left(a: f64, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    (x - nf + 2.0 * (a * nf).sqrt() - a) / nf.powf(1.0 / 6.0)
}

/// e^{3a/2} (n/a)^{sqrt(an) + (s/2) n^{1/6} + a/2} (an)^{-1/6} Ai(s a^{-1/6}), times n!.
pub fn right_form(a: f64, n: usize, s: f64) -> LogComplex<f64> {
    let nf = n as f64;
    let expo = (a * nf).sqrt() + 0.5 * s * nf.powf(1.0 / 6.0) + 0.5 * a;
    let log_pre = ln_factorial(n) + 1.5 * a + expo * (nf / a).ln() - (a * nf).ln() / 6.0;
    let ai = airy_log(s * a.powf(-1.0 / 6.0)).0;
    LogComplex::from_signed_log(&SignedLogValue::new(ai.sign(), log_pre + ai.log_abs()))
}

/// e^{3a/2} (n/a)^{(x-n)/2} (an)^{-1/6} (-1)^n 2 Re[e^{(x pi + pi/3) i} Ai(e^{pi i/3} s a^{-1/6})], times n!.
pub fn left_form(a: f64, n: usize, s: f64) -> LogComplex<f64> {
    let nf = n as f64;
    let x = left_point(a, n, s);
    let log_pre = ln_factorial(n) + 1.5 * a + 0.5 * (x - nf) * (nf / a).ln() - (a * nf).ln() / 6.0;
    let ai = airy_ai_complex(Complex64::from_polar(s * a.powf(-1.0 / 6.0), PI / 3.0));
    // e^{(x pi + pi/3) i} with x pi reduced exactly.
    let rot = Complex64::new(cos_pi(x), sin_pi(x)) * Complex64::from_polar(1.0, PI / 3.0);
    let re = 2.0 * (rot * Complex64::from_polar(1.0, ai.phase)).re;
    let sign = if n % 2 == 0 { re } else { -re };
    let v = SignedLogValue::from_f(sign);
    LogComplex::from_signed_log(&SignedLogValue::new(v.sign(), log_pre + ai.log_mod + v.log_abs()))
}

/// (y/(1-y))^{1/2} e^{a/(1-y)} y^{ny} (1-y)^{n(1-y)} sin[n(1-y) pi] sqrt(2/(n pi)), times n!.
pub fn interior_form(a: f64, n: usize, y: f64) -> LogComplex<f64> {
    let nf = n as f64;
    let u = 1.0 - y;
    let log_pre = ln_factorial(n) + 0.5 * (y / u).ln() + a / u + nf * y * y.ln() + nf * u * u.ln()
        + 0.5 * (2.0 / (nf * PI)).ln();
    let s = SignedLogValue::from_f(sin_pi(nf - nf * y));
    LogComplex::from_signed_log(&SignedLogValue::new(s.sign(), log_pre + s.log_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use charlier::exact_eval::eval_recurrence;
    use charlier::Params;

    fn oracle(a: f64, n: usize, x: f64) -> LogComplex<f64> {
        eval_recurrence(&Params::new(a).unwrap(), n, Complex64::new(x, 0.0)).unwrap()
    }

    #[test]
    fn scalings_invert() {
        let (a, n) = (1.3, 500);
        assert!((s_right(a, n, right_point(a, n, 0.7)) - 0.7).abs() < 1e-12);
        assert!((s_left(a, n, left_point(a, n, -0.4)) + 0.4).abs() < 1e-12);
    }

    #[test]
    fn forms_track_the_oracle() {
        let (a, n) = (1.0, 2000);
        let x = right_point(a, n, 0.0);
        assert!(right_form(a, n, 0.0).rel_err(&oracle(a, n, x)) < 0.1);
        let x = left_point(a, n, 0.0);
        assert!(left_form(a, n, 0.0).rel_err(&oracle(a, n, x)) < 0.1);
        let x = 800.5;
        assert!(interior_form(a, n, x / n as f64).rel_err(&oracle(a, n, x)) < 0.01);
    }
}
