//! Zeros of C_n: a sign-change scan of the oracle, and the large-n predictions.
//!
//! Zeros below the band sit exponentially close to the integers 0, 1, 2, ...,
//! far closer than bisection in `f64` can resolve. [`corollary_gap`] measures
//! that offset directly from C_n and C_n' at the integer in extended precision.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_eval::{sign_real, value_and_derivative_mp, CharlierParams};
use crate::numerics_core::{lit, to_f64, Real, Sign, SignedLogValue};
use crate::special_fn::airy_ai_zero;
use crate::turning_points::{map_right, LEFT_VALIDITY_RADIUS};

/// Largest degree [`find_zeros`] accepts.
pub const MAX_SCAN_DEGREE: usize = 2000;
/// Initial grid spacing of the scan.
pub const GRID_SPACING: f64 = 0.25;
/// Edge zeros are those above n + 2 sqrt(an) - EDGE_WINDOW n^{1/6}.
pub const EDGE_WINDOW: f64 = 5.0;
const REFINEMENTS: u32 = 2;
const INTEGER_SNAP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PredictionSource {
    CorollaryInteger,
    BandCosine,
    AiryEdge,
}

impl PredictionSource {
    pub fn as_str(self) -> &'static str {
        match self {
            PredictionSource::CorollaryInteger => "corollary_integer",
            PredictionSource::BandCosine => "band_cosine",
            PredictionSource::AiryEdge => "airy_edge",
        }
    }
}

impl fmt::Display for PredictionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One located zero with the prediction that applies at its position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroReport {
    /// 1-based, increasing within the scan.
    pub k: usize,
    pub x_empirical: f64,
    pub x_predicted: f64,
    pub prediction_source: PredictionSource,
    pub abs_gap: f64,
}

/// An upper bound for the largest zero of C_n.
pub fn zero_upper_bound(a: f64, n: usize) -> f64 {
    n as f64 + a + 2.0 * (a * n as f64).sqrt() + 1.0
}

fn grid(lo: f64, hi: f64, spacing: f64) -> Vec<f64> {
    let first = (lo / spacing).floor() * spacing + spacing / 2.0;
    let count = ((hi - first) / spacing).ceil().max(0.0) as usize;
    std::iter::once(lo)
        .chain((0..count).map(|i| first + i as f64 * spacing).filter(|&x| x > lo && x < hi))
        .chain(std::iter::once(hi))
        .collect()
}

fn bisect<T: Real>(params: &CharlierParams<T>, n: usize, mut l: f64, mut r: f64, sl: i8) -> f64 {
    loop {
        let mid = 0.5 * (l + r);
        if r - l <= 1e-12 * mid.abs().max(1.0) || mid <= l || mid >= r {
            return mid;
        }
        match sign_real(params, n, mid) {
            0 => return mid,
            s if s == sl => l = mid,
            _ => r = mid,
        }
    }
}

fn scan<T: Real>(params: &CharlierParams<T>, n: usize, lo: f64, hi: f64, spacing: f64) -> Vec<f64> {
    let xs = grid(lo, hi, spacing);
    let signs: Vec<i8> = xs.par_iter().map(|&x| sign_real(params, n, x)).collect();
    let mut exact = Vec::new();
    let mut brackets = Vec::new();
    for i in 0..xs.len() {
        if signs[i] == 0 {
            exact.push(xs[i]);
        } else if i + 1 < xs.len() && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            brackets.push((xs[i], xs[i + 1], signs[i]));
        }
    }
    let mut zeros: Vec<f64> = brackets.par_iter().map(|&(l, r, s)| bisect(params, n, l, r, s)).collect();
    zeros.extend(exact);
    zeros.sort_by(f64::total_cmp);
    zeros
}

fn scan_checked<T: Real>(params: &CharlierParams<T>, n: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("C_0 has no zeros".into()));
    }
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("empty scan interval [{lo}, {hi}]")));
    }
    let full = lo < 0.0 && hi >= zero_upper_bound(to_f64(params.a()), n);
    let mut spacing = GRID_SPACING;
    let mut zeros = scan(params, n, lo, hi, spacing);
    for _ in 0..REFINEMENTS {
        if !full || zeros.len() >= n {
            break;
        }
        spacing /= 2.0;
        zeros = scan(params, n, lo, hi, spacing);
    }
    if full && zeros.len() < n {
        return Err(Error::IncompleteScan { found: zeros.len(), expected: n });
    }
    Ok(zeros)
}

/// Real zeros of C_n in [lo, hi], with predictions attached.
///
/// A scan with lo < 0 and hi above [`zero_upper_bound`] is a full scan and
/// must find all n zeros.
pub fn find_zeros<T: Real>(params: &CharlierParams<T>, n: usize, lo: f64, hi: f64) -> Result<Vec<ZeroReport>> {
    if n > MAX_SCAN_DEGREE {
        return Err(Error::InvalidParameter(format!("zero scans are limited to n <= {MAX_SCAN_DEGREE}")));
    }
    find_zeros_unbounded(params, n, lo, hi)
}

/// [`find_zeros`] without the degree limit.
pub fn find_zeros_unbounded<T: Real>(params: &CharlierParams<T>, n: usize, lo: f64, hi: f64) -> Result<Vec<ZeroReport>> {
    let zeros = scan_checked(params, n, lo, hi)?;
    let a = to_f64(params.a());
    let from_top = hi >= zero_upper_bound(a, n);
    let nf = n as f64;
    let window = nf + 2.0 * (a * nf).sqrt() - EDGE_WINDOW * nf.powf(1.0 / 6.0);
    let count = zeros.len();
    Ok(zeros
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let k = i + 1;
            let t = (x - nf) / nf.sqrt();
            let edge = if from_top && x > window { predict_edge_zero(params, n, count - i).ok() } else { None };
            let (x_predicted, prediction_source) = match edge {
                Some(p) => (p, PredictionSource::AiryEdge),
                None if t > (LEFT_VALIDITY_RADIUS - 2.0) * a.sqrt() && t < 2.0 * a.sqrt() => {
                    (band_zero_near(a, n, x), PredictionSource::BandCosine)
                }
                None => {
                    let p = if lo < 0.0 { (k - 1) as f64 } else { x.round() };
                    (p, PredictionSource::CorollaryInteger)
                }
            };
            ZeroReport { k, x_empirical: x, x_predicted, prediction_source, abs_gap: (x - x_predicted).abs() }
        })
        .collect())
}

/// The small zeros 0, 1, ..., k_max - 1; each is off by an exponentially small amount.
pub fn predict_small_zeros<T: Real>(_params: &CharlierParams<T>, n: usize, k_max: usize) -> Vec<f64> {
    (0..k_max.min(n)).map(|k| k as f64).collect()
}

/// x_{k,n} - (k - 1) to leading order, from one Newton step at the integer k - 1.
pub fn corollary_gap<T: Real>(params: &CharlierParams<T>, n: usize, k: usize) -> Result<SignedLogValue<f64>> {
    if k == 0 || k > n {
        return Err(Error::OutOfRange { j: k });
    }
    newton_offset(params, n, (k - 1) as f64)
}

fn newton_offset<T: Real>(params: &CharlierParams<T>, n: usize, m: f64) -> Result<SignedLogValue<f64>> {
    let (c, d) = value_and_derivative_mp(params, n, m)?;
    if c.is_zero() {
        return Ok(SignedLogValue::zero());
    }
    let sign = if c.signum() == d.signum() { Sign::Negative } else { Sign::Positive };
    Ok(SignedLogValue::new(sign, c.ln_abs_f64() - d.ln_abs_f64()))
}

fn band_phase(a: f64, n: usize, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    2.0 * (a * n as f64).sqrt() * (s - theta * c) + a * s * c - std::f64::consts::FRAC_PI_4
}

// Zero of the band cosine form nearest to x, found by bisection in theta.
fn band_zero_near(a: f64, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let to_x = |th: f64| nf + nf.sqrt() * 2.0 * a.sqrt() * th.cos();
    let theta = ((x - nf) / (2.0 * (a * nf).sqrt())).clamp(-1.0, 1.0).acos();
    let phase = band_phase(a, n, theta);
    let target = ((phase / std::f64::consts::PI) - 0.5).round() * std::f64::consts::PI + std::f64::consts::FRAC_PI_2;
    let f = |th: f64| band_phase(a, n, th) - target;
    let step = 1.0 / (nf.sqrt() * a.sqrt());
    let (mut lo, mut hi) = ((theta - step).max(1e-9), (theta + step).min(std::f64::consts::PI - 1e-9));
    if f(lo).signum() == f(hi).signum() {
        return x.round();
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    to_x(0.5 * (lo + hi))
}

/// The j-th largest zero predicted from the j-th Airy zero through the full right map.
pub fn predict_edge_zero<T: Real>(params: &CharlierParams<T>, n: usize, j: usize) -> Result<f64> {
    if j == 0 || n == 0 {
        return Err(Error::OutOfRange { j });
    }
    let iota = airy_ai_zero(j);
    let nf = n as f64;
    let sa = to_f64(params.sqrt_a());
    let g = |t: f64| -> Result<f64> {
        let m = map_right(params, Complex::new(lit::<T>(t), T::zero()))?;
        Ok(to_f64(m.eta.re) * nf.powf(1.0 / 3.0) + to_f64(m.phi.re) * nf.powf(-1.0 / 6.0) - iota)
    };
    let (mut lo, mut hi) = ((2.0 - LEFT_VALIDITY_RADIUS) * sa, (2.0 + LEFT_VALIDITY_RADIUS) * sa);
    let glo = g(lo)?;
    if glo > 0.0 || g(hi)? < 0.0 {
        return Err(Error::OutOfRange { j });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * sa {
            break;
        }
    }
    Ok(nf + nf.sqrt() * 0.5 * (lo + hi))
}

/// Edge predictions for j = 1..=j_max, largest first.
pub fn predict_edge_zeros<T: Real>(params: &CharlierParams<T>, n: usize, j_max: usize) -> Result<Vec<f64>> {
    (1..=j_max).map(|j| predict_edge_zero(params, n, j)).collect()
}

/// One bin of the zero-counting measure in y = x/n, normalized so density 1 gives height 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityBin {
    pub y_lo: f64,
    pub y_hi: f64,
    pub count: usize,
    pub height: f64,
}

/// Histogram of zeros/n over [0, 1] with `bins` equal bins.
pub fn density_histogram(zeros: &[f64], n: usize, bins: usize) -> Vec<DensityBin> {
    let w = 1.0 / bins as f64;
    (0..bins)
        .map(|b| {
            let (y_lo, y_hi) = (b as f64 * w, (b + 1) as f64 * w);
            let count = zeros.iter().map(|x| x / n as f64).filter(|&y| y >= y_lo && y < y_hi).count();
            DensityBin { y_lo, y_hi, count, height: count as f64 / (n as f64 * w) }
        })
        .collect()
}

// A zero located either by its f64 value or as integer + tiny offset.
#[derive(Clone, Debug)]
struct ZeroKey {
    x: f64,
    offset: Option<(f64, SignedLogValue<f64>)>,
}

fn offset_cmp(p: &SignedLogValue<f64>, q: &SignedLogValue<f64>) -> Ordering {
    let key = |v: &SignedLogValue<f64>| match v.sign() {
        Sign::Zero => (0, 0.0),
        Sign::Positive => (1, *v.log_abs()),
        Sign::Negative => (-1, -*v.log_abs()),
    };
    let (kp, lp) = key(p);
    let (kq, lq) = key(q);
    kp.cmp(&kq).then(lp.total_cmp(&lq))
}

impl ZeroKey {
    fn cmp(&self, o: &Self) -> Ordering {
        match (&self.offset, &o.offset) {
            (Some((m, p)), Some((mo, q))) if m == mo => offset_cmp(p, q),
            _ => self.x.total_cmp(&o.x),
        }
    }
}

fn keys<T: Real>(params: &CharlierParams<T>, n: usize, zeros: &[f64]) -> Result<Vec<ZeroKey>> {
    zeros
        .iter()
        .map(|&x| {
            let m = x.round();
            if m >= 0.0 && (x - m).abs() < INTEGER_SNAP {
                Ok(ZeroKey { x, offset: Some((m, newton_offset(params, n, m)?)) })
            } else {
                Ok(ZeroKey { x, offset: None })
            }
        })
        .collect()
}

/// Whether the zeros of C_{n-1} strictly interlace those of C_n.
///
/// Zeros within 1e-9 of an integer are ordered by their offset from it, so
/// the check stays exact where the two families agree to many digits.
pub fn verify_interlacing<T: Real>(params: &CharlierParams<T>, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidParameter("interlacing needs n >= 2".into()));
    }
    let a = to_f64(params.a());
    let hi = zero_upper_bound(a, n);
    let upper = scan_checked(params, n, -1.0, hi)?;
    let lower = scan_checked(params, n - 1, -1.0, hi)?;
    if upper.len() != n || lower.len() != n - 1 {
        return Ok(false);
    }
    let ku = keys(params, n, &upper)?;
    let kl = keys(params, n - 1, &lower)?;
    Ok(kl
        .iter()
        .enumerate()
        .all(|(i, z)| ku[i].cmp(z) == Ordering::Less && z.cmp(&ku[i + 1]) == Ordering::Less))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64) -> CharlierParams<f64> {
        CharlierParams::new(a).unwrap()
    }

    fn gap(p: &CharlierParams<f64>, n: usize, k: usize) -> f64 {
        *corollary_gap(p, n, k).unwrap().log_abs()
    }

    #[test]
    fn twenty_zeros_for_degree_twenty() {
        let p = params(1.0);
        let z = find_zeros(&p, 20, -1.0, 30.0).unwrap();
        assert_eq!(z.len(), 20);
        assert!(z.windows(2).all(|w| w[0].x_empirical < w[1].x_empirical));
        assert!(z.iter().enumerate().all(|(i, r)| r.k == i + 1));
        assert!(z[0].x_empirical.abs() < 1e-8);
        assert_eq!(z[0].prediction_source, PredictionSource::CorollaryInteger);
    }

    #[test]
    fn zeros_are_sign_changes() {
        let p = params(1.5);
        for r in find_zeros(&p, 30, -1.0, 50.0).unwrap() {
            let h = 1e-9 * r.x_empirical.abs().max(1.0);
            let (l, u) = (sign_real(&p, 30, r.x_empirical - h), sign_real(&p, 30, r.x_empirical + h));
            assert!(l != u || l == 0, "no sign change at {}", r.x_empirical);
        }
    }

    #[test]
    fn small_predictions() {
        let p = params(1.0);
        let s = predict_small_zeros(&p, 50, 5);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[4], 4.0);
    }

    #[test]
    fn corollary_gap_shrinks_with_n() {
        let p = params(1.0);
        assert!(gap(&p, 40, 3) < gap(&p, 20, 3));
        let g: Vec<f64> = [20, 40, 80].iter().map(|&n| gap(&p, n, 2)).collect();
        // faster than n^{-4}: log-gap drops by more than 4 ln 2 per doubling
        assert!(g[1] - g[0] < -4.0 * 2f64.ln() && g[2] - g[1] < -4.0 * 2f64.ln(), "{g:?}");
    }

    #[test]
    fn corollary_convergence_monotone() {
        for a in [0.5, 1.0, 2.0] {
            let p = params(a);
            let worst: Vec<f64> = [20, 40, 80, 160]
                .iter()
                .map(|&n| (1..=5).map(|k| gap(&p, n, k)).fold(f64::NEG_INFINITY, f64::max))
                .collect();
            assert!(worst.windows(2).all(|w| w[1] < w[0]), "a = {a}: {worst:?}");
        }
    }

    #[test]
    fn gap_agrees_with_bisection_when_resolvable() {
        // a large and n small leaves the smallest zero visibly away from 0.
        let p = params(4.0);
        let z = find_zeros(&p, 6, -1.0, 30.0).unwrap();
        let g = corollary_gap(&p, 6, 1).unwrap();
        let newton = g.to_real();
        assert!(newton.abs() < 0.5);
        assert!(z[0].x_empirical.abs() < 1.0);
        assert_eq!(newton.signum(), z[0].x_empirical.signum());
    }

    #[test]
    fn interlacing_small_n() {
        for (a, n) in [(1.0, 10), (0.5, 25), (2.0, 40)] {
            assert!(verify_interlacing(&params(a), n).unwrap(), "a = {a}, n = {n}");
        }
    }

    #[test]
    fn leading_edge_prediction() {
        let p = params(1.0);
        let n = 1000;
        let x1 = predict_edge_zero(&p, n, 1).unwrap();
        let lead = n as f64 + 2.0 * (n as f64).sqrt() + airy_ai_zero(1) * (n as f64).powf(1.0 / 6.0);
        assert!((x1 - lead).abs() < 2.0, "{x1} vs {lead}");
        let e = predict_edge_zeros(&p, n, 4).unwrap();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
        assert!(matches!(predict_edge_zeros(&p, n, 8), Err(Error::OutOfRange { .. })));
        let top = find_zeros(&p, n, x1 - 3.0, zero_upper_bound(1.0, n)).unwrap();
        let largest = top.last().unwrap();
        assert!((largest.x_empirical - x1).abs() < (n as f64).powf(1.0 / 6.0) / 3.0);
        assert_eq!(largest.prediction_source, PredictionSource::AiryEdge);
    }

    #[test]
    fn edge_counts_match() {
        let p = params(1.0);
        for n in [500usize, 1000] {
            let nf = n as f64;
            let window = nf + 2.0 * nf.sqrt() - EDGE_WINDOW * nf.powf(1.0 / 6.0);
            let empirical = find_zeros(&p, n, window, zero_upper_bound(1.0, n)).unwrap().len();
            let predicted = (1..).map_while(|j| predict_edge_zero(&p, n, j).ok().filter(|&x| x > window)).count();
            assert_eq!(empirical, predicted, "n = {n}");
        }
    }

    #[test]
    fn density_is_one() {
        let zs = [0.5, 1.5, 2.5, 3.5];
        let h = density_histogram(&zs, 4, 2);
        assert_eq!(h[0].count, 2);
        assert!((h[1].height - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_requests() {
        let p = params(1.0);
        assert!(matches!(find_zeros(&p, 0, -1.0, 3.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(find_zeros(&p, 5, 3.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(find_zeros(&p, 5000, -1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(predict_edge_zero(&p, 10, 40), Err(Error::OutOfRange { j: 40 })));
    }
}
