//! Picks the applicable large-n form for a point x and evaluates it.
//!
//! Zones are assigned from y = x/n and t = (x - n)/sqrt(n). The thresholds in
//! [`RouterConfig`] are tuning knobs; only the overlaps themselves are
//! guaranteed by the asymptotics.

use std::fmt;

use num_complex::Complex;

use crate::approx::{ApproxResult, FormulaTag};
use crate::error::{Error, Result};
use crate::exact_eval::CharlierParams;
use crate::intermediate_region::{band_cosine_formula, intermediate_formula};
use crate::non_oscillatory::{interior_oscillatory_formula, origin_gamma_formula, outer_formula};
use crate::numerics_core::{dist_to_unit_segment, lit, LogComplex, Real};
use crate::turning_points::{airy_formula_left, airy_formula_left_two_term, airy_formula_right};

/// Zone thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RouterConfig {
    /// Outer form needs dist(y, [0, 1]) above this.
    pub outer_dist: f64,
    /// The origin zone is |y| below this (and off the segment).
    pub origin_radius: f64,
    /// The origin form needs |y - 1| above this.
    pub origin_one_dist: f64,
    pub interior_lo: f64,
    pub interior_hi: f64,
    /// Turning-point collar, in units of sqrt(a).
    pub collar: f64,
    /// The intermediate form needs |y - 1| at most this; its error grows like |t|^3/sqrt(n).
    pub intermediate_radius: f64,
    pub n_min: usize,
}

impl Default for RouterConfig {
    fn default() -> Self {
        Self {
            outer_dist: 0.2,
            origin_radius: 0.8,
            origin_one_dist: 0.5,
            interior_lo: 0.1,
            interior_hi: 0.9,
            collar: 0.75,
            intermediate_radius: 0.5,
            n_min: 8,
        }
    }
}

/// Why a zone was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rationale {
    OuterZone,
    OriginZone,
    InteriorZone,
    IntermediateZone,
    BandZone,
    RightEdge,
    LeftEdge,
}

impl Rationale {
    pub fn as_str(self) -> &'static str {
        match self {
            Rationale::OuterZone => "outer_zone",
            Rationale::OriginZone => "origin_zone",
            Rationale::InteriorZone => "interior_zone",
            Rationale::IntermediateZone => "intermediate_zone",
            Rationale::BandZone => "band_zone",
            Rationale::RightEdge => "right_edge",
            Rationale::LeftEdge => "left_edge",
        }
    }

    fn formula(self) -> FormulaTag {
        match self {
            Rationale::OuterZone => FormulaTag::Outer,
            Rationale::OriginZone => FormulaTag::Origin,
            Rationale::InteriorZone => FormulaTag::Interior,
            Rationale::IntermediateZone => FormulaTag::Intermediate,
            Rationale::BandZone => FormulaTag::Band,
            Rationale::RightEdge => FormulaTag::TurnRight,
            Rationale::LeftEdge => FormulaTag::TurnLeft,
        }
    }
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionDecision<T: Real> {
    pub primary_formula: FormulaTag,
    pub alternates: Vec<FormulaTag>,
    pub y: Complex<T>,
    pub t: Complex<T>,
    pub rationale: Rationale,
}

// Order used when the zone's own form is not applicable.
const FALLBACK: [FormulaTag; 7] = [
    FormulaTag::TurnRight,
    FormulaTag::TurnLeft,
    FormulaTag::Band,
    FormulaTag::Interior,
    FormulaTag::Outer,
    FormulaTag::Origin,
    FormulaTag::Intermediate,
];

struct Geometry<T: Real> {
    y: Complex<T>,
    t: Complex<T>,
    sqrt_a: T,
}

impl<T: Real> Geometry<T> {
    fn new(a: T, n: usize, x: Complex<T>) -> Self {
        let nf: T = lit(n as f64);
        Self { y: x / nf, t: (x - nf) / nf.sqrt(), sqrt_a: a.sqrt() }
    }

    fn real_t(&self) -> bool {
        self.t.im == T::zero()
    }

    fn dist(&self) -> T {
        dist_to_unit_segment(self.y)
    }

    fn left_of_collar(&self, cfg: &RouterConfig) -> bool {
        self.t.re < -self.sqrt_a * lit::<T>(2.0 + cfg.collar)
    }

    fn applies(&self, cfg: &RouterConfig, tag: FormulaTag) -> bool {
        let two_sqrt_a = self.sqrt_a * lit::<T>(2.0);
        let collar = self.sqrt_a * lit::<T>(cfg.collar);
        match tag {
            FormulaTag::Outer => self.dist() > lit(cfg.outer_dist),
            FormulaTag::Origin => (self.y - T::one()).norm() > lit(cfg.origin_one_dist),
            FormulaTag::Interior => {
                let hi = if self.left_of_collar(cfg) { T::one() } else { lit(cfg.interior_hi) };
                self.y.im == T::zero() && self.y.re > lit(cfg.interior_lo) && self.y.re < hi
            }
            FormulaTag::Band => self.real_t() && self.t.re.abs() < two_sqrt_a - collar,
            FormulaTag::TurnRight => (self.t - two_sqrt_a).norm() <= collar,
            FormulaTag::TurnLeft => (self.t + two_sqrt_a).norm() <= collar,
            FormulaTag::Intermediate => {
                !(self.real_t() && self.t.re <= two_sqrt_a) && (self.y - T::one()).norm() <= lit(cfg.intermediate_radius)
            }
        }
    }

    fn zone(&self, cfg: &RouterConfig) -> Rationale {
        let two_sqrt_a = self.sqrt_a * lit::<T>(2.0);
        let collar = self.sqrt_a * lit::<T>(cfg.collar);
        let off_segment = self.dist() > lit(cfg.outer_dist);
        if off_segment && self.y.norm() < lit(cfg.origin_radius) {
            Rationale::OriginZone
        } else if off_segment && (self.y - T::one()).norm() > lit(cfg.origin_one_dist) {
            Rationale::OuterZone
        } else if self.applies(cfg, FormulaTag::Interior) {
            Rationale::InteriorZone
        } else if self.applies(cfg, FormulaTag::Band) {
            Rationale::BandZone
        } else if (self.t - two_sqrt_a).norm() <= collar {
            Rationale::RightEdge
        } else if (self.t + two_sqrt_a).norm() <= collar {
            Rationale::LeftEdge
        } else {
            Rationale::IntermediateZone
        }
    }
}

/// Zone, primary form and applicable alternates at x.
pub fn classify<T: Real>(params: &CharlierParams<T>, n: usize, x: Complex<T>) -> Result<RegionDecision<T>> {
    classify_with(params, n, x, &RouterConfig::default())
}

pub fn classify_with<T: Real>(
    params: &CharlierParams<T>,
    n: usize,
    x: Complex<T>,
    cfg: &RouterConfig,
) -> Result<RegionDecision<T>> {
    if n < cfg.n_min {
        return Err(Error::InvalidParameter(format!("the router needs n >= {}, got {n}", cfg.n_min)));
    }
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain("x must be finite".into()));
    }
    let g = Geometry::new(params.a(), n, x);
    let mut rationale = g.zone(cfg);
    let applicable: Vec<FormulaTag> = FormulaTag::ALL.into_iter().filter(|&f| g.applies(cfg, f)).collect();
    let mut primary = rationale.formula();
    if !applicable.contains(&primary) {
        primary = FALLBACK.into_iter().find(|f| applicable.contains(f)).ok_or_else(|| {
            Error::Domain("no applicable formula".into())
        })?;
        rationale = match primary {
            FormulaTag::Outer => Rationale::OuterZone,
            FormulaTag::Origin => Rationale::OriginZone,
            FormulaTag::Interior => Rationale::InteriorZone,
            FormulaTag::Intermediate => Rationale::IntermediateZone,
            FormulaTag::Band => Rationale::BandZone,
            FormulaTag::TurnRight => Rationale::RightEdge,
            FormulaTag::TurnLeft => Rationale::LeftEdge,
        };
    }
    let alternates = applicable.into_iter().filter(|&f| f != primary).collect();
    Ok(RegionDecision { primary_formula: primary, alternates, y: g.y, t: g.t, rationale })
}

/// Evaluates one named form at x, whatever the zone.
pub fn evaluate_formula<T: Real>(
    params: &CharlierParams<T>,
    n: usize,
    x: Complex<T>,
    tag: FormulaTag,
) -> Result<ApproxResult<T>> {
    let g = Geometry::new(params.a(), n, x);
    match tag {
        FormulaTag::Outer => outer_formula(params, n, g.y),
        FormulaTag::Origin => origin_gamma_formula(params, n, g.y),
        FormulaTag::Interior if g.y.im == T::zero() => interior_oscillatory_formula(params, n, g.y.re),
        FormulaTag::Interior => Err(Error::Domain("the interior form needs real y".into())),
        FormulaTag::Intermediate => intermediate_formula(params, n, g.t),
        FormulaTag::Band => {
            let c = g.t.re / (g.sqrt_a * lit::<T>(2.0));
            if !g.real_t() || c.abs() >= T::one() {
                return Err(Error::Domain("the band form needs real t in (-2 sqrt a, 2 sqrt a)".into()));
            }
            band_cosine_formula(params, n, c.acos())
        }
        FormulaTag::TurnRight => airy_formula_right(params, n, g.t),
        FormulaTag::TurnLeft if g.real_t() => airy_formula_left(params, n, g.t.re),
        FormulaTag::TurnLeft => airy_formula_left_two_term(params, n, g.t),
    }
}

/// Relative difference between two forms evaluated at the same point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disagreement {
    pub first: FormulaTag,
    pub second: FormulaTag,
    pub rel_diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutedValue<T: Real> {
    pub result: ApproxResult<T>,
    pub decision: RegionDecision<T>,
    /// Every alternate with its value or the error it raised.
    pub alternates: Vec<(FormulaTag, std::result::Result<LogComplex<T>, String>)>,
    pub disagreements: Vec<Disagreement>,
    /// Set when the primary failed and an alternate stood in.
    pub note: Option<String>,
}

/// Evaluates the primary form and every alternate, with pairwise disagreements.
pub fn evaluate<T: Real>(params: &CharlierParams<T>, n: usize, x: Complex<T>) -> Result<RoutedValue<T>> {
    evaluate_with(params, n, x, &RouterConfig::default())
}

pub fn evaluate_with<T: Real>(
    params: &CharlierParams<T>,
    n: usize,
    x: Complex<T>,
    cfg: &RouterConfig,
) -> Result<RoutedValue<T>> {
    let decision = classify_with(params, n, x, cfg)?;
    let primary = evaluate_formula(params, n, x, decision.primary_formula);
    let alternates: Vec<_> = decision
        .alternates
        .iter()
        .map(|&f| (f, evaluate_formula(params, n, x, f).map(|r| r.value).map_err(|e| e.to_string())))
        .collect();
    let mut ok: Vec<(FormulaTag, LogComplex<T>)> = alternates
        .iter()
        .filter_map(|(f, r)| r.as_ref().ok().map(|v| (*f, *v)))
        .collect();
    let (result, note) = match primary {
        Ok(r) => {
            ok.insert(0, (r.formula, r.value));
            (r, None)
        }
        Err(e) => {
            let (f, v) = *ok.first().ok_or(e.clone())?;
            let note = format!("{} failed ({e}); fell back to {f}", decision.primary_formula);
            (ApproxResult::new(v, f), Some(note))
        }
    };
    let mut disagreements = Vec::new();
    for i in 0..ok.len() {
        for j in i + 1..ok.len() {
            let rel_diff = crate::numerics_core::to_f64(ok[j].1.rel_err(&ok[i].1));
            disagreements.push(Disagreement { first: ok[i].0, second: ok[j].0, rel_diff });
        }
    }
    Ok(RoutedValue { result, decision, alternates, disagreements, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn params(a: f64) -> CharlierParams<f64> {
        CharlierParams::new(a).unwrap()
    }

    fn at_y(n: usize, y: Complex64) -> Complex64 {
        y * n as f64
    }

    #[test]
    fn example_zones() {
        let p = params(1.0);
        let n = 2048;
        let d = classify(&p, n, at_y(n, Complex64::new(2.0, 0.0))).unwrap();
        assert_eq!(d.rationale, Rationale::OuterZone);
        assert!(d.alternates.contains(&FormulaTag::Origin));
        let d = classify(&p, n, at_y(n, Complex64::new(1.3, 0.3))).unwrap();
        assert!(d.primary_formula == FormulaTag::Intermediate || d.alternates.contains(&FormulaTag::Intermediate));
        let d = classify(&p, n, Complex64::new(n as f64, 0.0)).unwrap();
        assert_eq!(d.rationale, Rationale::BandZone);
        let d = classify(&p, n, Complex64::new(n as f64 + 2.0 * (n as f64).sqrt(), 0.0)).unwrap();
        assert_eq!(d.rationale, Rationale::RightEdge);
        let d = classify(&p, n, at_y(n, Complex64::new(0.4, 0.0))).unwrap();
        assert_eq!(d.primary_formula, FormulaTag::Interior);
        assert!(d.alternates.contains(&FormulaTag::Origin));
        let d = classify(&p, n, at_y(n, Complex64::new(0.2, 0.5))).unwrap();
        assert_eq!(d.rationale, Rationale::OriginZone);
    }

    #[test]
    fn totality_on_grid() {
        let p = params(1.0);
        let n = 2048;
        for i in 0..60 {
            for j in 0..60 {
                let y = Complex64::new(-2.0 + 5.0 * i as f64 / 59.0, -1.5 + 3.0 * j as f64 / 59.0);
                let d = classify(&p, n, at_y(n, y)).unwrap();
                let g = Geometry::new(1.0, n, at_y(n, y));
                assert!(g.applies(&RouterConfig::default(), d.primary_formula), "{y}");
                assert!(d.alternates.iter().all(|&f| g.applies(&RouterConfig::default(), f)));
            }
        }
        // Real points between the interior and the left collar, and near the origin.
        for y in [0.93, 0.05, 0.0, -0.1, 1.0 - 3.0 / (n as f64).sqrt()] {
            assert!(classify(&p, n, at_y(n, Complex64::new(y, 0.0))).is_ok(), "{y}");
        }
        assert!(classify(&p, 4, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn disagreements_finite_on_grid() {
        let p = params(1.0);
        let n = 2048;
        for i in 0..25 {
            for j in 0..25 {
                let y = Complex64::new(-2.0 + 5.0 * i as f64 / 24.0, -1.5 + 3.0 * j as f64 / 24.0);
                let r = evaluate(&p, n, at_y(n, y)).unwrap();
                assert!(r.disagreements.iter().all(|d| d.rel_diff.is_finite()), "{y}: {:?}", r.disagreements);
            }
        }
    }

    #[test]
    fn evaluate_is_transparent() {
        let p = params(1.0);
        let n = 500;
        for x in [Complex64::new(1000.0, 0.0), Complex64::new(250.3, 0.0), Complex64::new(-300.0, 100.0)] {
            let r = evaluate(&p, n, x).unwrap();
            let direct = evaluate_formula(&p, n, x, r.decision.primary_formula).unwrap();
            assert_eq!(r.result.value, direct.value);
            assert!(r.note.is_none());
        }
    }

    #[test]
    fn origin_and_outer_agree_at_minus_one() {
        let p = params(1.0);
        let n = 500;
        let r = evaluate(&p, n, Complex64::new(-500.0, 0.0)).unwrap();
        let d = r
            .disagreements
            .iter()
            .find(|d| [d.first, d.second].contains(&FormulaTag::Outer) && [d.first, d.second].contains(&FormulaTag::Origin))
            .unwrap();
        assert!(d.rel_diff <= 2.0 / n as f64, "{}", d.rel_diff);
    }

    #[test]
    fn transition_window_at_t_to_the_fifth_root() {
        // Along t = n^{1/5} the outer error shrinks like n^{-1/10} and the
        // intermediate error grows like n^{1/10} (its log error is ~ t^3/(12 sqrt n)).
        let p = params(1.0);
        let errs = |n: usize| {
            let t = (n as f64).powf(0.2);
            let x = Complex64::new(n as f64 + t * (n as f64).sqrt(), 0.0);
            let exact = crate::exact_eval::eval_recurrence(&p, n, x).unwrap();
            let o = evaluate_formula(&p, n, x, FormulaTag::Outer).unwrap().value;
            let i = evaluate_formula(&p, n, x, FormulaTag::Intermediate).unwrap().value;
            (o.rel_err(&exact), i.rel_err(&exact), o.rel_err(&i))
        };
        let (o1, i1, d1) = errs(1_000);
        let (o2, i2, d2) = errs(100_000);
        assert!(o2 < o1 && i2 > i1, "{o1} {o2} {i1} {i2}");
        assert!(d1 < 0.2 && d2 < 0.2, "{d1} {d2}");
    }

    #[test]
    fn complex_left_collar_uses_two_terms() {
        let p = params(1.0);
        let n = 2048;
        let x = Complex64::new(n as f64 - 2.0 * (n as f64).sqrt(), 0.2 * (n as f64).sqrt());
        let r = evaluate(&p, n, x).unwrap();
        assert_eq!(r.decision.rationale, Rationale::LeftEdge);
        assert!(r.result.value.is_finite());
    }
}
