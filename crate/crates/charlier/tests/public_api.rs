use charlier::exact_eval::{eval_explicit_sum, eval_recurrence};
use charlier::region_router::evaluate;
use charlier::zeros::{density_histogram, find_zeros};
use charlier::{FormulaTag, Params, C64};

fn params(a: f64) -> Params {
    Params::new(a).unwrap()
}

#[test]
fn small_degrees_match_closed_forms() {
    let p = params(1.0);
    // C_2(x) = x^2 - (2a + 1)x + a^2
    for x in [-3.0, 0.5, 2.0, 7.25] {
        let v = eval_recurrence(&p, 2, C64::new(x, 0.0)).unwrap().to_complex();
        let want = x * x - 3.0 * x + 1.0;
        assert!((v.re - want).abs() <= 1e-12 * want.abs().max(1.0), "x={x}: {v}");
    }
    let z = C64::new(1.5, -0.75);
    let r = eval_recurrence(&p, 30, z).unwrap();
    let s = eval_explicit_sum(&p, 30, z).unwrap();
    assert!(r.rel_err(&s) < 1e-12);
}

#[test]
fn routed_values_track_the_oracle() {
    let p = params(1.0);
    let n = 512;
    for (y, tol) in [(C64::new(2.0, 0.0), 1e-3), (C64::new(-0.5, 0.0), 2e-3), (C64::new(0.4, 0.3), 5e-2)] {
        let x = y * n as f64;
        let routed = evaluate(&p, n, x).unwrap();
        let exact = eval_recurrence(&p, n, x).unwrap();
        let err = routed.result.value.rel_err(&exact);
        assert!(err < tol, "y={y} via {}: {err}", routed.result.formula);
    }
}

#[test]
fn right_edge_routes_to_airy_form() {
    let p = params(1.0);
    let n = 1024;
    let x = C64::new(n as f64 + 2.0 * (n as f64).sqrt(), 0.0);
    let routed = evaluate(&p, n, x).unwrap();
    assert_eq!(routed.result.formula, FormulaTag::TurnRight);
    assert!(routed.note.is_none());
}

#[test]
fn zeros_fill_the_unit_interval() {
    let p = params(1.0);
    let n = 60;
    let zeros = find_zeros(&p, n, -0.5, 2.0 * n as f64).unwrap();
    assert_eq!(zeros.len(), n);
    assert!(zeros.windows(2).all(|w| w[0].x_empirical < w[1].x_empirical));
    let xs: Vec<f64> = zeros.iter().map(|z| z.x_empirical).collect();
    let bins = density_histogram(&xs, n, 5);
    let inside: usize = bins.iter().map(|b| b.count).sum();
    assert!(inside <= n && inside + 2 * (n as f64).sqrt() as usize >= n);
}
