use std::f64::consts::{E, LN_2, PI};

use num_rational::BigRational;
use proptest::prelude::*;
use steklov_lab::bounds::plot::{curves_csv, curves_svg};
use steklov_lab::bounds::*;
use steklov_lab::precision::parse_ratio;
use steklov_lab::volumes::checks::tilde_w_f64;
use steklov_lab::volumes::VolumeTable;

fn r(s: &str) -> BigRational {
    parse_ratio(s).unwrap()
}

#[test]
fn genus_one_anchor() {
    let s = BoundaryLengthSchedule { description: "fixed".into(), coefficients: vec![(0.0, 2.0), (0.0, 3.5)] };
    let l = s.lengths(1.0);
    assert_eq!(collar_first(l[0], l[1], 0.1, 1.0), 7.0);
    // log 1 = 0: curve 2 vanishes at g = 1, which a decay curve rejects.
    assert_eq!(collar_second(0.1, 1.0), 0.0);
    assert!(collar_failure_bounds(&s, 0.1, &[1.0, 10.0]).is_err());
    let m = multicurve_expectation_bound(1.0, 3, 2.5).unwrap();
    assert_eq!(m.structural, 5f64.exp());
}

#[test]
fn second_curve_rises_before_its_peak() {
    // log^2 g / g^{2 eps} peaks at g = e^{1/eps}; for eps = 0.1 that is
    // about 22026, between the two sample points.
    let f = |g: f64| g.ln().powi(2) / g.powf(0.2);
    let s = BoundaryLengthSchedule::log_fraction(1, 0.5);
    let (_, c) = collar_failure_bounds(&s, 0.1, &[1e3, 1e6]).unwrap();
    let (a, b) = (c.value_at(1e3).unwrap(), c.value_at(1e6).unwrap());
    assert!((a - f(1e3)).abs() < 1e-12 * a && (b - f(1e6)).abs() < 1e-12 * b);
    assert!((a - 11.98599).abs() < 1e-4 && (b - 12.04298).abs() < 1e-4);
    assert!(b > a);
    let peak = 10f64.exp();
    assert!(f(peak) > f(peak * 0.9) && f(peak) > f(peak * 1.1));
}

#[test]
fn precise_curve_matches_f64() {
    let p = collar_second_precise(&r("1e6"), &r("0.1"), 40);
    let want = (1e6f64).ln().powi(2) / 10f64.powf(1.2);
    assert!((p.to_f64() - want).abs() < 1e-13 * want);
    let text = p.to_decimal(40);
    assert!(text.starts_with("12.04297758897"), "{text}");
}

proptest! {
    #[test]
    fn tail_decreases_past_the_peak(eps in 0.05f64..0.45, step in 1.01f64..3.0) {
        let start = (1.0 / eps).exp();
        let grid: Vec<f64> = (0..12).map(|k| start * step.powi(k)).collect();
        let s = BoundaryLengthSchedule::log_fraction(2, 0.5);
        let (_, c) = collar_failure_bounds(&s, eps, &grid).unwrap();
        prop_assert!(c.decreasing_from(start));
        // d/dx [x^2 e^{-2 eps x}] < 0 for x = log g > 1 / eps.
        for &g in &grid[1..] {
            let x = g.ln();
            prop_assert!(2.0 * x - 2.0 * eps * x * x < 0.0);
        }
    }

    #[test]
    fn bounds_are_positive_and_finite(g in 2.0f64..1e12, eps in 0.01f64..0.49, l in 1.0001f64..40.0, m in 1u32..5) {
        let s = BoundaryLengthSchedule::log_fraction(2, 0.5);
        let (a, b) = collar_failure_bounds(&s, eps, &[g]).unwrap();
        prop_assert!(a.is_some() && b.samples[0].1 > 0.0);
        let mc = multicurve_expectation_bound(g, m, l).unwrap();
        prop_assert!(mc.structural > 0.0 && mc.structural.is_finite());
        prop_assert!(mc.inner_sum <= mc.inner_bound);
    }
}

#[test]
fn bessel_bound_on_one_to_hundred() {
    for i in 0..=990 {
        let l = 1.0 + i as f64 * 0.1;
        // Brute force with the terms computed in log space.
        let mut brute = 0.0;
        for s in 0..400 {
            let ln_fact: f64 = (1..=s).map(|k| (k as f64).ln()).sum();
            brute += (s as f64 * l.ln() - 2.0 * ln_fact).exp();
        }
        assert!((bessel_series(l) - brute).abs() < 1e-12 * brute);
        assert!(brute <= (2.0 * l.sqrt()).exp());
    }
}

#[test]
fn multicurve_decay_rate() {
    let grid = geometric_grid(3, 9);
    let c = multicurve_decay(0.1, 1, &grid).unwrap();
    for &(g, v) in &c.samples {
        assert!((v - g.powf(-0.2)).abs() < 1e-12 * v);
    }
    assert!(c.decreasing_from(1e3));
    assert!(multicurve_expectation_bound(10.0, 1, 1.0).is_err());
    assert!(multicurve_expectation_bound(10.0, 0, 2.0).is_err());
}

#[test]
fn arc_counts() {
    assert_eq!(max_arc_count(0.1, 0, 0.1, 1e6).unwrap(), 0);
    let g: f64 = 1e6;
    let want = (0.1 * 40.0 * PI / (0.8 * g.ln())).floor() as u64;
    assert_eq!(max_arc_count(0.1, 40, 0.1, g).unwrap(), want);
    assert!(max_arc_count(0.1, 4, 0.5, g).is_err());
}

#[test]
fn half_surface_values() {
    let t = VolumeTable::build(9);
    let s = BoundaryLengthSchedule::log_fraction(2, 0.5);
    let (c1, c2) = (0.08, 0.085);
    // m = 0: only the boundary term survives.
    let b = half_surface_bound(&t, 3, 2, 0, c1, c2, &s).unwrap();
    assert!((b.value.unwrap() - (c2 / c1 * 0.5 * 3f64.ln()).exp()).abs() < 1e-12);
    let b = half_surface_bound(&t, 3, 2, 2, c1, c2, &s).unwrap();
    let pre = (2.0 * PI * 2.0 * c2 + c2 / c1 * s.total(3.0)).exp();
    let ratio = tilde_w_f64(&t, 2).unwrap() * tilde_w_f64(&t, 4).unwrap() / t.volume(3, 2).unwrap();
    assert!((b.value.unwrap() - pre * ratio).abs() < 1e-12 * pre * ratio);
    // Outside the table the volume factor stays symbolic.
    let far = half_surface_bound(&t, 12, 2, 5, c1, c2, &s).unwrap();
    assert!(far.value.is_none() && far.expression.contains("W~_5"));
    assert!(half_surface_bound(&t, 3, 2, 1, c2, c1, &s).is_err());
}

#[test]
fn reindexing_is_symmetric_without_slack() {
    let t = VolumeTable::build(9);
    let rows = reindex_checks(&t, &r("0"), 12).unwrap();
    assert!(!rows.is_empty());
    for row in &rows {
        // With eps' = 0 only the midpoint survives, where m = m'.
        assert_eq!(2 * row.m, row.total);
        assert_eq!(row.m, row.m_prime);
        assert!(row.volumes_equal && row.exponent_ok);
    }
    let wide = reindex_checks(&t, &r("0.5"), 12).unwrap();
    assert!(wide.len() > rows.len());
    assert!(wide.iter().all(|x| x.volumes_equal && x.exponent_ok));
    assert!(reindex_checks(&t, &r("1"), 12).is_err());
}

#[test]
fn tail_condition_threshold() {
    // 4 pi c2 < 2 ln 2 at eps' = 0.
    let edge = LN_2 / (2.0 * PI);
    assert!(tail_condition(edge * 0.999, 0.0));
    assert!(!tail_condition(edge * 1.001, 0.0));
}

#[test]
fn windows_and_admissibility() {
    let s = BoundaryLengthSchedule::log_fraction(1, 0.5);
    let grid = geometric_grid(3, 9);
    let rep = admissibility_and_windows(&s, omega_sqrt_loglog, &grid, 0.05);
    assert!(rep.admissible() && rep.omega_ratio_decreasing);
    for row in &rep.rows {
        assert!((row.ratio_to_log - 0.5).abs() < 1e-12);
    }
    let at = admissibility_and_windows(&s, |_| 0.0, &[E.exp()], 0.0);
    assert!((at.rows[0].systole_center - (2.0 * E - 4.0)).abs() < 1e-12);
    // Lengths below one at small genus are caught.
    let small = admissibility_and_windows(&s, omega_sqrt_loglog, &[2.0, 100.0], 0.0);
    assert!(!small.lengths_exceed_one);
}

#[test]
fn grids() {
    assert_eq!(parse_grid("3:5").unwrap(), vec![1e3, 1e4, 1e5]);
    assert!(parse_grid("x").is_err());
    assert!(parse_grid("0.5,2").is_err());
}

#[test]
fn curve_exports() {
    let c = multicurve_decay(0.1, 1, &geometric_grid(3, 4)).unwrap();
    let csv = curves_csv(&[&c]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("label,g,value"));
    let svg = curves_svg("decay", &[&c]);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(DecayCurve::new("bad", vec![(2.0, 1.0), (1.0, 1.0)]).is_err());
    assert!(DecayCurve::new("bad", vec![(1.0, 0.0)]).is_err());
}
