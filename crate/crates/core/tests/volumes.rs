mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use common::{dilaton_equation_holds, evaluate_expanded, full_terms, string_equation_holds};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use steklov_lab::volumes::checks::*;
use steklov_lab::volumes::*;
use steklov_lab::LabError;

const BUDGET: usize = 9;

fn table() -> &'static VolumeTable {
    static T: OnceLock<VolumeTable> = OnceLock::new();
    T.get_or_init(|| VolumeTable::build(BUDGET))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn three_holed_sphere_is_one() {
    let p = table().get(0, 3).unwrap();
    assert_eq!(p.constant_term(), q(1, 1));
    assert_eq!(full_terms(p).len(), 1);
    for x in [[0.0, 0.0, 0.0], [1.0, 5.0, 9.5]] {
        assert_eq!(p.evaluate(&x).unwrap(), 1.0);
    }
}

/// Published closed forms of the small polynomials (coefficients of
/// `L^{2d} pi^{2k}`), independent of the recursion used here.
#[test]
fn small_polynomials_match_known_forms() {
    let t = table();
    let v11 = t.get(1, 1).unwrap();
    assert_eq!((v11.coefficient(&[1]), v11.coefficient(&[0])), (q(1, 48), q(1, 12)));
    // V_{0,4} = (4 pi^2 + sum L_i^2) / 2
    let v04 = t.get(0, 4).unwrap();
    assert_eq!(v04.coefficient(&[0, 0, 0, 0]), q(2, 1));
    assert_eq!(v04.coefficient(&[0, 1, 0, 0]), q(1, 2));
    // V_{1,2} = (4 pi^2 + L1^2 + L2^2)(12 pi^2 + L1^2 + L2^2) / 192
    let v12 = t.get(1, 2).unwrap();
    for (d, c) in [([0, 0], q(48, 192)), ([1, 0], q(16, 192)), ([2, 0], q(1, 192)), ([1, 1], q(2, 192))] {
        assert_eq!(v12.coefficient(&d), c, "{d:?}");
    }
    // V_{0,5}(0) = 10 pi^4
    assert_eq!(t.get(0, 5).unwrap().constant_term(), q(10, 1));
    assert_eq!(t.closed_volume(2).unwrap(), &q(43, 2160));
    assert_eq!(t.closed_volume(3).unwrap(), &q(176557, 1209600));
    let v11_at = |l: f64| (l * l + 4.0 * PI * PI) / 48.0;
    assert!((v11.evaluate(&[3.0]).unwrap() - v11_at(3.0)).abs() < 1e-14);
}

#[test]
fn string_and_dilaton_equations_on_every_cell() {
    let t = table();
    let mut checked = 0;
    for (g, n) in t.cells() {
        let Ok(big) = t.get(g, n + 1) else { continue };
        if n == 0 {
            continue;
        }
        let small = t.get(g, n).unwrap();
        assert!(string_equation_holds(big, small), "string ({g},{n})");
        assert!(dilaton_equation_holds(big, small), "dilaton ({g},{n})");
        checked += 1;
    }
    assert!(checked >= 15, "{checked}");
}

#[test]
fn dilaton_reproduces_closed_volumes() {
    let t = table();
    for g in t.closed_genera() {
        let v1 = t.get(g, 1).unwrap();
        // sum_j 2j (-4)^j c_j = -4 (2g - 2) V_{g,0}
        let mut s = BigRational::from_integer(0.into());
        for (d, c) in full_terms(v1) {
            let j = d[0] as u32;
            s += c * BigRational::from_integer(BigInt::from(2 * j) * BigInt::from(-4).pow(j));
        }
        let want = t.closed_volume(g).unwrap() * BigRational::from_integer(BigInt::from(-4 * (2 * g as i64 - 2)));
        assert_eq!(s, want, "g = {g}");
    }
}

#[test]
fn peel_orders_agree() {
    let other = VolumeTable::build_with(BUDGET, Peel::Smallest);
    for (g, n) in table().cells() {
        assert_eq!(table().get(g, n).unwrap(), other.get(g, n).unwrap(), "({g},{n})");
    }
    for g in table().closed_genera() {
        assert_eq!(table().closed_volume(g).unwrap(), other.closed_volume(g).unwrap());
    }
}

#[test]
fn recomputation_is_identical() {
    let a = VolumeTable::build(6);
    let b = VolumeTable::build(6);
    assert_eq!(text::export(&a), text::export(&b));
}

#[test]
fn structural_invariants() {
    for (g, n) in table().cells() {
        let p = table().get(g, n).unwrap();
        assert_eq!(p.degree(), 3 * g + n - 3);
        assert!(p.all_positive());
        let top: Vec<_> = full_terms(p).into_iter().filter(|(d, _)| d.iter().map(|&x| x as usize).sum::<usize>() == p.dimension()).collect();
        assert!(!top.is_empty() && top.iter().all(|(_, c)| c > &q(0, 1)));
        assert!(p.constant_term() > q(0, 1));
        assert_eq!(p.evaluate(&vec![0.0; n]).unwrap(), table().volume(g, n).unwrap());
    }
}

#[test]
fn text_round_trip() {
    let t = VolumeTable::build(7);
    let s = text::export(&t);
    let back = text::import(&s).unwrap();
    assert_eq!(back.cells(), t.cells());
    for (g, n) in t.cells() {
        assert_eq!(back.get(g, n).unwrap(), t.get(g, n).unwrap());
    }
    assert_eq!(back.closed_genera(), t.closed_genera());
    assert_eq!(text::export(&back), s);
    assert!(text::import("V 0 3\n0 0 0 1 1 1\n").is_err());
    assert!(text::import("0 0 0 1 1 0\n").is_err());
}

#[test]
fn budget_and_type_errors() {
    let t = VolumeTable::build(3);
    assert!(matches!(t.get(2, 1), Err(LabError::Budget { .. })));
    assert!(t.get(0, 2).is_err());
    assert!(t.get(1, 0).is_err());
    assert!(t.get(1, 1).unwrap().evaluate(&[1.0, 2.0]).is_err());
}

#[test]
fn precise_evaluation_matches_expansion() {
    let p = table().get(1, 3).unwrap();
    let x = [q(1, 2), q(3, 1), q(27, 10)];
    let xf = [0.5, 3.0, 2.7];
    let precise = p.evaluate_precise(&x, 60).unwrap();
    let want = evaluate_expanded(p, &xf);
    assert!((precise.to_f64() - want).abs() < 1e-12 * want);
    assert!((p.evaluate(&xf).unwrap() - want).abs() < 1e-12 * want);
    assert!(precise.to_decimal(55).starts_with(&format!("{:.8}", want)[..8]));
}

#[test]
fn tilde_w_by_parity() {
    let t = table();
    for k in 1..=6 {
        let want = if k % 2 == 0 { t.volume(k / 2, 2).unwrap() } else { t.volume((k + 1) / 2, 1).unwrap() };
        assert_eq!(tilde_w_f64(t, k).unwrap(), want);
        assert!(want > 0.0);
    }
    assert!(tilde_w(t, 0).is_err());
}

#[test]
fn lemma_checks_hold() {
    let r = check_volume_lemmas(table(), 3).unwrap();
    assert!(r.all_hold());
    for c in &r.cells {
        assert!(c.worst_exp_ratio <= 1.0 + 1e-12);
        assert_eq!(c.points, 5u64.pow(c.n as u32));
    }
    assert!(!r.inclusions.is_empty());
    let four_pi2 = 4.0 * PI * PI;
    assert!((four_pi2 - 39.478).abs() < 1e-3);
    // Ratios recomputed here from the table.
    for row in &r.ratios {
        let a = table().volume(row.g, row.n + 1).unwrap();
        let b = table().volume(row.g, row.n).unwrap();
        assert!((row.boundary_ratio - a / (2.0 * row.g as f64 * b) / four_pi2).abs() < 1e-12);
    }
}

#[test]
fn single_summand_tail() {
    let t = table();
    // k = 1, g = 3: only g1 = 1, g2 = 2.
    let s = sum_asymptotics(t, 0, 1, 0.0, 0, 3).unwrap();
    assert_eq!(s.terms, 1);
    let one = t.volume(1, 1).unwrap() * t.volume(2, 1).unwrap();
    assert!((s.lhs - one).abs() < 1e-12 * one);
    assert!((s.rhs_scale - t.volume(3, 0).unwrap() / 3.0).abs() < 1e-12 * s.rhs_scale);
    assert!(sum_asymptotics(t, 0, 1, 2.0 * std::f64::consts::LN_2, 0, 3).is_err());
}

#[test]
fn tail_ratios_in_window() {
    let rows = sum_asymptotics_range(table(), 0, 1, 0.0, 0);
    assert!(rows.len() >= 2);
    for s in rows {
        assert!(SUM_RATIO_WINDOW.0 < s.ratio && s.ratio < SUM_RATIO_WINDOW.1, "{s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_invariance(a in 0.0f64..10.0, b in 0.0f64..10.0, c in 0.0f64..10.0) {
        for (g, n) in [(0usize, 3usize), (1, 3), (0, 6), (2, 3)] {
            let p = table().get(g, n).unwrap();
            let mut x: Vec<f64> = [a, b, c].into_iter().cycle().take(n).collect();
            let v = p.evaluate(&x).unwrap();
            x.reverse();
            let w = p.evaluate(&x).unwrap();
            prop_assert!((v - w).abs() <= 1e-12 * v);
            x.rotate_left(1);
            prop_assert!((p.evaluate(&x).unwrap() - v).abs() <= 1e-12 * v);
        }
    }

    #[test]
    fn sandwich_between_one_and_exponential(x in proptest::collection::vec(0.0f64..10.0, 2)) {
        for g in 0..=3usize {
            let Ok(p) = table().get(g, 2) else { continue };
            let v0 = p.evaluate(&[0.0, 0.0]).unwrap();
            let r = p.evaluate(&x).unwrap() / v0;
            prop_assert!(r >= 1.0 && r <= ((x[0] + x[1]) / 2.0).exp() * (1.0 + 1e-12));
            let sinh: f64 = x.iter().map(|&t| if t == 0.0 { 1.0 } else { (t / 2.0).sinh() / (t / 2.0) }).product();
            prop_assert!(r <= sinh * (1.0 + 1e-12));
        }
    }
}
