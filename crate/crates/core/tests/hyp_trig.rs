mod common;

use common::hexagon_oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_lab::hyp_trig::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[test]
fn closed_forms_match_hyperboloid_hexagons() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = [0; 3].map(|_| rng.random_range(0.1..=20.0));
        let o = hexagon_oracle(l);
        let seams = pants_seams(l[0], l[1], l[2]).unwrap();
        for k in 0..3 {
            worst = worst.max(rel(seams[k], o.seams[k]));
            let c = collar_width(l[k], l[(k + 1) % 3], l[(k + 2) % 3]).unwrap();
            worst = worst.max(rel(c.width, o.widths[k]));
            worst = worst.max(rel(c.seam, o.seams[k]));
        }
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

#[test]
fn symmetric_pants_against_hyperboloid() {
    let o = hexagon_oracle([2.0, 2.0, 2.0]);
    for k in 0..3 {
        assert!((o.seams[k] - 1.7049).abs() < 5e-5);
        assert!((o.widths[k] - 1.8061).abs() < 5e-5);
        assert!((o.widths[k].cosh() - 3.1255).abs() < 5e-5);
    }
    let c = collar_width(2.0, 2.0, 2.0).unwrap();
    assert!((c.width - o.widths[0]).abs() < 1e-13);
    // Dominant-branch example: (alpha - eta)/2 = 9 with a bounded remainder.
    let gap = collar_asymptotic_gap(2.0, 20.0, 2.0).unwrap();
    let o = hexagon_oracle([2.0, 20.0, 2.0]);
    assert!((gap - (o.widths[0] - 9.0)).abs() < 1e-10);
    assert!(gap.abs() <= COLLAR_GAP_BOUND);
}

#[test]
fn gap_bounded_on_scaling_grid() {
    let pts: Vec<f64> = (0..21).map(|i| 1.1 + (40.0 - 1.1) * i as f64 / 20.0).collect();
    let mut sup = 0.0f64;
    for &e in &pts {
        for &a in &pts {
            for &b in &pts {
                let gap = collar_asymptotic_gap(e, a, b).unwrap();
                sup = sup.max(gap.abs());
                assert!(collar_width(e, a, b).unwrap().satisfies_length_bound(COLLAR_GAP_BOUND));
            }
        }
    }
    assert!(sup <= COLLAR_GAP_BOUND && sup <= 3.0, "{sup}");
}

#[test]
fn xi_bound_on_a_constructed_pants() {
    // In the pants (eta, eta~, xi), the seam between eta and eta~ is the
    // arc of length d, and the boundary xi is no longer than the bound.
    for (e, et, xi) in [(1.0, 1.5, 2.0), (3.0, 2.0, 4.9), (0.5, 0.5, 0.9)] {
        let d = pants_seams(e, et, xi).unwrap()[0];
        assert!(xi <= xi_length_bound(e, et, d).unwrap());
    }
}

#[test]
fn standard_collar_inside_the_pants_collar() {
    for l in [0.2, 1.0, 3.0, 8.0] {
        let w = standard_collar_width(l);
        assert!(collar_width(l, l, l).unwrap().width >= w);
    }
}

fn len() -> impl Strategy<Value = f64> {
    0.05f64..30.0
}

proptest! {
    #[test]
    fn seams_relabel_cyclically(a in len(), b in len(), c in len()) {
        let s = pants_seams(a, b, c).unwrap();
        let t = pants_seams(b, c, a).unwrap();
        for k in 0..3 {
            prop_assert!(rel(t[k], s[(k + 1) % 3]) < 1e-13);
            prop_assert!(s[k] > 0.0);
        }
    }

    #[test]
    fn seams_return_the_cuffs(a in len(), b in len(), c in len()) {
        let h = Hexagon::from_cuffs([a, b, c]).unwrap();
        let back = h.half_cuffs_from_seams();
        for k in 0..3 {
            prop_assert!((back[k] - h.half_cuffs[k]).abs() < 1e-9 * h.half_cuffs[k].max(1.0));
        }
        prop_assert!(h.sides().iter().all(|&s| s > 0.0 && s.is_finite()));
    }

    #[test]
    fn collar_routes_agree(e in len(), a in len(), b in len()) {
        let c = collar_width(e, a, b).unwrap();
        prop_assert!(c.width >= 0.0);
        let via = c.cosh_width_via_seam();
        prop_assert!((via / c.width.cosh() - 1.0).abs() < 1e-10);
        let swapped = collar_width(e, b, a).unwrap();
        prop_assert!(rel(swapped.width, c.width) < 1e-12);
    }

    #[test]
    fn collar_increases_with_partners(e in len(), a in len(), b in len()) {
        let d0 = collar_width(e, a, b).unwrap().width;
        prop_assert!(collar_width(e, a * 1.01, b).unwrap().width > d0);
        prop_assert!(collar_width(e, a, b * 1.01).unwrap().width > d0);
    }
}
