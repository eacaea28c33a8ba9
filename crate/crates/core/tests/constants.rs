use std::f64::consts::{LN_2, PI};

use proptest::prelude::*;
use steklov_lab::constants::levelset::LevelMeasure;
use steklov_lab::constants::*;
use steklov_lab::hyp_trig::pants_seams;
use steklov_lab::steklov::steklov_spectrum;
use steklov_lab::surface::*;

fn pants_surface(l: [f64; 3]) -> (PantsGraph, FnCoordinates) {
    (PantsGraph::single_pants(), FnCoordinates { cuff_lengths: vec![], twists: vec![], boundary_lengths: l.to_vec() })
}

fn s11() -> (PantsGraph, FnCoordinates) {
    (
        PantsGraph::one_holed_torus(),
        FnCoordinates { cuff_lengths: vec![3.0], twists: vec![0.7], boundary_lengths: vec![2.5] },
    )
}

/// Independent count of cell-union candidates: per pants choose whole,
/// cut along the seams, or cut by the arc at one boundary cuff; then every
/// nonempty proper union of cells that separates each cut pants.
fn brute_force_count(pants: usize, boundary_cuffs_per_pants: &[usize]) -> usize {
    let options: Vec<usize> = boundary_cuffs_per_pants.iter().map(|b| 2 + b).collect();
    let mut total = 0;
    let schemes: usize = options.iter().product();
    for mut code in 0..schemes {
        let mut cells = Vec::new(); // (pants, half) where half = None for whole
        for (p, &o) in options.iter().enumerate() {
            let choice = code % o;
            code /= o;
            if choice == 0 {
                cells.push((p, None));
            } else {
                cells.push((p, Some(0)));
                cells.push((p, Some(1)));
            }
        }
        for mask in 1u32..(1 << cells.len()) - 1 {
            let inside = |i: usize| mask >> i & 1 == 1;
            let ok = (0..pants).all(|p| {
                let halves: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].0 == p && cells[i].1.is_some()).collect();
                halves.is_empty() || inside(halves[0]) != inside(halves[1])
            });
            total += ok as usize;
        }
    }
    total
}

#[test]
fn candidate_counts_match_brute_force() {
    let (g, c) = s11();
    let mesh = build_mesh(&g, &c, 0.2).unwrap();
    let set = enumerate_candidates(&g, &c, &mesh, &CandidateOptions::default()).unwrap();
    assert_eq!(set.base_count, brute_force_count(1, &[1]));
    assert_eq!(set.base_count, 4);
    // The free-boundary arc at the boundary cuff, and cuts crossing the
    // glued cuff.
    assert!(set.systems.iter().any(|s| s.geodesic && s.segments.iter().any(|x| x.kind == SegmentKind::FreeBoundaryArc)));
    assert!(set.systems[..set.base_count].iter().all(|s| s.total_length > 0.0));

    let (g, c) = pants_surface([2.0, 2.0, 2.0]);
    let mesh = build_mesh(&g, &c, 0.2).unwrap();
    let set = enumerate_candidates(&g, &c, &mesh, &CandidateOptions::default()).unwrap();
    assert_eq!(set.base_count, brute_force_count(1, &[3]));

    let four = PantsGraph {
        pants: 2,
        gluings: vec![(Slot::new(0, 0), Slot::new(1, 0))],
        boundary_slots: vec![Slot::new(0, 1), Slot::new(0, 2), Slot::new(1, 1), Slot::new(1, 2)],
    };
    let c = FnCoordinates { cuff_lengths: vec![2.0], twists: vec![0.3], boundary_lengths: vec![2.0; 4] };
    let set = enumerate_for_graph(&four, &c, &CandidateOptions::default()).unwrap();
    assert_eq!(set.base_count, brute_force_count(2, &[2, 2]));
}

#[test]
fn mismatched_mesh_is_rejected() {
    let (g, c) = s11();
    let (pg, pc) = pants_surface([2.0, 2.0, 2.0]);
    let mesh = build_mesh(&pg, &pc, 0.2).unwrap();
    assert!(enumerate_candidates(&g, &c, &mesh, &CandidateOptions::default()).is_err());
}

#[test]
fn offsets_scale_by_cosh() {
    let (g, c) = s11();
    let set = enumerate_for_graph(&g, &c, &CandidateOptions::default()).unwrap();
    let mut checked = 0;
    for s in &set.systems {
        let Some((parent, _)) = s.label.split_once(" offset d=") else { continue };
        let p = set.systems.iter().find(|x| x.label == parent).unwrap();
        let d = s.segments[0].offset;
        assert!((s.total_length - p.total_length * d.cosh()).abs() < 1e-12 * s.total_length);
        let grow: f64 = p.segments.iter().map(|x| x.length * d.sinh()).sum();
        assert!((s.omega_area - p.omega_area - grow).abs() < 1e-12);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn zero_offset_is_the_geodesic() {
    for (l, a) in [(1.0, 2.0), (3.0, PI), (0.2, 10.0)] {
        assert_eq!(offset_quotient(l, a, 0.0), l / a);
    }
}

#[test]
fn offset_formulas_match_the_mesh() {
    // A boundary cuff of length l: its d-neighbourhood is a collar of
    // length l cosh d and area l sinh d.
    let (g, c) = pants_surface([2.0, 2.0, 2.0]);
    let mesh = build_mesh(&g, &c, 0.1).unwrap();
    for d in [0.2, 0.4] {
        let (len, area) = mesh_offset_measure(&mesh, &[ChartLine::cuff(&mesh, 0, 0)], d);
        assert!((len / (2.0 * d.cosh()) - 1.0).abs() < 0.02, "{len}");
        assert!((area / (2.0 * d.sinh()) - 1.0).abs() < 0.02, "{area}");
    }
}

#[test]
fn symmetric_pants_seam_halving() {
    let (g, c) = pants_surface([2.0, 2.0, 2.0]);
    let set = enumerate_for_graph(&g, &c, &CandidateOptions::default()).unwrap();
    let front = set.systems.iter().find(|s| s.label == "cells {P0front}").unwrap();
    let seams = pants_seams(2.0, 2.0, 2.0).unwrap();
    // Half of every boundary cuff lies on the front hexagon.
    let want = seams.iter().sum::<f64>() / 3.0;
    assert!((front.jammes_value(set.surface_area).unwrap() - want).abs() < 1e-12);
    assert!((front.omega_area - PI).abs() < 1e-12);
    let report = estimate_constants("pants", &set).unwrap();
    assert!(report.h_j_upper.value <= want);
}

#[test]
fn equal_halves_use_either_ratio() {
    let sys = CurveSystem {
        label: "half".into(),
        segments: vec![],
        total_length: 3.0,
        omega_area: PI,
        complement_area: PI,
        exterior_length: 1.0,
        separates_surface: true,
        all_complement_components_meet_boundary: true,
        geodesic: true,
    };
    assert_eq!(sys.cheeger_value(), 3.0 / PI);
    assert_eq!(sys.jammes_value(2.0 * PI), Some(3.0));
    let big = CurveSystem { omega_area: 4.0, complement_area: 2.0 * PI - 4.0, ..sys.clone() };
    assert_eq!(big.jammes_value(2.0 * PI), None);
    assert_eq!(big.cheeger_value(), 3.0 / (2.0 * PI - 4.0));
}

#[test]
fn closed_surface_has_no_jammes_candidate() {
    let closed = PantsGraph {
        pants: 2,
        gluings: (0..3).map(|c| (Slot::new(0, c), Slot::new(1, c))).collect(),
        boundary_slots: vec![],
    };
    let c = FnCoordinates { cuff_lengths: vec![2.0; 3], twists: vec![0.0, 0.3, 0.0], boundary_lengths: vec![] };
    let set = enumerate_for_graph(&closed, &c, &CandidateOptions::default()).unwrap();
    assert!(estimate_constants("closed", &set).is_err());
}

#[test]
fn lemma_holds_on_reports() {
    for (g, c) in [s11(), pants_surface([2.0, 2.0, 2.0]), pants_surface([1.0, 3.0, 5.0])] {
        let set = enumerate_for_graph(&g, &c, &CandidateOptions::default()).unwrap();
        let r = estimate_constants("s", &set).unwrap();
        assert!(r.h_c_upper.value > 0.0 && r.h_j_upper.value > 0.0);
        if let Some(h) = &r.big_h_upper {
            assert!(h.value > 0.0);
            assert!(r.lemma_consistent(1e-12).unwrap());
        }
    }
}

/// `{Re z >= c}` in the Poincare model of the radius-1 hyperbolic disk:
/// hyperbolic length of the chord over that of the boundary arc.
fn disk_chord_quotient(c: f64) -> f64 {
    let rho = 0.5f64.tanh();
    let lam = |x: f64, y: f64| 2.0 / (1.0 - x * x - y * y);
    let h = (rho * rho - c * c).sqrt();
    let n = 4000;
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let dx = (b - a) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(a + i as f64 * dx)
            })
            .sum::<f64>()
            * dx
            / 3.0
    };
    let chord = simpson(&|y| lam(c, y), -h, h);
    let phi = (c / rho).acos();
    let arc = simpson(&|_| lam(rho, 0.0) * rho, -phi, phi);
    chord / arc
}

#[test]
fn disk_levelset_against_chord_oracle() {
    let oracle = (0..200).map(|i| disk_chord_quotient(0.5f64.tanh() * i as f64 / 200.0)).fold(f64::INFINITY, f64::min);
    assert!((disk_chord_quotient(0.0) - 2.0 / (PI * 1f64.sinh())).abs() < 1e-9);
    let mesh = disk_mesh_level(1.0, Metric::Hyperbolic, 5).unwrap();
    let s = steklov_spectrum(&mesh, 2).unwrap();
    let sweep = levelset_sweep(&s, &mesh).unwrap();
    let (j, _) = sweep.jammes.unwrap();
    assert!((j - oracle).abs() < 0.02 * oracle, "{j} vs {oracle}");
    assert!(sweep.positive_area <= 0.5 * sweep.surface_area);
    // Just above zero the superlevel set is the positive half.
    let first = &sweep.levels[0];
    assert!((first.area - sweep.positive_area).abs() < 0.01 * sweep.surface_area);
    let report = with_sigma1(merge_levelset(base_report(), &sweep), s.eigenvalues[1]);
    assert!(report.levelset_merged);
    assert!(report.h_j_upper.value <= 1.0);
    assert_eq!(report.jammes_slack, Some(jammes_check(s.eigenvalues[1], &report)));
}

fn base_report() -> ConstantsReport {
    let w = Witness { value: 1e9, total_length: 1.0, segments: 1, label: "none".into() };
    ConstantsReport {
        surface: "disk".into(),
        h_c_upper: w.clone(),
        h_j_upper: w,
        big_h_upper: None,
        lemma_lower: None,
        sigma1: None,
        jammes_slack: None,
        levelset_merged: false,
    }
}

/// Components of `{f < t}` from the vertex graph. For a linear function on
/// a triangle the sublevel set is convex, so this is exact.
fn complement_oracle(mesh: &TriangleMesh, f: &[f64], t: f64) -> (usize, bool) {
    let n = mesh.vertex_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for e in &mesh.edges {
        if f[e[0]] < t && f[e[1]] < t {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            parent[a] = b;
        }
    }
    let boundary = mesh.boundary_vertex_mask();
    let mut roots = std::collections::BTreeMap::new();
    for v in (0..n).filter(|&v| f[v] < t) {
        let r = find(&mut parent, v);
        *roots.entry(r).or_insert(false) |= boundary[v];
    }
    (roots.len(), roots.values().all(|&b| b))
}

fn assert_levels_nested(levels: &[LevelMeasure]) {
    for w in levels.windows(2) {
        assert!(w[0].threshold < w[1].threshold);
        assert!(w[1].area <= w[0].area + 1e-12);
    }
}

#[test]
fn level_sets_are_nested_and_admissibility_is_exact() {
    let (g, c) = s11();
    let mesh = build_mesh(&g, &c, 0.2).unwrap();
    let s = steklov_spectrum(&mesh, 2).unwrap();
    let sweep = levelset_sweep(&s, &mesh).unwrap();
    assert_levels_nested(&sweep.levels);
    let f: Vec<f64> = s.eigenfunctions[1].iter().map(|v| sweep.sign * v).collect();
    for m in sweep.levels.iter().step_by(7) {
        let (count, meets) = complement_oracle(&mesh, &f, m.threshold);
        assert_eq!((m.complement_components, m.complement_meets_boundary), (count, meets));
    }
}

#[test]
fn constant_function_is_rejected() {
    let mesh = disk_mesh_level(1.0, Metric::Hyperbolic, 2).unwrap();
    let mut s = steklov_spectrum(&mesh, 1).unwrap();
    s.eigenfunctions[1] = vec![1.0; mesh.vertex_count];
    assert!(levelset_sweep(&s, &mesh).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn offset_quotient_stays_above_lemma_bound(
        l in 1e-3f64..50.0, a in 1e-3f64..50.0, d in 0.0f64..10.0, frac in 0.0f64..=1.0,
    ) {
        let h = frac * l / a;
        prop_assert!(offset_quotient(l, a, d) >= h / (h + 1.0) * (1.0 - 1e-12));
    }
}

proptest! {
    #[test]
    fn jammes_check_is_bilinear(sigma in 0.0f64..5.0, hc in 0.01f64..3.0, hj in 0.01f64..3.0) {
        let mut r = base_report();
        r.h_c_upper.value = hc;
        r.h_j_upper.value = hj;
        let term = sigma - jammes_check(sigma, &r);
        r.h_c_upper.value = 2.0 * hc;
        r.h_j_upper.value = 2.0 * hj;
        let doubled = sigma - jammes_check(sigma, &r);
        prop_assert!((doubled - 4.0 * term).abs() < 1e-12 * doubled.max(1.0));
        prop_assert!((term - hc * hj / 4.0).abs() < 1e-15 * term.max(1.0));
    }

    #[test]
    fn theorem_bounds_fall_with_eps(e1 in 1e-4f64..0.2499, e2 in 1e-4f64..0.2499, lg in 1.0f64..50.0) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = theorem1_case_calculator(lg.exp(), lo, &[], 0.0).unwrap();
        let b = theorem1_case_calculator(lg.exp(), hi, &[], 0.0).unwrap();
        prop_assert!(b.jammes_bound <= a.jammes_bound);
        prop_assert!(b.part2_constant <= a.part2_constant);
        prop_assert!(b.cheeger_bound <= a.cheeger_bound);
        prop_assert!(b.half_collar_width <= a.half_collar_width);
    }

    #[test]
    fn assembly_is_the_product_over_four(c in 0.0f64..1.0, c1 in 0.0f64..1.0) {
        prop_assert_eq!(assembled_constant(c, c1), c * c1 / 4.0);
    }
}

#[test]
fn small_eps_limits() {
    let r = theorem1_case_calculator(1e6, 1e-9, &[], 0.0).unwrap();
    assert!((r.jammes_bound - 0.5).abs() < 1e-8);
    assert!((r.cheeger_threshold - LN_2 / (2.0 * PI + LN_2)).abs() < 1e-16);
    // Evaluated value; a four-digit rounding would read 0.09936.
    assert!((r.cheeger_threshold - 0.0993569589434145).abs() < 1e-15);
    let r = theorem1_case_calculator(10f64.exp(), 0.1, &[], 19.5).unwrap();
    assert!((r.half_collar_width - 4.0).abs() < 1e-12 && (r.part2_factor_crossing - 3.5).abs() < 1e-14);
}
