//! A fixed set of bordered surfaces covering pants, four-holed spheres,
//! one- and two-holed tori and a one-holed genus-two surface, with varied
//! Fenchel–Nielsen data.

use super::spec::SurfaceSpec;

type Gluing = ([usize; 2], [usize; 2], f64, f64);

fn spec(name: &str, pants: usize, gluings: &[Gluing], boundaries: &[(usize, usize, f64)], resolution: f64) -> SurfaceSpec {
    SurfaceSpec {
        name: Some(name.to_string()),
        pants: Some(pants),
        gluings: gluings.to_vec(),
        boundaries: boundaries.to_vec(),
        disk: None,
        resolution,
    }
}

pub fn standard_corpus(resolution: f64) -> Vec<SurfaceSpec> {
    vec![
        spec("pants_2_2_2", 1, &[], &[(0, 0, 2.0), (0, 1, 2.0), (0, 2, 2.0)], resolution),
        spec("pants_1_2_3", 1, &[], &[(0, 0, 1.0), (0, 1, 2.0), (0, 2, 3.0)], resolution),
        spec("pants_0.8_1.5_4", 1, &[], &[(0, 0, 0.8), (0, 1, 1.5), (0, 2, 4.0)], resolution),
        spec(
            "s04_a",
            2,
            &[([0, 0], [1, 0], 2.5, 0.3)],
            &[(0, 1, 2.0), (0, 2, 2.2), (1, 1, 1.8), (1, 2, 3.0)],
            resolution,
        ),
        spec(
            "s04_b",
            2,
            &[([0, 0], [1, 0], 1.2, 0.0)],
            &[(0, 1, 2.0), (0, 2, 2.0), (1, 1, 2.0), (1, 2, 2.0)],
            resolution,
        ),
        spec("s11_a", 1, &[([0, 0], [0, 1], 3.0, 0.7)], &[(0, 2, 2.5)], resolution),
        spec("s11_b", 1, &[([0, 0], [0, 1], 1.5, 0.0)], &[(0, 2, 1.0)], resolution),
        spec("s11_c", 1, &[([0, 0], [0, 1], 2.0, 1.0)], &[(0, 2, 4.0)], resolution),
        spec(
            "s12_a",
            2,
            &[([0, 0], [1, 0], 2.0, 0.2), ([0, 1], [1, 1], 2.5, 0.5)],
            &[(0, 2, 2.0), (1, 2, 2.0)],
            resolution,
        ),
        spec(
            "s12_b",
            2,
            &[([0, 0], [1, 0], 1.5, 0.0), ([0, 1], [1, 1], 3.0, 1.2)],
            &[(0, 2, 1.0), (1, 2, 3.0)],
            resolution,
        ),
        spec(
            "s21",
            3,
            &[([0, 0], [0, 1], 2.0, 0.4), ([0, 2], [1, 0], 2.2, 0.0), ([1, 1], [2, 0], 1.8, 0.6), ([2, 1], [2, 2], 2.4, 0.1)],
            &[(1, 2, 2.0)],
            resolution,
        ),
    ]
}
