//! Superlevel sets of piecewise-linear functions on a triangle mesh.
//!
//! Each triangle is laid out flat from its edge lengths, so areas and
//! level-curve lengths are those of the same secant metric the finite
//! elements use. Thresholds are taken strictly between vertex values, so a
//! level curve never runs along an edge.

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::steklov::SteklovSpectrum;
use crate::surface::TriangleMesh;

/// Most thresholds examined by one sweep.
pub const MAX_THRESHOLDS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMeasure {
    pub threshold: f64,
    /// `|{f >= threshold}|`.
    pub area: f64,
    /// Length of the level curve inside the surface.
    pub interior_length: f64,
    /// Length of boundary where `f >= threshold`.
    pub exterior_length: f64,
    /// Number of components of `{f < threshold}`.
    pub complement_components: usize,
    pub complement_meets_boundary: bool,
}

type Point = [f64; 2];

/// Flat layout of every triangle: corner `k` of triangle `t`.
pub fn flat_layout(mesh: &TriangleMesh) -> Vec<[Point; 3]> {
    (0..mesh.triangles.len())
        .map(|t| {
            // side k is opposite corner k
            let [a, b, c] = mesh.side_lengths(t);
            let x = (b * b + c * c - a * a) / (2.0 * c);
            let y = (b * b - x * x).max(0.0).sqrt();
            [[0.0, 0.0], [c, 0.0], [x, y]]
        })
        .collect()
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}

fn lerp(p: Point, q: Point, t: f64) -> Point {
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

/// Area of `{f >= s}` and length of `{f = s}` inside one flat triangle.
fn clip_triangle(pts: &[Point; 3], f: [f64; 3], s: f64) -> (f64, f64) {
    let above = f.map(|v| v >= s);
    let count = above.iter().filter(|&&a| a).count();
    match count {
        0 => (0.0, 0.0),
        3 => (shoelace(pts), 0.0),
        _ => {
            let mut poly: Vec<Point> = Vec::with_capacity(4);
            let mut cut: Vec<Point> = Vec::with_capacity(2);
            for k in 0..3 {
                let j = (k + 1) % 3;
                if above[k] {
                    poly.push(pts[k]);
                }
                if above[k] != above[j] {
                    let x = lerp(pts[k], pts[j], (s - f[k]) / (f[j] - f[k]));
                    poly.push(x);
                    cut.push(x);
                }
            }
            let len = (cut[0][0] - cut[1][0]).hypot(cut[0][1] - cut[1][1]);
            (shoelace(&poly), len)
        }
    }
}

/// Measures of the superlevel set `{f >= s}`.
pub fn superlevel_measure(
    mesh: &TriangleMesh,
    layout: &[[Point; 3]],
    on_boundary: &[bool],
    f: &[f64],
    s: f64,
) -> LevelMeasure {
    let mut area = 0.0;
    let mut interior_length = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (a, l) = clip_triangle(&layout[t], tri.map(|v| f[v]), s);
        area += a;
        interior_length += l;
    }
    let mut exterior_length = 0.0;
    for &(e, _) in &mesh.boundary_edges {
        let [u, w] = mesh.edges[e];
        let (lo, hi) = if f[u] <= f[w] { (f[u], f[w]) } else { (f[w], f[u]) };
        let len = mesh.edge_lengths[e];
        exterior_length += if lo >= s {
            len
        } else if hi >= s {
            len * (hi - s) / (hi - lo)
        } else {
            0.0
        };
    }
    let (complement_components, complement_meets_boundary) = sublevel_components(mesh, on_boundary, f, s);
    LevelMeasure {
        threshold: s,
        area,
        interior_length,
        exterior_length,
        complement_components,
        complement_meets_boundary,
    }
}

/// Components of `{f < s}` and whether each of them contains a boundary
/// vertex. For a piecewise-linear `f` these are the components of the
/// subgraph induced on vertices below `s`.
fn sublevel_components(mesh: &TriangleMesh, on_boundary: &[bool], f: &[f64], s: f64) -> (usize, bool) {
    let n = mesh.vertex_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for e in &mesh.edges {
        if f[e[0]] < s && f[e[1]] < s {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut touches = vec![false; n];
    let mut is_root = vec![false; n];
    for v in 0..n {
        if f[v] < s {
            let r = find(&mut parent, v);
            is_root[r] = true;
            touches[r] |= on_boundary[v];
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&v| is_root[v]).collect();
    (roots.len(), roots.iter().all(|&r| touches[r]))
}

/// Generic thresholds between consecutive distinct positive values of `f`,
/// plus one just above zero, thinned to at most [`MAX_THRESHOLDS`].
pub fn thresholds(f: &[f64]) -> Vec<f64> {
    let mut pos: Vec<f64> = f.iter().copied().filter(|&v| v > 0.0).collect();
    pos.sort_by(f64::total_cmp);
    pos.dedup();
    if pos.is_empty() {
        return vec![];
    }
    let mut out = vec![0.5 * pos[0]];
    out.extend(pos.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if out.len() > MAX_THRESHOLDS {
        let step = out.len() as f64 / MAX_THRESHOLDS as f64;
        out = (0..MAX_THRESHOLDS).map(|i| out[(i as f64 * step) as usize]).collect();
    }
    out
}

/// Result of sweeping the superlevel sets `{f >= sqrt(t)}` of the first
/// eigenfunction, signed so that `{f >= 0}` has at most half the area.
#[derive(Debug, Clone)]
pub struct LevelSweep {
    /// `+1` or `-1`: the sign applied to the eigenfunction.
    pub sign: f64,
    pub surface_area: f64,
    /// Area of `{f >= 0}` after the sign choice.
    pub positive_area: f64,
    pub levels: Vec<LevelMeasure>,
    /// Best `max(l / |D|, l / |D^c|)` and the threshold achieving it.
    pub cheeger: Option<(f64, f64)>,
    /// Best `l_I / l_E` over admissible levels and its threshold.
    pub jammes: Option<(f64, f64)>,
}

/// Whether a superlevel set is admissible for the modified Jammes quotient.
pub fn jammes_admissible(m: &LevelMeasure, surface_area: f64) -> bool {
    m.area <= 0.5 * surface_area * (1.0 + 1e-12)
        && m.exterior_length > 0.0
        && m.complement_meets_boundary
        && m.interior_length > 0.0
}

pub fn cheeger_quotient(m: &LevelMeasure, surface_area: f64) -> Option<f64> {
    let small = m.area.min(surface_area - m.area);
    (small > 0.0 && m.interior_length > 0.0).then(|| m.interior_length / small)
}

/// Sweep any vertex function `f` (no sign normalization).
pub fn sweep_function(mesh: &TriangleMesh, f: &[f64]) -> Vec<LevelMeasure> {
    let layout = flat_layout(mesh);
    let on_boundary = mesh.boundary_vertex_mask();
    thresholds(f)
        .par_iter()
        .map(|&s| superlevel_measure(mesh, &layout, &on_boundary, f, s))
        .collect()
}

pub fn levelset_sweep(spectrum: &SteklovSpectrum, mesh: &TriangleMesh) -> Result<LevelSweep> {
    let f = spectrum
        .eigenfunctions
        .get(1)
        .ok_or_else(|| LabError::Domain("spectrum carries no first eigenfunction".into()))?;
    let spread = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - f.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = f.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !(spread > 1e-9 * scale) || scale == 0.0 {
        return Err(LabError::Solver("first eigenfunction is constant (under-resolved)".into()));
    }
    let layout = flat_layout(mesh);
    let on_boundary = mesh.boundary_vertex_mask();
    let surface_area = mesh.area();
    let positive = |g: &[f64]| superlevel_measure(mesh, &layout, &on_boundary, g, 0.0).area;
    let mut sign = 1.0;
    let mut g = f.clone();
    let mut positive_area = positive(&g);
    if positive_area > 0.5 * surface_area {
        sign = -1.0;
        g.iter_mut().for_each(|v| *v = -*v);
        positive_area = positive(&g);
    }
    let levels: Vec<LevelMeasure> = thresholds(&g)
        .par_iter()
        .map(|&s| superlevel_measure(mesh, &layout, &on_boundary, &g, s))
        .collect();
    let best = |vals: Vec<(f64, f64)>| {
        vals.into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
    };
    let cheeger = best(
        levels
            .iter()
            .filter_map(|m| cheeger_quotient(m, surface_area).map(|q| (q, m.threshold)))
            .collect(),
    );
    let jammes = best(
        levels
            .iter()
            .filter(|m| jammes_admissible(m, surface_area))
            .map(|m| (m.interior_length / m.exterior_length, m.threshold))
            .collect(),
    );
    Ok(LevelSweep { sign, surface_area, positive_area, levels, cheeger, jammes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_a_right_triangle() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        // f = x: {x >= 0.5} is a triangle of legs 0.5 and 0.5.
        let (a, l) = clip_triangle(&pts, [0.0, 1.0, 0.0], 0.5);
        assert!((a - 0.125).abs() < 1e-15);
        assert!((l - 0.5).abs() < 1e-15);
        let (a, l) = clip_triangle(&pts, [1.0, 0.0, 1.0], 0.5);
        assert!((a - 0.375).abs() < 1e-15);
        assert!((l - 0.5).abs() < 1e-15);
    }

    #[test]
    fn thresholds_sit_between_values() {
        let t = thresholds(&[-1.0, 0.2, 0.4, 0.4, 1.0]);
        assert_eq!(t, vec![0.1, 0.30000000000000004, 0.7]);
    }
}
