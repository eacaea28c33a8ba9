//! Intrinsic triangle meshes: combinatorics plus one length per edge.
//!
//! Coordinates live only in per-chart placements, which refinement uses to
//! compute true midpoints; everything downstream reads `edge_lengths`.

use std::fmt::Write as _;

use crate::error::{LabError, Result};
use crate::hyperboloid::{self as hb, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Hyperbolic,
    /// Points stored as `[1, x, y]`.
    Euclidean,
}

impl Metric {
    pub fn distance(self, p: &Vec3, q: &Vec3) -> f64 {
        match self {
            Metric::Hyperbolic => hb::distance(p, q),
            Metric::Euclidean => (p[1] - q[1]).hypot(p[2] - q[2]),
        }
    }

    pub fn midpoint(self, p: &Vec3, q: &Vec3) -> Vec3 {
        match self {
            Metric::Hyperbolic => hb::midpoint(p, q),
            Metric::Euclidean => [1.0, 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])],
        }
    }

    /// Point at distance `r` from the chart origin in the direction of `p`.
    pub fn project_to_circle(self, p: &Vec3, r: f64) -> Vec3 {
        let theta = hb::angle(p);
        match self {
            Metric::Hyperbolic => hb::polar(r, theta),
            Metric::Euclidean => [1.0, r * theta.cos(), r * theta.sin()],
        }
    }
}

/// A coordinate patch shared by the triangles placed in it.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub metric: Metric,
    /// Pants realized by this chart, if any.
    pub pants: Option<usize>,
    /// Unit normals of the hexagon's six side lines, for pants charts:
    /// side `2c` carries cuff `c`, side `2k + 1` the seam joining cuffs `k`
    /// and `k + 1`.
    pub side_lines: Vec<Vec3>,
    /// Boundary circle around the chart origin; midpoints of boundary edges
    /// are pushed onto it during refinement.
    pub boundary_circle: Option<f64>,
}

/// Corner coordinates of one triangle, in the order of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub chart: usize,
    pub corners: [Vec3; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
    /// Vertex pairs `[a, b]` with `a < b`, in lexicographic order.
    pub edges: Vec<[usize; 2]>,
    pub edge_lengths: Vec<f64>,
    /// `(edge index, boundary component)`, sorted by edge index.
    pub boundary_edges: Vec<(usize, usize)>,
    pub genus: usize,
    pub boundary_count: usize,
    pub charts: Vec<Chart>,
    /// One per triangle, or empty for a mesh without charts.
    pub placements: Vec<Placement>,
}

fn key(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Area of a flat triangle from its side lengths (Kahan's stable Heron).
/// Returns `None` if the strict triangle inequality fails.
pub fn flat_area(a: f64, b: f64, c: f64) -> Option<f64> {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    (p > 0.0 && c > 0.0).then(|| 0.25 * p.sqrt())
}

impl TriangleMesh {
    /// Build the edge table and check the mesh invariants. Boundary edges
    /// are given as vertex pairs with their component.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        vertex_count: usize,
        triangles: Vec<[usize; 3]>,
        boundary: &[([usize; 2], usize)],
        genus: usize,
        boundary_count: usize,
        charts: Vec<Chart>,
        placements: Vec<Placement>,
        explicit_lengths: Option<&dyn Fn(usize, usize) -> f64>,
    ) -> Result<Self> {
        if !placements.is_empty() && placements.len() != triangles.len() {
            return Err(LabError::Mesh("placement count differs from triangle count".into()));
        }
        let mut edges: Vec<[usize; 2]> = Vec::with_capacity(3 * triangles.len());
        for t in &triangles {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || t.iter().any(|&v| v >= vertex_count) {
                return Err(LabError::Mesh(format!("degenerate triangle {t:?}")));
            }
            for k in 0..3 {
                edges.push(key(t[k], t[(k + 1) % 3]));
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let mut lengths = vec![f64::NAN; edges.len()];
        let mut incidence = vec![0u8; edges.len()];
        let index = |e: [usize; 2]| edges.binary_search(&e).expect("edge present");
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                let e = index(key(t[k], t[(k + 1) % 3]));
                incidence[e] = incidence[e].saturating_add(1);
                let len = if let Some(f) = explicit_lengths {
                    f(t[k], t[(k + 1) % 3])
                } else if let Some(pl) = placements.get(ti) {
                    charts[pl.chart]
                        .metric
                        .distance(&pl.corners[k], &pl.corners[(k + 1) % 3])
                } else {
                    return Err(LabError::Mesh("no edge lengths available".into()));
                };
                if lengths[e].is_nan() {
                    lengths[e] = len;
                } else if (lengths[e] - len).abs() > 1e-9 * len.max(1.0) {
                    return Err(LabError::Mesh(format!(
                        "edge {:?} has inconsistent lengths {} and {len}",
                        edges[e], lengths[e]
                    )));
                }
            }
        }
        if let Some(e) = incidence.iter().position(|&c| c > 2) {
            return Err(LabError::Mesh(format!("edge {:?} borders more than two triangles", edges[e])));
        }

        let mut boundary_edges = Vec::with_capacity(boundary.len());
        for &(pair, comp) in boundary {
            let e = edges
                .binary_search(&key(pair[0], pair[1]))
                .map_err(|_| LabError::Mesh(format!("boundary edge {pair:?} not in mesh")))?;
            if comp >= boundary_count {
                return Err(LabError::Mesh(format!("boundary component {comp} out of range")));
            }
            boundary_edges.push((e, comp));
        }
        boundary_edges.sort_unstable();
        boundary_edges.dedup();
        let declared: Vec<usize> = boundary_edges.iter().map(|b| b.0).collect();
        let free: Vec<usize> = (0..edges.len()).filter(|&e| incidence[e] == 1).collect();
        if declared != free {
            return Err(LabError::Mesh(format!(
                "{} edges border one triangle but {} are declared boundary",
                free.len(),
                declared.len()
            )));
        }

        let mesh = TriangleMesh {
            vertex_count,
            triangles,
            edges,
            edge_lengths: lengths,
            boundary_edges,
            genus,
            boundary_count,
            charts,
            placements,
        };
        for t in 0..mesh.triangles.len() {
            let [a, b, c] = mesh.side_lengths(t);
            if flat_area(a, b, c).is_none() {
                return Err(LabError::Mesh(format!(
                    "triangle {t} violates the triangle inequality ({a}, {b}, {c})"
                )));
            }
        }
        Ok(mesh)
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&key(a, b)).ok()
    }

    /// Edge indices of a triangle, edge `k` joining corners `k` and `k+1`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        let v = self.triangles[t];
        [0, 1, 2].map(|k| self.edge_index(v[k], v[(k + 1) % 3]).expect("triangle edge"))
    }

    /// Side lengths of a triangle, side `k` opposite corner `k`.
    pub fn side_lengths(&self, t: usize) -> [f64; 3] {
        let e = self.triangle_edges(t);
        [self.edge_lengths[e[1]], self.edge_lengths[e[2]], self.edge_lengths[e[0]]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.side_lengths(t);
        flat_area(a, b, c).unwrap_or(0.0)
    }

    /// Sum of flat triangle areas.
    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn boundary_lengths(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.boundary_count];
        for &(e, c) in &self.boundary_edges {
            out[c] += self.edge_lengths[e];
        }
        out
    }

    pub fn total_boundary_length(&self) -> f64 {
        self.boundary_edges.iter().map(|&(e, _)| self.edge_lengths[e]).sum()
    }

    pub fn max_edge(&self) -> f64 {
        self.edge_lengths.iter().cloned().fold(0.0, f64::max)
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Vertices on the boundary, as a mask.
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count];
        for &(e, _) in &self.boundary_edges {
            mask[self.edges[e][0]] = true;
            mask[self.edges[e][1]] = true;
        }
        mask
    }

    /// Midpoint subdivision: every triangle splits into four, the new vertex
    /// of edge `e` gets id `vertex_count + e`, and midpoints are computed in
    /// each triangle's own chart.
    pub fn refine(&self) -> Result<Self> {
        if self.placements.is_empty() {
            return Err(LabError::Mesh("mesh has no chart placements to refine in".into()));
        }
        let mut is_boundary = vec![false; self.edges.len()];
        for &(e, _) in &self.boundary_edges {
            is_boundary[e] = true;
        }
        let n0 = self.vertex_count;
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut placements = Vec::with_capacity(4 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let pl = &self.placements[t];
            let chart = &self.charts[pl.chart];
            let e = self.triangle_edges(t);
            let mids: [Vec3; 3] = [0, 1, 2].map(|k| {
                let m = chart.metric.midpoint(&pl.corners[k], &pl.corners[(k + 1) % 3]);
                match chart.boundary_circle {
                    Some(r) if is_boundary[e[k]] => chart.metric.project_to_circle(&m, r),
                    _ => m,
                }
            });
            let m = e.map(|x| n0 + x);
            let [a, b, c] = *tri;
            let [pa, pb, pc] = pl.corners;
            let [mab, mbc, mca] = mids;
            for (verts, corners) in [
                ([a, m[0], m[2]], [pa, mab, mca]),
                ([m[0], b, m[1]], [mab, pb, mbc]),
                ([m[2], m[1], c], [mca, mbc, pc]),
                ([m[0], m[1], m[2]], [mab, mbc, mca]),
            ] {
                triangles.push(verts);
                placements.push(Placement { chart: pl.chart, corners });
            }
        }
        let mut boundary = Vec::with_capacity(2 * self.boundary_edges.len());
        for &(e, comp) in &self.boundary_edges {
            let [u, w] = self.edges[e];
            boundary.push(([u, n0 + e], comp));
            boundary.push(([n0 + e, w], comp));
        }
        TriangleMesh::assemble(
            n0 + self.edges.len(),
            triangles,
            &boundary,
            self.genus,
            self.boundary_count,
            self.charts.clone(),
            placements,
            None,
        )
    }

    /// Plain-text export: counts, triangles, edge lengths and boundary markers.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "genus {} boundary {}", self.genus, self.boundary_count);
        let _ = writeln!(s, "vertices {}", self.vertex_count);
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "edges {}", self.edges.len());
        for (e, l) in self.edges.iter().zip(&self.edge_lengths) {
            let _ = writeln!(s, "{} {} {:e}", e[0], e[1], l);
        }
        let _ = writeln!(s, "boundary_edges {}", self.boundary_edges.len());
        for (e, c) in &self.boundary_edges {
            let _ = writeln!(s, "{e} {c}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heron_matches_right_triangle() {
        assert!((flat_area(3.0, 4.0, 5.0).unwrap() - 6.0).abs() < 1e-14);
        assert!(flat_area(1.0, 1.0, 2.0).is_none());
        let thin = flat_area(1.0, 1.0, 1e-8).unwrap();
        assert!((thin / 0.5e-8 - 1.0).abs() < 1e-6);
    }
}
