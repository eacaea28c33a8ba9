//! Mesh measurements of equidistant neighbourhoods, to cross-check the
//! analytic `l cosh d` and `l sinh d`.

use crate::hyperboloid::{cross, distance_to_line, normalize_spacelike, Vec3};
use crate::surface::TriangleMesh;

use super::levelset::{flat_layout, superlevel_measure};

/// A geodesic line drawn in the chart of one pants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartLine {
    pub pants: usize,
    pub normal: Vec3,
}

impl ChartLine {
    /// Cuff `c` of pants `p`.
    pub fn cuff(mesh: &TriangleMesh, p: usize, c: usize) -> Self {
        ChartLine { pants: p, normal: mesh.charts[p].side_lines[2 * c] }
    }

    /// Seam `k` of pants `p`, joining cuffs `k` and `k + 1`.
    pub fn seam(mesh: &TriangleMesh, p: usize, k: usize) -> Self {
        ChartLine { pants: p, normal: mesh.charts[p].side_lines[2 * k + 1] }
    }

    /// Common perpendicular of cuff `eta` and the opposite seam: the line of
    /// the orthogeodesic arc from `eta` to itself.
    pub fn eta_arc(mesh: &TriangleMesh, p: usize, eta: usize) -> Self {
        let lines = &mesh.charts[p].side_lines;
        let n = cross(&lines[2 * eta], &lines[2 * ((eta + 1) % 3) + 1]);
        ChartLine { pants: p, normal: normalize_spacelike(&n) }
    }
}

/// Distance from every vertex to the nearest of `lines`, measured in the
/// chart of that line's pants; vertices in none of those pants get
/// `f64::INFINITY`.
pub fn vertex_distances(mesh: &TriangleMesh, lines: &[ChartLine]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; mesh.vertex_count];
    for (t, pl) in mesh.placements.iter().enumerate() {
        let pants = mesh.charts[pl.chart].pants;
        for line in lines.iter().filter(|l| Some(l.pants) == pants) {
            for k in 0..3 {
                let v = mesh.triangles[t][k];
                let d = distance_to_line(&pl.corners[k], &line.normal).abs();
                dist[v] = dist[v].min(d);
            }
        }
    }
    dist
}

/// `(level curve length, area)` of `{dist <= d}` on the mesh.
pub fn mesh_offset_measure(mesh: &TriangleMesh, lines: &[ChartLine], d: f64) -> (f64, f64) {
    let f: Vec<f64> = vertex_distances(mesh, lines)
        .into_iter()
        .map(|x| if x.is_finite() { -x } else { -1e300 })
        .collect();
    let layout = flat_layout(mesh);
    let on_boundary = mesh.boundary_vertex_mask();
    let m = superlevel_measure(mesh, &layout, &on_boundary, &f, -d);
    (m.interior_length, m.area)
}
