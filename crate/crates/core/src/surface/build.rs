//! Realizing pants decompositions and disks as triangle meshes.
//!
//! Each pants is the double of a right-angled hexagon. The hexagon is
//! walked out from the origin of its own chart, fan-triangulated from its
//! first corner and refined `level` times; the front copy and the mirrored
//! back copy are then stitched along the three seams. Every cuff becomes a
//! circle of `2^(level+1)` vertices, half from each copy, and glued cuffs are
//! matched vertex to vertex with the twist rounded to the vertex spacing.

use crate::error::{LabError, Result};
use crate::hyp_trig::Hexagon;
use crate::hyperboloid::{self as hb, Frame, Vec3};

use super::graph::{FnCoordinates, PantsGraph};
use super::mesh::{Chart, Metric, Placement, TriangleMesh};

/// Refinement levels below this leave front and back triangles sharing all
/// three vertices.
const MIN_LEVEL: u32 = 2;
const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone)]
pub struct SurfaceBuild {
    pub mesh: TriangleMesh,
    pub level: u32,
    /// `|twist - applied twist|` per gluing.
    pub twist_rounding: Vec<f64>,
    pub hexagons: Vec<Hexagon>,
}

/// Corners of the hexagon in its chart, and the normals of the lines
/// carrying its sides, after moving the hexagon's center to the origin.
pub fn hexagon_chart(h: &Hexagon) -> Result<([Vec3; 6], [Vec3; 6])> {
    let sides = h.sides();
    let mut f = Frame::origin();
    let mut corners = [[0.0; 3]; 6];
    let mut lines = [[0.0; 3]; 6];
    for (i, &s) in sides.iter().enumerate() {
        corners[i] = f.point;
        lines[i] = f.line();
        f = f.advance(s).turn_left();
    }
    // acosh near 1 resolves distances only to about sqrt(eps) times the
    // largest time coordinate, so the tolerance scales with it.
    let closure = hb::distance(&f.point, &corners[0]);
    let reach = corners.iter().map(|c| c[0]).fold(f.point[0], f64::max);
    if closure > 1e-7 * reach {
        return Err(LabError::Mesh(format!("hexagon fails to close by {closure}")));
    }
    let center = hb::normalize_point(&corners.iter().fold([0.0; 3], |acc, c| hb::add(&acc, c)));
    let d = hb::sub(&center, &hb::ORIGIN);
    let dd = hb::dot(&d, &d);
    if dd > 1e-24 {
        // Reflection in the bisector of center and origin swaps the two.
        let m = hb::scale(1.0 / dd.sqrt(), &d);
        let reflect = |v: &Vec3| hb::sub(v, &hb::scale(2.0 * hb::dot(v, &m), &m));
        corners = corners.map(|c| reflect(&c));
        lines = lines.map(|l| reflect(&l));
    }
    Ok((corners, lines))
}

/// The hexagon as a standalone mesh, fan-triangulated from corner 0 and
/// refined `level` times, together with the vertex chain along each side.
fn hexagon_mesh(corners: &[Vec3; 6], level: u32) -> Result<(TriangleMesh, [Vec<usize>; 6])> {
    let chart = Chart {
        metric: Metric::Hyperbolic,
        pants: None,
        side_lines: vec![],
        boundary_circle: None,
    };
    let triangles: Vec<[usize; 3]> = (1..5).map(|i| [0, i, i + 1]).collect();
    let placements = triangles
        .iter()
        .map(|t| Placement { chart: 0, corners: t.map(|v| corners[v]) })
        .collect();
    let boundary: Vec<([usize; 2], usize)> = (0..6).map(|i| ([i, (i + 1) % 6], i)).collect();
    let mut mesh = TriangleMesh::assemble(6, triangles, &boundary, 0, 6, vec![chart], placements, None)?;
    let mut chains: [Vec<usize>; 6] = std::array::from_fn(|i| vec![i, (i + 1) % 6]);
    for _ in 0..level {
        for chain in chains.iter_mut() {
            let mut next = Vec::with_capacity(2 * chain.len() - 1);
            for w in chain.windows(2) {
                let e = mesh.edge_index(w[0], w[1]).expect("side edge");
                next.push(w[0]);
                next.push(mesh.vertex_count + e);
            }
            next.push(*chain.last().unwrap());
            *chain = next;
        }
        mesh = mesh.refine()?;
    }
    Ok((mesh, chains))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra.max(rb)] = ra.min(rb);
    }
}

/// Smallest refinement level whose subdivided hexagon edges are all at most
/// `resolution`. Hyperbolic midsegments are shorter than half the opposite
/// side, so halving the longest initial edge per level is an upper bound.
fn level_for(hexagons: &[[Vec3; 6]], resolution: f64) -> u32 {
    let mut longest: f64 = 0.0;
    for c in hexagons {
        for i in 0..6 {
            longest = longest.max(hb::distance(&c[i], &c[(i + 1) % 6]));
        }
        for i in 2..5 {
            longest = longest.max(hb::distance(&c[0], &c[i]));
        }
    }
    let mut level = MIN_LEVEL;
    while longest / f64::from(1u32 << level) > resolution && level < MAX_LEVEL {
        level += 1;
    }
    level
}

pub fn build_mesh(graph: &PantsGraph, coords: &FnCoordinates, resolution: f64) -> Result<TriangleMesh> {
    build_surface(graph, coords, resolution).map(|b| b.mesh)
}

pub fn build_surface(graph: &PantsGraph, coords: &FnCoordinates, resolution: f64) -> Result<SurfaceBuild> {
    let (genus, n) = graph.validate()?;
    let cuffs = graph.cuff_lengths(coords)?;
    let shortest = cuffs.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(LabError::Domain(format!("resolution {resolution} must be positive")));
    }
    if resolution >= shortest / 4.0 {
        return Err(LabError::Domain(format!(
            "resolution {resolution} must be below a quarter of the shortest cuff ({shortest})"
        )));
    }

    let hexagons: Vec<Hexagon> = cuffs.iter().map(|c| Hexagon::from_cuffs(*c)).collect::<Result<_>>()?;
    let charts_geo: Vec<([Vec3; 6], [Vec3; 6])> = hexagons.iter().map(hexagon_chart).collect::<Result<_>>()?;
    let corner_sets: Vec<[Vec3; 6]> = charts_geo.iter().map(|c| c.0).collect();
    let level = level_for(&corner_sets, resolution);
    if level == MAX_LEVEL {
        return Err(LabError::Mesh(format!("resolution {resolution} needs more than {MAX_LEVEL} levels")));
    }

    // Global ids: pants p owns [2 p V, 2 p V + V) for the front copy and the
    // next V ids for the back copy.
    let per_pants: Vec<(TriangleMesh, [Vec<usize>; 6])> = corner_sets
        .iter()
        .map(|c| hexagon_mesh(c, level))
        .collect::<Result<_>>()?;
    let v_hex = per_pants[0].0.vertex_count;
    let front = |p: usize, v: usize| 2 * p * v_hex + v;
    let back = |p: usize, v: usize| (2 * p + 1) * v_hex + v;
    let mut uf = UnionFind((0..2 * graph.pants * v_hex).collect());

    for (p, (_, chains)) in per_pants.iter().enumerate() {
        for side in [1, 3, 5] {
            for &v in &chains[side] {
                uf.union(front(p, v), back(p, v));
            }
        }
    }
    // Cuff circle with the pants on its left: the front half-cuff forward,
    // then the back half-cuff backward.
    let circle = |p: usize, c: usize| -> Vec<usize> {
        let chain = &per_pants[p].1[2 * c];
        let m = chain.len() - 1;
        let mut out: Vec<usize> = chain[..m].iter().map(|&v| front(p, v)).collect();
        out.extend(chain[1..].iter().rev().map(|&v| back(p, v)));
        out
    };
    let mut twist_rounding = Vec::with_capacity(graph.gluings.len());
    for (i, (a, b)) in graph.gluings.iter().enumerate() {
        let ca = circle(a.pants, a.cuff);
        let cb = circle(b.pants, b.cuff);
        let count = ca.len() as i64;
        let spacing = coords.cuff_lengths[i] / count as f64;
        let steps = (coords.twists[i] / spacing).round();
        twist_rounding.push((coords.twists[i] - steps * spacing).abs());
        let s = steps as i64;
        for (j, &va) in ca.iter().enumerate() {
            let k = (s - j as i64).rem_euclid(count) as usize;
            uf.union(va, cb[k]);
        }
    }

    // Compact ids in order of first appearance.
    let total = 2 * graph.pants * v_hex;
    let mut compact = vec![usize::MAX; total];
    let mut next = 0;
    let mut id = vec![0; total];
    for (v, slot) in id.iter_mut().enumerate() {
        let r = uf.find(v);
        if compact[r] == usize::MAX {
            compact[r] = next;
            next += 1;
        }
        *slot = compact[r];
    }

    let mut triangles = Vec::new();
    let mut placements = Vec::new();
    for (p, (hex, _)) in per_pants.iter().enumerate() {
        for (t, pl) in hex.triangles.iter().zip(&hex.placements) {
            triangles.push(t.map(|v| id[front(p, v)]));
            placements.push(Placement { chart: p, corners: pl.corners });
            let [a, b, c] = *t;
            let [pa, pb, pc] = pl.corners;
            triangles.push([id[back(p, a)], id[back(p, c)], id[back(p, b)]]);
            placements.push(Placement { chart: p, corners: [pa, pc, pb] });
        }
    }
    let mut boundary = Vec::new();
    for (comp, slot) in graph.boundary_slots.iter().enumerate() {
        let c = circle(slot.pants, slot.cuff);
        for j in 0..c.len() {
            boundary.push(([id[c[j]], id[c[(j + 1) % c.len()]]], comp));
        }
    }
    let charts = charts_geo
        .iter()
        .enumerate()
        .map(|(p, (_, lines))| Chart {
            metric: Metric::Hyperbolic,
            pants: Some(p),
            side_lines: lines.to_vec(),
            boundary_circle: None,
        })
        .collect();
    let mesh = TriangleMesh::assemble(next, triangles, &boundary, genus, n, charts, placements, None)?;
    if mesh.max_edge() > resolution {
        return Err(LabError::Mesh(format!(
            "max edge {} exceeds resolution {resolution}",
            mesh.max_edge()
        )));
    }
    let chi = 2 - 2 * genus as i64 - n as i64;
    if mesh.euler_characteristic() != chi {
        return Err(LabError::Mesh(format!(
            "mesh has Euler characteristic {} instead of {chi}",
            mesh.euler_characteristic()
        )));
    }
    Ok(SurfaceBuild { mesh, level, twist_rounding, hexagons })
}

/// Geodesic disk of radius `radius` around the chart origin, refined until
/// every edge is at most `resolution`.
pub fn disk_mesh(radius: f64, metric: Metric, resolution: f64) -> Result<TriangleMesh> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(LabError::Domain(format!("radius {radius} must be positive")));
    }
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(LabError::Domain(format!("resolution {resolution} must be positive")));
    }
    let mut mesh = disk_seed(radius, metric)?;
    let mut level = 0;
    while mesh.max_edge() > resolution {
        if level == MAX_LEVEL {
            return Err(LabError::Mesh(format!("resolution {resolution} is too fine")));
        }
        mesh = mesh.refine()?;
        level += 1;
    }
    Ok(mesh)
}

/// Disk refined exactly `level` times.
pub fn disk_mesh_level(radius: f64, metric: Metric, level: u32) -> Result<TriangleMesh> {
    let mut mesh = disk_seed(radius, metric)?;
    for _ in 0..level {
        mesh = mesh.refine()?;
    }
    Ok(mesh)
}

fn disk_seed(radius: f64, metric: Metric) -> Result<TriangleMesh> {
    let center = hb::ORIGIN;
    let rim: Vec<Vec3> = (0..6)
        .map(|k| metric.project_to_circle(&hb::polar(1.0, k as f64 * std::f64::consts::PI / 3.0), radius))
        .collect();
    let triangles: Vec<[usize; 3]> = (0..6).map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect();
    let placements = (0..6)
        .map(|k| Placement { chart: 0, corners: [center, rim[k], rim[(k + 1) % 6]] })
        .collect();
    let boundary: Vec<([usize; 2], usize)> = (0..6).map(|k| ([1 + k, 1 + (k + 1) % 6], 0)).collect();
    let chart = Chart { metric, pants: None, side_lines: vec![], boundary_circle: Some(radius) };
    TriangleMesh::assemble(7, triangles, &boundary, 0, 1, vec![chart], placements, None)
}
