//! Finite candidate families for the isoperimetric constants.
//!
//! Regions are unions of cells. A pants is one cell (area `2 pi`), or two
//! hexagons cut apart by the three seams (area `pi` each), or, at a
//! boundary cuff `eta`, the two halves cut off by the orthogeodesic arc of
//! length `2d` from `eta` to itself (area `pi` each). Every cell owns
//! intervals of its pants' cuffs, so interface lengths across glued cuffs
//! are exact interval overlaps under the twisted gluing. Equidistant
//! offsets, half-circles and circles are added analytically.

use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::hyp_trig::{collar_foot_split, collar_seam_offset, collar_width, pants_seams, standard_collar_width};
use crate::surface::{FnCoordinates, PantsGraph, SlotRole, TriangleMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentKind {
    ClosedGeodesic,
    EquidistantCurve,
    Circle,
    FreeBoundaryArc,
    FreeBoundaryEquidistantArc,
    HalfCircle,
    /// A cut along pieces of seams and cuffs that is not a geodesic system.
    PiecewiseGeodesic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub length: f64,
    /// Offset distance or radius; zero for geodesics.
    pub offset: f64,
    /// Largest offset distance keeping this segment's equidistant curves
    /// embedded and disjoint from the rest of the system.
    pub room: f64,
}

/// A cut `Gamma = partial_I Omega` together with the region `Omega` it
/// bounds on one side.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSystem {
    pub label: String,
    pub segments: Vec<Segment>,
    pub total_length: f64,
    pub omega_area: f64,
    pub complement_area: f64,
    /// `l(partial_E Omega)`.
    pub exterior_length: f64,
    /// `Omega` and its complement are both connected.
    pub separates_surface: bool,
    pub all_complement_components_meet_boundary: bool,
    /// Built only from closed geodesics and free-boundary geodesic arcs.
    pub geodesic: bool,
}

impl CurveSystem {
    /// `(|A|, |B|)` with `|A| <= |B|`.
    pub fn area_split(&self) -> (f64, f64) {
        let (a, b) = (self.omega_area, self.complement_area);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// `max(l / |Omega|, l / |Omega^c|)`.
    pub fn cheeger_value(&self) -> f64 {
        self.total_length / self.area_split().0
    }

    pub fn jammes_admissible(&self, surface_area: f64) -> bool {
        self.omega_area <= 0.5 * surface_area * (1.0 + 1e-12)
            && self.exterior_length > 0.0
            && self.all_complement_components_meet_boundary
    }

    /// `l(partial_I Omega) / l(partial_E Omega)` if admissible.
    pub fn jammes_value(&self, surface_area: f64) -> Option<f64> {
        self.jammes_admissible(surface_area).then(|| self.total_length / self.exterior_length)
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateOptions {
    /// Sampled offset distances per geodesic system.
    pub offsets: usize,
    /// Sampled radii per circle family.
    pub radii: usize,
    pub max_segments: usize,
    /// Above this many pants only one pants is split at a time.
    pub full_split_pants: usize,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        CandidateOptions { offsets: 64, radii: 64, max_segments: 8, full_split_pants: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Split {
    Whole,
    Seams,
    /// Cut by the orthogeodesic from this boundary cuff to itself.
    Arc(usize),
}

struct Cell {
    pants: usize,
    area: f64,
    /// Intervals `[a, b)` of each cuff's circle parameter owned by the cell.
    owned: [Vec<(f64, f64)>; 3],
    name: String,
}

/// Exact geometry of one pants.
struct PantsGeometry {
    cuffs: [f64; 3],
    seams: [f64; 3],
}

/// Geometry of the arc cut at cuff `eta`: `(2d, x_alpha, x_beta, cap)`
/// with `alpha = eta + 1`, `beta = eta + 2`.
fn arc_geometry(g: &PantsGeometry, eta: usize) -> Result<(f64, f64, f64, f64)> {
    let (a, b) = ((eta + 1) % 3, (eta + 2) % 3);
    let c = collar_width(g.cuffs[eta], g.cuffs[a], g.cuffs[b])?;
    let (xa, xb) = collar_foot_split(&c);
    let ya = collar_seam_offset(&c);
    let yb = g.seams[a] - ya;
    let cap = 0.5 * xa.min(xb).min(ya).min(yb);
    Ok((2.0 * c.width, xa, xb, cap))
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Length of the overlap of interval sets on a circle of length `l`.
fn circle_overlap(x: &[(f64, f64)], y: &[(f64, f64)], l: f64) -> f64 {
    let mut s = 0.0;
    for &i in x {
        for &j in y {
            for shift in [-l, 0.0, l] {
                s += overlap(i, (j.0 + shift, j.1 + shift));
            }
        }
    }
    s
}

/// Image of `[a, b)` under `s -> (tau - s) mod l`, split at the seam of the
/// circle.
fn reflect(iv: (f64, f64), tau: f64, l: f64) -> Vec<(f64, f64)> {
    let lo = (tau - iv.1).rem_euclid(l);
    let hi = lo + (iv.1 - iv.0);
    if hi <= l {
        vec![(lo, hi)]
    } else {
        vec![(lo, l), (0.0, hi - l)]
    }
}

struct Interface {
    a: usize,
    b: usize,
    length: f64,
    segments: Vec<Segment>,
    /// Glued cuff index for cuff interfaces.
    cuff: Option<usize>,
}

pub struct CandidateSet {
    pub systems: Vec<CurveSystem>,
    pub surface_area: f64,
    pub boundary_length: f64,
    /// Number of cell-union candidates before offsets and circles.
    pub base_count: usize,
}

fn connected(members: &[usize], adjacency: &[Vec<usize>], inside: &[bool]) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut seen = vec![false; inside.len()];
    let mut stack = vec![members[0]];
    seen[members[0]] = true;
    let mut count = 1;
    while let Some(c) = stack.pop() {
        for &d in &adjacency[c] {
            if inside[d] && !seen[d] {
                seen[d] = true;
                count += 1;
                stack.push(d);
            }
        }
    }
    count == members.len()
}

fn components_meet_boundary(members: &[usize], adjacency: &[Vec<usize>], inside: &[bool], touches: &[bool]) -> bool {
    let mut seen = vec![false; inside.len()];
    for &start in members {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut hit = touches[start];
        while let Some(c) = stack.pop() {
            for &d in &adjacency[c] {
                if inside[d] && !seen[d] {
                    seen[d] = true;
                    hit |= touches[d];
                    stack.push(d);
                }
            }
        }
        if !hit {
            return false;
        }
    }
    true
}

/// Enumerate candidate systems for a pants surface. The mesh is only
/// checked for consistency with the graph.
pub fn enumerate_candidates(
    graph: &PantsGraph,
    coords: &FnCoordinates,
    mesh: &TriangleMesh,
    opts: &CandidateOptions,
) -> Result<CandidateSet> {
    let (genus, n) = graph.validate()?;
    if mesh.genus != genus || mesh.boundary_count != n || mesh.charts.len() != graph.pants {
        return Err(LabError::Mesh(format!(
            "mesh (g={}, n={}, {} charts) does not match graph (g={genus}, n={n}, {} pants)",
            mesh.genus,
            mesh.boundary_count,
            mesh.charts.len(),
            graph.pants
        )));
    }
    enumerate_for_graph(graph, coords, opts)
}

/// Enumeration from the graph and coordinates alone.
pub fn enumerate_for_graph(graph: &PantsGraph, coords: &FnCoordinates, opts: &CandidateOptions) -> Result<CandidateSet> {
    graph.validate()?;
    let roles = graph.roles()?;
    let cuffs = graph.cuff_lengths(coords)?;
    let geo: Vec<PantsGeometry> = cuffs
        .iter()
        .map(|c| Ok(PantsGeometry { cuffs: *c, seams: pants_seams(c[0], c[1], c[2])? }))
        .collect::<Result<_>>()?;
    let is_boundary = |p: usize, c: usize| matches!(roles[p][c], SlotRole::Boundary(_));
    let surface_area = 2.0 * PI * graph.pants as f64;
    let boundary_length: f64 = coords.boundary_lengths.iter().sum();

    // Split options per pants.
    let options: Vec<Vec<Split>> = (0..graph.pants)
        .map(|p| {
            let mut o = vec![Split::Whole, Split::Seams];
            o.extend((0..3).filter(|&c| is_boundary(p, c)).map(Split::Arc));
            o
        })
        .collect();
    let mut schemes: Vec<Vec<Split>> = Vec::new();
    if graph.pants <= opts.full_split_pants {
        let mut idx = vec![0usize; graph.pants];
        loop {
            schemes.push(idx.iter().enumerate().map(|(p, &i)| options[p][i]).collect());
            let mut p = 0;
            while p < graph.pants {
                idx[p] += 1;
                if idx[p] < options[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == graph.pants {
                break;
            }
        }
    } else {
        schemes.push(vec![Split::Whole; graph.pants]);
        for p in 0..graph.pants {
            for &o in &options[p][1..] {
                let mut s = vec![Split::Whole; graph.pants];
                s[p] = o;
                schemes.push(s);
            }
        }
    }

    let mut systems = Vec::new();
    for scheme in &schemes {
        scheme_candidates(graph, coords, &geo, &roles, scheme, surface_area, opts, &mut systems)?;
    }
    let base_count = systems.len();

    // Equidistant offsets of geodesic systems.
    let mut offsets = Vec::new();
    for sys in systems.iter().filter(|s| s.geodesic) {
        let cap = offset_cap(sys);
        if !(cap > 0.0) {
            continue;
        }
        let arcs = sys.segments.iter().filter(|s| s.kind == SegmentKind::FreeBoundaryArc).count();
        for j in 1..=opts.offsets {
            let d = cap * j as f64 / opts.offsets as f64;
            let grow: f64 = sys.segments.iter().map(|s| s.length * d.sinh()).sum();
            if grow >= sys.complement_area {
                break;
            }
            offsets.push(CurveSystem {
                label: format!("{} offset d={d:.6}", sys.label),
                segments: sys
                    .segments
                    .iter()
                    .map(|s| Segment {
                        kind: match s.kind {
                            SegmentKind::ClosedGeodesic => SegmentKind::EquidistantCurve,
                            _ => SegmentKind::FreeBoundaryEquidistantArc,
                        },
                        length: s.length * d.cosh(),
                        offset: d,
                        room: 0.0,
                    })
                    .collect(),
                total_length: sys.total_length * d.cosh(),
                omega_area: sys.omega_area + grow,
                complement_area: sys.complement_area - grow,
                exterior_length: sys.exterior_length + 2.0 * d * arcs as f64,
                separates_surface: sys.separates_surface,
                all_complement_components_meet_boundary: sys.all_complement_components_meet_boundary,
                geodesic: false,
            });
        }
    }
    systems.extend(offsets);

    // Half-circles on boundary cuffs, circles on glued cuffs or inside
    // boundary half-collars.
    for (i, &l) in coords.boundary_lengths.iter().enumerate() {
        let w = standard_collar_width(l);
        let rmax = w.min(l / 2.0);
        for j in 1..=opts.radii {
            let r = rmax * j as f64 / opts.radii as f64;
            systems.push(disk_system(format!("half-circle on boundary {i} r={r:.6}"), SegmentKind::HalfCircle, r, surface_area, true));
        }
        let rmax = (w / 2.0).min(l / 2.0);
        for j in 1..=opts.radii {
            let r = rmax * j as f64 / opts.radii as f64;
            systems.push(disk_system(format!("circle near boundary {i} r={r:.6}"), SegmentKind::Circle, r, surface_area, true));
        }
    }
    let has_boundary = !coords.boundary_lengths.is_empty();
    for (i, &l) in coords.cuff_lengths.iter().enumerate() {
        let rmax = standard_collar_width(l).min(l / 2.0);
        for j in 1..=opts.radii {
            let r = rmax * j as f64 / opts.radii as f64;
            systems.push(disk_system(format!("circle on cuff {i} r={r:.6}"), SegmentKind::Circle, r, surface_area, has_boundary));
        }
    }
    systems.retain(|s| s.segment_count() <= opts.max_segments && s.total_length > 0.0 && s.omega_area > 0.0 && s.complement_area > 0.0);
    Ok(CandidateSet { systems, surface_area, boundary_length, base_count })
}

fn disk_system(label: String, kind: SegmentKind, r: f64, surface_area: f64, has_boundary: bool) -> CurveSystem {
    let (length, area, exterior) = match kind {
        SegmentKind::HalfCircle => (PI * r.sinh(), PI * (r.cosh() - 1.0), 2.0 * r),
        _ => (2.0 * PI * r.sinh(), 2.0 * PI * (r.cosh() - 1.0), 0.0),
    };
    CurveSystem {
        label,
        segments: vec![Segment { kind, length, offset: r, room: 0.0 }],
        total_length: length,
        omega_area: area,
        complement_area: surface_area - area,
        exterior_length: exterior,
        separates_surface: true,
        all_complement_components_meet_boundary: has_boundary,
        geodesic: false,
    }
}

/// Largest safe offset distance for a geodesic system.
fn offset_cap(sys: &CurveSystem) -> f64 {
    sys.segments.iter().map(|s| s.room).fold(f64::INFINITY, f64::min)
}

#[allow(clippy::too_many_arguments)]
fn scheme_candidates(
    graph: &PantsGraph,
    coords: &FnCoordinates,
    geo: &[PantsGeometry],
    roles: &[[SlotRole; 3]],
    scheme: &[Split],
    surface_area: f64,
    opts: &CandidateOptions,
    out: &mut Vec<CurveSystem>,
) -> Result<()> {
    let is_boundary = |p: usize, c: usize| matches!(roles[p][c], SlotRole::Boundary(_));
    let mut cells: Vec<Cell> = Vec::new();
    let mut interfaces: Vec<Interface> = Vec::new();
    // (first cell, second cell) for split pants.
    let mut split_pairs: Vec<(usize, usize)> = Vec::new();
    for (p, split) in scheme.iter().enumerate() {
        let g = &geo[p];
        let l = g.cuffs;
        match *split {
            Split::Whole => cells.push(Cell {
                pants: p,
                area: 2.0 * PI,
                owned: l.map(|x| vec![(0.0, x)]),
                name: format!("P{p}"),
            }),
            Split::Seams => {
                let f = cells.len();
                cells.push(Cell { pants: p, area: PI, owned: l.map(|x| vec![(0.0, x / 2.0)]), name: format!("P{p}front") });
                cells.push(Cell { pants: p, area: PI, owned: l.map(|x| vec![(x / 2.0, x)]), name: format!("P{p}back") });
                let segments = (0..3)
                    .map(|k| {
                        let free = is_boundary(p, k) && is_boundary(p, (k + 1) % 3);
                        let cap = 0.25 * l[k].min(l[(k + 1) % 3]);
                        let opp = collar_width(l[(k + 2) % 3], l[k], l[(k + 1) % 3]).map(|c| 0.5 * c.width)?;
                        Ok(Segment {
                            kind: if free { SegmentKind::FreeBoundaryArc } else { SegmentKind::PiecewiseGeodesic },
                            length: g.seams[k],
                            offset: 0.0,
                            room: if free { cap.min(opp) } else { 0.0 },
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                interfaces.push(Interface { a: f, b: f + 1, length: g.seams.iter().sum(), segments, cuff: None });
                split_pairs.push((f, f + 1));
            }
            Split::Arc(eta) => {
                let (len, xa, xb, cap) = arc_geometry(g, eta)?;
                let (a, b) = ((eta + 1) % 3, (eta + 2) % 3);
                let h = l[eta] / 2.0;
                let mut alpha_side: [Vec<(f64, f64)>; 3] = Default::default();
                let mut beta_side: [Vec<(f64, f64)>; 3] = Default::default();
                alpha_side[a] = vec![(0.0, l[a])];
                beta_side[b] = vec![(0.0, l[b])];
                alpha_side[eta] = vec![(xb, h + xa)];
                beta_side[eta] = vec![(h + xa, l[eta]), (0.0, xb)];
                let f = cells.len();
                cells.push(Cell { pants: p, area: PI, owned: alpha_side, name: format!("P{p}arc{eta}a") });
                cells.push(Cell { pants: p, area: PI, owned: beta_side, name: format!("P{p}arc{eta}b") });
                interfaces.push(Interface {
                    a: f,
                    b: f + 1,
                    length: len,
                    segments: vec![Segment { kind: SegmentKind::FreeBoundaryArc, length: len, offset: 0.0, room: cap }],
                    cuff: None,
                });
                split_pairs.push((f, f + 1));
            }
        }
    }
    for (i, (sa, sb)) in graph.gluings.iter().enumerate() {
        let (l, tau) = (coords.cuff_lengths[i], coords.twists[i]);
        for x in 0..cells.len() {
            if cells[x].pants != sa.pants || cells[x].owned[sa.cuff].is_empty() {
                continue;
            }
            for y in 0..cells.len() {
                if cells[y].pants != sb.pants || cells[y].owned[sb.cuff].is_empty() {
                    continue;
                }
                let image: Vec<(f64, f64)> = cells[y].owned[sb.cuff].iter().flat_map(|&iv| reflect(iv, tau, l)).collect();
                let ov = circle_overlap(&cells[x].owned[sa.cuff], &image, l);
                if ov > 1e-12 * l {
                    interfaces.push(Interface { a: x, b: y, length: ov, segments: vec![], cuff: Some(i) });
                }
            }
        }
    }
    let nc = cells.len();
    let mut adjacency = vec![Vec::new(); nc];
    for f in &interfaces {
        if f.a != f.b {
            adjacency[f.a].push(f.b);
            adjacency[f.b].push(f.a);
        }
    }
    let exterior: Vec<f64> = cells
        .iter()
        .map(|c| {
            (0..3)
                .filter(|&k| is_boundary(c.pants, k))
                .map(|k| c.owned[k].iter().map(|iv| iv.1 - iv.0).sum::<f64>())
                .sum()
        })
        .collect();
    let touches: Vec<bool> = exterior.iter().map(|&e| e > 0.0).collect();

    for mask in 1u64..(1u64 << nc) - 1 {
        let inside: Vec<bool> = (0..nc).map(|c| mask >> c & 1 == 1).collect();
        // Every split pants must actually be split.
        if split_pairs.iter().any(|&(a, b)| inside[a] == inside[b]) {
            continue;
        }
        let mut segments = Vec::new();
        let mut total = 0.0;
        let mut cut_per_cuff = vec![(0.0, 0usize); graph.gluings.len()];
        for f in &interfaces {
            if inside[f.a] == inside[f.b] {
                continue;
            }
            total += f.length;
            match f.cuff {
                Some(i) => {
                    cut_per_cuff[i].0 += f.length;
                    cut_per_cuff[i].1 += 1;
                }
                None => segments.extend(f.segments.iter().cloned()),
            }
        }
        for (i, &(len, pieces)) in cut_per_cuff.iter().enumerate() {
            if pieces == 0 {
                continue;
            }
            if (len - coords.cuff_lengths[i]).abs() <= 1e-9 * len {
                // Half the standard collar: other cut segments may sit in the
                // same pants.
                let room = 0.5 * standard_collar_width(len);
                segments.push(Segment { kind: SegmentKind::ClosedGeodesic, length: len, offset: 0.0, room });
            } else {
                for _ in 0..pieces {
                    segments.push(Segment {
                        kind: SegmentKind::PiecewiseGeodesic,
                        length: len / pieces as f64,
                        offset: 0.0,
                        room: 0.0,
                    });
                }
            }
        }
        if total <= 0.0 || segments.len() > opts.max_segments {
            continue;
        }
        let members: Vec<usize> = (0..nc).filter(|&c| inside[c]).collect();
        let others: Vec<usize> = (0..nc).filter(|&c| !inside[c]).collect();
        let outside: Vec<bool> = inside.iter().map(|b| !b).collect();
        let omega_area: f64 = members.iter().map(|&c| cells[c].area).sum();
        let geodesic = segments
            .iter()
            .all(|s| matches!(s.kind, SegmentKind::ClosedGeodesic | SegmentKind::FreeBoundaryArc));
        let names: Vec<&str> = members.iter().map(|&c| cells[c].name.as_str()).collect();
        out.push(CurveSystem {
            label: format!("cells {{{}}}", names.join(",")),
            total_length: total,
            omega_area,
            complement_area: surface_area - omega_area,
            exterior_length: members.iter().map(|&c| exterior[c]).sum(),
            separates_surface: connected(&members, &adjacency, &inside) && connected(&others, &adjacency, &outside),
            all_complement_components_meet_boundary: components_meet_boundary(&others, &adjacency, &outside, &touches),
            geodesic,
            segments,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_preserves_length() {
        let r = reflect((0.5, 1.5), 0.2, 2.0);
        assert_eq!(r, vec![(0.7, 1.7)]);
        let r = reflect((0.0, 1.0), 0.5, 2.0);
        let total: f64 = r.iter().map(|iv| iv.1 - iv.0).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circular_overlap_wraps() {
        let l = 4.0;
        assert!((circle_overlap(&[(3.0, 4.0)], &[(3.5, 4.0), (0.0, 0.5)], l) - 0.5).abs() < 1e-15);
        assert!((circle_overlap(&[(0.0, 4.0)], &[(1.0, 3.0)], l) - 2.0).abs() < 1e-15);
    }
}
