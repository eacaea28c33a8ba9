//! Steklov spectra of triangulated surfaces.
//!
//! Piecewise-linear elements on the flat triangles determined by the edge
//! lengths. Interior unknowns are eliminated by a Schur complement, leaving
//! the symmetric generalized problem `S u = sigma M u` on boundary vertices,
//! solved densely.

pub mod skyline;

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::surface::{flat_area, TriangleMesh};

use skyline::{rcm_order, Skyline};

/// Eigenvalues closer than this (relatively) form one multiplicity cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;
/// A run is under-resolved unless `sigma_0 < ZERO_MODE_TOLERANCE * sigma_1`.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SteklovSpectrum {
    /// `sigma_0 <= sigma_1 <= ...`.
    pub eigenvalues: Vec<f64>,
    /// Nodal values on every mesh vertex, normalized in the boundary mass.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub boundary_length: f64,
    /// `sigma_1 * boundary_length`.
    pub normalized_first: f64,
    pub genus: usize,
    pub boundary_count: usize,
}

impl SteklovSpectrum {
    pub fn under_resolved(&self) -> bool {
        self.eigenvalues.len() < 2
            || !(self.eigenvalues[0].abs() < ZERO_MODE_TOLERANCE * self.eigenvalues[1])
    }

    /// `(value, multiplicity)` groups of eigenvalues within
    /// [`CLUSTER_TOLERANCE`] of each other.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        multiplicity_clusters(&self.eigenvalues, CLUSTER_TOLERANCE)
    }
}

pub fn multiplicity_clusters(values: &[f64], rel: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((head, m)) if (v - *head).abs() <= rel * head.abs().max(v.abs()) => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Cotangent weight of every edge: `K_jk = -w_e`, `K_jj = sum of w_e`.
pub fn stiffness_weights(mesh: &TriangleMesh) -> Vec<f64> {
    let per_triangle: Vec<([usize; 3], [f64; 3])> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| {
            let e = mesh.triangle_edges(t);
            // Side opposite corner k is edge (k+1) % 3.
            let [a, b, c] = mesh.side_lengths(t);
            let area = flat_area(a, b, c).unwrap_or(f64::MIN_POSITIVE);
            let cot = |opp: f64, s1: f64, s2: f64| (s1 * s1 + s2 * s2 - opp * opp) / (4.0 * area);
            let w = [cot(a, b, c), cot(b, c, a), cot(c, a, b)].map(|x| 0.5 * x);
            ([e[1], e[2], e[0]], w)
        })
        .collect();
    let mut weights = vec![0.0; mesh.edges.len()];
    for (edges, w) in per_triangle {
        for k in 0..3 {
            weights[edges[k]] += w[k];
        }
    }
    weights
}

/// `u^T K u`.
pub fn dirichlet_energy(mesh: &TriangleMesh, weights: &[f64], u: &[f64]) -> f64 {
    mesh.edges
        .iter()
        .zip(weights)
        .map(|(e, w)| w * (u[e[0]] - u[e[1]]).powi(2))
        .sum()
}

/// `u^T M v` for the boundary mass.
pub fn boundary_inner(mesh: &TriangleMesh, u: &[f64], v: &[f64]) -> f64 {
    mesh.boundary_edges
        .iter()
        .map(|&(e, _)| {
            let [a, b] = mesh.edges[e];
            let l = mesh.edge_lengths[e];
            l / 6.0 * (2.0 * u[a] * v[a] + u[a] * v[b] + u[b] * v[a] + 2.0 * u[b] * v[b])
        })
        .sum()
}

pub fn rayleigh_quotient(mesh: &TriangleMesh, weights: &[f64], u: &[f64]) -> f64 {
    dirichlet_energy(mesh, weights, u) / boundary_inner(mesh, u, u)
}

/// The `k + 1` smallest Steklov eigenpairs.
pub fn steklov_spectrum(mesh: &TriangleMesh, k: usize) -> Result<SteklovSpectrum> {
    if k == 0 {
        return Err(LabError::Domain("eigenvalue count k must be at least 1".into()));
    }
    if mesh.boundary_edges.is_empty() {
        return Err(LabError::Solver("mesh has no boundary".into()));
    }
    let n = mesh.vertex_count;
    let on_boundary = mesh.boundary_vertex_mask();
    let boundary: Vec<usize> = (0..n).filter(|&v| on_boundary[v]).collect();
    let interior: Vec<usize> = (0..n).filter(|&v| !on_boundary[v]).collect();
    let nb = boundary.len();
    if k + 1 > nb {
        return Err(LabError::Domain(format!(
            "k = {k} needs {} boundary unknowns, mesh has {nb}",
            k + 1
        )));
    }
    let weights = stiffness_weights(mesh);

    let mut bpos = vec![usize::MAX; n];
    for (i, &v) in boundary.iter().enumerate() {
        bpos[v] = i;
    }
    let mut iadj = vec![Vec::new(); interior.len()];
    let mut ilocal = vec![usize::MAX; n];
    for (i, &v) in interior.iter().enumerate() {
        ilocal[v] = i;
    }
    for e in &mesh.edges {
        let (a, b) = (ilocal[e[0]], ilocal[e[1]]);
        if a != usize::MAX && b != usize::MAX {
            iadj[a].push(b);
            iadj[b].push(a);
        }
    }
    let order = rcm_order(&iadj);
    let mut ipos = vec![usize::MAX; n];
    for (new, &old) in order.iter().enumerate() {
        ipos[interior[old]] = new;
    }

    let ni = interior.len();
    let mut krows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ni];
    let mut kib: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nb]; // column b: (interior row, value)
    let mut s = DMatrix::<f64>::zeros(nb, nb);
    let mut diag = vec![0.0; n];
    for (e, &w) in mesh.edges.iter().zip(&weights) {
        let [a, b] = *e;
        diag[a] += w;
        diag[b] += w;
        match (ipos[a], ipos[b]) {
            (ia, ib) if ia != usize::MAX && ib != usize::MAX => {
                krows[ia].push((ib, -w));
                krows[ib].push((ia, -w));
            }
            (ia, usize::MAX) if ia != usize::MAX => kib[bpos[b]].push((ia, -w)),
            (usize::MAX, ib) if ib != usize::MAX => kib[bpos[a]].push((ib, -w)),
            _ => {
                let (pa, pb) = (bpos[a], bpos[b]);
                s[(pa, pb)] -= w;
                s[(pb, pa)] -= w;
            }
        }
    }
    for v in 0..n {
        if ipos[v] != usize::MAX {
            krows[ipos[v]].push((ipos[v], diag[v]));
        } else {
            s[(bpos[v], bpos[v])] += diag[v];
        }
    }

    let factor = if ni > 0 { Some(Skyline::factor(&krows)?) } else { None };
    if let Some(f) = &factor {
        // S -= K_bi K_ii^{-1} K_ib, one column per boundary vertex.
        let corrections: Vec<Vec<f64>> = (0..nb)
            .into_par_iter()
            .map(|col| {
                let mut x = vec![0.0; ni];
                for &(r, v) in &kib[col] {
                    x[r] += v;
                }
                f.solve(&mut x);
                (0..nb)
                    .map(|row| kib[row].iter().map(|&(r, v)| v * x[r]).sum::<f64>())
                    .collect()
            })
            .collect();
        for (col, c) in corrections.iter().enumerate() {
            for row in 0..nb {
                s[(row, col)] -= c[row];
            }
        }
    }
    s = (&s + s.transpose()) * 0.5;

    let mut m = DMatrix::<f64>::zeros(nb, nb);
    for &(e, _) in &mesh.boundary_edges {
        let [a, b] = mesh.edges[e];
        let (pa, pb) = (bpos[a], bpos[b]);
        let l = mesh.edge_lengths[e] / 6.0;
        m[(pa, pa)] += 2.0 * l;
        m[(pb, pb)] += 2.0 * l;
        m[(pa, pb)] += l;
        m[(pb, pa)] += l;
    }
    let chol = m
        .cholesky()
        .ok_or_else(|| LabError::Solver("boundary mass is not positive definite".into()))?;
    let l = chol.l();
    // C = L^{-1} S L^{-T}
    let y = l
        .solve_lower_triangular(&s)
        .ok_or_else(|| LabError::Solver("singular boundary mass factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| LabError::Solver("singular boundary mass factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut idx: Vec<usize> = (0..nb).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();

    let mut eigenvalues = Vec::with_capacity(k + 1);
    let mut eigenfunctions = Vec::with_capacity(k + 1);
    for &i in idx.iter().take(k + 1) {
        eigenvalues.push(eig.eigenvalues[i]);
        let yv: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        let ub = lt
            .solve_upper_triangular(&yv)
            .ok_or_else(|| LabError::Solver("singular boundary mass factor".into()))?;
        let mut u = vec![0.0; n];
        for (j, &v) in boundary.iter().enumerate() {
            u[v] = ub[j];
        }
        if let Some(f) = &factor {
            // u_I = -K_ii^{-1} K_ib u_b
            let mut x = vec![0.0; ni];
            for (col, entries) in kib.iter().enumerate() {
                for &(r, v) in entries {
                    x[r] -= v * ub[col];
                }
            }
            f.solve(&mut x);
            for &v in &interior {
                u[v] = x[ipos[v]];
            }
        }
        // Deterministic sign: first nonzero boundary value positive.
        if let Some(&first) = boundary.iter().find(|&&v| u[v].abs() > 1e-12) {
            if u[first] < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
        }
        eigenfunctions.push(u);
    }
    let boundary_length = mesh.total_boundary_length();
    Ok(SteklovSpectrum {
        normalized_first: eigenvalues[1] * boundary_length,
        eigenvalues,
        eigenfunctions,
        boundary_length,
        genus: mesh.genus,
        boundary_count: mesh.boundary_count,
    })
}

/// `sigma_1 * boundary length`.
pub fn normalized_sigma1(spectrum: &SteklovSpectrum) -> Result<f64> {
    match spectrum.eigenvalues.get(1) {
        Some(s1) => Ok(s1 * spectrum.boundary_length),
        None => Err(LabError::Domain("spectrum has fewer than two eigenvalues".into())),
    }
}

/// The two known upper bounds for the normalized first eigenvalue:
/// `2 pi (g + k)` in terms of genus and boundary count, and `8 pi (g + 1)`
/// independent of the boundary count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBoundReport {
    pub normalized_first: f64,
    pub components_bound: f64,
    pub genus_bound: f64,
    pub components_slack: f64,
    pub genus_slack: f64,
}

impl UpperBoundReport {
    pub fn components_ok(&self) -> bool {
        self.components_slack >= 0.0
    }

    pub fn genus_ok(&self) -> bool {
        self.genus_slack >= 0.0
    }

    /// Whether the boundary-count-free bound is the smaller of the two.
    pub fn genus_bound_sharper(&self) -> bool {
        self.genus_bound < self.components_bound
    }
}

pub fn verify_upper_bounds(normalized_first: f64, genus: usize, boundary_count: usize) -> UpperBoundReport {
    let components_bound = 2.0 * PI * (genus + boundary_count) as f64;
    let genus_bound = 8.0 * PI * (genus + 1) as f64;
    UpperBoundReport {
        normalized_first,
        components_bound,
        genus_bound,
        components_slack: components_bound - normalized_first,
        genus_slack: genus_bound - normalized_first,
    }
}

/// One exported line per surface.
#[derive(Debug, Clone)]
pub struct SteklovRecord {
    pub surface: String,
    pub genus: usize,
    pub boundary_count: usize,
    pub boundary_lengths: Vec<f64>,
    pub resolution: f64,
    pub eigenvalues: Vec<f64>,
    pub normalized_first: f64,
    pub bounds: UpperBoundReport,
}

impl SteklovRecord {
    pub fn new(surface: &str, mesh: &TriangleMesh, spectrum: &SteklovSpectrum, resolution: f64) -> Self {
        SteklovRecord {
            surface: surface.to_string(),
            genus: spectrum.genus,
            boundary_count: spectrum.boundary_count,
            boundary_lengths: mesh.boundary_lengths(),
            resolution,
            eigenvalues: spectrum.eigenvalues.clone(),
            normalized_first: spectrum.normalized_first,
            bounds: verify_upper_bounds(spectrum.normalized_first, spectrum.genus, spectrum.boundary_count),
        }
    }

    pub const CSV_HEADER: &'static str =
        "surface,g,n,boundary_lengths,resolution,eigenvalues,normalized_first,components_slack,genus_slack";

    pub fn csv_row(&self) -> String {
        let join = |xs: &[f64]| xs.iter().map(|x| format!("{x:.12e}")).collect::<Vec<_>>().join(";");
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{:.12e},{:.12e},{:.12e}",
            self.surface,
            self.genus,
            self.boundary_count,
            join(&self.boundary_lengths),
            self.resolution,
            join(&self.eigenvalues),
            self.normalized_first,
            self.bounds.components_slack,
            self.bounds.genus_slack
        );
        s
    }
}
