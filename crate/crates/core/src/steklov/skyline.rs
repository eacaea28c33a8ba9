//! Envelope (skyline) Cholesky for sparse symmetric positive definite
//! matrices, with Reverse Cuthill–McKee ordering to keep the envelope thin.

use std::collections::VecDeque;

use crate::error::{LabError, Result};

/// Reverse Cuthill–McKee permutation: `order[new] = old`.
pub fn rcm_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree = |v: usize| adj[v].len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let bfs_levels = |start: usize| -> (usize, usize) {
        // (eccentricity, a farthest vertex of least degree)
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut q = VecDeque::from([start]);
        let mut last = start;
        while let Some(v) = q.pop_front() {
            if dist[v] > dist[last] || (dist[v] == dist[last] && degree(v) < degree(last)) {
                last = v;
            }
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        (dist[last], last)
    };
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (degree(v), v));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        // Pseudo-peripheral start.
        let mut start = seed;
        let (mut ecc, mut far) = bfs_levels(start);
        for _ in 0..8 {
            let (e2, f2) = bfs_levels(far);
            if e2 <= ecc {
                break;
            }
            start = far;
            ecc = e2;
            far = f2;
        }
        let first = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = first;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree(w), w));
            for w in next {
                visited[w] = true;
                order.push(w);
            }
        }
    }
    order.reverse();
    order
}

/// Lower-triangular factor stored row by row from the first nonzero column
/// to the diagonal.
#[derive(Debug, Clone)]
pub struct Skyline {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl Skyline {
    /// Factor the matrix given as symmetric rows of `(column, value)`,
    /// already in the elimination order.
    pub fn factor(rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let n = rows.len();
        let first: Vec<usize> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().map(|&(j, _)| j).filter(|&j| j <= i).min().unwrap_or(i))
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        let mut vals = vec![0.0; total];
        for (i, r) in rows.iter().enumerate() {
            for &(j, v) in r {
                if j <= i {
                    vals[start[i] + j - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let (ri, rj) = (start[i] + lo - fi, start[j] + lo - fj);
                let len = j - lo;
                let dot: f64 = vals[ri..ri + len]
                    .iter()
                    .zip(&vals[rj..rj + len])
                    .map(|(a, b)| a * b)
                    .sum();
                let idx = start[i] + j - fi;
                if j < i {
                    vals[idx] = (vals[idx] - dot) / vals[start[j + 1] - 1];
                } else {
                    let d = vals[idx] - dot;
                    if !(d > 0.0) {
                        return Err(LabError::Solver(format!(
                            "matrix not positive definite at pivot {i} ({d})"
                        )));
                    }
                    vals[idx] = d.sqrt();
                }
            }
        }
        Ok(Skyline { n, first, start, vals })
    }

    pub fn envelope_size(&self) -> usize {
        self.vals.len()
    }

    /// Solve `L L^T x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&b[fi..i]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - dot) / row[i - fi];
        }
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            b[i] /= row[i - fi];
            let xi = b[i];
            for (k, a) in row[..i - fi].iter().enumerate() {
                b[fi + k] -= a * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        let n = 20;
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                let mut r = vec![(i, 2.0)];
                if i > 0 {
                    r.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    r.push((i + 1, -1.0));
                }
                r
            })
            .collect();
        let f = Skyline::factor(&rows).unwrap();
        assert_eq!(f.envelope_size(), 2 * n - 1);
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b: Vec<f64> = (0..n)
            .map(|i| {
                2.0 * x[i] - if i > 0 { x[i - 1] } else { 0.0 } - if i + 1 < n { x[i + 1] } else { 0.0 }
            })
            .collect();
        f.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rcm_is_a_permutation_and_bands_a_path() {
        // A path graph scrambled by a fixed permutation.
        let n = 50;
        let label: Vec<usize> = (0..n).map(|i| (i * 17) % n).collect();
        let mut adj = vec![vec![]; n];
        for i in 0..n - 1 {
            adj[label[i]].push(label[i + 1]);
            adj[label[i + 1]].push(label[i]);
        }
        let order = rcm_order(&adj);
        let mut seen = order.clone();
        seen.sort();
        assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        for v in 0..n {
            for &w in &adj[v] {
                assert!(pos[v].abs_diff(pos[w]) == 1);
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        let rows = vec![vec![(0, 1.0), (1, 2.0)], vec![(0, 2.0), (1, 1.0)]];
        assert!(Skyline::factor(&rows).is_err());
    }
}
