//! Numeric and exact checks of the volume inequalities, the tail sums over
//! separating splittings, and the `W~_k` helper.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{VolumeTable, DEFAULT_BUDGET};
use crate::error::{LabError, Result};

/// Grid values per variable on `[0, 10]`.
pub const GRID: [f64; 5] = [0.0, 2.5, 5.0, 7.5, 10.0];

const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub g: usize,
    pub n: usize,
    /// Points of the full `5^n` grid covered, counted with permutations.
    pub points: u64,
    pub bounds_hold: bool,
    pub sinh_upper_holds: bool,
    /// Smallest `c` making `prod sinh(x_i/2)/(x_i/2) (1 - c |x|^2 / g)`
    /// a lower bound on this cell's grid.
    pub fitted_c: f64,
    /// Largest `V(x) / (V e^{|x|_1 / 2})`; at most 1.
    pub worst_exp_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusionCheck {
    pub g: usize,
    pub n: usize,
    /// Proven exactly from rational bounds on `pi^2`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub g: usize,
    pub n: usize,
    /// `V_{g,n+1} / (2 g V_{g,n}) / (4 pi^2)`.
    pub boundary_ratio: f64,
    /// `V_{g,n} / V_{g-1,n+2}`, when tabled.
    pub genus_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub cells: Vec<CellCheck>,
    pub inclusions: Vec<InclusionCheck>,
    pub ratios: Vec<RatioRow>,
    /// Per `n`: whether `|ratio - 1|` strictly decreases with `g`.
    pub ratio_trend: Vec<(usize, bool)>,
    /// Per `n`: the largest fitted `c` over all genera.
    pub fitted_c: Vec<(usize, f64)>,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.cells.iter().all(|c| c.bounds_hold && c.sinh_upper_holds)
            && self.inclusions.iter().all(|c| c.holds)
            && self.ratio_trend.iter().all(|&(_, ok)| ok)
    }
}

/// Multisets of size `n` drawn from `GRID` indices, with their number of
/// distinct orderings.
fn grid_multisets(n: usize) -> Vec<(Vec<f64>, u64)> {
    fn go(n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..GRID.len() {
            cur.push(i);
            go(n, i, cur, out);
            cur.pop();
        }
    }
    let mut idx = Vec::new();
    go(n, 0, &mut Vec::new(), &mut idx);
    let fact = |k: usize| (1..=k as u64).product::<u64>().max(1);
    idx.into_iter()
        .map(|m| {
            let mut count = fact(n);
            for v in 0..GRID.len() {
                count /= fact(m.iter().filter(|&&i| i == v).count());
            }
            (m.iter().map(|&i| GRID[i]).collect(), count)
        })
        .collect()
}

fn sinh_factor(x: &[f64]) -> f64 {
    x.iter().map(|&t| if t == 0.0 { 1.0 } else { (t / 2.0).sinh() / (t / 2.0) }).product()
}

/// Rational bounds `lo < pi^2 < hi`.
fn pi_squared_bounds() -> (BigRational, BigRational) {
    let scale = BigInt::from(10u64.pow(15));
    let lo = BigRational::new(BigInt::from(3_141_592_653_589_793u64), scale.clone());
    let hi = BigRational::new(BigInt::from(3_141_592_653_589_794u64), scale);
    (&lo * &lo, &hi * &hi)
}

pub fn check_volume_lemmas(table: &VolumeTable, g_max: usize) -> Result<LemmaReport> {
    let cells: Vec<(usize, usize)> = table.cells().into_iter().filter(|&(g, _)| g <= g_max).collect();
    let checks: Vec<CellCheck> = cells
        .par_iter()
        .map(|&(g, n)| -> Result<CellCheck> {
            let exact = table.get(g, n)?;
            let p = exact.numeric();
            let v0 = p.evaluate(&vec![0.0; n])?;
            let mut c = CellCheck {
                g,
                n,
                points: 0,
                bounds_hold: exact.all_positive(),
                sinh_upper_holds: true,
                fitted_c: 0.0,
                worst_exp_ratio: 0.0,
            };
            for (x, count) in grid_multisets(n) {
                let r = p.evaluate(&x)? / v0;
                let s: f64 = x.iter().sum();
                let e = r / (s / 2.0).exp();
                c.worst_exp_ratio = c.worst_exp_ratio.max(e);
                c.bounds_hold &= r >= 1.0 - REL_TOL && e <= 1.0 + REL_TOL;
                let sf = sinh_factor(&x);
                c.sinh_upper_holds &= r <= sf * (1.0 + REL_TOL);
                let norm2: f64 = x.iter().map(|t| t * t).sum();
                if norm2 > 0.0 && g > 0 {
                    c.fitted_c = c.fitted_c.max(g as f64 * (1.0 - r / sf) / norm2);
                }
                c.points += count;
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;

    let (lo, hi) = pi_squared_bounds();
    let mut inclusions = Vec::new();
    for &(g, n4) in &cells {
        if n4 < 4 || g + 1 > g_max {
            continue;
        }
        let n = n4 - 4;
        if let Ok(big) = table.get(g + 1, n + 2) {
            let small = table.get(g, n4)?.constant_term();
            let big = big.constant_term();
            // small pi^{2D} <= big pi^{2D + 2}
            let holds = small <= &big * &lo;
            debug_assert!(holds || small > &big * &hi);
            inclusions.push(InclusionCheck { g, n, holds });
        }
    }

    let mut ratios = Vec::new();
    let max_n = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let four_pi2 = 4.0 * std::f64::consts::PI.powi(2);
    for n in 0..max_n {
        for g in 1..=g_max {
            let (Ok(a), Ok(b)) = (table.volume(g, n + 1), table.volume(g, n)) else { continue };
            let genus_ratio = match (g >= 1).then(|| table.volume(g - 1, n + 2)) {
                Some(Ok(c)) => Some(b / c),
                _ => None,
            };
            ratios.push(RatioRow { g, n, boundary_ratio: a / (2.0 * g as f64 * b) / four_pi2, genus_ratio });
        }
    }
    let mut ratio_trend = Vec::new();
    for n in 0..max_n {
        let gaps: Vec<f64> = ratios.iter().filter(|r| r.n == n).map(|r| (r.boundary_ratio - 1.0).abs()).collect();
        if gaps.len() >= 2 {
            ratio_trend.push((n, gaps.windows(2).all(|w| w[1] < w[0])));
        }
    }
    let mut fitted_c: Vec<(usize, f64)> = Vec::new();
    for c in checks.iter().filter(|c| c.g > 0) {
        match fitted_c.iter_mut().find(|(n, _)| *n == c.n) {
            Some((_, v)) => *v = v.max(c.fitted_c),
            None => fitted_c.push((c.n, c.fitted_c)),
        }
    }
    fitted_c.sort_by_key(|x| x.0);
    Ok(LemmaReport { cells: checks, inclusions, ratios, ratio_trend, fitted_c })
}

/// `W~_k`: `V_{k/2, 2}` for even `k`, `V_{(k+1)/2, 1}` for odd `k`, as an
/// exact `(rational, power of pi^2)`.
pub fn tilde_w(table: &VolumeTable, k: usize) -> Result<(BigRational, usize)> {
    if k == 0 {
        return Err(LabError::Domain("W~_k needs k >= 1".into()));
    }
    if k % 2 == 0 { table.volume_exact(k / 2, 2) } else { table.volume_exact((k + 1) / 2, 1) }
}

pub fn tilde_w_f64(table: &VolumeTable, k: usize) -> Result<f64> {
    let (r, d) = tilde_w(table, k)?;
    Ok(r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(2 * d as i32))
}

/// Window for `lhs / rhs_scale` over the tabled genera, for
/// `(b, k, C)` in `{0, 1} x {1, 2} x {0, ln 2}` and `r = 0`. Fitted once on
/// the budget-12 table (observed range `[0.0170, 0.1414]`) and frozen.
pub const SUM_RATIO_WINDOW: (f64, f64) = (0.01, 0.2);

#[derive(Debug, Clone, PartialEq)]
pub struct SumAsymptotics {
    pub g: usize,
    pub terms: usize,
    pub lhs: f64,
    /// `V_g / g^{2r+k}`.
    pub rhs_scale: f64,
    pub ratio: f64,
}

/// `sum_{g1 + g2 = g + 1 - k, r + 1 <= g1 <= g2} e^{C g1} g1^b V_{g1,k} V_{g2,k}`
/// against `V_g / g^{2r + k}`.
pub fn sum_asymptotics(table: &VolumeTable, b: u32, k: usize, c: f64, r: usize, g: usize) -> Result<SumAsymptotics> {
    if c >= 2.0 * std::f64::consts::LN_2 {
        return Err(LabError::Domain(format!("C = {c} must be below 2 ln 2")));
    }
    let total = (g + 1)
        .checked_sub(k)
        .ok_or_else(|| LabError::Domain(format!("g = {g} too small for k = {k}")))?;
    let mut lhs = 0.0;
    let mut terms = 0;
    for g1 in r + 1..=total / 2 {
        let g2 = total - g1;
        let v = table.volume(g1, k)? * table.volume(g2, k)?;
        lhs += (c * g1 as f64).exp() * (g1 as f64).powi(b as i32) * v;
        terms += 1;
    }
    if terms == 0 {
        return Err(LabError::Domain(format!("empty range for g = {g}, k = {k}, r = {r}")));
    }
    let rhs_scale = table.volume(g, 0)? / (g as f64).powi((2 * r + k) as i32);
    Ok(SumAsymptotics { g, terms, lhs, rhs_scale, ratio: lhs / rhs_scale })
}

/// Every `g` for which the sum is non-empty and fully tabled.
pub fn sum_asymptotics_range(table: &VolumeTable, b: u32, k: usize, c: f64, r: usize) -> Vec<SumAsymptotics> {
    (2..=DEFAULT_BUDGET.max(table.budget)).filter_map(|g| sum_asymptotics(table, b, k, c, r, g).ok()).collect()
}
