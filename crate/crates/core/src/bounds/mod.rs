//! Finite-genus evaluation of the probability and expectation bounds for
//! random surfaces with long boundary. Implied constants are left symbolic;
//! what is checked is shape: positivity, monotone decay on a grid, and
//! threshold crossings.

pub mod plot;

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{LabError, Result};
use crate::precision::{threshold_constants, ConstantRoute, Fixed, ThresholdConstants};
use crate::volumes::checks::{tilde_w, tilde_w_f64};
use crate::volumes::VolumeTable;

/// Boundary lengths `L_g^i = a_i log g + b_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLengthSchedule {
    pub description: String,
    pub coefficients: Vec<(f64, f64)>,
}

impl BoundaryLengthSchedule {
    /// `n` equal lengths summing to `fraction * log g`.
    pub fn log_fraction(n: usize, fraction: f64) -> Self {
        BoundaryLengthSchedule {
            description: format!("{n} equal lengths, sum = {fraction} log g"),
            coefficients: vec![(fraction / n as f64, 0.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    pub fn lengths(&self, g: f64) -> Vec<f64> {
        let lg = g.ln();
        self.coefficients.iter().map(|&(a, b)| a * lg + b).collect()
    }

    pub fn total(&self, g: f64) -> f64 {
        self.lengths(g).iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub label: String,
    pub samples: Vec<(f64, f64)>,
}

impl DecayCurve {
    pub fn new(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        let label = label.into();
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(LabError::Precondition(format!("{label}: grid not strictly increasing")));
        }
        if samples.iter().any(|&(_, v)| !(v.is_finite() && v > 0.0)) {
            return Err(LabError::Precondition(format!("{label}: non-positive or non-finite value")));
        }
        Ok(DecayCurve { label, samples })
    }

    /// Strictly decreasing over the samples with `g >= from`.
    pub fn decreasing_from(&self, from: f64) -> bool {
        let tail: Vec<f64> = self.samples.iter().filter(|s| s.0 >= from).map(|s| s.1).collect();
        tail.len() >= 2 && tail.windows(2).all(|w| w[1] < w[0])
    }

    pub fn value_at(&self, g: f64) -> Option<f64> {
        self.samples.iter().find(|s| s.0 == g).map(|s| s.1)
    }

    /// Whether the curve is below `threshold` at the sample `g`.
    pub fn below_at(&self, g: f64, threshold: f64) -> Option<bool> {
        self.value_at(g).map(|v| v < threshold)
    }
}

/// `{10^lo, ..., 10^hi}`.
pub fn geometric_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 10f64.powi(k)).collect()
}

/// Grid from `lo:hi` (decades) or a comma list of values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || LabError::Parse(format!("grid `{spec}`: expected `lo:hi` exponents or a comma list"));
    let grid = if let Some((a, b)) = spec.split_once(':') {
        let lo: i32 = a.trim().parse().map_err(|_| bad())?;
        let hi: i32 = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        geometric_grid(lo, hi)
    } else {
        spec.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() || grid.iter().any(|&g| !(g >= 1.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad());
    }
    Ok(grid)
}

/// The two final expressions bounding the failure of wide disjoint
/// half-collars: `L^1 L^2 / g^{1/2 + eps}` (a pants cut off with two
/// boundary components; absent when `n = 1`) and `log^2 g / g^{2 eps}`
/// (a pants cut off with one).
pub fn collar_failure_bounds(
    schedule: &BoundaryLengthSchedule,
    eps: f64,
    grid: &[f64],
) -> Result<(Option<DecayCurve>, DecayCurve)> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(LabError::Domain(format!("eps = {eps} must lie in (0, 1/2)")));
    }
    let first = if schedule.n() >= 2 {
        let s = grid
            .iter()
            .map(|&g| {
                let l = schedule.lengths(g);
                (g, collar_first(l[0], l[1], eps, g))
            })
            .collect();
        Some(DecayCurve::new(format!("L1 L2 / g^(1/2+{eps})"), s)?)
    } else {
        None
    };
    let second = grid.iter().map(|&g| (g, collar_second(eps, g))).collect();
    Ok((first, DecayCurve::new(format!("log^2 g / g^(2*{eps})"), second)?))
}

/// `L^1 L^2 / g^{1/2 + eps}`.
pub fn collar_first(l1: f64, l2: f64, eps: f64, g: f64) -> f64 {
    l1 * l2 / g.powf(0.5 + eps)
}

/// `log^2 g / g^{2 eps}`.
pub fn collar_second(eps: f64, g: f64) -> f64 {
    g.ln().powi(2) / g.powf(2.0 * eps)
}

/// `log^2 g / g^{2 eps}` to `digits` significant digits, `g` and `eps`
/// exact decimals.
pub fn collar_second_precise(g: &BigRational, eps: &BigRational, digits: u32) -> Fixed {
    let bits = Fixed::bits_for_digits(digits) + 16;
    let lg = Fixed::from_ratio(g, bits).ln();
    let e = Fixed::from_ratio(eps, bits);
    let denom = lg.mul(&e).mul_int(2).exp();
    lg.mul(&lg).div(&denom).rescale(Fixed::bits_for_digits(digits))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulticurveBound {
    /// `e^{2L} / g^m`; the factor `c(n, m)` is not made explicit.
    pub structural: f64,
    pub constant: &'static str,
    /// `sum_s e^L L^s / (s!)^2`.
    pub inner_sum: f64,
    /// `e^{L + 2 sqrt L}`.
    pub inner_bound: f64,
}

pub fn multicurve_expectation_bound(g: f64, m: u32, l: f64) -> Result<MulticurveBound> {
    if !(l > 1.0) {
        return Err(LabError::Domain(format!("L = {l} must exceed 1")));
    }
    if m == 0 {
        return Err(LabError::Domain("m must be positive".into()));
    }
    Ok(MulticurveBound {
        structural: (2.0 * l).exp() / g.powi(m as i32),
        constant: "c(n, m)",
        inner_sum: l.exp() * bessel_series(l),
        inner_bound: (l + 2.0 * l.sqrt()).exp(),
    })
}

/// `sum_s L^s / (s!)^2`, summed until the terms stop mattering.
pub fn bessel_series(l: f64) -> f64 {
    let (mut sum, mut term, mut s) = (1.0, 1.0, 0.0);
    loop {
        s += 1.0;
        term *= l / (s * s);
        sum += term;
        if term < sum * 1e-17 && s > l.sqrt() {
            return sum;
        }
    }
}

/// `e^{2L} / g^m` with `L = (1/2 - eps) log g`, that is `g^{1 - 2 eps - m}`.
pub fn multicurve_decay(eps: f64, m: u32, grid: &[f64]) -> Result<DecayCurve> {
    let s = grid.iter().map(|&g| (g, (2.0 * (0.5 - eps) * g.ln()).exp() / g.powi(m as i32))).collect();
    DecayCurve::new(format!("e^(2L) / g^{m}, L = (1/2-{eps}) log g"), s)
}

/// `floor(c1 k pi / ((1 - 2 eps) log g))`: the most boundary-orthogonal
/// arcs a cut of a subsurface of area `k pi` can contain.
pub fn max_arc_count(c1: f64, k: u32, eps: f64, g: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 0.5) || !(g > 1.0) || !(c1 > 0.0) {
        return Err(LabError::Domain("need c1 > 0, 0 < eps < 1/2, g > 1".into()));
    }
    Ok((c1 * k as f64 * PI / ((1.0 - 2.0 * eps) * g.ln())).floor() as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfSurfaceBound {
    pub g: usize,
    pub n: usize,
    pub m: usize,
    /// `e^{2 pi m c2 + (c2 / c1) sum L}`.
    pub prefactor: f64,
    /// `W~_m W~_{2g-2+n-m} / V_{g,n}`, when tabled.
    pub volume_ratio: Option<f64>,
    pub value: Option<f64>,
    pub expression: String,
}

pub fn half_surface_bound(
    table: &VolumeTable,
    g: usize,
    n: usize,
    m: usize,
    c1: f64,
    c2: f64,
    schedule: &BoundaryLengthSchedule,
) -> Result<HalfSurfaceBound> {
    if !(c1 > 0.0 && c1 < c2) {
        return Err(LabError::Domain(format!("need 0 < c1 < c2, got c1 = {c1}, c2 = {c2}")));
    }
    let big_m = (2 * g + n)
        .checked_sub(2)
        .filter(|&v| v > 0)
        .ok_or_else(|| LabError::Domain(format!("(g, n) = ({g}, {n}) is not hyperbolic")))?;
    if m > big_m {
        return Err(LabError::Domain(format!("m = {m} exceeds |chi| = {big_m}")));
    }
    let total_l = schedule.total(g as f64);
    let prefactor = (2.0 * PI * m as f64 * c2 + c2 / c1 * total_l).exp();
    if m == 0 || m == big_m {
        return Ok(HalfSurfaceBound {
            g,
            n,
            m,
            prefactor,
            volume_ratio: None,
            value: Some(prefactor),
            expression: "boundary-only term".into(),
        });
    }
    let expression = format!("e^(2 pi {m} c2 + (c2/c1) |L|) W~_{m} W~_{} / V_({g},{n})", big_m - m);
    let ratio = (|| -> Result<f64> {
        Ok(tilde_w_f64(table, m)? * tilde_w_f64(table, big_m - m)? / table.volume(g, n)?)
    })();
    match ratio {
        Ok(r) => Ok(HalfSurfaceBound { g, n, m, prefactor, volume_ratio: Some(r), value: Some(prefactor * r), expression }),
        Err(LabError::Budget { .. }) => Ok(HalfSurfaceBound { g, n, m, prefactor, volume_ratio: None, value: None, expression }),
        Err(e) => Err(e),
    }
}

/// `4 pi c2 (1 + eps') / (1 - eps') < 2 ln 2`, the condition under which
/// the reindexed tail sum is dominated by `V_{g,n} / g`.
pub fn tail_condition(c2: f64, eps_prime: f64) -> bool {
    4.0 * PI * c2 * (1.0 + eps_prime) / (1.0 - eps_prime) < 2.0 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReindexCheck {
    pub total: usize,
    pub m: usize,
    pub m_prime: usize,
    /// `W~_m W~_{M-m} = W~_{m'} W~_{M-m'}` exactly.
    pub volumes_equal: bool,
    /// `m <= m' (1 + eps') / (1 - eps')` exactly.
    pub exponent_ok: bool,
}

/// For every `M = 2g - 2 + n` up to `max_total` and every `m` with
/// `M/2 <= m <= (1 + eps') M / 2` whose `W~` factors are tabled, compare
/// the summand at `m` with the reindexed summand at `m' = M - m`.
pub fn reindex_checks(table: &VolumeTable, eps_prime: &BigRational, max_total: usize) -> Result<Vec<ReindexCheck>> {
    let one = BigRational::one();
    if !(eps_prime >= &BigRational::zero() && eps_prime < &one) {
        return Err(LabError::Domain("eps' must lie in [0, 1)".into()));
    }
    let mut out = Vec::new();
    for total in 2..=max_total {
        let t = BigRational::from_integer(total.into());
        for m in 1..total {
            let mr = BigRational::from_integer(m.into());
            let two = BigRational::from_integer(2.into());
            if &mr * &two < t || &mr * &two > &t * (&one + eps_prime) {
                continue;
            }
            let mp = total - m;
            let (Ok(a), Ok(b)) = (tilde_w(table, m), tilde_w(table, total - m)) else { continue };
            let (Ok(c), Ok(d)) = (tilde_w(table, mp), tilde_w(table, total - mp)) else { continue };
            let lhs = (&a.0 * &b.0, a.1 + b.1);
            let rhs = (&c.0 * &d.0, c.1 + d.1);
            let mpr = BigRational::from_integer(mp.into());
            out.push(ReindexCheck {
                total,
                m,
                m_prime: mp,
                volumes_equal: lhs == rhs,
                exponent_ok: mr * (&one - eps_prime) <= mpr * (&one + eps_prime),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowRow {
    pub g: f64,
    pub total_length: f64,
    pub min_length: f64,
    pub ratio_to_log: f64,
    pub systole_center: f64,
    pub omega: f64,
    pub window: (f64, f64),
    pub omega_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub rows: Vec<WindowRow>,
    pub margin: f64,
    /// `sum L` strictly increasing on the grid.
    pub total_grows: bool,
    /// Every `L^i >= 1 + margin`.
    pub lengths_exceed_one: bool,
    /// `sum L / log g <= 1 - margin` everywhere.
    pub ratio_below_one: bool,
    /// `omega / log log g` strictly decreasing.
    pub omega_ratio_decreasing: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.total_grows && self.lengths_exceed_one && self.ratio_below_one
    }
}

pub fn admissibility_and_windows(
    schedule: &BoundaryLengthSchedule,
    omega: impl Fn(f64) -> f64,
    grid: &[f64],
    margin: f64,
) -> AdmissibilityReport {
    let rows: Vec<WindowRow> = grid
        .iter()
        .map(|&g| {
            let l = schedule.lengths(g);
            let total: f64 = l.iter().sum();
            let lg = g.ln();
            let center = 2.0 * lg - 4.0 * lg.ln();
            let w = omega(g);
            WindowRow {
                g,
                total_length: total,
                min_length: l.iter().copied().fold(f64::INFINITY, f64::min),
                ratio_to_log: total / lg,
                systole_center: center,
                omega: w,
                window: (center - w, center + w),
                omega_ratio: w / lg.ln(),
            }
        })
        .collect();
    AdmissibilityReport {
        margin,
        total_grows: rows.windows(2).all(|w| w[1].total_length > w[0].total_length),
        lengths_exceed_one: rows.iter().all(|r| r.min_length >= 1.0 + margin),
        ratio_below_one: rows.iter().all(|r| r.ratio_to_log <= 1.0 - margin),
        omega_ratio_decreasing: rows.windows(2).all(|w| w[1].omega_ratio < w[0].omega_ratio),
        rows,
    }
}

/// The thresholds on `c1` and `c` and the assembled `c c1 / 4`, through
/// an independent pair of series for `pi` and `ln 2`.
pub fn threshold_digits(digits: u32, c: &BigRational, c1: Option<&BigRational>) -> ThresholdConstants {
    threshold_constants(digits, c, c1, ConstantRoute::Euler)
}

/// `omega(g) = sqrt(log log g)`.
pub fn omega_sqrt_loglog(g: f64) -> f64 {
    g.ln().ln().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("3:5").unwrap(), vec![1e3, 1e4, 1e5]);
        assert_eq!(parse_grid("2, 10,100").unwrap(), vec![2.0, 10.0, 100.0]);
        assert!(parse_grid("5:3").is_err());
        assert!(parse_grid("10,2").is_err());
    }

    #[test]
    fn bessel_series_small() {
        // sum 1/(s!)^2 at L = 1.
        let direct: f64 = (0..20).map(|s| 1.0 / ((1..=s).map(|i| i as f64).product::<f64>()).powi(2)).sum();
        assert!((bessel_series(1.0) - direct).abs() < 1e-15);
    }
}
