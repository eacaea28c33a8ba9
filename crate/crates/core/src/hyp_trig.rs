//! Right-angled hexagons, pairs of pants and half-collar widths.
//!
//! A pair of pants with cuff lengths `(l1, l2, l3)` is the double of a
//! right-angled hexagon whose alternate sides are the half-cuffs `l_i / 2`.
//! The other three sides ("seams") are the orthogeodesics between cuffs.
//! Every formula here is evaluated through `cosh x - 1` so that short seams
//! and collars keep full relative precision, and through logarithms once an
//! argument exceeds [`LOG_DOMAIN_THRESHOLD`].

use crate::error::{domain, LabError, Result};

/// Smallest accepted geodesic length.
pub const MIN_LENGTH: f64 = 1e-6;
/// Largest accepted geodesic length.
pub const MAX_LENGTH: f64 = 50.0;
/// Arguments above this are combined in the log domain.
pub const LOG_DOMAIN_THRESHOLD: f64 = 20.0;

/// Uniform bound on `|collar_asymptotic_gap|`, fitted by a sweep of
/// `eta, alpha, beta` over an 81^3 grid of `[1.1, 40]` (observed supremum
/// 1.8550, at the corner `eta = alpha = beta = 1.1`).
pub const COLLAR_GAP_BOUND: f64 = 2.0;

fn check_length(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("{name} = {x} must be positive and finite"));
    }
    if !(MIN_LENGTH..=MAX_LENGTH).contains(&x) {
        return domain(format!(
            "{name} = {x} outside the supported range [{MIN_LENGTH}, {MAX_LENGTH}]"
        ));
    }
    Ok(())
}

/// `ln(sum exp(x_i))`.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x > LOG_DOMAIN_THRESHOLD {
        x + (0.5 * (1.0 + (-2.0 * x).exp())).ln()
    } else {
        x.cosh().ln()
    }
}

fn ln_sinh(x: f64) -> f64 {
    if x > LOG_DOMAIN_THRESHOLD {
        x + (0.5 * (1.0 - (-2.0 * x).exp())).ln()
    } else {
        x.sinh().ln()
    }
}

/// Length `x >= 0` from `cosh x - 1`.
pub fn length_from_cosh_excess(cm1: f64) -> f64 {
    2.0 * (0.5 * cm1.max(0.0)).sqrt().asinh()
}

/// `cosh b - 1` for the seam joining half-cuffs `ai` and `aj`, opposite `ak`.
fn seam_cosh_excess(ai: f64, aj: f64, ak: f64) -> f64 {
    // cosh b - 1 = (cosh ak + cosh(ai - aj)) / (sinh ai sinh aj)
    let num = log_sum_exp(&[ln_cosh(ak), ln_cosh(ai - aj)]);
    (num - ln_sinh(ai) - ln_sinh(aj)).exp()
}

/// Orthogeodesic seam lengths `(b12, b23, b31)` of the pair of pants with
/// cuff lengths `(l1, l2, l3)`; `bij` joins cuff `i` to cuff `j`.
pub fn pants_seams(l1: f64, l2: f64, l3: f64) -> Result<[f64; 3]> {
    check_length("l1", l1)?;
    check_length("l2", l2)?;
    check_length("l3", l3)?;
    let (a1, a2, a3) = (l1 / 2.0, l2 / 2.0, l3 / 2.0);
    Ok([
        length_from_cosh_excess(seam_cosh_excess(a1, a2, a3)),
        length_from_cosh_excess(seam_cosh_excess(a2, a3, a1)),
        length_from_cosh_excess(seam_cosh_excess(a3, a1, a2)),
    ])
}

/// Right-angled hexagon, listed cyclically as
/// `half_cuff[0], seam[0], half_cuff[1], seam[1], half_cuff[2], seam[2]`,
/// so `seam[k]` joins half-cuff `k` to half-cuff `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hexagon {
    pub half_cuffs: [f64; 3],
    pub seams: [f64; 3],
}

impl Hexagon {
    pub fn from_cuffs(cuffs: [f64; 3]) -> Result<Self> {
        let seams = pants_seams(cuffs[0], cuffs[1], cuffs[2])?;
        Ok(Hexagon {
            half_cuffs: [cuffs[0] / 2.0, cuffs[1] / 2.0, cuffs[2] / 2.0],
            seams,
        })
    }

    /// Side lengths in cyclic order.
    pub fn sides(&self) -> [f64; 6] {
        let (a, b) = (self.half_cuffs, self.seams);
        [a[0], b[0], a[1], b[1], a[2], b[2]]
    }

    /// Largest relative defect of the right-angled hexagon relation
    /// `cosh b_k = (cosh a_opp + cosh a_k cosh a_next) / (sinh a_k sinh a_next)`.
    pub fn relation_defect(&self) -> f64 {
        let a = self.half_cuffs;
        (0..3)
            .map(|k| {
                let (ai, aj, ao) = (a[k], a[(k + 1) % 3], a[(k + 2) % 3]);
                let rhs = (ao.cosh() + ai.cosh() * aj.cosh()) / (ai.sinh() * aj.sinh());
                let lhs = self.seams[k].cosh();
                ((lhs - rhs) / rhs).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Half-cuff lengths recovered from the seams by the dual relation
    /// `cosh a_opp = (cosh b_opp + cosh b_k cosh b_next) / (sinh b_k sinh b_next)`.
    pub fn half_cuffs_from_seams(&self) -> [f64; 3] {
        let b = self.seams;
        // a[k] sits between seam[k-1] and seam[k]; opposite to seam[k+1].
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let (bp, bn, bo) = (b[(k + 2) % 3], b[k], b[(k + 1) % 3]);
            *slot = length_from_cosh_excess(seam_cosh_excess(bp, bn, bo));
        }
        out
    }
}

/// Maximal half-collar of the cuff `eta` inside the pants `(eta, alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarData {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Distance from `eta` to the seam joining `alpha` and `beta`.
    pub width: f64,
    /// Seam joining `eta` to `alpha`.
    pub seam: f64,
}

impl CollarData {
    /// `sinh(alpha / 2) sinh(seam)`, the pentagon route to `cosh(width)`.
    pub fn cosh_width_via_seam(&self) -> f64 {
        (self.alpha / 2.0).sinh() * self.seam.sinh()
    }

    /// `alpha + beta <= 4 d + eta + m`.
    pub fn satisfies_length_bound(&self, m: f64) -> bool {
        self.alpha + self.beta <= 4.0 * self.width + self.eta + m
    }
}

/// `cosh d` from the closed form
/// `sqrt(ch_b^2 + ch_a^2 + ch_e^2 + 2 ch_a ch_b ch_e - 1) / sinh(eta / 2)`.
pub fn collar_cosh_closed_form(eta: f64, alpha: f64, beta: f64) -> f64 {
    let (ca, cb, ce) = ((alpha / 2.0).cosh(), (beta / 2.0).cosh(), (eta / 2.0).cosh());
    (cb * cb + ca * ca + ce * ce + 2.0 * ca * cb * ce - 1.0).sqrt() / (eta / 2.0).sinh()
}

pub fn collar_width(eta: f64, alpha: f64, beta: f64) -> Result<CollarData> {
    check_length("eta", eta)?;
    check_length("alpha", alpha)?;
    check_length("beta", beta)?;
    let (ha, hb, he) = (alpha / 2.0, beta / 2.0, eta / 2.0);
    // cosh d - 1 = N / (sinh he (sqrt(N + sinh^2 he) + sinh he)),
    // N = ch_a^2 + ch_b^2 + 2 ch_a ch_b ch_e.
    let ln_n = log_sum_exp(&[
        2.0 * ln_cosh(ha),
        2.0 * ln_cosh(hb),
        std::f64::consts::LN_2 + ln_cosh(ha) + ln_cosh(hb) + ln_cosh(he),
    ]);
    let ln_se = ln_sinh(he);
    let ln_sqrt_q = 0.5 * log_sum_exp(&[ln_n, 2.0 * ln_se]);
    let ln_den = ln_se + log_sum_exp(&[ln_sqrt_q, ln_se]);
    let width = length_from_cosh_excess((ln_n - ln_den).exp());
    let seam = length_from_cosh_excess(seam_cosh_excess(he, ha, hb));
    Ok(CollarData { eta, alpha, beta, width, seam })
}

/// Split of the half-cuff `eta / 2` by the foot of the perpendicular of
/// length `d`: the part adjacent to `alpha` and the part adjacent to `beta`.
/// The two parts sum to `eta / 2`.
pub fn collar_foot_split(c: &CollarData) -> (f64, f64) {
    let sd = c.width.sinh();
    let xa = ((c.alpha / 2.0).cosh() / sd).asinh();
    let xb = ((c.beta / 2.0).cosh() / sd).asinh();
    (xa, xb)
}

/// Distance along the `alpha`/`beta` seam from its foot on `alpha` to the
/// foot of the perpendicular from `eta`.
pub fn collar_seam_offset(c: &CollarData) -> f64 {
    let (xa, _) = collar_foot_split(c);
    (xa.sinh() * c.seam.sinh()).acosh()
}

/// `d - max{(alpha - eta)/2, (beta - eta)/2, (alpha + beta - eta)/4, 0}`.
pub fn collar_asymptotic_gap(eta: f64, alpha: f64, beta: f64) -> Result<f64> {
    if eta.is_nan() || eta <= 1.0 {
        return Err(LabError::Precondition(format!(
            "collar gap needs eta > 1, got {eta}"
        )));
    }
    let c = collar_width(eta, alpha, beta)?;
    Ok(c.width - asymptotic_width(eta, alpha, beta))
}

/// The piecewise-linear leading term of the half-collar width.
pub fn asymptotic_width(eta: f64, alpha: f64, beta: f64) -> f64 {
    [
        (alpha - eta) / 2.0,
        (beta - eta) / 2.0,
        (alpha + beta - eta) / 4.0,
        0.0,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max)
}

/// `eta + eta_tilde + 2 d`: bound on the geodesic cutting off a pants with
/// two boundary components joined by an arc of length `d`.
pub fn xi_length_bound(eta: f64, eta_tilde: f64, d: f64) -> Result<f64> {
    for (name, x) in [("eta", eta), ("eta_tilde", eta_tilde)] {
        if !x.is_finite() || x <= 0.0 {
            return domain(format!("{name} = {x} must be positive"));
        }
    }
    if !d.is_finite() || d < 0.0 {
        return domain(format!("d = {d} must be nonnegative"));
    }
    Ok(eta + eta_tilde + 2.0 * d)
}

/// Standard collar half-width `asinh(1 / sinh(l / 2))` of a simple closed
/// geodesic of length `l`; collars of disjoint simple closed geodesics
/// (and half-collars of boundary geodesics) of these widths are disjoint.
pub fn standard_collar_width(l: f64) -> f64 {
    (1.0 / (l / 2.0).sinh()).asinh()
}
