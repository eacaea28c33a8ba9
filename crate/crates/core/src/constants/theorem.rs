//! The numeric pipeline behind the lower bounds for a surface with one long
//! boundary geodesic of wide half-collar, and the final constant assembly.

use std::f64::consts::{LN_2, PI};

use num_rational::BigRational;

use crate::error::{LabError, Result};
use crate::precision::{threshold_constants, ConstantRoute, ThresholdConstants};

/// `ln 2 / (2 pi + ln 2)`.
pub fn cheeger_threshold() -> f64 {
    LN_2 / (2.0 * PI + LN_2)
}

/// `ln 2 / (2 pi)`.
pub fn arc_threshold() -> f64 {
    LN_2 / (2.0 * PI)
}

/// `c c1 / 4`.
pub fn assembled_constant(c: f64, c1: f64) -> f64 {
    c * c1 / 4.0
}

/// The threshold constants and `c c1 / 4` to `digits` significant digits.
pub fn threshold_digits(digits: u32, c: &BigRational, c1: Option<&BigRational>) -> ThresholdConstants {
    threshold_constants(digits, c, c1, ConstantRoute::Machin)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub genus: f64,
    pub eps: f64,
    pub log_g: f64,
    /// `(1/2 - eps) log g`.
    pub half_collar_width: f64,
    /// `[(2 - eps) log g, 2 log g]`.
    pub boundary_window: (f64, f64),
    pub boundary_in_window: bool,
    /// Which supplied widths reach the half-collar width.
    pub widths_ok: Vec<bool>,
    /// Interior boundary inside the half-collar: quotient at least 1.
    pub jammes_inside: f64,
    /// Interior boundary leaving the half-collar: `(1 - 2 eps) / 2`.
    pub jammes_crossing: f64,
    pub jammes_bound: f64,
    /// `2`, when the interior boundary stays in the half-collar.
    pub part2_factor_inside: f64,
    /// `(3 - 2 eps) / (1 - 2 eps)`, when it crosses.
    pub part2_factor_crossing: f64,
    /// `(1 - 2 eps) / (3 - 2 eps)`.
    pub part2_constant: f64,
    pub cheeger_threshold: f64,
    /// `min(C, 1) (ln 2 / (2 pi + ln 2) - eps)`.
    pub cheeger_bound: f64,
    /// Centre `2 log g - 4 log log g` of the separating-systole window.
    pub systole_center: f64,
}

pub fn theorem1_case_calculator(g: f64, eps: f64, widths: &[f64], boundary_length: f64) -> Result<CaseReport> {
    if !(g >= 2.0 && g.is_finite()) {
        return Err(LabError::Domain(format!("genus {g} must be at least 2")));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(LabError::Domain(format!("eps = {eps} must lie in (0, 1/4)")));
    }
    let log_g = g.ln();
    let half_collar_width = (0.5 - eps) * log_g;
    let boundary_window = ((2.0 - eps) * log_g, 2.0 * log_g);
    let jammes_inside = 1.0;
    let jammes_crossing = (1.0 - 2.0 * eps) / 2.0;
    let part2_factor_crossing = (3.0 - 2.0 * eps) / (1.0 - 2.0 * eps);
    let part2_factor_inside: f64 = 2.0;
    let part2_constant = (1.0 / part2_factor_inside).min(1.0 / part2_factor_crossing);
    Ok(CaseReport {
        genus: g,
        eps,
        log_g,
        half_collar_width,
        boundary_window,
        boundary_in_window: boundary_window.0 <= boundary_length && boundary_length <= boundary_window.1,
        widths_ok: widths.iter().map(|&w| w >= half_collar_width).collect(),
        jammes_inside,
        jammes_crossing,
        jammes_bound: jammes_inside.min(jammes_crossing),
        part2_factor_inside,
        part2_factor_crossing,
        part2_constant,
        cheeger_threshold: cheeger_threshold(),
        cheeger_bound: part2_constant.min(1.0) * (cheeger_threshold() - eps),
        systole_center: 2.0 * log_g - 4.0 * log_g.ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point() {
        let r = theorem1_case_calculator(10f64.exp(), 0.1, &[4.0, 3.9], 19.5).unwrap();
        assert!((r.half_collar_width - 4.0).abs() < 1e-12);
        assert!((r.boundary_window.0 - 19.0).abs() < 1e-12);
        assert!((r.boundary_window.1 - 20.0).abs() < 1e-12);
        assert!((r.jammes_bound - 0.4).abs() < 1e-15);
        assert!((r.part2_factor_crossing - 3.5).abs() < 1e-14);
        assert_eq!(r.widths_ok, vec![true, false]);
        assert!(r.boundary_in_window);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(theorem1_case_calculator(1.5, 0.1, &[], 1.0).is_err());
        assert!(theorem1_case_calculator(100.0, 0.25, &[], 1.0).is_err());
        assert!(theorem1_case_calculator(100.0, 0.0, &[], 1.0).is_err());
    }
}
