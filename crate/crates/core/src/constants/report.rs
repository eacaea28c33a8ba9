//! Minimizing candidate quotients into upper estimates of the constants.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{LabError, Result};

use super::candidates::{CandidateSet, CurveSystem};
use super::levelset::LevelSweep;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub value: f64,
    pub total_length: f64,
    pub segments: usize,
    pub label: String,
}

impl Witness {
    fn of(sys: &CurveSystem, value: f64) -> Self {
        Witness { value, total_length: sys.total_length, segments: sys.segment_count(), label: sys.label.clone() }
    }

    /// Lexicographic by value, total length, segment count, then label.
    fn order(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.total_length.total_cmp(&other.total_length))
            .then(self.segments.cmp(&other.segments))
            .then_with(|| self.label.cmp(&other.label))
    }
}

fn best(ws: impl Iterator<Item = Witness>) -> Option<Witness> {
    ws.min_by(|a, b| a.order(b))
}

/// Upper estimates of the Cheeger constant, the modified Jammes constant
/// and the geodesic Cheeger constant over a finite candidate family.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub surface: String,
    pub h_c_upper: Witness,
    pub h_j_upper: Witness,
    pub big_h_upper: Option<Witness>,
    /// `H / (H + 1)` from the geodesic estimate.
    pub lemma_lower: Option<f64>,
    pub sigma1: Option<f64>,
    pub jammes_slack: Option<f64>,
    pub levelset_merged: bool,
}

impl ConstantsReport {
    /// Whether `h_C >= H / (H + 1)` holds between the two estimates.
    pub fn lemma_consistent(&self, tol: f64) -> Option<bool> {
        self.lemma_lower.map(|lo| self.h_c_upper.value >= lo - tol)
    }

    pub const CSV_HEADER: &'static str =
        "surface,h_c_upper,h_j_upper,H_upper,H_over_H_plus_1,sigma1,jammes_slack,h_c_witness,h_j_witness,H_witness";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{:.12e},{:.12e},{},{},{},{},\"{}\",\"{}\",\"{}\"",
            self.surface,
            self.h_c_upper.value,
            self.h_j_upper.value,
            opt(self.big_h_upper.as_ref().map(|w| w.value)),
            opt(self.lemma_lower),
            opt(self.sigma1),
            opt(self.jammes_slack),
            self.h_c_upper.label,
            self.h_j_upper.label,
            self.big_h_upper.as_ref().map(|w| w.label.as_str()).unwrap_or("")
        );
        s
    }
}

pub fn estimate_constants(surface: &str, set: &CandidateSet) -> Result<ConstantsReport> {
    if set.systems.is_empty() {
        return Err(LabError::Domain("empty candidate list".into()));
    }
    let area = set.surface_area;
    let h_c = best(set.systems.iter().map(|s| Witness::of(s, s.cheeger_value())))
        .ok_or_else(|| LabError::Domain("no Cheeger candidate".into()))?;
    let h_j = best(set.systems.iter().filter_map(|s| s.jammes_value(area).map(|v| Witness::of(s, v))))
        .ok_or_else(|| {
            LabError::Domain("no admissible Jammes candidate: the modified Jammes constant needs boundary".into())
        })?;
    let big_h = best(
        set.systems
            .iter()
            .filter(|s| s.geodesic && s.separates_surface)
            .map(|s| Witness::of(s, s.cheeger_value())),
    );
    let lemma_lower = big_h.as_ref().map(|w| w.value / (w.value + 1.0));
    Ok(ConstantsReport {
        surface: surface.to_string(),
        h_c_upper: h_c,
        h_j_upper: h_j,
        big_h_upper: big_h,
        lemma_lower,
        sigma1: None,
        jammes_slack: None,
        levelset_merged: false,
    })
}

/// Take the smaller of the candidate and level-set estimates.
pub fn merge_levelset(mut report: ConstantsReport, sweep: &LevelSweep) -> ConstantsReport {
    let level = |value: f64, t: f64, kind: &str| Witness {
        value,
        total_length: 0.0,
        segments: 0,
        label: format!("{kind} superlevel set of first eigenfunction at f >= {t:.6e}"),
    };
    if let Some((v, t)) = sweep.cheeger {
        if v < report.h_c_upper.value {
            report.h_c_upper = level(v, t, "Cheeger");
        }
    }
    if let Some((v, t)) = sweep.jammes {
        if v < report.h_j_upper.value {
            report.h_j_upper = level(v, t, "Jammes");
        }
    }
    report.levelset_merged = true;
    report
}

/// `sigma_1 - h_C h_J / 4`. The constants are upper estimates of infima, so
/// a negative value flags the run for review rather than refuting anything.
pub fn jammes_check(sigma1: f64, report: &ConstantsReport) -> f64 {
    sigma1 - 0.25 * report.h_c_upper.value * report.h_j_upper.value
}

pub fn with_sigma1(mut report: ConstantsReport, sigma1: f64) -> ConstantsReport {
    report.jammes_slack = Some(jammes_check(sigma1, &report));
    report.sigma1 = Some(sigma1);
    report
}
