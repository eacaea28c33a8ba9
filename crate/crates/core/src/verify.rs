//! The end-to-end verification suite behind `verify-all`: one verdict per
//! criterion plus the CSV and SVG artifacts each one produces.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{self, plot, BoundaryLengthSchedule};
use crate::constants::{self, theorem, CandidateOptions};
use crate::error::{LabError, Result};
use crate::hyp_trig::{self, Hexagon, COLLAR_GAP_BOUND};
use crate::hyperboloid as hb;
use crate::precision::parse_ratio;
use crate::steklov::{steklov_spectrum, verify_upper_bounds};
use crate::surface::{corpus, disk_mesh, disk_mesh_level, hexagon_chart, Metric, Surface, SurfaceSpec};
use crate::volumes::checks::{check_volume_lemmas, sum_asymptotics_range, tilde_w, SUM_RATIO_WINDOW};
use crate::volumes::{Peel, VolumeTable};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub budget: usize,
    pub resolution: f64,
    pub eps: f64,
    pub eps_prime: BigRational,
    /// Lower bound for the modified Jammes constant entering `c c1 / 4`.
    pub c: BigRational,
    /// Lower bound for the Cheeger constant; `None` takes the threshold.
    pub c1: Option<BigRational>,
    pub grid: Vec<f64>,
    pub digits: u32,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budget: crate::volumes::DEFAULT_BUDGET,
            resolution: 0.1,
            eps: 0.1,
            eps_prime: parse_ratio("0.1").expect("literal"),
            c: parse_ratio("0.4").expect("literal"),
            c1: None,
            grid: bounds::geometric_grid(3, 9),
            digits: 40,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
    /// `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
    /// Wall-clock seconds per criterion, kept out of the artifacts so that
    /// they stay byte-identical between runs.
    pub timings: Vec<(u32, f64)>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("criterion,title,passed,detail\n");
        for c in &self.criteria {
            let _ = writeln!(s, "{},\"{}\",{},\"{}\"", c.id, c.title, c.passed, c.detail.replace('"', "'"));
        }
        s
    }
}

struct CorpusRow {
    name: String,
    genus: usize,
    boundary_count: usize,
    normalized: f64,
    coarse_normalized: f64,
    area_error: f64,
    slack: f64,
    slack_note: String,
    h_c: f64,
    h_j: f64,
    lemma_ok: Option<bool>,
}

fn corpus_row(spec: &SurfaceSpec, res: f64) -> Result<CorpusRow> {
    let name = spec.name.clone().unwrap_or_default();
    let surf = spec.surface()?;
    let (genus, boundary_count) = surf.topology()?;
    let mesh = surf.mesh(res)?;
    let sp = steklov_spectrum(&mesh, 3)?;
    // A coarser mesh for the discretization allowance; the factor backs off
    // when doubling would break the resolution guard on short cuffs.
    let coarse_mesh = [2.0, 1.9, 1.75, 1.5]
        .iter()
        .find_map(|f| surf.mesh(f * res).ok())
        .ok_or_else(|| LabError::Precondition(format!("{name}: no coarser mesh admissible")))?;
    let coarse = steklov_spectrum(&coarse_mesh, 3)?;
    let area_error = (mesh.area() - surf.exact_area()?) / surf.exact_area()?;
    let Surface::Pants { graph, coords } = &surf else {
        return Err(LabError::Precondition("corpus surfaces are pants gluings".into()));
    };
    let report = |res: f64| -> Result<constants::ConstantsReport> {
        let mesh = surf.mesh(res)?;
        let sp = steklov_spectrum(&mesh, 3)?;
        let set = constants::enumerate_candidates(graph, coords, &mesh, &CandidateOptions::default())?;
        let r = constants::estimate_constants(&name, &set)?;
        let sweep = constants::levelset_sweep(&sp, &mesh)?;
        Ok(constants::with_sigma1(constants::merge_levelset(r, &sweep), sp.eigenvalues[1]))
    };
    let r = report(res)?;
    let mut slack = r.jammes_slack.unwrap_or(f64::NAN);
    let mut slack_note = String::new();
    if slack < 0.0 {
        // Only a negative slack that persists under refinement counts.
        let finer: Vec<f64> =
            [res / 2.0, res / 4.0].iter().map(|&h| report(h).map(|r| r.jammes_slack.unwrap_or(f64::NAN))).collect::<Result<_>>()?;
        slack_note = format!("negative at {res}; refined {finer:?}");
        if finer.iter().any(|&s| s >= 0.0) {
            slack = finer.into_iter().fold(f64::NEG_INFINITY, f64::max);
        }
    }
    Ok(CorpusRow {
        name,
        genus,
        boundary_count,
        normalized: sp.normalized_first,
        coarse_normalized: coarse.normalized_first,
        area_error,
        slack,
        slack_note,
        h_c: r.h_c_upper.value,
        h_j: r.h_j_upper.value,
        lemma_ok: r.lemma_consistent(1e-12),
    })
}

fn disk_oracle(report: &mut SuiteReport) -> Result<()> {
    let t = Instant::now();
    let exact = 1.0 / 1f64.sinh();
    let mut errors = Vec::new();
    let mut csv = String::from("level,max_edge,sigma1,error\n");
    for level in 2..=5 {
        let m = disk_mesh_level(1.0, Metric::Hyperbolic, level)?;
        let s = steklov_spectrum(&m, 2)?;
        let e = (s.eigenvalues[1] - exact).abs();
        let _ = writeln!(csv, "{level},{:.6e},{:.12e},{:.6e}", m.max_edge(), s.eigenvalues[1], e);
        errors.push(e);
    }
    let order = (errors[errors.len() - 2] / errors[errors.len() - 1]).log2();
    let m = disk_mesh(1.0, Metric::Hyperbolic, 0.05)?;
    let s = steklov_spectrum(&m, 2)?;
    let rel = (s.eigenvalues[1] - exact).abs() / exact;
    let rel_norm = (s.normalized_first - 2.0 * PI).abs() / (2.0 * PI);
    let secs = t.elapsed().as_secs_f64();
    report.criteria.push(CriterionResult {
        id: 1,
        title: "hyperbolic disk oracle",
        passed: rel < 0.01 && rel_norm < 0.01 && order >= 1.8 && secs < 60.0,
        detail: format!("sigma1 rel err {rel:.2e}, normalized rel err {rel_norm:.2e}, order {order:.3}"),
    });
    report.timings.push((1, secs));
    report.artifacts.push(("disk_convergence.csv".into(), csv));
    Ok(())
}

fn flat_disk(report: &mut SuiteReport) -> Result<()> {
    let m = disk_mesh(1.0, Metric::Euclidean, 0.05)?;
    let s = steklov_spectrum(&m, 2)?;
    let rel = (s.normalized_first - 2.0 * PI).abs() / (2.0 * PI);
    let b = verify_upper_bounds(s.normalized_first, 0, 1);
    report.criteria.push(CriterionResult {
        id: 2,
        title: "flat disk sharpness",
        passed: rel < 0.01,
        detail: format!("normalized {:.8}, 2 pi (g+k) = {:.8}, rel gap {rel:.2e}", s.normalized_first, b.components_bound),
    });
    Ok(())
}

fn corpus_criteria(cfg: &SuiteConfig, report: &mut SuiteReport) -> Result<()> {
    let t = Instant::now();
    let rows: Vec<CorpusRow> =
        corpus::standard_corpus(cfg.resolution).iter().map(|s| corpus_row(s, cfg.resolution)).collect::<Result<_>>()?;
    let secs = t.elapsed().as_secs_f64();
    let mut csv = String::from(
        "surface,g,n,normalized_first,normalized_first_coarse,components_bound,genus_bound,area_rel_error,h_c_upper,h_j_upper,jammes_slack\n",
    );
    let mut worst_slack = f64::INFINITY;
    let mut bounds_ok = true;
    for r in &rows {
        let b = verify_upper_bounds(r.normalized, r.genus, r.boundary_count);
        let allowance = (r.normalized - r.coarse_normalized).abs();
        let worst = r.normalized + allowance;
        for bound in [b.components_bound, b.genus_bound] {
            let rel = (bound - worst) / bound;
            worst_slack = worst_slack.min(rel);
            bounds_ok &= rel >= 0.05;
        }
        let _ = writeln!(
            csv,
            "{},{},{},{:.10e},{:.10e},{:.10e},{:.10e},{:.4e},{:.10e},{:.10e},{:.10e}",
            r.name,
            r.genus,
            r.boundary_count,
            r.normalized,
            r.coarse_normalized,
            b.components_bound,
            b.genus_bound,
            r.area_error,
            r.h_c,
            r.h_j,
            r.slack
        );
    }
    report.criteria.push(CriterionResult {
        id: 3,
        title: "upper bounds on the corpus",
        passed: rows.len() >= 10 && bounds_ok && secs < 600.0,
        detail: format!("{} surfaces, smallest relative slack after allowance {worst_slack:.3}", rows.len()),
    });
    report.timings.push((3, secs));
    let worst_area = rows.iter().map(|r| r.area_error.abs()).fold(0.0, f64::max);
    report.criteria.push(CriterionResult {
        id: 5,
        title: "Gauss-Bonnet area",
        passed: worst_area < 0.01,
        detail: format!("largest relative area error {worst_area:.2e} at resolution {}", cfg.resolution),
    });
    let neg: Vec<String> = rows.iter().filter(|r| r.slack < 0.0).map(|r| format!("{} ({})", r.name, r.slack_note)).collect();
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let lemma_flags = rows.iter().filter(|r| r.lemma_ok == Some(false)).count();
    report.criteria.push(CriterionResult {
        id: 9,
        title: "Jammes consistency",
        passed: neg.is_empty(),
        detail: format!(
            "smallest slack {min_slack:.4}; persistent negatives: {}; surfaces with h_C below H/(H+1): {lemma_flags}",
            if neg.is_empty() { "none".into() } else { neg.join(", ") }
        ),
    });
    report.artifacts.push(("corpus.csv".into(), csv));
    Ok(())
}

/// Distance between two ultraparallel lines given by unit normals.
fn line_distance(a: &hb::Vec3, b: &hb::Vec3) -> f64 {
    hb::dot(a, b).abs().max(1.0).acosh()
}

fn hexagon_identities(cfg: &SuiteConfig, report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut csv = String::from("eta,alpha,beta,width_closed,width_chart,seam_closed,seam_chart,pentagon_defect\n");
    for _ in 0..100 {
        let (eta, alpha, beta) = (rng.random_range(0.1..20.0), rng.random_range(0.1..20.0), rng.random_range(0.1..20.0));
        let c = hyp_trig::collar_width(eta, alpha, beta)?;
        let h = Hexagon::from_cuffs([eta, alpha, beta])?;
        let (_, lines) = hexagon_chart(&h)?;
        // Side 0 is half of eta, side 3 the seam between alpha and beta,
        // side 2 half of alpha.
        let width = line_distance(&lines[0], &lines[3]);
        let seam = line_distance(&lines[0], &lines[2]);
        let pent = (c.cosh_width_via_seam() - c.width.cosh()).abs() / c.width.cosh();
        let e = ((width - c.width) / c.width.max(1.0)).abs().max(((seam - c.seam) / c.seam.max(1.0)).abs()).max(pent);
        worst = worst.max(e);
        let _ = writeln!(csv, "{eta:.6},{alpha:.6},{beta:.6},{:.15e},{width:.15e},{:.15e},{seam:.15e},{pent:.3e}", c.width, c.seam);
    }
    let mut gap_max = 0.0f64;
    let pts: Vec<f64> = (0..41).map(|i| 1.1 + (40.0 - 1.1) * i as f64 / 40.0).collect();
    for &e in &pts {
        for &a in &pts {
            for &b in &pts {
                gap_max = gap_max.max(hyp_trig::collar_asymptotic_gap(e, a, b)?.abs());
            }
        }
    }
    report.criteria.push(CriterionResult {
        id: 4,
        title: "hexagon and collar identities",
        passed: worst < 1e-10 && gap_max <= COLLAR_GAP_BOUND,
        detail: format!("largest defect {worst:.2e} over 100 triples; |gap| <= {gap_max:.4} against M = {COLLAR_GAP_BOUND}"),
    });
    report.artifacts.push(("hexagon_checks.csv".into(), csv));
    Ok(())
}

fn volume_criteria(cfg: &SuiteConfig, report: &mut SuiteReport) -> Result<()> {
    let t = Instant::now();
    let table = VolumeTable::build_with(cfg.budget, Peel::Largest);
    let other = VolumeTable::build_with(cfg.budget, Peel::Smallest);
    let dual = table.cells() == other.cells()
        && table.cells().iter().all(|&(g, n)| table.get(g, n).ok() == other.get(g, n).ok());
    let lemmas = check_volume_lemmas(&table, cfg.budget)?;
    let secs = t.elapsed().as_secs_f64();
    let mut csv = String::from("g,n,points,bounds_hold,sinh_upper_holds,fitted_c,worst_exp_ratio\n");
    for c in &lemmas.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{:.6e},{:.6e}",
            c.g, c.n, c.points, c.bounds_hold, c.sinh_upper_holds, c.fitted_c, c.worst_exp_ratio
        );
    }
    let mut ratios = String::from("g,n,boundary_ratio_over_4pi2,genus_ratio\n");
    for r in &lemmas.ratios {
        let _ = writeln!(ratios, "{},{},{:.12e},{}", r.g, r.n, r.boundary_ratio, r.genus_ratio.map(|x| format!("{x:.12e}")).unwrap_or_default());
    }
    report.criteria.push(CriterionResult {
        id: 6,
        title: "volume lemmas",
        passed: dual && lemmas.all_hold() && secs < 300.0,
        detail: format!(
            "{} cells, dual-path agreement {dual}, {} inclusions proven, ratio trend over n = {:?}, fitted c(n) max {:.4}",
            lemmas.cells.len(),
            lemmas.inclusions.iter().filter(|i| i.holds).count(),
            lemmas.ratio_trend.iter().map(|t| t.0).collect::<Vec<_>>(),
            lemmas.fitted_c.iter().map(|c| c.1).fold(0.0, f64::max)
        ),
    });
    report.timings.push((6, secs));
    report.artifacts.push(("volume_lemmas.csv".into(), csv));
    report.artifacts.push(("volume_ratios.csv".into(), ratios));
    report.artifacts.push(("volumes.txt".into(), crate::volumes::text::export(&table)));

    let mut csv = String::from("b,k,C,g,terms,lhs,rhs_scale,ratio\n");
    let mut inside = true;
    let mut count = 0;
    for b in [0u32, 1] {
        for k in [1usize, 2] {
            for c in [0.0, std::f64::consts::LN_2] {
                for s in sum_asymptotics_range(&table, b, k, c, 0) {
                    inside &= SUM_RATIO_WINDOW.0 <= s.ratio && s.ratio <= SUM_RATIO_WINDOW.1;
                    count += 1;
                    let _ = writeln!(csv, "{b},{k},{c:.6},{},{},{:.10e},{:.10e},{:.10e}", s.g, s.terms, s.lhs, s.rhs_scale, s.ratio);
                }
            }
        }
    }
    let mut parity = true;
    let mut k = 1;
    while let Ok(w) = tilde_w(&table, k) {
        let direct = if k % 2 == 0 { table.get(k / 2, 2)? } else { table.get((k + 1) / 2, 1)? };
        parity &= w.0 == direct.constant_term() && w.1 == direct.dimension();
        k += 1;
    }
    report.criteria.push(CriterionResult {
        id: 7,
        title: "separating-sum window and W~ parity",
        passed: inside && count > 0 && parity,
        detail: format!("{count} ratios inside {SUM_RATIO_WINDOW:?}: {inside}; W~_k parity for k < {k}: {parity}"),
    });
    report.artifacts.push(("sum_asymptotics.csv".into(), csv));

    let reindex = bounds::reindex_checks(&table, &cfg.eps_prime, 2 * cfg.budget)?;
    let ok = reindex.iter().all(|r| r.volumes_equal && r.exponent_ok);
    report.artifacts.push((
        "reindex.csv".into(),
        std::iter::once("total,m,m_prime,volumes_equal,exponent_ok".to_string())
            .chain(reindex.iter().map(|r| format!("{},{},{},{},{}", r.total, r.m, r.m_prime, r.volumes_equal, r.exponent_ok)))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    ));
    decay_criterion(cfg, report, ok, reindex.len())
}

fn lemma_sampling(cfg: &SuiteConfig, report: &mut SuiteReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..10_000 {
        let l: f64 = rng.random_range(0.05..50.0);
        let a: f64 = rng.random_range(0.05..100.0);
        let d: f64 = rng.random_range(0.0..10.0);
        // Admissible: the cut realizes a quotient at least H.
        let h = l / a * rng.random_range(1e-6..=1.0);
        let q = constants::offset_quotient(l, a, d);
        let lo = h / (h + 1.0);
        min_margin = min_margin.min(q - lo);
        if q < lo {
            violations += 1;
        }
    }
    report.criteria.push(CriterionResult {
        id: 8,
        title: "offset quotient bound",
        passed: violations == 0,
        detail: format!("{violations} violations in 10^4 samples, smallest margin {min_margin:.3e}"),
    });
}

fn decay_criterion(cfg: &SuiteConfig, report: &mut SuiteReport, reindex_ok: bool, reindex_count: usize) -> Result<()> {
    let schedule = BoundaryLengthSchedule::log_fraction(2, 0.5);
    let (first, second) = bounds::collar_failure_bounds(&schedule, cfg.eps, &cfg.grid)?;
    let third = bounds::multicurve_decay(cfg.eps, 1, &cfg.grid)?;
    let curves: Vec<_> = first.iter().chain([&second, &third]).collect();
    let top = *cfg.grid.last().expect("non-empty grid");
    let mut parts = Vec::new();
    let mut ok = reindex_ok;
    for c in &curves {
        let dec = c.decreasing_from(1e4);
        let below = top >= 1e9 && c.value_at(1e9).is_some_and(|v| v < 1e-3);
        ok &= dec && below;
        parts.push(format!("{}: decreasing {dec}, value at 1e9 {:.3e}", c.label, c.value_at(1e9).unwrap_or(f64::NAN)));
    }
    parts.push(format!("reindexing {reindex_count} pairs exact: {reindex_ok}"));
    report.criteria.push(CriterionResult { id: 10, title: "decay bounds", passed: ok, detail: parts.join("; ") });
    report.artifacts.push(("decay_curves.csv".into(), plot::curves_csv(&curves)));
    report.artifacts.push(("decay_curves.svg".into(), plot::curves_svg("decay of the bound expressions", &curves)));
    Ok(())
}

fn threshold_criterion(cfg: &SuiteConfig, report: &mut SuiteReport) {
    let a = theorem::threshold_digits(cfg.digits, &cfg.c, cfg.c1.as_ref());
    let b = bounds::threshold_digits(cfg.digits, &cfg.c, cfg.c1.as_ref());
    let parsed = a.cheeger_threshold.parse::<f64>().unwrap_or(f64::NAN);
    let arc = a.arc_threshold.parse::<f64>().unwrap_or(f64::NAN);
    let f64_ok = parsed == theorem::cheeger_threshold() && arc == theorem::arc_threshold();
    let passed = cfg.digits >= 30 && a == b && f64_ok;
    report.criteria.push(CriterionResult {
        id: 11,
        title: "threshold constants",
        passed,
        detail: format!(
            "ln2/(2pi+ln2) = {}, ln2/(2pi) = {}, c c1/4 = {}; routes agree {}",
            a.cheeger_threshold,
            a.arc_threshold,
            a.assembled,
            a == b
        ),
    });
    report.artifacts.push((
        "thresholds.csv".into(),
        format!(
            "name,value\ncheeger_threshold,{}\narc_threshold,{}\nassembled_constant,{}\n",
            a.cheeger_threshold, a.arc_threshold, a.assembled
        ),
    ));
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    disk_oracle(&mut report)?;
    flat_disk(&mut report)?;
    corpus_criteria(cfg, &mut report)?;
    hexagon_identities(cfg, &mut report)?;
    volume_criteria(cfg, &mut report)?;
    lemma_sampling(cfg, &mut report);
    threshold_criterion(cfg, &mut report);
    report.criteria.sort_by_key(|c| c.id);
    Ok(report)
}
