use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use steklov_lab::bounds::{self, plot, BoundaryLengthSchedule};
use steklov_lab::constants::{self, CandidateOptions, ConstantsReport};
use steklov_lab::precision::Fixed;
use steklov_lab::steklov::{steklov_spectrum, SteklovRecord};
use steklov_lab::surface::{Surface, SurfaceSpec};
use steklov_lab::verify::{run_suite, SuiteConfig};
use steklov_lab::volumes::checks::check_volume_lemmas;
use steklov_lab::volumes::{text, Peel, VolumeTable};
use steklov_lab::LabError;

use crate::config::{self as cfg, sha256_hex, Decimal, RunConfig};
use crate::output::Outputs;
use crate::Failure;

/// Surface file contents and their parsed form. Read before anything is
/// computed or written.
pub struct LoadedSurface {
    pub name: String,
    pub spec: SurfaceSpec,
    pub surface: Surface,
    pub sha256: String,
}

pub fn load_surface(path: &Path) -> Result<LoadedSurface, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let spec = SurfaceSpec::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let surface = spec.surface().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let name = spec
        .name
        .clone()
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    Ok(LoadedSurface { name, spec, surface, sha256: sha256_hex(text.as_bytes()) })
}

fn lab(e: LabError) -> Failure {
    Failure::Input(e.to_string())
}

fn surface_config(command: &'static str, s: &LoadedSurface, path: &Path, resolution: f64) -> RunConfig {
    RunConfig {
        surface: Some(path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()),
        surface_sha256: Some(s.sha256.clone()),
        resolution: Some(resolution),
        ..RunConfig::new(command)
    }
}

pub struct SteklovArgs<'a> {
    pub surface: &'a Path,
    pub resolution: Option<f64>,
    pub k: usize,
    pub out: &'a Path,
}

/// Spectrum record and the two upper-bound verdicts. The bounds count as
/// violated only when the value minus the discretization allowance, the
/// change from a coarser mesh, still exceeds them.
pub fn steklov(a: SteklovArgs) -> Result<i32, Failure> {
    let s = load_surface(a.surface)?;
    let res = cfg::check_resolution(a.resolution.unwrap_or(s.spec.resolution))?;
    let k = cfg::check_k(a.k)?;
    let config = RunConfig { k: Some(k), ..surface_config("steklov", &s, a.surface, res) };

    let mesh = s.surface.mesh(res).map_err(lab)?;
    let spectrum = steklov_spectrum(&mesh, k.max(2)).map_err(lab)?;
    let record = SteklovRecord::new(&s.name, &mesh, &spectrum, res);
    let coarse = [2.0, 1.9, 1.75, 1.5]
        .iter()
        .find_map(|f| s.surface.mesh(f * res).ok())
        .map(|m| steklov_spectrum(&m, 2).map(|sp| sp.normalized_first))
        .transpose()
        .map_err(lab)?;
    let allowance = coarse.map(|c| (c - record.normalized_first).abs()).unwrap_or(0.0);
    let b = record.bounds;
    let components_violated = record.normalized_first - allowance > b.components_bound;
    let genus_violated = record.normalized_first - allowance > b.genus_bound;

    let mut out = Outputs::new(&config);
    let mut csv = format!("{},allowance,components_bound,genus_bound,under_resolved\n", SteklovRecord::CSV_HEADER);
    let _ = writeln!(
        csv,
        "{},{allowance:.6e},{:.12e},{:.12e},{}",
        record.csv_row(),
        b.components_bound,
        b.genus_bound,
        spectrum.under_resolved()
    );
    out.add("steklov.csv", &csv);
    let mut clusters = String::from("value,multiplicity\n");
    for (v, m) in spectrum.clusters() {
        let _ = writeln!(clusters, "{v:.12e},{m}");
    }
    out.add("clusters.csv", &clusters);
    let detail = |slack: f64| format!("slack {slack:.6e}, allowance {allowance:.3e}");
    out.verdict("normalized_first <= 2 pi (g + k)", !components_violated, &detail(b.components_slack));
    out.verdict("normalized_first <= 8 pi (g + 1)", !genus_violated, &detail(b.genus_slack));

    println!(
        "{}: g = {}, n = {}, sigma_1 = {:.8}, normalized = {:.8} (2 pi (g+k) = {:.6}, 8 pi (g+1) = {:.6})",
        s.name,
        record.genus,
        record.boundary_count,
        spectrum.eigenvalues.get(1).copied().unwrap_or(f64::NAN),
        record.normalized_first,
        b.components_bound,
        b.genus_bound
    );
    if spectrum.under_resolved() {
        eprintln!("warning: sigma_0 is not small against sigma_1; refine the mesh");
    }
    let code = if components_violated || genus_violated { 2 } else { 0 };
    if code == 2 {
        eprintln!("bound violation beyond the discretization allowance; flagged for investigation");
    }
    out.write(a.out, &config, code)?;
    Ok(code)
}

pub struct ConstantsArgs<'a> {
    pub surface: &'a Path,
    pub resolution: Option<f64>,
    pub with_levelset: bool,
    pub out: &'a Path,
}

pub fn constants(a: ConstantsArgs) -> Result<i32, Failure> {
    let s = load_surface(a.surface)?;
    let res = cfg::check_resolution(a.resolution.unwrap_or(s.spec.resolution))?;
    let Surface::Pants { graph, coords } = &s.surface else {
        return Err(Failure::Input("constants need a pants decomposition, not a disk".into()));
    };
    let (_, n) = s.surface.topology().map_err(lab)?;
    if n == 0 {
        return Err(Failure::Input("h~_J undefined: the surface has no boundary".into()));
    }
    let config =
        RunConfig { with_levelset: Some(a.with_levelset), ..surface_config("constants", &s, a.surface, res) };

    let mesh = s.surface.mesh(res).map_err(lab)?;
    let set = constants::enumerate_candidates(graph, coords, &mesh, &CandidateOptions::default()).map_err(lab)?;
    let mut report: ConstantsReport = constants::estimate_constants(&s.name, &set).map_err(lab)?;
    let spectrum = steklov_spectrum(&mesh, 2).map_err(lab)?;
    if a.with_levelset {
        let sweep = constants::levelset_sweep(&spectrum, &mesh).map_err(lab)?;
        report = constants::merge_levelset(report, &sweep);
    }
    let report = constants::with_sigma1(report, spectrum.eigenvalues[1]);

    let mut out = Outputs::new(&config);
    out.add(
        "constants.csv",
        &format!("{},levelset_merged,candidates\n{},{},{}\n", ConstantsReport::CSV_HEADER, report.csv_row(), report.levelset_merged, set.systems.len()),
    );
    let slack = report.jammes_slack.unwrap_or(f64::NAN);
    out.verdict("sigma_1 - h_C h_J / 4 >= 0", slack >= 0.0, &format!("slack {slack:.6e} (warning only)"));
    if let Some(ok) = report.lemma_consistent(1e-12) {
        out.verdict("h_C >= H / (H + 1)", ok, &format!("{:?}", report.lemma_lower));
    }
    println!(
        "{}: h_C <= {:.6}, h~_J <= {:.6}, sigma_1 = {:.6}, slack = {slack:.6}",
        s.name, report.h_c_upper.value, report.h_j_upper.value, spectrum.eigenvalues[1]
    );
    if slack < 0.0 {
        eprintln!("warning: negative slack; the constants are upper estimates, refine before reading anything into it");
    }
    out.write(a.out, &config, 0)?;
    Ok(0)
}

pub struct VolumesArgs<'a> {
    pub budget: usize,
    pub precision: u32,
    pub out: &'a Path,
}

pub fn volumes(a: VolumesArgs) -> Result<i32, Failure> {
    let budget = cfg::check_budget(a.budget)?;
    let digits = cfg::check_precision(a.precision)?;
    let config = RunConfig { budget: Some(budget), precision: Some(digits), ..RunConfig::new("volumes") };

    let table = VolumeTable::build_with(budget, Peel::Largest);
    let lemmas = check_volume_lemmas(&table, budget).map_err(lab)?;
    let mut out = Outputs::new(&config);
    out.add("volumes.txt", &text::export(&table));

    let mut values = String::from("g,n,pi2_power,constant_term,value_at_zero\n");
    for (g, n) in table.cells() {
        let p = table.get(g, n).map_err(lab)?;
        let v = p.evaluate_precise(&vec![BigRational::from_integer(0.into()); n], digits).map_err(lab)?;
        let _ = writeln!(values, "{g},{n},{},{},{}", p.dimension(), p.constant_term(), v.to_decimal(digits));
    }
    for g in table.closed_genera() {
        let (c, pow) = table.volume_exact(g, 0).map_err(lab)?;
        let bits = Fixed::bits_for_digits(digits) + 16;
        let v = Fixed::from_ratio(&c, bits).mul(&Fixed::pi(bits).powi(2 * pow as u32));
        let _ = writeln!(values, "{g},0,{pow},{c},{}", v.to_decimal(digits));
    }
    out.add("volume_values.csv", &values);

    let mut cells = String::from("g,n,points,bounds_hold,sinh_upper_holds,fitted_c,worst_exp_ratio\n");
    for c in &lemmas.cells {
        let _ = writeln!(
            cells,
            "{},{},{},{},{},{:.6e},{:.6e}",
            c.g, c.n, c.points, c.bounds_hold, c.sinh_upper_holds, c.fitted_c, c.worst_exp_ratio
        );
    }
    out.add("volume_lemmas.csv", &cells);
    let mut ratios = String::from("g,n,boundary_ratio_over_4pi2,genus_ratio\n");
    for r in &lemmas.ratios {
        let _ = writeln!(
            ratios,
            "{},{},{:.12e},{}",
            r.g,
            r.n,
            r.boundary_ratio,
            r.genus_ratio.map(|x| format!("{x:.12e}")).unwrap_or_default()
        );
    }
    out.add("volume_ratios.csv", &ratios);
    let mut incl = String::from("g,n,holds\n");
    for i in &lemmas.inclusions {
        let _ = writeln!(incl, "{},{},{}", i.g, i.n, i.holds);
    }
    out.add("volume_inclusions.csv", &incl);

    let ok = lemmas.all_hold();
    out.verdict("volume lemmas", ok, &format!("{} cells, {} inclusions", lemmas.cells.len(), lemmas.inclusions.len()));
    println!("budget {budget}: {} polynomials, lemmas hold: {ok}", table.cells().len());
    let code = if ok { 0 } else { 2 };
    out.write(a.out, &config, code)?;
    Ok(code)
}

pub struct BoundsArgs<'a> {
    pub eps: Decimal,
    pub eps_prime: Decimal,
    pub c1: Decimal,
    pub c2: Decimal,
    pub grid: String,
    pub budget: usize,
    pub precision: u32,
    pub out: &'a Path,
}

/// Boundary schedule used by the bound tables: two components sharing
/// half of `log g`.
fn schedule() -> BoundaryLengthSchedule {
    BoundaryLengthSchedule::log_fraction(2, 0.5)
}

pub fn bounds(a: BoundsArgs) -> Result<i32, Failure> {
    cfg::check_eps(&a.eps)?;
    cfg::check_eps_prime(&a.eps_prime)?;
    cfg::check_c1_c2(&a.c1, &a.c2)?;
    let budget = cfg::check_budget(a.budget)?;
    let digits = cfg::check_precision(a.precision)?;
    let grid = bounds::parse_grid(&a.grid).map_err(lab)?;
    let config = RunConfig {
        eps: Some(a.eps.clone()),
        eps_prime: Some(a.eps_prime.clone()),
        c1: Some(a.c1.clone()),
        c2: Some(a.c2.clone()),
        budget: Some(budget),
        grid: Some(a.grid.clone()),
        precision: Some(digits),
        ..RunConfig::new("bounds")
    };
    let (eps, c1, c2) = (a.eps.value, a.c1.value, a.c2.value);
    let sched = schedule();
    let mut out = Outputs::new(&config);

    let (first, second) = bounds::collar_failure_bounds(&sched, eps, &grid).map_err(lab)?;
    let third = bounds::multicurve_decay(eps, 1, &grid).map_err(lab)?;
    let curves: Vec<_> = first.iter().chain([&second, &third]).collect();
    out.add("decay_curves.csv", &plot::curves_csv(&curves));
    out.add("decay_curves.svg", &plot::curves_svg("decay of the bound expressions", &curves));
    for c in &curves {
        let from = grid.iter().copied().find(|&g| g >= 1e4).unwrap_or(grid[0]);
        out.verdict(&format!("{} decreasing from {from:e}", c.label), c.decreasing_from(from), "");
    }

    let mut multi = String::from("g,L,structural,inner_sum,inner_bound\n");
    for &g in &grid {
        let l = (0.5 - eps) * g.ln();
        if let Ok(m) = bounds::multicurve_expectation_bound(g, 1, l) {
            let _ = writeln!(multi, "{g:e},{l:.10e},{:.10e},{:.10e},{:.10e}", m.structural, m.inner_sum, m.inner_bound);
        }
    }
    out.add("multicurve.csv", &multi);

    let table = VolumeTable::build_with(budget, Peel::Largest);
    let mut half = String::from("g,n,m,prefactor,volume_ratio,value,expression\n");
    let n = sched.n();
    for g in 1.. {
        if 3 * g + n - 3 > budget {
            break;
        }
        for m in 0..=(2 * g + n - 2) {
            let h = bounds::half_surface_bound(&table, g, n, m, c1, c2, &sched).map_err(lab)?;
            let opt = |x: Option<f64>| x.map(|v| format!("{v:.10e}")).unwrap_or_else(|| "table-limited".into());
            let _ = writeln!(half, "{g},{n},{m},{:.10e},{},{},\"{}\"", h.prefactor, opt(h.volume_ratio), opt(h.value), h.expression);
        }
    }
    out.add("half_surface.csv", &half);

    let mut arcs = String::from("g,k,max_arc_count\n");
    for &g in &grid {
        for k in [1u32, 2, 4, 8] {
            let m = bounds::max_arc_count(c1, k, eps, g).map_err(lab)?;
            let _ = writeln!(arcs, "{g:e},{k},{m}");
        }
    }
    out.add("arc_counts.csv", &arcs);

    let reindex = bounds::reindex_checks(&table, &a.eps_prime.exact, 2 * budget).map_err(lab)?;
    let mut re = String::from("total,m,m_prime,volumes_equal,exponent_ok\n");
    for r in &reindex {
        let _ = writeln!(re, "{},{},{},{},{}", r.total, r.m, r.m_prime, r.volumes_equal, r.exponent_ok);
    }
    out.add("reindex.csv", &re);
    let reindex_ok = reindex.iter().all(|r| r.volumes_equal && r.exponent_ok);
    out.verdict("reindexing inequality", reindex_ok, &format!("{} pairs", reindex.len()));

    let adm = bounds::admissibility_and_windows(&sched, bounds::omega_sqrt_loglog, &grid, 0.05);
    let mut win = String::from("g,total_length,min_length,ratio_to_log,systole_center,omega,window_lo,window_hi,omega_ratio\n");
    for r in &adm.rows {
        let _ = writeln!(
            win,
            "{:e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}",
            r.g, r.total_length, r.min_length, r.ratio_to_log, r.systole_center, r.omega, r.window.0, r.window.1, r.omega_ratio
        );
    }
    out.add("windows.csv", &win);
    out.verdict("schedule admissible on the grid", adm.admissible(), &sched.description);

    let c = BigRational::new(1.into(), 2.into()) - &a.eps.exact;
    let t = bounds::threshold_digits(digits, &c, Some(&a.c1.exact));
    let tail = bounds::tail_condition(c2, a.eps_prime.value);
    out.add(
        "thresholds.csv",
        &format!(
            "name,value\ncheeger_threshold,{}\narc_threshold,{}\nassembled_constant,{}\nc1_below_arc_threshold,{}\ntail_condition,{tail}\n",
            t.cheeger_threshold,
            t.arc_threshold,
            t.assembled,
            c1 < LN_2 / (2.0 * PI)
        ),
    );
    out.verdict("tail condition 4 pi c2 (1+eps')/(1-eps') < 2 ln 2", tail, "");

    println!("ln2/(2pi) = {}, ln2/(2pi+ln2) = {}, c c1/4 = {}", t.arc_threshold, t.cheeger_threshold, t.assembled);
    println!("reindexing: {} pairs, all hold: {reindex_ok}; tail condition: {tail}", reindex.len());
    let code = if reindex_ok && adm.admissible() { 0 } else { 2 };
    out.write(a.out, &config, code)?;
    Ok(code)
}

pub struct VerifyArgs<'a> {
    pub budget: usize,
    pub resolution: f64,
    pub eps: Decimal,
    pub eps_prime: Decimal,
    pub c1: Option<Decimal>,
    pub grid: String,
    pub precision: u32,
    pub out: &'a Path,
}

pub fn verify_all(a: VerifyArgs) -> Result<i32, Failure> {
    let budget = cfg::check_budget(a.budget)?;
    let res = cfg::check_resolution(a.resolution)?;
    cfg::check_eps(&a.eps)?;
    cfg::check_eps_prime(&a.eps_prime)?;
    if let Some(c1) = &a.c1 {
        cfg::check_c1(c1)?;
    }
    let digits = cfg::check_precision(a.precision)?;
    let grid = bounds::parse_grid(&a.grid).map_err(lab)?;
    let config = RunConfig {
        resolution: Some(res),
        eps: Some(a.eps.clone()),
        eps_prime: Some(a.eps_prime.clone()),
        c1: a.c1.clone(),
        budget: Some(budget),
        grid: Some(a.grid.clone()),
        precision: Some(digits),
        ..RunConfig::new("verify-all")
    };
    let suite = SuiteConfig {
        budget,
        resolution: res,
        eps: a.eps.value,
        eps_prime: a.eps_prime.exact.clone(),
        c: BigRational::new(1.into(), 2.into()) - &a.eps.exact,
        c1: a.c1.as_ref().map(|c| c.exact.clone()),
        grid,
        digits,
        ..SuiteConfig::default()
    };
    let report = run_suite(&suite).map_err(lab)?;
    let mut out = Outputs::new(&config);
    for (name, text) in &report.artifacts {
        out.add(name, text);
    }
    out.add("summary.csv", &report.summary_csv());
    for c in &report.criteria {
        out.verdict(&format!("{} {}", c.id, c.title), c.passed, &c.detail);
        println!("{} {:>2} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
    }
    for (id, secs) in &report.timings {
        eprintln!("criterion {id}: {secs:.2} s");
    }
    let code = if report.all_passed() { 0 } else { 2 };
    out.write(a.out, &config, code)?;
    Ok(code)
}
