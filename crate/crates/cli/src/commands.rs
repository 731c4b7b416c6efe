//! Subcommand execution: resolve every input first, then compute and write.

use std::str::FromStr;
use std::time::Instant;

use lrk_core::spectrum::spectrum_scan;
use lrk_core::sweep::{
    default_alpha_grid, default_beta_ratio_grid, default_mu_ratio_grid, CARNOT_TOLERANCE,
};
use lrk_core::{
    carnot_efficiency, enhancement_regions, max_ratio_surface, max_ratios, ratio_diagnostics,
    sweep_mu, winding_number, BathPair, ChainParams, CycleKind, CycleResult, CycleSpec, Error,
    Executor, InteractionRange, MaxRatioSurface, RatioDiagnostics, SweepConfig, SweepStats,
    SweepTable,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, ConfigFile, Grid, Range, Resolver};
use crate::output::{json_float, json_opt, Cell, Format, OutputDir, Plot, RunManifest, Table};
use crate::{
    figures, ChainArgs, CliError, Command, CycleArgs, MuScan, RegionArgs, SurfaceArgs, SweepGrids,
};

/// What a finished job reports back for the manifest.
pub struct Report {
    pub diagnostics: Value,
    /// Efficiencies above the Carnot bound; any makes the run fail with exit code 3.
    pub carnot_violations: usize,
}

pub type Job = Box<dyn FnOnce(&mut OutputDir) -> Result<Report, CliError>>;

/// Execution settings shared by every subcommand.
pub struct Settings {
    pub executor: Executor,
}

pub fn run(command: Command) -> Result<(), CliError> {
    let started = Instant::now();
    let name = command.name();
    let common = command.common();
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(recorded) = &file.subcommand {
        if recorded != name {
            return Err(ConfigError(format!(
                "manifest was written by '{recorded}', cannot replay it with '{name}'"
            ))
            .into());
        }
    }
    let mut r = Resolver::new(file);
    let out = r.value("out", common.out.clone(), "lrk-out".into())?;
    let format = r.value("format", common.format, Format::Csv)?;
    let always_plot = matches!(command, Command::ReproduceFigure(_));
    let plots = r.switch("emit_plots", common.plots || always_plot)?;
    let default_workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let workers = r.value("workers", common.workers, default_workers)?;
    r.check("workers", workers >= 1, "workers must be at least 1")?;
    let settings = Settings {
        executor: Executor::with_workers(workers),
    };

    let job = match &command {
        Command::Spectrum(a) => spectrum(&mut r, &a.chain, a.alpha, &a.scan)?,
        Command::Winding(a) => winding(&mut r, &a.chain, a.alpha, a.mu, &a.scan, a.grid_density)?,
        Command::Otto(a) => cycle(&mut r, &settings, CycleKind::Otto, a)?,
        Command::Stirling(a) => cycle(&mut r, &settings, CycleKind::Stirling, a)?,
        Command::Sweep(a) => surface(&mut r, &settings, a, false)?,
        Command::Optimal(a) => surface(&mut r, &settings, a, true)?,
        Command::Regions(a) => regions(&mut r, &settings, a)?,
        Command::ReproduceFigure(a) => {
            let n = r.required("figure", a.figure)?;
            let dense = r.switch("dense", a.dense)?;
            figures::job(&settings, n, dense)?
        }
    };
    for key in r.unused_file_keys() {
        eprintln!("lrk: warning: config key '{key}' is not used by '{name}'");
    }

    let mut dir = OutputDir::create(&out, format, plots)?;
    let report = job(&mut dir)?;
    let inputs = r.into_inputs();
    RunManifest {
        tool: "lrk",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: name,
        inputs: &inputs,
        outputs: dir.written(),
        diagnostics: report.diagnostics,
        wall_time_s: started.elapsed().as_secs_f64(),
    }
    .write(dir.root())?;
    println!(
        "wrote {} file(s) to {}",
        dir.written().len() + 1,
        dir.root().display()
    );
    if report.carnot_violations > 0 {
        return Err(CliError::Contract(format!(
            "{} engine-valid point(s) exceed the Carnot efficiency by more than {CARNOT_TOLERANCE:e}",
            report.carnot_violations
        )));
    }
    Ok(())
}

/// A core validation failure while assembling inputs is a configuration error.
fn invalid(e: Error) -> CliError {
    match e {
        Error::InvalidParameter(msg) => CliError::Config(ConfigError(msg)),
        other => CliError::Core(other),
    }
}

fn chain(
    r: &mut Resolver,
    a: &ChainArgs,
    default_sites: usize,
    range: InteractionRange,
) -> Result<ChainParams, CliError> {
    let sites = r.value("L", a.sites, default_sites)?;
    r.check(
        "L",
        sites >= 2 && sites % 2 == 0,
        "L must be an even number >= 2",
    )?;
    let hopping = r.value("J", a.hopping, 1.0)?;
    r.check("J", hopping.is_finite(), "J must be finite")?;
    let pairing = r.value("Delta", a.pairing, 1.0)?;
    r.check("Delta", pairing.is_finite(), "Delta must be finite")?;
    ChainParams::new(sites, hopping, pairing, 0.0, range).map_err(invalid)
}

fn cycle_kind(r: &mut Resolver, flag: Option<String>) -> Result<CycleKind, CliError> {
    let text = r.value("cycle", flag, "otto".to_string())?;
    match CycleKind::from_str(&text) {
        Ok(kind) => Ok(kind),
        Err(_) => Err(r
            .check("cycle", false, "cycle must be 'otto' or 'stirling'")
            .unwrap_err()
            .into()),
    }
}

fn mu_values(
    r: &mut Resolver,
    scan: &MuScan,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<f64>, CliError> {
    let lo = r.value("mu_min", scan.mu_min, lo)?;
    let hi = r.value("mu_max", scan.mu_max, hi)?;
    let steps = r.value("mu_steps", scan.mu_steps, steps)?;
    r.check(
        "mu_max",
        hi.is_finite() && lo.is_finite() && hi >= lo,
        "need finite mu_min <= mu_max",
    )?;
    r.check("mu_steps", steps >= 1, "mu_steps must be at least 1")?;
    Ok(linspace(lo, hi, steps))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Energy levels (`mu, E_1, ..., E_L`, ascending) and the minimum gap per `mu`.
pub fn spectrum_tables(base: &ChainParams, mus: &[f64]) -> Result<(Table, Table), CliError> {
    let rows = spectrum_scan(base, mus)?;
    let mut levels = Table::new(
        std::iter::once("mu".to_string()).chain((1..=base.sites).map(|i| format!("E_{i}"))),
    );
    let mut gap = Table::new(["mu", "min_gap"]);
    for row in rows {
        let min = row.levels.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
        let mut cells = vec![Cell::Num(row.mu)];
        cells.extend(row.levels.into_iter().map(Cell::Num));
        levels.push(cells);
        gap.push(vec![Cell::Num(row.mu), Cell::Num(min)]);
    }
    Ok((levels, gap))
}

fn spectrum(
    r: &mut Resolver,
    a: &ChainArgs,
    alpha: Option<Range>,
    scan: &MuScan,
) -> Result<Job, CliError> {
    let Range(range) = r.required("alpha", alpha)?;
    let base = chain(r, a, 200, range)?;
    let mus = mu_values(r, scan, -4.0, 4.0, 161)?;
    Ok(Box::new(move |dir| {
        let (levels, gap) = spectrum_tables(&base, &mus)?;
        let title = format!("L = {}, alpha = {}", base.sites, base.range);
        dir.table("spectrum", &levels, Some(&Plot::lines(&title, "mu", "E")))?;
        dir.table("gap", &gap, Some(&Plot::lines(&title, "mu", "min |E|")))?;
        Ok(Report {
            diagnostics: json!({ "points": mus.len() }),
            carnot_violations: 0,
        })
    }))
}

/// `mu, w, residual, gapless`; gapless points have `NaN` winding.
pub fn winding_table(
    base: &ChainParams,
    mus: &[f64],
    density: usize,
) -> Result<(Table, usize), CliError> {
    let mut t = Table::new(["mu", "w", "residual", "gapless"]);
    let mut gapless = 0;
    for &mu in mus {
        match winding_number(&base.with_mu(mu), density) {
            Ok(w) => t.push(vec![
                Cell::Num(mu),
                Cell::Num(w.w),
                Cell::Num(w.residual),
                Cell::Flag(false),
            ]),
            Err(Error::GaplessConfiguration { .. } | Error::DegenerateMode { .. }) => {
                gapless += 1;
                t.push(vec![
                    Cell::Num(mu),
                    Cell::Num(f64::NAN),
                    Cell::Num(f64::NAN),
                    Cell::Flag(true),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((t, gapless))
}

fn winding(
    r: &mut Resolver,
    a: &ChainArgs,
    alpha: Option<Range>,
    mu: Option<f64>,
    scan: &MuScan,
    density: Option<usize>,
) -> Result<Job, CliError> {
    let Range(range) = r.required("alpha", alpha)?;
    let base = chain(r, a, 200, range)?;
    let mus = match r.optional("mu", mu)? {
        Some(mu) => vec![mu],
        None => mu_values(r, scan, -3.0, 3.0, 121)?,
    };
    let density = r.value("grid_density", density, 20_000)?;
    r.check(
        "grid_density",
        density >= lrk_core::spectrum::MIN_WINDING_DENSITY,
        &format!(
            "grid_density must be at least {}",
            lrk_core::spectrum::MIN_WINDING_DENSITY
        ),
    )?;
    Ok(Box::new(move |dir| {
        let (table, gapless) = winding_table(&base, &mus, density)?;
        let title = format!("L = {}, alpha = {}", base.sites, base.range);
        dir.table("winding", &table, Some(&Plot::lines(&title, "mu", "w")))?;
        Ok(Report {
            diagnostics: json!({ "points": mus.len(), "gapless": gapless }),
            carnot_violations: 0,
        })
    }))
}

pub fn cycle_json(result: &CycleResult) -> Value {
    let heats = match result {
        CycleResult::Otto(o) => json!({ "Q_h": o.q_h, "Q_c": o.q_c }),
        CycleResult::Stirling(s) => {
            json!({ "Q_1": s.q_1, "Q_2": s.q_2, "Q_3": s.q_3, "Q_4": s.q_4, "Q_h": s.q_h })
        }
    };
    json!({
        "cycle": result.kind().name(),
        "alpha": result.spec().base.range.to_string(),
        "Q": heats,
        "W": json_float(result.work()),
        "eta": json_opt(result.eta()),
        "engine_valid": result.engine_valid(),
    })
}

pub fn ratios_json(d: &RatioDiagnostics) -> Value {
    json!({
        "R_W": json_opt(d.r_w),
        "R_eta": json_opt(d.r_eta),
        "dQ_rel": json_opt(d.dq_rel),
        "xi": json_opt(d.xi),
    })
}

pub fn stats_json(s: &SweepStats) -> Value {
    json!({
        "points": s.points,
        "reference_evaluations": s.reference_evaluations,
        "excluded": s.excluded,
        "carnot_violations": s.carnot_violations,
        "worst_carnot_margin": json_float(s.worst_carnot_margin),
    })
}

/// Statistics summed over several sweeps.
#[derive(Default)]
pub struct StatsTotal(Option<SweepStats>);

impl StatsTotal {
    pub fn add(&mut self, s: &SweepStats) {
        match &mut self.0 {
            None => self.0 = Some(*s),
            Some(t) => {
                t.points += s.points;
                t.reference_evaluations += s.reference_evaluations;
                t.excluded += s.excluded;
                t.carnot_violations += s.carnot_violations;
                t.worst_carnot_margin = t.worst_carnot_margin.max(s.worst_carnot_margin);
            }
        }
    }

    pub fn merge(&mut self, other: &StatsTotal) {
        if let Some(s) = &other.0 {
            self.add(s);
        }
    }

    pub fn carnot_violations(&self) -> usize {
        self.0.map_or(0, |s| s.carnot_violations)
    }

    pub fn json(&self) -> Value {
        self.0.as_ref().map_or(Value::Null, stats_json)
    }
}

/// `mu_ratio, R_W, R_eta, dQ_rel, xi, engine_lr, engine_sr`.
pub fn ratio_table(t: &SweepTable) -> Table {
    let mut out = Table::new([
        "mu_ratio",
        "R_W",
        "R_eta",
        "dQ_rel",
        "xi",
        "engine_lr",
        "engine_sr",
    ]);
    for row in &t.rows {
        let d = &row.ratios;
        out.push(vec![
            Cell::Num(row.mu_ratio),
            Cell::opt(d.r_w),
            Cell::opt(d.r_eta),
            Cell::opt(d.dq_rel),
            Cell::opt(d.xi),
            Cell::Flag(row.lr.engine_valid),
            Cell::Flag(row.sr.engine_valid),
        ]);
    }
    out
}

/// Work, heat input and efficiency of both chains along the curve.
fn curve_table(t: &SweepTable) -> Table {
    let mut out = Table::new([
        "mu_ratio", "W_lr", "Q_in_lr", "eta_lr", "W_sr", "Q_in_sr", "eta_sr",
    ]);
    for row in &t.rows {
        out.push(vec![
            Cell::Num(row.mu_ratio),
            Cell::Num(row.lr.work),
            Cell::Num(row.lr.heat_in),
            Cell::opt(row.lr.eta),
            Cell::Num(row.sr.work),
            Cell::Num(row.sr.heat_in),
            Cell::opt(row.sr.eta),
        ]);
    }
    out
}

fn sweep_grids(
    r: &mut Resolver,
    g: &SweepGrids,
    settings: &Settings,
    kind: CycleKind,
    base: ChainParams,
    with_beta_grid: bool,
) -> Result<SweepConfig, CliError> {
    let mu_i = r.value("mu_i", g.mu_i, 2.0)?;
    r.check("mu_i", mu_i.is_finite() && mu_i >= 0.0, "mu_i must be >= 0")?;
    let beta_c = r.value("beta_c", g.beta_c, 5.0)?;
    r.check(
        "beta_c",
        beta_c.is_finite() && beta_c > 0.0,
        "beta_c must be > 0",
    )?;
    let Grid(mu_ratio_grid) = r.value(
        "mu_ratio_grid",
        g.mu_ratio_grid.clone(),
        Grid(default_mu_ratio_grid()),
    )?;
    r.check(
        "mu_ratio_grid",
        mu_ratio_grid.iter().all(|x| (0.0..=1.0).contains(x)),
        "values must lie in [0, 1]",
    )?;
    let beta_ratio_grid = if with_beta_grid {
        let Grid(grid) = r.value(
            "beta_ratio_grid",
            g.beta_ratio_grid.clone(),
            Grid(default_beta_ratio_grid()),
        )?;
        r.check(
            "beta_ratio_grid",
            grid.iter().all(|&x| x > 0.0 && x < 1.0),
            "values must lie in (0, 1)",
        )?;
        grid
    } else {
        default_beta_ratio_grid()
    };
    let config = SweepConfig {
        cycle_kind: kind,
        base,
        mu_i,
        mu_ratio_grid,
        alpha_grid: default_alpha_grid(),
        beta_c,
        beta_ratio_grid,
        executor: settings.executor,
    };
    config.validate().map_err(invalid)?;
    Ok(config)
}

fn cycle(
    r: &mut Resolver,
    settings: &Settings,
    kind: CycleKind,
    a: &CycleArgs,
) -> Result<Job, CliError> {
    let Range(range) = r.required("alpha", a.alpha)?;
    r.check("alpha", range.alpha() > 1.0, "cycles need alpha > 1")?;
    let base = chain(r, &a.chain, 2000, range)?;
    let mu_i = r.value("mu_i", a.mu_i, 2.0)?;
    r.check("mu_i", mu_i.is_finite() && mu_i >= 0.0, "mu_i must be >= 0")?;
    let beta_c = r.value("beta_c", a.beta_c, 5.0)?;
    r.check(
        "beta_c",
        beta_c.is_finite() && beta_c > 0.0,
        "beta_c must be > 0",
    )?;
    let beta_ratio = r.value("beta_ratio", a.beta_ratio, 0.2)?;
    r.check(
        "beta_ratio",
        beta_ratio > 0.0 && beta_ratio <= 1.0,
        "beta_ratio must lie in (0, 1]",
    )?;
    let baths = BathPair::from_ratio(beta_c, beta_ratio).map_err(invalid)?;

    if !r.switch("sweep_mu", a.sweep_mu)? {
        let mu_f = r.required("mu_f", a.mu_f)?;
        r.check(
            "mu_f",
            (0.0..=mu_i).contains(&mu_f),
            "mu_f must lie in [0, mu_i]",
        )?;
        let spec = CycleSpec::new(base, mu_i, mu_f, baths).map_err(invalid)?;
        return Ok(Box::new(move |dir| {
            let lr = CycleResult::evaluate(kind, &spec)?;
            let sr = CycleResult::evaluate(kind, &spec.with_range(InteractionRange::ShortRange))?;
            let ratios = ratio_diagnostics(&lr, &sr)?;
            let carnot = carnot_efficiency(&baths);
            let violations = [&lr, &sr]
                .iter()
                .filter(|c| c.eta().is_some_and(|e| e > carnot + CARNOT_TOLERANCE))
                .count();
            let doc = json!({
                "long_range": cycle_json(&lr),
                "short_range": cycle_json(&sr),
                "ratios": ratios_json(&ratios),
                "eta_carnot": carnot,
            });
            dir.json("cycle", &doc)?;
            println!(
                "{}: W = {:.6e}, eta = {}, engine_valid = {}",
                kind.name(),
                lr.work(),
                lr.eta().map_or("undefined".into(), |e| format!("{e:.6}")),
                lr.engine_valid()
            );
            Ok(Report {
                diagnostics: json!({ "eta_carnot": carnot }),
                carnot_violations: violations,
            })
        }));
    }

    let grids = SweepGrids {
        mu_i: Some(mu_i),
        beta_c: Some(beta_c),
        mu_ratio_grid: a.mu_ratio_grid.clone(),
        beta_ratio_grid: None,
    };
    let config = sweep_grids(r, &grids, settings, kind, base, false)?;
    let refine = r.switch("refine", a.refine)?;
    Ok(Box::new(move |dir| {
        let table = sweep_mu(&config, range, beta_ratio)?;
        let title = format!(
            "{}, alpha = {range}, beta_c = {beta_c}, beta_h/beta_c = {beta_ratio}",
            kind.name()
        );
        dir.table(
            "sweep",
            &ratio_table(&table),
            Some(&Plot::lines(&title, "mu_f / mu_i", "ratio").with_series(&[2, 3])),
        )?;
        dir.table(
            "curves",
            &curve_table(&table),
            Some(&Plot::lines(&title, "mu_f / mu_i", "W").with_series(&[2, 5])),
        )?;
        let max = match max_ratios(&config, range, beta_ratio, refine) {
            Ok(p) => json!({
                "R_W_max": p.r_w_max,
                "R_eta_max": p.r_eta_max,
                "arg_mu_ratio_W": p.arg_mu_ratio_w,
                "arg_mu_ratio_eta": p.arg_mu_ratio_eta,
                "valid_points": p.valid_points,
                "refined": refine,
            }),
            Err(Error::InsufficientData { valid, required }) => {
                json!({ "undefined": format!("{valid} engine-valid points, {required} required") })
            }
            Err(e) => return Err(e.into()),
        };
        dir.json("max", &max)?;
        Ok(Report {
            diagnostics: json!({ "stats": stats_json(&table.stats) }),
            carnot_violations: table.stats.carnot_violations,
        })
    }))
}

/// `alpha, beta_ratio, R_W_max, R_eta_max, arg_W, arg_eta`.
pub fn surface_table(s: &MaxRatioSurface) -> Table {
    let mut t = Table::new([
        "alpha",
        "beta_ratio",
        "R_W_max",
        "R_eta_max",
        "arg_W",
        "arg_eta",
    ]);
    for row in &s.cells {
        for cell in row {
            let m = cell.max;
            t.push(vec![
                Cell::Num(cell.alpha),
                Cell::Num(cell.beta_ratio),
                Cell::opt(m.map(|p| p.r_w_max)),
                Cell::opt(m.map(|p| p.r_eta_max)),
                Cell::opt(m.map(|p| p.arg_mu_ratio_w)),
                Cell::opt(m.map(|p| p.arg_mu_ratio_eta)),
            ]);
        }
    }
    t
}

fn surface(
    r: &mut Resolver,
    settings: &Settings,
    a: &SurfaceArgs,
    optimal: bool,
) -> Result<Job, CliError> {
    let kind = cycle_kind(r, a.cycle.clone())?;
    let base = chain(r, &a.chain, 2000, InteractionRange::ShortRange)?;
    let mut config = sweep_grids(r, &a.grids, settings, kind, base, true)?;
    let Grid(alpha_grid) = r.value(
        "alpha_grid",
        a.alpha_grid.clone(),
        Grid(default_alpha_grid()),
    )?;
    r.check(
        "alpha_grid",
        alpha_grid.iter().all(|&x| x > 1.0),
        "values must exceed 1",
    )?;
    config.alpha_grid = alpha_grid;
    Ok(Box::new(move |dir| {
        let s = max_ratio_surface(&config)?;
        let title = format!("{}, beta_c = {}", kind.name(), config.beta_c);
        dir.table(
            "max_ratios",
            &surface_table(&s),
            Some(&Plot::map(&title, "alpha", "beta_h / beta_c", "R_W,m")),
        )?;
        let mut diagnostics = json!({ "stats": stats_json(&s.stats) });
        if optimal {
            let o = s.optimal()?;
            let doc = json!({
                "alpha_W": o.alpha_w,
                "beta_ratio_W": o.beta_ratio_w,
                "R_W_max": o.r_w_max,
                "alpha_eta": o.alpha_eta,
                "beta_ratio_eta": o.beta_ratio_eta,
                "R_eta_max": o.r_eta_max,
                "index_W": [o.index_w.0, o.index_w.1],
                "index_eta": [o.index_eta.0, o.index_eta.1],
                "coincident": o.coincident,
            });
            println!(
                "R_W,m = {:.6} at (alpha, beta_h/beta_c) = ({:.4}, {:.2}); R_eta,m = {:.6} at ({:.4}, {:.2}); coincident = {}",
                o.r_w_max, o.alpha_w, o.beta_ratio_w, o.r_eta_max, o.alpha_eta, o.beta_ratio_eta, o.coincident
            );
            dir.json("optimal", &doc)?;
            diagnostics["coincident"] = Value::Bool(o.coincident);
        }
        Ok(Report {
            diagnostics,
            carnot_violations: s.stats.carnot_violations,
        })
    }))
}

/// `mu_ratio, beta_ratio, enhanced`.
pub fn region_table(map: &lrk_core::RegionMap) -> Table {
    let mut t = Table::new(["mu_ratio", "beta_ratio", "enhanced"]);
    for (i, row) in map.mask.iter().enumerate() {
        for (j, &on) in row.iter().enumerate() {
            t.push(vec![
                Cell::Num(map.mu_ratio_grid[i]),
                Cell::Num(map.beta_ratio_grid[j]),
                Cell::Flag(on),
            ]);
        }
    }
    t
}

/// Writes one enhancement map per exponent and returns the merged statistics and areas.
pub fn write_regions(
    dir: &mut OutputDir,
    config: &SweepConfig,
    alphas: &[f64],
    stem: impl Fn(f64) -> String,
) -> Result<(StatsTotal, Vec<(f64, f64)>), CliError> {
    let mut stats = StatsTotal::default();
    let mut areas = Vec::new();
    for &alpha in alphas {
        let map = enhancement_regions(config, InteractionRange::PowerLaw(alpha))?;
        let title = format!(
            "{}, alpha = {alpha}, beta_c = {}",
            config.cycle_kind.name(),
            config.beta_c
        );
        let plot = Plot::map(&title, "mu_f / mu_i", "beta_h / beta_c", "enhanced");
        dir.table(&stem(alpha), &region_table(&map), Some(&plot))?;
        stats.add(&map.stats);
        areas.push((alpha, map.area()));
    }
    Ok((stats, areas))
}

fn regions(r: &mut Resolver, settings: &Settings, a: &RegionArgs) -> Result<Job, CliError> {
    let kind = cycle_kind(r, a.cycle.clone())?;
    let base = chain(r, &a.chain, 2000, InteractionRange::ShortRange)?;
    let Grid(alphas) = r.required("alphas", a.alphas.clone())?;
    r.check(
        "alphas",
        alphas.iter().all(|&x| x > 1.0),
        "values must exceed 1",
    )?;
    let config = sweep_grids(r, &a.grids, settings, kind, base, true)?;
    Ok(Box::new(move |dir| {
        let (stats, areas) =
            write_regions(dir, &config, &alphas, |a| format!("regions_alpha_{a}"))?;
        for (alpha, area) in &areas {
            println!("alpha = {alpha}: enhanced fraction {area:.4}");
        }
        let areas: Vec<Value> = areas
            .iter()
            .map(|(a, f)| json!({ "alpha": a, "area": f }))
            .collect();
        Ok(Report {
            diagnostics: json!({ "stats": stats.json(), "areas": areas }),
            carnot_violations: stats.carnot_violations(),
        })
    }))
}
