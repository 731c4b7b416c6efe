//! Figure data sets: one CSV and gnuplot script per panel.
//!
//! Unless a figure says otherwise the cycles use `L = 2000`, `J = Delta = 1`,
//! `mu_i = 2` and `beta_h / beta_c = 0.2`. Curve families over `alpha` use
//! six representative exponents, or 100 log-spaced ones with `--dense`.

use std::f64::consts::PI;

use lrk_core::spectrum::ModeTable;
use lrk_core::sweep::{default_alpha_grid, default_beta_ratio_grid, default_mu_ratio_grid};
use lrk_core::{
    max_ratio_surface, sweep_mu, ChainParams, CycleKind, InteractionRange, MaxRatioSurface,
    SweepConfig,
};
use serde_json::{json, Value};

use crate::commands::{
    linspace, spectrum_tables, write_regions, Job, Report, Settings, StatsTotal,
};
use crate::config::ConfigError;
use crate::output::{Cell, OutputDir, Plot, Table};
use crate::CliError;

/// Representative exponents for curve families.
pub const ALPHA_SAMPLES: [f64; 6] = [1.05, 1.2, 1.5, 2.0, 3.0, 6.0];
/// Exponents of the enhancement-region maps.
pub const REGION_ALPHAS: [f64; 3] = [1.05, 1.5, 3.0];
/// `mu_f / mu_i` values of the heat-difference and xi curves.
pub const MU_RATIO_SAMPLES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
/// `beta_h / beta_c` values of the maximum-ratio curves over alpha.
pub const BETA_RATIO_SAMPLES: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

const SITES: usize = 2000;
const MU_I: f64 = 2.0;
const BETA_RATIO: f64 = 0.2;
const LOW_T: f64 = 5.0;
const HIGH_T: f64 = 0.05;

pub const FIGURES: [usize; 9] = [1, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn job(settings: &Settings, n: usize, dense: bool) -> Result<Job, CliError> {
    if !FIGURES.contains(&n) {
        return Err(ConfigError(format!(
            "no data for figure {n}; available: {}",
            FIGURES.map(|f| f.to_string()).join(", ")
        ))
        .into());
    }
    let executor = settings.executor;
    let alphas = if dense {
        default_alpha_grid()
    } else {
        ALPHA_SAMPLES.to_vec()
    };
    Ok(Box::new(move |dir| {
        let config = |kind, beta_c| -> Result<SweepConfig, CliError> {
            let mut c = SweepConfig::new(kind, SITES, MU_I, beta_c)?;
            c.executor = executor;
            Ok(c)
        };
        let mut stats = StatsTotal::default();
        let mut extra = Value::Null;
        match n {
            1 => extra = spectra_and_phase(dir)?,
            3 => quasiparticle_surfaces(dir)?,
            4 | 8 => {
                let kind = if n == 4 {
                    CycleKind::Otto
                } else {
                    CycleKind::Stirling
                };
                let tag = format!("fig{n}");
                ratio_curves(
                    dir,
                    &tag,
                    &config(kind, LOW_T)?,
                    &config(kind, HIGH_T)?,
                    &alphas,
                    &mut stats,
                )?;
            }
            5 | 9 => {
                let kind = if n == 5 {
                    CycleKind::Otto
                } else {
                    CycleKind::Stirling
                };
                let tag = format!("fig{n}");
                heat_curves(
                    dir,
                    &tag,
                    &config(kind, LOW_T)?,
                    &config(kind, HIGH_T)?,
                    &mut stats,
                )?;
            }
            6 => {
                max_ratio_curves(
                    dir,
                    "fig6",
                    ['a', 'b', 'c', 'd'],
                    &config(CycleKind::Otto, LOW_T)?,
                    &alphas,
                    &mut stats,
                )?;
                max_ratio_curves(
                    dir,
                    "fig6",
                    ['e', 'f', 'g', 'h'],
                    &config(CycleKind::Otto, HIGH_T)?,
                    &alphas,
                    &mut stats,
                )?;
            }
            7 => {
                let mut areas = Vec::new();
                for (beta_c, panels) in [(LOW_T, ['a', 'b', 'c']), (HIGH_T, ['d', 'e', 'f'])] {
                    let c = config(CycleKind::Otto, beta_c)?;
                    let (s, a) = write_regions(dir, &c, &REGION_ALPHAS, |a| {
                        region_stem("fig7", &panels, a, beta_c)
                    })?;
                    stats.merge(&s);
                    areas.extend(
                        a.into_iter()
                            .map(|(a, f)| json!({ "beta_c": beta_c, "alpha": a, "area": f })),
                    );
                }
                extra = json!({ "areas": areas });
            }
            10 => {
                let c = config(CycleKind::Stirling, LOW_T)?;
                max_ratio_curves(dir, "fig10", ['a', 'b', 'c', 'd'], &c, &alphas, &mut stats)?;
                let (s, a) = write_regions(dir, &c, &REGION_ALPHAS, |a| {
                    region_stem("fig10", &['e', 'f', 'g'], a, LOW_T)
                })?;
                stats.merge(&s);
                extra = json!({ "areas": a.into_iter().map(|(a, f)| json!({ "alpha": a, "area": f })).collect::<Vec<_>>() });
            }
            _ => unreachable!("figure numbers are checked above"),
        }
        Ok(Report {
            diagnostics: json!({ "figure": n, "stats": stats.json(), "details": extra }),
            carnot_violations: stats.carnot_violations(),
        })
    }))
}

fn region_stem(tag: &str, panels: &[char], alpha: f64, beta_c: f64) -> String {
    let i = REGION_ALPHAS
        .iter()
        .position(|&a| a == alpha)
        .expect("region exponent");
    format!("{tag}{}_regions_alpha_{alpha}_beta_c_{beta_c}", panels[i])
}

fn column(prefix: &str, x: f64) -> String {
    format!("{prefix}_{x}")
}

/// Energy levels at `L = 200` for three exponents, and the winding number over `(mu, alpha)`.
fn spectra_and_phase(dir: &mut OutputDir) -> Result<Value, CliError> {
    let mus = linspace(-4.0, 4.0, 161);
    for (panel, alpha) in [('a', 0.4), ('b', 1.7), ('c', 4.0)] {
        let base = ChainParams::unit(200, 0.0, InteractionRange::PowerLaw(alpha))?;
        let (levels, _) = spectrum_tables(&base, &mus)?;
        let plot = Plot::lines(format!("L = 200, alpha = {alpha}"), "mu", "E");
        dir.table(
            &format!("fig1{panel}_spectrum_alpha_{alpha}"),
            &levels,
            Some(&plot),
        )?;
    }
    let mut phase = Table::new(["mu", "alpha", "w"]);
    let mut gapless = 0;
    for alpha in linspace(0.2, 4.0, 20) {
        let base = ChainParams::unit(200, 0.0, InteractionRange::PowerLaw(alpha))?;
        let (t, g) = crate::commands::winding_table(&base, &linspace(-3.0, 3.0, 61), 4000)?;
        gapless += g;
        for row in t.rows {
            phase.push(vec![row[0].clone(), Cell::Num(alpha), row[1].clone()]);
        }
    }
    let plot = Plot::map("winding number, L = 200", "mu", "alpha", "w");
    dir.table("fig1d_winding", &phase, Some(&plot))?;
    Ok(json!({ "gapless_points": gapless }))
}

/// `eps_k` over `(k / pi, mu_f / mu_i)` at `L = 2000`, `mu_i = 2`; every tenth momentum.
fn quasiparticle_surfaces(dir: &mut OutputDir) -> Result<(), CliError> {
    let ranges = [
        ('a', InteractionRange::PowerLaw(1.05)),
        ('b', InteractionRange::PowerLaw(2.0)),
        ('c', InteractionRange::PowerLaw(10.0)),
        ('d', InteractionRange::ShortRange),
    ];
    let ratios = linspace(0.0, 1.0, 51);
    for (panel, range) in ranges {
        let table = ModeTable::new(&ChainParams::unit(SITES, MU_I, range)?)?;
        let ks = table.grid().k_positive().to_vec();
        let spectra: Vec<_> = ratios.iter().map(|r| table.spectrum(r * MU_I)).collect();
        let mut t = Table::new(["k_over_pi", "mu_ratio", "eps"]);
        for (i, k) in ks.iter().enumerate().step_by(10) {
            for (r, s) in ratios.iter().zip(&spectra) {
                t.push(vec![
                    Cell::Num(k / PI),
                    Cell::Num(*r),
                    Cell::Num(s.energies()[i]),
                ]);
            }
        }
        let plot = Plot::map(
            format!("L = {SITES}, alpha = {range}"),
            "k / pi",
            "mu_f / mu_i",
            "eps_k",
        );
        dir.table(
            &format!("fig3{panel}_quasiparticles_alpha_{range}"),
            &t,
            Some(&plot),
        )?;
    }
    Ok(())
}

/// `R_W` and `R_eta` over `mu_f / mu_i`, one column per exponent:
/// (a) `R_W` at low temperature, (b) `R_W` at high temperature,
/// (c) `R_eta` at low temperature, (d) `R_eta` at high temperature.
fn ratio_curves(
    dir: &mut OutputDir,
    tag: &str,
    low: &SweepConfig,
    high: &SweepConfig,
    alphas: &[f64],
    stats: &mut StatsTotal,
) -> Result<(), CliError> {
    let kind = low.cycle_kind.name();
    for (config, panels) in [(low, ['a', 'c']), (high, ['b', 'd'])] {
        let header: Vec<String> = std::iter::once("mu_ratio".into())
            .chain(alphas.iter().map(|&a| column("alpha", a)))
            .collect();
        let mut r_w = Table::new(header.clone());
        let mut r_eta = Table::new(header);
        let tables = alphas
            .iter()
            .map(|&a| sweep_mu(config, InteractionRange::PowerLaw(a), BETA_RATIO))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, &x) in default_mu_ratio_grid().iter().enumerate() {
            let mut w = vec![Cell::Num(x)];
            let mut e = vec![Cell::Num(x)];
            for t in &tables {
                w.push(Cell::opt(t.rows[i].ratios.r_w));
                e.push(Cell::opt(t.rows[i].ratios.r_eta));
            }
            r_w.push(w);
            r_eta.push(e);
        }
        tables.iter().for_each(|t| stats.add(&t.stats));
        let title = |q: &str| {
            format!(
                "{kind}: {q}, beta_c = {}, beta_h/beta_c = {BETA_RATIO}",
                config.beta_c
            )
        };
        let plot = Plot::lines(title("R_W"), "mu_f / mu_i", "R_W");
        dir.table(
            &format!("{tag}{}_R_W_beta_c_{}", panels[0], config.beta_c),
            &r_w,
            Some(&plot),
        )?;
        let plot = Plot::lines(title("R_eta"), "mu_f / mu_i", "R_eta");
        dir.table(
            &format!("{tag}{}_R_eta_beta_c_{}", panels[1], config.beta_c),
            &r_eta,
            Some(&plot),
        )?;
    }
    Ok(())
}

/// `dQ / Q_inf` and `xi` over alpha, one column per `mu_f / mu_i`:
/// (a) `dQ` and (b) `xi` at low temperature, (c) and (d) at high temperature.
fn heat_curves(
    dir: &mut OutputDir,
    tag: &str,
    low: &SweepConfig,
    high: &SweepConfig,
    stats: &mut StatsTotal,
) -> Result<(), CliError> {
    let kind = low.cycle_kind.name();
    let alphas = default_alpha_grid();
    for (config, panels) in [(low, ['a', 'b']), (high, ['c', 'd'])] {
        let config = SweepConfig {
            mu_ratio_grid: MU_RATIO_SAMPLES.to_vec(),
            ..config.clone()
        };
        let header: Vec<String> = std::iter::once("alpha".into())
            .chain(MU_RATIO_SAMPLES.iter().map(|&x| column("mu_ratio", x)))
            .collect();
        let mut dq = Table::new(header.clone());
        let mut xi = Table::new(header);
        for &alpha in &alphas {
            let t = sweep_mu(&config, InteractionRange::PowerLaw(alpha), BETA_RATIO)?;
            stats.add(&t.stats);
            let mut d = vec![Cell::Num(alpha)];
            let mut x = vec![Cell::Num(alpha)];
            for row in &t.rows {
                d.push(Cell::opt(row.ratios.dq_rel));
                x.push(Cell::opt(row.ratios.xi));
            }
            dq.push(d);
            xi.push(x);
        }
        let title = |q: &str| {
            format!(
                "{kind}: {q}, beta_c = {}, beta_h/beta_c = {BETA_RATIO}",
                config.beta_c
            )
        };
        let plot = Plot::lines(title("dQ / Q_inf"), "alpha", "dQ / Q_inf");
        dir.table(
            &format!("{tag}{}_dQ_beta_c_{}", panels[0], config.beta_c),
            &dq,
            Some(&plot),
        )?;
        let plot = Plot::lines(title("xi"), "alpha", "xi");
        dir.table(
            &format!("{tag}{}_xi_beta_c_{}", panels[1], config.beta_c),
            &xi,
            Some(&plot),
        )?;
    }
    Ok(())
}

/// Maximum ratios at one cold-bath temperature:
/// `R_W,m` and `R_eta,m` over alpha for several `beta_h / beta_c` (first two
/// panels), then over `beta_h / beta_c` for several exponents (last two).
fn max_ratio_curves(
    dir: &mut OutputDir,
    tag: &str,
    panels: [char; 4],
    base: &SweepConfig,
    alphas: &[f64],
    stats: &mut StatsTotal,
) -> Result<(), CliError> {
    let kind = base.cycle_kind.name();
    let beta_c = base.beta_c;
    let over_alpha = max_ratio_surface(&SweepConfig {
        alpha_grid: default_alpha_grid(),
        beta_ratio_grid: BETA_RATIO_SAMPLES.to_vec(),
        ..base.clone()
    })?;
    let over_beta = max_ratio_surface(&SweepConfig {
        alpha_grid: alphas.to_vec(),
        beta_ratio_grid: default_beta_ratio_grid(),
        ..base.clone()
    })?;
    stats.add(&over_alpha.stats);
    stats.add(&over_beta.stats);

    let by_alpha = |value: fn(&lrk_core::MaxRatioPoint) -> f64| {
        let header = std::iter::once("alpha".to_string())
            .chain(BETA_RATIO_SAMPLES.iter().map(|&b| column("beta_ratio", b)));
        let mut t = Table::new(header);
        for (a, row) in over_alpha.cells.iter().enumerate() {
            let mut cells = vec![Cell::Num(over_alpha.alpha_grid[a])];
            cells.extend(row.iter().map(|c| Cell::opt(c.max.as_ref().map(value))));
            t.push(cells);
        }
        t
    };
    let by_beta = |s: &MaxRatioSurface, value: fn(&lrk_core::MaxRatioPoint) -> f64| {
        let header = std::iter::once("beta_ratio".to_string())
            .chain(s.alpha_grid.iter().map(|&a| column("alpha", a)));
        let mut t = Table::new(header);
        for (b, &beta_ratio) in s.beta_ratio_grid.iter().enumerate() {
            let mut cells = vec![Cell::Num(beta_ratio)];
            cells.extend(
                s.cells
                    .iter()
                    .map(|row| Cell::opt(row[b].max.as_ref().map(value))),
            );
            t.push(cells);
        }
        t
    };
    let title = |q: &str| format!("{kind}: {q}, beta_c = {beta_c}");
    let r_w: fn(&lrk_core::MaxRatioPoint) -> f64 = |p| p.r_w_max;
    let r_eta: fn(&lrk_core::MaxRatioPoint) -> f64 = |p| p.r_eta_max;
    let out = [
        (
            panels[0],
            "R_W_max_vs_alpha",
            by_alpha(r_w),
            "alpha",
            "R_W,m",
        ),
        (
            panels[1],
            "R_eta_max_vs_alpha",
            by_alpha(r_eta),
            "alpha",
            "R_eta,m",
        ),
        (
            panels[2],
            "R_W_max_vs_beta_ratio",
            by_beta(&over_beta, r_w),
            "beta_h / beta_c",
            "R_W,m",
        ),
        (
            panels[3],
            "R_eta_max_vs_beta_ratio",
            by_beta(&over_beta, r_eta),
            "beta_h / beta_c",
            "R_eta,m",
        ),
    ];
    for (panel, name, table, xlabel, ylabel) in out {
        let plot = Plot::lines(title(ylabel), xlabel, ylabel);
        dir.table(
            &format!("{tag}{panel}_{name}_beta_c_{beta_c}"),
            &table,
            Some(&plot),
        )?;
    }
    Ok(())
}
