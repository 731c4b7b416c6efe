//! Grid sweeps of the enhancement ratios over `mu_f / mu_i`, `beta_h / beta_c`
//! and `alpha`.
//!
//! Every grid point is an independent pure task. Results are gathered in
//! grid order, so the output is bitwise identical for any worker count and
//! for the sequential executor.
//!
//! Per interaction range a [`Medium`] caches the spectra at `mu_i` and at
//! every `mu_f` of the grid together with their cold-bath thermal profiles;
//! a grid point then costs one `O(L)` reduction (plus one profile for the
//! Stirling hot isotherm). The short-range reference is evaluated exactly
//! once per `(mu_f, baths)` and shared by all long-range ranges.

use crate::cycles::{
    carnot_efficiency, otto_from_profiles, ratio_diagnostics, stirling_from_profiles, BathPair,
    CycleKind, CycleResult, CycleSpec, RatioDiagnostics, ThermalProfile,
};
use crate::error::{Error, Result};
use crate::spectrum::{ChainParams, InteractionRange, ModeTable, QuasiparticleSpectrum};

/// Engine-valid points a curve needs before its maximum is reported.
pub const MIN_VALID_POINTS: usize = 3;

/// Slack on the Carnot bound before a point is counted as a violation.
pub const CARNOT_TOLERANCE: f64 = 1e-12;

/// How grid points are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Executor {
    #[default]
    Sequential,
    /// A dedicated thread pool with this many workers. Without the
    /// `parallel` feature this runs sequentially.
    Parallel { workers: usize },
}

impl Executor {
    /// One worker means sequential execution.
    pub fn with_workers(workers: usize) -> Self {
        if workers <= 1 {
            Executor::Sequential
        } else {
            Executor::Parallel { workers }
        }
    }

    pub fn workers(&self) -> usize {
        match self {
            Executor::Sequential => 1,
            Executor::Parallel { workers } => *workers,
        }
    }

    /// `(0..n).map(task)` in index order.
    pub fn map<T, F>(&self, n: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Executor::Sequential => (0..n).map(task).collect(),
            Executor::Parallel { workers } => parallel_map(*workers, n, task),
        }
    }

    fn try_map<T, F>(&self, n: usize, task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        self.map(n, task).into_iter().collect()
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(workers: usize, n: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&task).collect()),
        Err(_) => (0..n).map(task).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(_workers: usize, n: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(task).collect()
}

/// `n` uniform points on `[0, 1]`.
pub fn uniform_closed(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` uniform interior points of `(0, 1)`: `j / (n + 1)`.
pub fn uniform_open(n: usize) -> Vec<f64> {
    (1..=n).map(|j| j as f64 / (n + 1) as f64).collect()
}

/// `n` logarithmically spaced points on `[lo, hi]`, endpoints exact.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    _ if i == n - 1 => hi,
                    _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

/// 201 points on `[0, 1]`.
pub fn default_mu_ratio_grid() -> Vec<f64> {
    uniform_closed(201)
}

/// 99 points `0.01, ..., 0.99`.
pub fn default_beta_ratio_grid() -> Vec<f64> {
    uniform_open(99)
}

/// 100 log-spaced points on `[1.025, 6]`.
pub fn default_alpha_grid() -> Vec<f64> {
    log_spaced(1.025, 6.0, 100)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub cycle_kind: CycleKind,
    /// `L`, `J` and `Delta`; its `mu` and range are ignored.
    pub base: ChainParams,
    pub mu_i: f64,
    /// Values of `mu_f / mu_i` in `[0, 1]`.
    pub mu_ratio_grid: Vec<f64>,
    /// Values of `alpha > 1`; the short-range reference is implicit.
    pub alpha_grid: Vec<f64>,
    pub beta_c: f64,
    /// Values of `beta_h / beta_c` in `(0, 1)`.
    pub beta_ratio_grid: Vec<f64>,
    pub executor: Executor,
}

impl SweepConfig {
    /// Default grids at `J = Delta = 1`.
    pub fn new(cycle_kind: CycleKind, sites: usize, mu_i: f64, beta_c: f64) -> Result<Self> {
        let config = SweepConfig {
            cycle_kind,
            base: ChainParams::unit(sites, mu_i, InteractionRange::ShortRange)?,
            mu_i,
            mu_ratio_grid: default_mu_ratio_grid(),
            alpha_grid: default_alpha_grid(),
            beta_c,
            beta_ratio_grid: default_beta_ratio_grid(),
            executor: Executor::Sequential,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.base
            .with_mu(self.mu_i)
            .with_range(InteractionRange::ShortRange)
            .validate()?;
        if !(self.mu_i.is_finite() && self.mu_i >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu_i must be >= 0, got {}",
                self.mu_i
            )));
        }
        if !(self.beta_c.is_finite() && self.beta_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta_c must be > 0, got {}",
                self.beta_c
            )));
        }
        check_grid(
            "mu_ratio_grid",
            &self.mu_ratio_grid,
            |x| (0.0..=1.0).contains(&x),
            "[0, 1]",
        )?;
        check_grid(
            "alpha_grid",
            &self.alpha_grid,
            |x| x > 1.0 && x.is_finite(),
            "(1, inf)",
        )?;
        check_grid(
            "beta_ratio_grid",
            &self.beta_ratio_grid,
            |x| x > 0.0 && x < 1.0,
            "(0, 1)",
        )?;
        if self.executor.workers() == 0 {
            return Err(Error::InvalidParameter("workers must be positive".into()));
        }
        Ok(())
    }

    pub fn baths(&self, beta_ratio: f64) -> Result<BathPair> {
        BathPair::from_ratio(self.beta_c, beta_ratio)
    }

    fn spec(&self, range: InteractionRange, mu_ratio: f64, beta_ratio: f64) -> Result<CycleSpec> {
        CycleSpec::new(
            self.base.with_range(range),
            self.mu_i,
            mu_ratio * self.mu_i,
            self.baths(beta_ratio)?,
        )
    }
}

fn check_grid(name: &str, grid: &[f64], in_range: impl Fn(f64) -> bool, range: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} is empty")));
    }
    if let Some(&x) = grid.iter().find(|&&x| !in_range(x)) {
        return Err(Error::InvalidParameter(format!(
            "{name} value {x} outside {range}"
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be strictly increasing"
        )));
    }
    Ok(())
}

/// Cached spectra and cold-bath profiles of one interaction range over the `mu_f` grid.
struct Medium {
    range: InteractionRange,
    initial: QuasiparticleSpectrum,
    finals: Vec<QuasiparticleSpectrum>,
    cold_initial: ThermalProfile,
    cold_finals: Vec<ThermalProfile>,
}

impl Medium {
    fn new(config: &SweepConfig, range: InteractionRange, mu_ratios: &[f64]) -> Result<Self> {
        let table = ModeTable::new(&config.base.with_range(range).with_mu(config.mu_i))?;
        let initial = table.spectrum(config.mu_i);
        let finals: Vec<_> = mu_ratios
            .iter()
            .map(|r| table.spectrum(r * config.mu_i))
            .collect();
        let cold_initial = ThermalProfile::new(&initial, config.beta_c);
        let cold_finals = finals
            .iter()
            .map(|s| ThermalProfile::new(s, config.beta_c))
            .collect();
        Ok(Medium {
            range,
            initial,
            finals,
            cold_initial,
            cold_finals,
        })
    }

    /// Thermal profile of the `mu_i` spectrum at the hot bath.
    fn hot_initial(&self, baths: &BathPair) -> ThermalProfile {
        ThermalProfile::new(&self.initial, baths.beta_h)
    }

    fn evaluate(
        &self,
        kind: CycleKind,
        spec: &CycleSpec,
        m: usize,
        hot_initial: &ThermalProfile,
    ) -> Result<CycleResult> {
        Ok(match kind {
            CycleKind::Otto => otto_from_profiles(spec, hot_initial, &self.cold_finals[m])?.into(),
            CycleKind::Stirling => {
                let hot_final = ThermalProfile::new(&self.finals[m], spec.baths.beta_h);
                stirling_from_profiles(
                    spec,
                    hot_initial,
                    &hot_final,
                    &self.cold_initial,
                    &self.cold_finals[m],
                )?
                .into()
            }
        })
    }
}

/// Work, heat input and efficiency of one cycle evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSummary {
    pub work: f64,
    pub heat_in: f64,
    pub eta: Option<f64>,
    pub engine_valid: bool,
}

impl From<&CycleResult> for PointSummary {
    fn from(r: &CycleResult) -> Self {
        PointSummary {
            work: r.work(),
            heat_in: r.heat_in(),
            eta: r.eta(),
            engine_valid: r.engine_valid(),
        }
    }
}

/// One `mu_f / mu_i` point of a ratio curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub mu_ratio: f64,
    pub ratios: RatioDiagnostics,
    pub lr: PointSummary,
    pub sr: PointSummary,
}

impl SweepRow {
    /// Both cycles are engines and both ratios exist.
    pub fn usable(&self) -> bool {
        self.lr.engine_valid
            && self.sr.engine_valid
            && self.ratios.r_w.is_some()
            && self.ratios.r_eta.is_some()
    }

    pub fn enhanced(&self) -> bool {
        self.usable()
            && self.ratios.r_w.is_some_and(|r| r > 1.0)
            && self.ratios.r_eta.is_some_and(|r| r > 1.0)
    }
}

/// Bookkeeping reported with every sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SweepStats {
    /// Long-range grid points evaluated.
    pub points: usize,
    /// Short-range reference cycles evaluated.
    pub reference_evaluations: usize,
    /// Points left out of maxima and masks (non-engine or undefined ratio).
    pub excluded: usize,
    /// Engine-valid evaluations whose efficiency exceeds Carnot by more than [`CARNOT_TOLERANCE`].
    pub carnot_violations: usize,
    /// Largest `eta - eta_carnot` over all engine-valid evaluations.
    pub worst_carnot_margin: f64,
}

impl SweepStats {
    fn empty() -> Self {
        SweepStats {
            worst_carnot_margin: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    fn note_carnot(&mut self, eta: Option<f64>, baths: &BathPair) {
        if let Some(eta) = eta {
            let margin = eta - carnot_efficiency(baths);
            self.worst_carnot_margin = self.worst_carnot_margin.max(margin);
            if margin > CARNOT_TOLERANCE {
                self.carnot_violations += 1;
            }
        }
    }

    fn note_row(&mut self, row: &SweepRow, baths: &BathPair) {
        self.points += 1;
        if !row.usable() {
            self.excluded += 1;
        }
        self.note_carnot(row.lr.eta, baths);
    }

    fn merge(&mut self, other: &SweepStats) {
        self.points += other.points;
        self.reference_evaluations += other.reference_evaluations;
        self.excluded += other.excluded;
        self.carnot_violations += other.carnot_violations;
        self.worst_carnot_margin = self.worst_carnot_margin.max(other.worst_carnot_margin);
    }
}

/// Short-range reference results over a `(beta_ratio, mu_ratio)` grid.
struct Reference {
    /// Indexed `[beta][mu]`.
    results: Vec<Vec<CycleResult>>,
    stats: SweepStats,
}

impl Reference {
    fn new(config: &SweepConfig, mu_ratios: &[f64], beta_ratios: &[f64]) -> Result<Self> {
        let medium = Medium::new(config, InteractionRange::ShortRange, mu_ratios)?;
        let nm = mu_ratios.len();
        let flat = config.executor.try_map(beta_ratios.len() * nm, |idx| {
            let (b, m) = (idx / nm, idx % nm);
            let spec = config.spec(InteractionRange::ShortRange, mu_ratios[m], beta_ratios[b])?;
            let hot = medium.hot_initial(&spec.baths);
            medium.evaluate(config.cycle_kind, &spec, m, &hot)
        })?;
        let mut stats = SweepStats::empty();
        stats.reference_evaluations = flat.len();
        for r in &flat {
            stats.note_carnot(r.eta(), &r.spec().baths);
        }
        let mut it = flat.into_iter();
        let results = (0..beta_ratios.len())
            .map(|_| it.by_ref().take(nm).collect())
            .collect();
        Ok(Reference { results, stats })
    }
}

/// Rows for one range at one `beta_ratio` against a shared reference.
fn curve(
    config: &SweepConfig,
    medium: &Medium,
    reference: &[CycleResult],
    mu_ratios: &[f64],
    beta_ratio: f64,
) -> Result<(Vec<SweepRow>, SweepStats)> {
    let baths = config.baths(beta_ratio)?;
    let hot = medium.hot_initial(&baths);
    let mut stats = SweepStats::empty();
    let mut rows = Vec::with_capacity(mu_ratios.len());
    for (m, &mu_ratio) in mu_ratios.iter().enumerate() {
        let spec = config.spec(medium.range, mu_ratio, beta_ratio)?;
        let lr = medium.evaluate(config.cycle_kind, &spec, m, &hot)?;
        let sr = &reference[m];
        let row = SweepRow {
            mu_ratio,
            ratios: ratio_diagnostics(&lr, sr)?,
            lr: (&lr).into(),
            sr: sr.into(),
        };
        stats.note_row(&row, &baths);
        rows.push(row);
    }
    Ok((rows, stats))
}

/// A ratio curve over the `mu_f / mu_i` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub cycle_kind: CycleKind,
    pub range: InteractionRange,
    pub beta_ratio: f64,
    pub rows: Vec<SweepRow>,
    pub stats: SweepStats,
}

/// Ratio diagnostics at every `mu_f / mu_i` of the grid, for one range and bath ratio.
pub fn sweep_mu(
    config: &SweepConfig,
    range: InteractionRange,
    beta_ratio: f64,
) -> Result<SweepTable> {
    config.validate()?;
    check_range(range)?;
    let mu = &config.mu_ratio_grid;
    let reference = Reference::new(config, mu, &[beta_ratio])?;
    let medium = Medium::new(config, range, mu)?;
    let baths = config.baths(beta_ratio)?;
    let hot = medium.hot_initial(&baths);
    let rows = config.executor.try_map(mu.len(), |m| {
        let spec = config.spec(range, mu[m], beta_ratio)?;
        let lr = medium.evaluate(config.cycle_kind, &spec, m, &hot)?;
        let sr = &reference.results[0][m];
        Ok(SweepRow {
            mu_ratio: mu[m],
            ratios: ratio_diagnostics(&lr, sr)?,
            lr: (&lr).into(),
            sr: sr.into(),
        })
    })?;
    let mut stats = reference.stats;
    for row in &rows {
        stats.note_row(row, &baths);
    }
    Ok(SweepTable {
        cycle_kind: config.cycle_kind,
        range,
        beta_ratio,
        rows,
        stats,
    })
}

fn check_range(range: InteractionRange) -> Result<()> {
    match range {
        InteractionRange::PowerLaw(a) if !(a > 1.0 && a.is_finite()) => Err(
            Error::InvalidParameter(format!("alpha must be > 1 for cycle sweeps, got {a}")),
        ),
        _ => Ok(()),
    }
}

/// Largest ratios along a `mu_f / mu_i` curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxRatioPoint {
    pub r_w_max: f64,
    pub r_eta_max: f64,
    pub arg_mu_ratio_w: f64,
    pub arg_mu_ratio_eta: f64,
    /// Grid points that entered the maxima.
    pub valid_points: usize,
}

/// Grid argmax over usable rows; ties go to the smallest index.
fn argmax(rows: &[SweepRow], value: impl Fn(&SweepRow) -> Option<f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if !row.usable() {
            continue;
        }
        if let Some(v) = value(row) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

fn max_of_rows(rows: &[SweepRow]) -> Result<(MaxRatioPoint, usize, usize)> {
    let valid = rows.iter().filter(|r| r.usable()).count();
    if valid < MIN_VALID_POINTS {
        return Err(Error::InsufficientData {
            valid,
            required: MIN_VALID_POINTS,
        });
    }
    let iw = argmax(rows, |r| r.ratios.r_w).expect("usable rows exist");
    let ie = argmax(rows, |r| r.ratios.r_eta).expect("usable rows exist");
    let point = MaxRatioPoint {
        r_w_max: rows[iw].ratios.r_w.unwrap(),
        r_eta_max: rows[ie].ratios.r_eta.unwrap(),
        arg_mu_ratio_w: rows[iw].mu_ratio,
        arg_mu_ratio_eta: rows[ie].mu_ratio,
        valid_points: valid,
    };
    Ok((point, iw, ie))
}

/// Maxima of `R_W` and `R_eta` over the `mu_f / mu_i` grid, each independently.
///
/// With `refine`, a golden-section search inside the bracketing grid triple
/// polishes each maximum; the refined value replaces the grid value only if
/// it is larger.
pub fn max_ratios(
    config: &SweepConfig,
    range: InteractionRange,
    beta_ratio: f64,
    refine: bool,
) -> Result<MaxRatioPoint> {
    let table = sweep_mu(config, range, beta_ratio)?;
    let (mut point, iw, ie) = max_of_rows(&table.rows)?;
    if refine {
        let grid = &config.mu_ratio_grid;
        let probe = |x: f64| -> Result<Option<(f64, f64)>> {
            let spec = config.spec(range, x, beta_ratio)?;
            let lr = CycleResult::evaluate(config.cycle_kind, &spec)?;
            let sr = CycleResult::evaluate(
                config.cycle_kind,
                &spec.with_range(InteractionRange::ShortRange),
            )?;
            if !(lr.engine_valid() && sr.engine_valid()) {
                return Ok(None);
            }
            let d = ratio_diagnostics(&lr, &sr)?;
            Ok(d.r_w.zip(d.r_eta))
        };
        if let Some((x, v)) = golden_refine(grid, iw, |x| Ok(probe(x)?.map(|p| p.0)))? {
            if v > point.r_w_max {
                point.r_w_max = v;
                point.arg_mu_ratio_w = x;
            }
        }
        if let Some((x, v)) = golden_refine(grid, ie, |x| Ok(probe(x)?.map(|p| p.1)))? {
            if v > point.r_eta_max {
                point.r_eta_max = v;
                point.arg_mu_ratio_eta = x;
            }
        }
    }
    Ok(point)
}

/// Golden-section maximisation on `[grid[i-1], grid[i+1]]`. Returns `None`
/// at the grid ends or when the search leaves the usable region.
fn golden_refine(
    grid: &[f64],
    i: usize,
    f: impl Fn(f64) -> Result<Option<f64>>,
) -> Result<Option<(f64, f64)>> {
    if i == 0 || i + 1 >= grid.len() {
        return Ok(None);
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (grid[i - 1], grid[i + 1]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (Some(mut fc), Some(mut fd)) = (f(c)?, f(d)?) else {
        return Ok(None);
    };
    for _ in 0..60 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            match f(c)? {
                Some(v) => fc = v,
                None => return Ok(None),
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            match f(d)? {
                Some(v) => fd = v,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(if fc >= fd { (c, fc) } else { (d, fd) }))
}

/// Enhancement mask over `mu_f / mu_i` x `beta_h / beta_c` for one range.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionMap {
    pub cycle_kind: CycleKind,
    pub range: InteractionRange,
    pub beta_c: f64,
    pub mu_ratio_grid: Vec<f64>,
    pub beta_ratio_grid: Vec<f64>,
    /// `mask[i][j]` at `(mu_ratio_grid[i], beta_ratio_grid[j])`.
    pub mask: Vec<Vec<bool>>,
    pub stats: SweepStats,
}

impl RegionMap {
    /// Fraction of enhanced cells.
    pub fn area(&self) -> f64 {
        let cells = self.mu_ratio_grid.len() * self.beta_ratio_grid.len();
        let on = self.mask.iter().flatten().filter(|&&b| b).count();
        on as f64 / cells as f64
    }
}

/// Cells where both cycles are engines and `R_W > 1`, `R_eta > 1`.
pub fn enhancement_regions(config: &SweepConfig, range: InteractionRange) -> Result<RegionMap> {
    config.validate()?;
    check_range(range)?;
    let (mu, beta) = (&config.mu_ratio_grid, &config.beta_ratio_grid);
    let reference = Reference::new(config, mu, beta)?;
    let medium = Medium::new(config, range, mu)?;
    let curves = config.executor.try_map(beta.len(), |b| {
        curve(config, &medium, &reference.results[b], mu, beta[b])
    })?;
    let mut stats = reference.stats;
    let mut mask = vec![vec![false; beta.len()]; mu.len()];
    for (b, (rows, s)) in curves.iter().enumerate() {
        stats.merge(s);
        for (m, row) in rows.iter().enumerate() {
            mask[m][b] = row.enhanced();
        }
    }
    Ok(RegionMap {
        cycle_kind: config.cycle_kind,
        range,
        beta_c: config.beta_c,
        mu_ratio_grid: mu.clone(),
        beta_ratio_grid: beta.clone(),
        mask,
        stats,
    })
}

/// One `(alpha, beta_ratio)` cell of the maximum-ratio surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceCell {
    pub alpha: f64,
    pub beta_ratio: f64,
    /// `None` when the curve has too few engine-valid points.
    pub max: Option<MaxRatioPoint>,
}

/// Grid maxima of the ratios for every `(alpha, beta_ratio)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxRatioSurface {
    pub cycle_kind: CycleKind,
    pub beta_c: f64,
    pub alpha_grid: Vec<f64>,
    pub beta_ratio_grid: Vec<f64>,
    /// `cells[a][b]` at `(alpha_grid[a], beta_ratio_grid[b])`.
    pub cells: Vec<Vec<SurfaceCell>>,
    pub stats: SweepStats,
}

pub fn max_ratio_surface(config: &SweepConfig) -> Result<MaxRatioSurface> {
    config.validate()?;
    let (mu, alpha, beta) = (
        &config.mu_ratio_grid,
        &config.alpha_grid,
        &config.beta_ratio_grid,
    );
    let reference = Reference::new(config, mu, beta)?;
    let per_alpha = config.executor.try_map(alpha.len(), |a| {
        let medium = Medium::new(config, InteractionRange::PowerLaw(alpha[a]), mu)?;
        let mut stats = SweepStats::empty();
        let mut cells = Vec::with_capacity(beta.len());
        for (b, &beta_ratio) in beta.iter().enumerate() {
            let (rows, s) = curve(config, &medium, &reference.results[b], mu, beta_ratio)?;
            stats.merge(&s);
            let max = match max_of_rows(&rows) {
                Ok((p, _, _)) => Some(p),
                Err(Error::InsufficientData { .. }) => None,
                Err(e) => return Err(e),
            };
            cells.push(SurfaceCell {
                alpha: alpha[a],
                beta_ratio,
                max,
            });
        }
        Ok((cells, stats))
    })?;
    let mut stats = reference.stats;
    let mut cells = Vec::with_capacity(alpha.len());
    for (c, s) in per_alpha {
        stats.merge(&s);
        cells.push(c);
    }
    Ok(MaxRatioSurface {
        cycle_kind: config.cycle_kind,
        beta_c: config.beta_c,
        alpha_grid: alpha.clone(),
        beta_ratio_grid: beta.clone(),
        cells,
        stats,
    })
}

/// Where the surface maxima of `R_W,m` and `R_eta,m` sit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalCondition {
    pub alpha_w: f64,
    pub beta_ratio_w: f64,
    pub r_w_max: f64,
    pub alpha_eta: f64,
    pub beta_ratio_eta: f64,
    pub r_eta_max: f64,
    /// Grid indices `(alpha, beta_ratio)` of the two maxima.
    pub index_w: (usize, usize),
    pub index_eta: (usize, usize),
    /// The two maxima are at most one grid cell apart along each axis.
    pub coincident: bool,
}

impl MaxRatioSurface {
    pub fn optimal(&self) -> Result<OptimalCondition> {
        let mut best_w: Option<((usize, usize), f64)> = None;
        let mut best_eta: Option<((usize, usize), f64)> = None;
        let mut valid = 0;
        for (a, row) in self.cells.iter().enumerate() {
            for (b, cell) in row.iter().enumerate() {
                let Some(p) = cell.max else { continue };
                valid += 1;
                if best_w.is_none_or(|(_, v)| p.r_w_max > v) {
                    best_w = Some(((a, b), p.r_w_max));
                }
                if best_eta.is_none_or(|(_, v)| p.r_eta_max > v) {
                    best_eta = Some(((a, b), p.r_eta_max));
                }
            }
        }
        let (Some((iw, r_w_max)), Some((ie, r_eta_max))) = (best_w, best_eta) else {
            return Err(Error::InsufficientData { valid, required: 1 });
        };
        let coincident = iw.0.abs_diff(ie.0) <= 1 && iw.1.abs_diff(ie.1) <= 1;
        Ok(OptimalCondition {
            alpha_w: self.alpha_grid[iw.0],
            beta_ratio_w: self.beta_ratio_grid[iw.1],
            r_w_max,
            alpha_eta: self.alpha_grid[ie.0],
            beta_ratio_eta: self.beta_ratio_grid[ie.1],
            r_eta_max,
            index_w: iw,
            index_eta: ie,
            coincident,
        })
    }
}

/// Joint optimum of the maximum ratios over `alpha_grid x beta_ratio_grid`.
pub fn optimal_condition(config: &SweepConfig) -> Result<OptimalCondition> {
    max_ratio_surface(config)?.optimal()
}
