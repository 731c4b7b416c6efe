//! Momentum-space description of the long-range Kitaev chain.
//!
//! With antiperiodic boundary conditions the chain decouples into `L/2`
//! independent `(k, -k)` blocks. Each block is a 2x2 Bogoliubov-de Gennes
//! matrix whose Bloch vector is `(J cos k + mu, Delta f(k) / 2)`, where
//!
//! ```text
//! f(k) = sum_{l=1}^{L-1} sin(k l) / d_l^alpha,    d_l = min(l, L - l)
//! ```
//!
//! is the long-range pairing function. Everything downstream (thermodynamics,
//! cycles, sweeps) only ever sees the set of quasiparticle energies
//! `eps_k = |Bloch vector|` for `k > 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Decay of the pairing amplitude with distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InteractionRange {
    /// Pairing decays as `1 / d^alpha`, `alpha > 0`.
    PowerLaw(f64),
    /// The `alpha -> infinity` reference: nearest-neighbour pairing, `f(k) = 2 sin k`.
    ShortRange,
}

impl InteractionRange {
    /// The decay exponent, `f64::INFINITY` for the short-range limit.
    pub fn alpha(&self) -> f64 {
        match *self {
            InteractionRange::PowerLaw(alpha) => alpha,
            InteractionRange::ShortRange => f64::INFINITY,
        }
    }

    pub fn is_short_range(&self) -> bool {
        matches!(self, InteractionRange::ShortRange)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            InteractionRange::PowerLaw(alpha) if !(alpha.is_finite() && alpha > 0.0) => Err(
                Error::InvalidParameter(format!("alpha must be finite and > 0, got {alpha}")),
            ),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for InteractionRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InteractionRange::PowerLaw(alpha) => write!(f, "{alpha}"),
            InteractionRange::ShortRange => f.write_str("inf"),
        }
    }
}

/// Static description of the working medium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams {
    /// Number of sites `L` (even, >= 2).
    pub sites: usize,
    /// Nearest-neighbour hopping `J`.
    pub hopping: f64,
    /// Pairing strength `Delta`.
    pub pairing: f64,
    /// Chemical potential `mu`.
    pub mu: f64,
    pub range: InteractionRange,
}

impl ChainParams {
    pub fn new(
        sites: usize,
        hopping: f64,
        pairing: f64,
        mu: f64,
        range: InteractionRange,
    ) -> Result<Self> {
        let params = ChainParams {
            sites,
            hopping,
            pairing,
            mu,
            range,
        };
        params.validate()?;
        Ok(params)
    }

    /// `J = Delta = 1`, the units used throughout the engine analysis.
    pub fn unit(sites: usize, mu: f64, range: InteractionRange) -> Result<Self> {
        Self::new(sites, 1.0, 1.0, mu, range)
    }

    pub fn validate(&self) -> Result<()> {
        validate_sites(self.sites)?;
        for (name, value) in [
            ("J", self.hopping),
            ("Delta", self.pairing),
            ("mu", self.mu),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        self.range.validate()
    }

    pub fn with_mu(self, mu: f64) -> Self {
        ChainParams { mu, ..self }
    }

    pub fn with_range(self, range: InteractionRange) -> Self {
        ChainParams { range, ..self }
    }

    /// Effective distance `d_l = min(l, L - l)` on the closed chain.
    pub fn effective_distance(&self, l: usize) -> usize {
        l.min(self.sites - l)
    }
}

fn validate_sites(sites: usize) -> Result<()> {
    if sites < 2 || !sites.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "L must be even and >= 2, got {sites}"
        )));
    }
    Ok(())
}

/// The `L/2` positive antiperiodic momenta `pi (2n - 1) / L`, increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid {
    sites: usize,
    k: Vec<f64>,
}

impl MomentumGrid {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn k_positive(&self) -> &[f64] {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

pub fn momentum_grid(sites: usize) -> Result<MomentumGrid> {
    validate_sites(sites)?;
    let k = (0..sites / 2)
        .map(|n| PI * (2 * n + 1) as f64 / sites as f64)
        .collect();
    Ok(MomentumGrid { sites, k })
}

/// Precomputed `d_l^{-alpha}` for one `(L, alpha)`, reused across momenta.
#[derive(Clone, Debug)]
pub struct PairingWeights {
    sites: usize,
    range: InteractionRange,
    // weights[l - 1] = d_l^{-alpha}
    weights: Vec<f64>,
}

impl PairingWeights {
    pub fn new(params: &ChainParams) -> Result<Self> {
        params.validate()?;
        let weights = match params.range {
            InteractionRange::PowerLaw(alpha) => (1..params.sites)
                .map(|l| (params.effective_distance(l) as f64).powf(-alpha))
                .collect(),
            InteractionRange::ShortRange => Vec::new(),
        };
        Ok(PairingWeights {
            sites: params.sites,
            range: params.range,
            weights,
        })
    }

    /// `f(k)` at an arbitrary momentum.
    ///
    /// The phases `e^{ikl}` are generated by repeated rotation, so the cost is
    /// `O(L)` multiply-adds with no trigonometric calls past the first.
    pub fn eval(&self, k: f64) -> f64 {
        if self.range.is_short_range() {
            return 2.0 * k.sin();
        }
        let (step_sin, step_cos) = k.sin_cos();
        let (mut s, mut c) = (0.0_f64, 1.0_f64);
        let mut acc = 0.0;
        for &w in &self.weights {
            let next_s = s * step_cos + c * step_sin;
            let next_c = c * step_cos - s * step_sin;
            s = next_s;
            c = next_c;
            acc += w * s;
        }
        acc
    }

    /// Smooth continuation of `f` between grid momenta:
    /// `2 sum_{l < L/2} sin(k l) / l^alpha + sin(k L / 2) / (L/2)^alpha`.
    ///
    /// On the antiperiodic grid `sin(k (L - l)) = sin(k l)`, so this equals
    /// [`eval`](Self::eval) there. Off the grid the literal sum pairs each
    /// `l` with `L - l` into `2 sin(kL/2) cos(k(L/2 - l))` and vanishes
    /// whenever `kL` is a multiple of `2 pi`, which would make the Bloch vector
    /// pass through zero; the folded form does not.
    pub fn eval_folded(&self, k: f64) -> f64 {
        if self.range.is_short_range() {
            return 2.0 * k.sin();
        }
        let half = self.sites / 2;
        let (step_sin, step_cos) = k.sin_cos();
        let (mut s, mut c) = (0.0_f64, 1.0_f64);
        let mut acc = 0.0;
        for (i, &w) in self.weights[..half].iter().enumerate() {
            let next_s = s * step_cos + c * step_sin;
            let next_c = c * step_cos - s * step_sin;
            s = next_s;
            c = next_c;
            let mult = if i + 1 == half { 1.0 } else { 2.0 };
            acc += mult * w * s;
        }
        acc
    }

    /// `f(k)` on every momentum of the antiperiodic grid.
    ///
    /// On the grid `k l = pi m / L` with integer `m`, so the sines come from a
    /// single table of `2L` values and are exact to rounding.
    pub fn on_grid(&self, grid: &MomentumGrid) -> Vec<f64> {
        debug_assert_eq!(grid.sites(), self.sites);
        if self.range.is_short_range() {
            return grid.k_positive().iter().map(|k| 2.0 * k.sin()).collect();
        }
        let l_sites = self.sites;
        let period = 2 * l_sites;
        let sin_table: Vec<f64> = (0..period)
            .map(|m| (PI * m as f64 / l_sites as f64).sin())
            .collect();
        (0..grid.len())
            .map(|n| {
                let q = 2 * n + 1;
                let mut m = 0usize;
                let mut acc = 0.0;
                for &w in &self.weights {
                    m += q;
                    if m >= period {
                        m %= period;
                    }
                    acc += w * sin_table[m];
                }
                acc
            })
            .collect()
    }
}

/// Long-range pairing function `f(k)`; exactly `2 sin k` in the short-range limit.
pub fn pairing_function(k: f64, params: &ChainParams) -> Result<f64> {
    Ok(PairingWeights::new(params)?.eval(k))
}

#[inline]
fn bloch_vector(k: f64, f_k: f64, params: &ChainParams) -> (f64, f64) {
    (
        params.hopping * k.cos() + params.mu,
        0.5 * params.pairing * f_k,
    )
}

/// Quasiparticle energy `sqrt((J cos k + mu)^2 + (Delta f(k) / 2)^2)`.
pub fn quasiparticle_energy(k: f64, params: &ChainParams) -> Result<f64> {
    let f_k = pairing_function(k, params)?;
    let (z, y) = bloch_vector(k, f_k, params);
    Ok(z.hypot(y))
}

/// Bogoliubov angle, `theta = atan2(-Delta f / 2, J cos k + mu) / 2`, in `(-pi/2, pi/2]`.
pub fn bogoliubov_angle(k: f64, params: &ChainParams) -> Result<f64> {
    let f_k = pairing_function(k, params)?;
    let (z, y) = bloch_vector(k, f_k, params);
    // Components at rounding level of the coupling scale count as zero
    // (e.g. `cos(pi / 2)` is `6e-17`, not `0`).
    let scale = params
        .hopping
        .abs()
        .max(params.mu.abs())
        .max(params.pairing.abs());
    let zero = 8.0 * f64::EPSILON * scale;
    if z.abs() <= zero && y.abs() <= zero {
        return Err(Error::DegenerateMode { k });
    }
    Ok(0.5 * (-y).atan2(z))
}

/// The set `{eps_k : k > 0}` for one parameter point, aligned with [`momentum_grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiparticleSpectrum {
    params: ChainParams,
    energies: Vec<f64>,
}

impl QuasiparticleSpectrum {
    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn sites(&self) -> usize {
        self.params.sites
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Smallest quasiparticle energy on the grid.
    pub fn min_gap(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sorted single-particle levels `{+eps_k, -eps_k}`.
    pub fn levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.energies.iter().flat_map(|&e| [-e, e]).collect();
        levels.sort_by(f64::total_cmp);
        levels
    }
}

/// Chemical-potential-independent parts of the spectrum for one `(L, J, Delta, alpha)`.
///
/// Sweeps build many spectra that differ only in `mu`; with the table each
/// one costs a single `O(L)` pass.
#[derive(Clone, Debug)]
pub struct ModeTable {
    params: ChainParams,
    grid: MomentumGrid,
    cos_k: Vec<f64>,
    pairing: Vec<f64>,
}

impl ModeTable {
    pub fn new(params: &ChainParams) -> Result<Self> {
        let weights = PairingWeights::new(params)?;
        let grid = momentum_grid(params.sites)?;
        let cos_k = grid.k_positive().iter().map(|k| k.cos()).collect();
        let pairing = weights.on_grid(&grid);
        Ok(ModeTable {
            params: *params,
            grid,
            cos_k,
            pairing,
        })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    /// `f(k)` on the grid.
    pub fn pairing(&self) -> &[f64] {
        &self.pairing
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn spectrum(&self, mu: f64) -> QuasiparticleSpectrum {
        let p = self.params.with_mu(mu);
        let energies = self
            .cos_k
            .iter()
            .zip(&self.pairing)
            .map(|(&c, &f)| (p.hopping * c + mu).hypot(0.5 * p.pairing * f))
            .collect();
        QuasiparticleSpectrum {
            params: p,
            energies,
        }
    }
}

pub fn build_spectrum(params: &ChainParams) -> Result<QuasiparticleSpectrum> {
    Ok(ModeTable::new(params)?.spectrum(params.mu))
}

/// Minimum quasiparticle energy over the momentum grid.
pub fn min_gap(params: &ChainParams) -> Result<f64> {
    Ok(build_spectrum(params)?.min_gap())
}

/// Winding of the Bogoliubov angle around the Brillouin zone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingResult {
    pub w: f64,
    /// Distance of `w` to the nearest half-integer.
    pub residual: f64,
    pub grid_density: usize,
}

pub const MIN_WINDING_DENSITY: usize = 1000;

/// Default gapless floor, `1e-6 * max(|J|, |Delta|, |mu|)`.
pub fn default_gap_floor(params: &ChainParams) -> f64 {
    1e-6 * params
        .hopping
        .abs()
        .max(params.pairing.abs())
        .max(params.mu.abs())
}

pub fn winding_number(params: &ChainParams, grid_density: usize) -> Result<WindingResult> {
    winding_number_with_floor(params, grid_density, default_gap_floor(params))
}

/// Winding number of the Bloch vector `(J cos k + mu, Delta f(k) / 2)` over
/// `k in [-pi, pi]`, i.e. `-(1/2pi) * total change of 2 theta_k`.
///
/// Between grid momenta `f` is continued with
/// [`PairingWeights::eval_folded`]. `grid_density` uniform intervals are
/// used; the last sample coincides with
/// the first so the loop is closed. Consecutive phase jumps larger than `pi`
/// are unwrapped. The short-range topological phase (`|mu| < |J|`, `J, Delta > 0`)
/// has `w = +1`.
pub fn winding_number_with_floor(
    params: &ChainParams,
    grid_density: usize,
    gap_floor: f64,
) -> Result<WindingResult> {
    if grid_density < MIN_WINDING_DENSITY {
        return Err(Error::InvalidParameter(format!(
            "winding grid density must be >= {MIN_WINDING_DENSITY}, got {grid_density}"
        )));
    }
    let weights = PairingWeights::new(params)?;
    let step = 2.0 * PI / grid_density as f64;
    let mut prev_phase = None;
    let mut total = 0.0;
    for j in 0..=grid_density {
        let k = if j == grid_density {
            PI
        } else {
            -PI + step * j as f64
        };
        let (z, y) = bloch_vector(k, weights.eval_folded(k), params);
        let energy = z.hypot(y);
        if energy < gap_floor {
            return Err(Error::GaplessConfiguration {
                k,
                energy,
                floor: gap_floor,
            });
        }
        let phase = y.atan2(z);
        if let Some(prev) = prev_phase {
            let mut d = phase - prev;
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        prev_phase = Some(phase);
    }
    let w = total / (2.0 * PI);
    let residual = (w - (2.0 * w).round() / 2.0).abs();
    Ok(WindingResult {
        w,
        residual,
        grid_density,
    })
}

/// One row of a spectrum scan: all single-particle levels at one `mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumScanRow {
    pub mu: f64,
    pub levels: Vec<f64>,
}

/// Levels `{+-eps_k}` as a function of `mu`, for band plots.
pub fn spectrum_scan(base: &ChainParams, mu_values: &[f64]) -> Result<Vec<SpectrumScanRow>> {
    let table = ModeTable::new(base)?;
    mu_values
        .iter()
        .map(|&mu| {
            if !mu.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "mu must be finite, got {mu}"
                )));
            }
            Ok(SpectrumScanRow {
                mu,
                levels: table.spectrum(mu).levels(),
            })
        })
        .collect()
}
