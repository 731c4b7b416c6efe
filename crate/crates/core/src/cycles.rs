//! Quasistatic Otto and Stirling cycles driven by the chemical potential.
//!
//! Heats are positive when absorbed by the working medium. Both cycles start
//! from `mu_i` at the hot bath and move to `mu_f <= mu_i`.
//!
//! Otto (two adiabats, two isochores):
//!
//! ```text
//! Q_h = sum_k eps_i [tanh(b_c eps_f / 2) - tanh(b_h eps_i / 2)]
//! Q_c = sum_k eps_f [tanh(b_h eps_i / 2) - tanh(b_c eps_f / 2)]
//! W   = sum_k (eps_i - eps_f) [tanh(b_c eps_f / 2) - tanh(b_h eps_i / 2)]
//! ```
//!
//! Stirling (two isotherms, two iso-mu strokes): `Q_I = (S_f - S_i) / b_h`,
//! `Q_II = U_f(b_c) - U_f(b_h)`, `Q_III = (S_i - S_f) / b_c`,
//! `Q_IV = U_i(b_h) - U_i(b_c)`, heat input `Q_I + Q_IV`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::spectrum::{ChainParams, InteractionRange, ModeTable, QuasiparticleSpectrum};

/// Inverse temperatures of the hot and cold reservoirs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathPair {
    pub beta_h: f64,
    pub beta_c: f64,
}

impl BathPair {
    /// Requires `0 < beta_h <= beta_c`. Equal temperatures are accepted so
    /// that the single-bath limits can be evaluated.
    pub fn new(beta_h: f64, beta_c: f64) -> Result<Self> {
        let baths = BathPair { beta_h, beta_c };
        baths.validate()?;
        Ok(baths)
    }

    /// Hot bath given as a fraction of the cold inverse temperature.
    pub fn from_ratio(beta_c: f64, beta_ratio: f64) -> Result<Self> {
        Self::new(beta_ratio * beta_c, beta_c)
    }

    pub fn ratio(&self) -> f64 {
        self.beta_h / self.beta_c
    }

    fn validate(&self) -> Result<()> {
        let ok = self.beta_h.is_finite()
            && self.beta_c.is_finite()
            && self.beta_h > 0.0
            && self.beta_h <= self.beta_c;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "need 0 < beta_h <= beta_c, got beta_h = {}, beta_c = {}",
                self.beta_h, self.beta_c
            )));
        }
        Ok(())
    }
}

/// `1 - beta_h / beta_c`.
pub fn carnot_efficiency(baths: &BathPair) -> f64 {
    1.0 - baths.beta_h / baths.beta_c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    Otto,
    Stirling,
}

impl CycleKind {
    pub fn name(&self) -> &'static str {
        match self {
            CycleKind::Otto => "otto",
            CycleKind::Stirling => "stirling",
        }
    }
}

impl std::str::FromStr for CycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "otto" => Ok(CycleKind::Otto),
            "stirling" => Ok(CycleKind::Stirling),
            other => Err(Error::InvalidParameter(format!(
                "unknown cycle kind '{other}'"
            ))),
        }
    }
}

/// One cycle: medium (its `mu` is ignored), the two chemical potentials and the baths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleSpec {
    pub base: ChainParams,
    pub mu_i: f64,
    pub mu_f: f64,
    pub baths: BathPair,
}

impl CycleSpec {
    pub fn new(base: ChainParams, mu_i: f64, mu_f: f64, baths: BathPair) -> Result<Self> {
        let spec = CycleSpec {
            base,
            mu_i,
            mu_f,
            baths,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.with_mu(self.mu_i).validate()?;
        self.baths.validate()?;
        if !(self.mu_f.is_finite() && 0.0 <= self.mu_f && self.mu_f <= self.mu_i) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= mu_f <= mu_i, got mu_i = {}, mu_f = {}",
                self.mu_i, self.mu_f
            )));
        }
        if let InteractionRange::PowerLaw(alpha) = self.base.range {
            if alpha <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "engine cycles require alpha > 1, got {alpha}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_range(self, range: InteractionRange) -> Self {
        CycleSpec {
            base: self.base.with_range(range),
            ..self
        }
    }

    /// Same medium and protocol up to the interaction range.
    fn comparable(&self, other: &CycleSpec) -> bool {
        let (a, b) = (&self.base, &other.base);
        a.sites == b.sites
            && a.hopping == b.hopping
            && a.pairing == b.pairing
            && self.mu_i == other.mu_i
            && self.mu_f == other.mu_f
            && self.baths == other.baths
    }

    /// Spectra at `mu_i` and `mu_f` on a shared momentum grid.
    pub fn spectra(&self) -> Result<(QuasiparticleSpectrum, QuasiparticleSpectrum)> {
        self.validate()?;
        let table = ModeTable::new(&self.base.with_mu(self.mu_i))?;
        Ok((table.spectrum(self.mu_i), table.spectrum(self.mu_f)))
    }
}

/// Per-mode thermal factors of one spectrum at one inverse temperature.
#[derive(Clone, Debug)]
pub struct ThermalProfile {
    beta: f64,
    energies: Vec<f64>,
    tanh_half: Vec<f64>,
    ln_cosh_half: Vec<f64>,
}

impl ThermalProfile {
    pub fn new(spectrum: &QuasiparticleSpectrum, beta: f64) -> Self {
        let energies = spectrum.energies().to_vec();
        let mut tanh_half = Vec::with_capacity(energies.len());
        let mut ln_cosh_half = Vec::with_capacity(energies.len());
        for &e in &energies {
            // One exp_m1 serves both functions: with m = exp(-2|x|) - 1,
            // tanh|x| = -m / (2 + m) and lncosh x = |x| + ln(2 + m) - ln 2.
            let x = 0.5 * beta * e;
            let a = x.abs();
            let m = (-2.0 * a).exp_m1();
            tanh_half.push((-m / (2.0 + m)).copysign(x));
            ln_cosh_half.push(a + (1.0 + m).ln_1p() - LN_2);
        }
        ThermalProfile {
            beta,
            energies,
            tanh_half,
            ln_cosh_half,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `tanh(beta eps_k / 2)` per mode.
    pub fn tanh_half(&self) -> &[f64] {
        &self.tanh_half
    }

    /// `ln cosh(beta eps_k / 2)` per mode.
    pub fn ln_cosh_half(&self) -> &[f64] {
        &self.ln_cosh_half
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

fn check_profiles(spec: &CycleSpec, profiles: &[(&ThermalProfile, f64)]) -> Result<()> {
    let n = spec.base.sites / 2;
    for (p, beta) in profiles {
        if p.len() != n {
            return Err(Error::ContractViolation(format!(
                "profile has {} modes, expected {n}",
                p.len()
            )));
        }
        if p.beta() != *beta {
            return Err(Error::ContractViolation(format!(
                "profile at beta = {} where {beta} was expected",
                p.beta()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OttoResult {
    pub spec: CycleSpec,
    /// Heat absorbed from the hot bath.
    pub q_h: f64,
    /// Heat exchanged with the cold bath (negative when rejected).
    pub q_c: f64,
    pub work: f64,
    /// `W / Q_h`, only when `engine_valid`.
    pub eta: Option<f64>,
    pub engine_valid: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StirlingResult {
    pub spec: CycleSpec,
    /// Isothermal stroke at the hot bath, `mu_i -> mu_f`.
    pub q_1: f64,
    /// Cooling at fixed `mu_f`.
    pub q_2: f64,
    /// Isothermal stroke at the cold bath, `mu_f -> mu_i`.
    pub q_3: f64,
    /// Heating at fixed `mu_i`.
    pub q_4: f64,
    pub work: f64,
    /// `Q_I + Q_IV`.
    pub q_h: f64,
    pub eta: Option<f64>,
    pub engine_valid: bool,
}

pub fn otto_cycle(spec: &CycleSpec) -> Result<OttoResult> {
    let (initial, fin) = spec.spectra()?;
    let hot_initial = ThermalProfile::new(&initial, spec.baths.beta_h);
    let cold_final = ThermalProfile::new(&fin, spec.baths.beta_c);
    otto_from_profiles(spec, &hot_initial, &cold_final)
}

/// Otto cycle from the two thermal profiles it depends on: the `mu_i`
/// spectrum at the hot bath and the `mu_f` spectrum at the cold bath.
pub fn otto_from_profiles(
    spec: &CycleSpec,
    hot_initial: &ThermalProfile,
    cold_final: &ThermalProfile,
) -> Result<OttoResult> {
    check_profiles(
        spec,
        &[
            (hot_initial, spec.baths.beta_h),
            (cold_final, spec.baths.beta_c),
        ],
    )?;
    let (mut q_h, mut q_c, mut work) = (0.0, 0.0, 0.0);
    for k in 0..hot_initial.len() {
        let e_i = hot_initial.energies[k];
        let e_f = cold_final.energies[k];
        let pop = cold_final.tanh_half[k] - hot_initial.tanh_half[k];
        q_h += e_i * pop;
        q_c -= e_f * pop;
        work += (e_i - e_f) * pop;
    }
    let engine_valid = work > 0.0 && -q_c > 0.0 && q_h > -q_c;
    let eta = engine_valid.then(|| work / q_h);
    Ok(OttoResult {
        spec: *spec,
        q_h,
        q_c,
        work,
        eta,
        engine_valid,
    })
}

pub fn stirling_cycle(spec: &CycleSpec) -> Result<StirlingResult> {
    let (initial, fin) = spec.spectra()?;
    let BathPair { beta_h, beta_c } = spec.baths;
    stirling_from_profiles(
        spec,
        &ThermalProfile::new(&initial, beta_h),
        &ThermalProfile::new(&fin, beta_h),
        &ThermalProfile::new(&initial, beta_c),
        &ThermalProfile::new(&fin, beta_c),
    )
}

/// Stirling cycle from the four `(spectrum, bath)` profiles.
pub fn stirling_from_profiles(
    spec: &CycleSpec,
    hot_initial: &ThermalProfile,
    hot_final: &ThermalProfile,
    cold_initial: &ThermalProfile,
    cold_final: &ThermalProfile,
) -> Result<StirlingResult> {
    let BathPair { beta_h, beta_c } = spec.baths;
    check_profiles(
        spec,
        &[
            (hot_initial, beta_h),
            (hot_final, beta_h),
            (cold_initial, beta_c),
            (cold_final, beta_c),
        ],
    )?;
    let (mut q_1, mut q_2, mut q_3, mut q_4) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..hot_initial.len() {
        let e_i = hot_initial.energies[k];
        let e_f = hot_final.energies[k];
        let (th_i, th_f) = (hot_initial.tanh_half[k], hot_final.tanh_half[k]);
        let (tc_i, tc_f) = (cold_initial.tanh_half[k], cold_final.tanh_half[k]);
        q_1 += 2.0 / beta_h * (hot_final.ln_cosh_half[k] - hot_initial.ln_cosh_half[k])
            - (e_f * th_f - e_i * th_i);
        q_2 += e_f * (th_f - tc_f);
        q_3 += 2.0 / beta_c * (cold_initial.ln_cosh_half[k] - cold_final.ln_cosh_half[k])
            - (e_i * tc_i - e_f * tc_f);
        q_4 += e_i * (tc_i - th_i);
    }
    let work = q_1 + q_2 + q_3 + q_4;
    let q_h = q_1 + q_4;
    let engine_valid = work > 0.0 && q_h > 0.0;
    let eta = engine_valid.then(|| work / q_h);
    Ok(StirlingResult {
        spec: *spec,
        q_1,
        q_2,
        q_3,
        q_4,
        work,
        q_h,
        eta,
        engine_valid,
    })
}

/// Stirling work as the two isothermal free-energy differences,
/// `(2/b_h) sum [lncosh_h(f) - lncosh_h(i)] + (2/b_c) sum [lncosh_c(i) - lncosh_c(f)]`.
///
/// Algebraically equal to `Q_I + Q_II + Q_III + Q_IV`; kept separate as a cross-check.
pub fn stirling_work_closed_form(
    baths: &BathPair,
    hot_initial: &ThermalProfile,
    hot_final: &ThermalProfile,
    cold_initial: &ThermalProfile,
    cold_final: &ThermalProfile,
) -> f64 {
    let hot: f64 = hot_final
        .ln_cosh_half
        .iter()
        .zip(&hot_initial.ln_cosh_half)
        .map(|(f, i)| f - i)
        .sum();
    let cold: f64 = cold_initial
        .ln_cosh_half
        .iter()
        .zip(&cold_final.ln_cosh_half)
        .map(|(i, f)| i - f)
        .sum();
    2.0 / baths.beta_h * hot + 2.0 / baths.beta_c * cold
}

/// Either cycle's result, as consumed by the ratio diagnostics and sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CycleResult {
    Otto(OttoResult),
    Stirling(StirlingResult),
}

impl CycleResult {
    pub fn evaluate(kind: CycleKind, spec: &CycleSpec) -> Result<Self> {
        Ok(match kind {
            CycleKind::Otto => CycleResult::Otto(otto_cycle(spec)?),
            CycleKind::Stirling => CycleResult::Stirling(stirling_cycle(spec)?),
        })
    }

    pub fn kind(&self) -> CycleKind {
        match self {
            CycleResult::Otto(_) => CycleKind::Otto,
            CycleResult::Stirling(_) => CycleKind::Stirling,
        }
    }

    pub fn spec(&self) -> &CycleSpec {
        match self {
            CycleResult::Otto(r) => &r.spec,
            CycleResult::Stirling(r) => &r.spec,
        }
    }

    pub fn work(&self) -> f64 {
        match self {
            CycleResult::Otto(r) => r.work,
            CycleResult::Stirling(r) => r.work,
        }
    }

    /// Heat drawn from the hot bath.
    pub fn heat_in(&self) -> f64 {
        match self {
            CycleResult::Otto(r) => r.q_h,
            CycleResult::Stirling(r) => r.q_h,
        }
    }

    pub fn eta(&self) -> Option<f64> {
        match self {
            CycleResult::Otto(r) => r.eta,
            CycleResult::Stirling(r) => r.eta,
        }
    }

    pub fn engine_valid(&self) -> bool {
        match self {
            CycleResult::Otto(r) => r.engine_valid,
            CycleResult::Stirling(r) => r.engine_valid,
        }
    }
}

impl From<OttoResult> for CycleResult {
    fn from(r: OttoResult) -> Self {
        CycleResult::Otto(r)
    }
}

impl From<StirlingResult> for CycleResult {
    fn from(r: StirlingResult) -> Self {
        CycleResult::Stirling(r)
    }
}

/// Long-range engine measured against its short-range reference.
///
/// Each field is `None` where its denominator vanishes:
/// `r_w = W / W_inf`, `r_eta = eta / eta_inf` (both runs must be engines),
/// `dq_rel = (Q_inf - Q) / Q_inf`, `xi = (W_inf - W) / (eta_inf (Q_inf - Q))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioDiagnostics {
    pub r_w: Option<f64>,
    pub r_eta: Option<f64>,
    pub dq_rel: Option<f64>,
    pub xi: Option<f64>,
}

impl RatioDiagnostics {
    pub fn defined(&self) -> bool {
        self.r_w.is_some() && self.r_eta.is_some() && self.dq_rel.is_some() && self.xi.is_some()
    }
}

pub fn ratio_diagnostics(lr: &CycleResult, sr: &CycleResult) -> Result<RatioDiagnostics> {
    if lr.kind() != sr.kind() {
        return Err(Error::ContractViolation(format!(
            "cannot compare a {} cycle with a {} cycle",
            lr.kind().name(),
            sr.kind().name()
        )));
    }
    if !lr.spec().comparable(sr.spec()) {
        return Err(Error::ContractViolation(
            "long-range and reference cycles differ beyond the interaction range".into(),
        ));
    }
    let (w, q) = (lr.work(), lr.heat_in());
    let (w_inf, q_inf) = (sr.work(), sr.heat_in());
    let tol = 1e-14 * w_inf.abs().max(q_inf.abs()).max(1.0);
    let nonzero = |x: f64| x.abs() > tol;

    let r_w = nonzero(w_inf).then(|| w / w_inf);
    let r_eta = match (lr.engine_valid() && sr.engine_valid(), lr.eta(), sr.eta()) {
        (true, Some(eta), Some(eta_inf)) if nonzero(eta_inf) => Some(eta / eta_inf),
        _ => None,
    };
    let dq = q_inf - q;
    let dq_rel = nonzero(q_inf).then(|| dq / q_inf);
    let xi = if nonzero(dq) && nonzero(q_inf) && nonzero(w_inf) {
        let eta_inf = w_inf / q_inf;
        Some((w_inf - w) / (eta_inf * dq))
    } else {
        None
    };
    Ok(RatioDiagnostics {
        r_w,
        r_eta,
        dq_rel,
        xi,
    })
}
