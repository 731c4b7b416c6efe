//! Equilibrium thermodynamics of a free-fermion quasiparticle spectrum.
//!
//! For `H = sum_k eps_k (d_k^dag d_k - 1/2)` over all `L` momenta (each
//! positive-`k` energy appears for `k` and `-k`):
//!
//! ```text
//! ln Z = L ln 2 + sum_{k>0} 2 lncosh(beta eps_k / 2)
//! U    = -sum_{k>0} eps_k tanh(beta eps_k / 2)
//! F    = -ln Z / beta
//! S    = ln Z + beta U
//! ```

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::spectrum::QuasiparticleSpectrum;

/// Energies below this are treated as exact zeros.
pub const ZERO_ENERGY: f64 = 1e-30;

/// `ln cosh x`, finite for any finite `x`.
#[inline]
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

#[inline]
fn clean(energy: f64) -> f64 {
    if energy.abs() < ZERO_ENERGY {
        0.0
    } else {
        energy
    }
}

/// Inverse temperature `beta >= 0` (`k_B = 1`). `beta = 0` is the infinite-temperature limit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(InverseTemperature(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// All four equilibrium quantities at one `(spectrum, beta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoState {
    pub log_z: f64,
    pub internal_energy: f64,
    /// `None` at `beta = 0`.
    pub free_energy: Option<f64>,
    pub entropy: f64,
}

pub fn log_partition(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> f64 {
    let b = beta.value();
    let modes: f64 = spec
        .energies()
        .iter()
        .map(|&e| 2.0 * ln_cosh(0.5 * b * clean(e)))
        .sum();
    spec.sites() as f64 * LN_2 + modes
}

pub fn internal_energy(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> f64 {
    let b = beta.value();
    -spec
        .energies()
        .iter()
        .map(|&e| {
            let e = clean(e);
            e * (0.5 * b * e).tanh()
        })
        .sum::<f64>()
}

pub fn free_energy(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> Result<f64> {
    if beta.value() == 0.0 {
        return Err(Error::UndefinedLimit);
    }
    Ok(-log_partition(spec, beta) / beta.value())
}

/// Entropy `L ln 2 + sum_{k>0} [2 lncosh(x) - 2x tanh(x)]`, `x = beta eps / 2`.
///
/// Per mode the bracket plus `2 ln 2` equals `2 ln(1 + q) + 4 |x| q / (1 + q)`
/// with `q = exp(-2|x|)`; that form has no cancellation at large `beta`.
pub fn entropy(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> f64 {
    let b = beta.value();
    spec.energies()
        .iter()
        .map(|&e| {
            let a = (0.5 * b * clean(e)).abs();
            let q = (-2.0 * a).exp();
            2.0 * q.ln_1p() + 4.0 * a * q / (1.0 + q)
        })
        .sum()
}

pub fn thermo_state(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> ThermoState {
    ThermoState {
        log_z: log_partition(spec, beta),
        internal_energy: internal_energy(spec, beta),
        free_energy: free_energy(spec, beta).ok(),
        entropy: entropy(spec, beta),
    }
}
