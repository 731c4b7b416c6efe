use thiserror::Error;

/// Errors produced by the spectrum, thermodynamics, cycle and sweep layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Both components of the Bloch vector vanish, so the Bogoliubov angle is undefined.
    #[error("degenerate mode at k = {k}: both Bloch-vector components vanish")]
    DegenerateMode { k: f64 },

    #[error("gapless configuration: quasiparticle energy {energy:e} at k = {k} is below the floor {floor:e}")]
    GaplessConfiguration { k: f64, energy: f64, floor: f64 },

    #[error("free energy is undefined at beta = 0")]
    UndefinedLimit,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("insufficient engine-valid data: {valid} valid points, at least {required} required")]
    InsufficientData { valid: usize, required: usize },

    #[error("oracle refuses L = {sites}: cap is {cap}")]
    OracleCap { sites: usize, cap: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
