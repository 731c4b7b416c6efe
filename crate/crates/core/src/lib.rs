//! Long-range Kitaev chain as the working medium of quantum Otto and Stirling
//! heat engines.
//!
//! * [`spectrum`]: momentum grid, pairing function, quasiparticle energies,
//!   Bogoliubov angle and winding number.
//! * [`thermo`]: partition function, internal energy, free energy, entropy.
//! * [`cycles`]: Otto and Stirling cycles and the long-range/short-range ratios.
//! * [`sweep`]: deterministic grid sweeps, maxima, enhancement regions and
//!   the optimal operating condition.
//! * [`oracle`]: small-chain ground truth (real-space BdG diagonalisation and
//!   many-body enumeration) used for validation.

pub mod cycles;
pub mod error;
pub mod oracle;
pub mod spectrum;
pub mod sweep;
pub mod thermo;

pub use cycles::{
    carnot_efficiency, otto_cycle, ratio_diagnostics, stirling_cycle, BathPair, CycleKind,
    CycleResult, CycleSpec, OttoResult, RatioDiagnostics, StirlingResult,
};
pub use error::{Error, Result};
pub use spectrum::{
    bogoliubov_angle, build_spectrum, min_gap, momentum_grid, pairing_function,
    quasiparticle_energy, winding_number, ChainParams, InteractionRange, QuasiparticleSpectrum,
    WindingResult,
};
pub use sweep::{
    enhancement_regions, max_ratio_surface, max_ratios, optimal_condition, sweep_mu, Executor,
    MaxRatioPoint, MaxRatioSurface, OptimalCondition, RegionMap, SweepConfig, SweepStats,
    SweepTable,
};
pub use thermo::{
    entropy, free_energy, internal_energy, log_partition, thermo_state, InverseTemperature,
    ThermoState,
};
