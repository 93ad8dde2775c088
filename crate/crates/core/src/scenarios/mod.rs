//! Ready-made games: the small matrix dilemmas, a congestion (foraging)
//! game, multi-band power allocation, energy-efficient power control,
//! Cournot competition, a linear-system game, two-user beamforming, and
//! collaborative detection.

mod beamforming;
mod channel;
mod ctd;
mod ducks;
mod energy;
mod matrix;
mod quadratic;

pub use beamforming::{beamforming_game, BeamformingInstance};
pub use channel::{
    bs_game, mac_potential, pa_game, spectral_radius_condition, waterfilling_best_response, InterferenceChannel,
    SpectralReport,
};
pub use ctd::{ctd_value, CtdNetwork};
pub use ducks::{duck_foraging, CongestionGame};
pub use energy::{energy_efficiency_game, Efficiency, EnergyParams};
pub(crate) use energy::maximize_1d;
pub use matrix::{aumann_coordination, cr_dilemma, matching_pennies, sensor_dilemma};
pub use quadratic::{cournot_duopoly, linear_system_game};
