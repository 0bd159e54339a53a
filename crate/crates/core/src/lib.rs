//! Simulation of a precessing single-domain ferromagnetic needle used as a
//! magnetometer: needle statics, spin–lattice dynamics, SQUID readout, the
//! closed-form noise budget and a Monte Carlo model of environmental kicks.
//!
//! All internal quantities are Gaussian-cgs (G, erg, cm, s).

pub mod budget;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod material;
pub mod montecarlo;
pub mod needle;
pub mod noise;
pub mod pickup;
pub mod presets;

pub use budget::{assemble_budget, BudgetOptions, NoiseBudget, Source};
pub use constants::PhysicalConstants;
pub use dynamics::{
    classify_regime, effective_precession, integrate_full, llg_rotor_derivative, DynamicState,
    DynamicsConfig, Regime, Trajectory, Vec3,
};
pub use error::{Error, Result};
pub use material::{Material, MaterialDoc};
pub use needle::{
    critical_thresholds, derive_needle, mean_thermal_speed, NeedleDerived, NeedleGeometry,
};
pub use noise::{EnvironmentConditions, PerturbationKick};
pub use pickup::PickupLoop;
pub use presets::Scenario;
