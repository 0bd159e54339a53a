//! Physical constants in Gaussian-cgs units and the few SI conversions the
//! config boundary needs.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fundamental constants, Gaussian-cgs (CODATA 2018 values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, erg·s.
    pub hbar: f64,
    /// Bohr magneton, erg/G.
    pub mu_b: f64,
    /// Boltzmann constant, erg/K.
    pub k_b: f64,
    /// Speed of light, cm/s.
    pub c: f64,
    /// Planck constant, erg·s.
    pub h: f64,
    /// Atomic mass unit, g.
    pub amu: f64,
    /// Riemann ζ(3).
    pub zeta3: f64,
    /// One electron-volt in erg.
    pub ev: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-27,
        mu_b: 9.274_010_078_3e-21,
        k_b: 1.380_649e-16,
        c: 2.997_924_58e10,
        h: 6.626_070_15e-27,
        amu: 1.660_539_066_60e-24,
        zeta3: 1.202_056_903_159_594_2,
        ev: 1.602_176_634e-12,
    };

    /// Bohr magneton over ħ, rad·s⁻¹·G⁻¹.
    pub fn mu_b_over_hbar(&self) -> f64 {
        self.mu_b / self.hbar
    }

    /// Bohr magneton in eV/G.
    pub fn mu_b_ev_per_gauss(&self) -> f64 {
        self.mu_b / self.ev
    }

    /// Field-per-frequency conversion ħ/(gμ_B), G·s.
    pub fn field_per_rate(&self, g: f64) -> f64 {
        self.hbar / (g * self.mu_b)
    }

    /// 1 Ω·cm expressed in Gaussian seconds: 1/(c²·10⁻⁹).
    pub fn ohm_cm_in_seconds(&self) -> f64 {
        1.0e9 / (self.c * self.c)
    }

    pub fn resistivity_from_ohm_cm(&self, ohm_cm: f64) -> f64 {
        ohm_cm * self.ohm_cm_in_seconds()
    }

    pub fn resistivity_to_ohm_cm(&self, seconds: f64) -> f64 {
        seconds / self.ohm_cm_in_seconds()
    }

    pub fn is_consistent(&self) -> bool {
        let all_positive = [
            self.hbar, self.mu_b, self.k_b, self.c, self.h, self.amu, self.zeta3, self.ev,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0);
        all_positive && ((self.h - 2.0 * PI * self.hbar) / self.h).abs() < 5e-7
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Micrometres to centimetres.
pub const UM: f64 = 1.0e-4;

/// Mass of a ⁴He atom, amu.
pub const HELIUM_AMU: f64 = 4.002_602;

/// The magic angle arccos(1/√3), radians.
pub fn magic_angle() -> f64 {
    (1.0f64 / 3.0f64.sqrt()).acos()
}
