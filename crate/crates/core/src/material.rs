//! Intrinsic properties of the ferromagnet.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};

/// Intrinsic constants of a ferromagnetic material, internal cgs units.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// g/cm³
    pub density: f64,
    /// Atomic mass in grams.
    pub atomic_mass: f64,
    pub g_factor: f64,
    pub gilbert_alpha: f64,
    /// FMR frequency ω₀, rad/s.
    pub fmr_frequency: f64,
    /// Resistivity in Gaussian units (s).
    pub resistivity: f64,
    pub spins_per_atom: f64,
}

/// JSON form of a material, SI-ish units spelled out in the key names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialDoc {
    pub name: String,
    pub density_g_cm3: f64,
    pub atomic_mass_amu: f64,
    pub g_factor: f64,
    pub gilbert_alpha: f64,
    pub fmr_frequency_rad_s: f64,
    pub resistivity_ohm_cm: f64,
    #[serde(default = "one")]
    pub spins_per_atom: f64,
}

fn one() -> f64 {
    1.0
}

impl MaterialDoc {
    pub fn cobalt() -> Self {
        MaterialDoc {
            name: "cobalt".to_string(),
            density_g_cm3: 8.86,
            atomic_mass_amu: 58.933_194,
            g_factor: 1.0,
            gilbert_alpha: 0.01,
            fmr_frequency_rad_s: 1.0e11,
            resistivity_ohm_cm: 1.0e-7,
            spins_per_atom: 1.0,
        }
    }
}

impl Material {
    pub fn from_doc(doc: &MaterialDoc, constants: &PhysicalConstants) -> Result<Self> {
        let m = Material {
            name: doc.name.clone(),
            density: doc.density_g_cm3,
            atomic_mass: doc.atomic_mass_amu * constants.amu,
            g_factor: doc.g_factor,
            gilbert_alpha: doc.gilbert_alpha,
            fmr_frequency: doc.fmr_frequency_rad_s,
            resistivity: constants.resistivity_from_ohm_cm(doc.resistivity_ohm_cm),
            spins_per_atom: doc.spins_per_atom,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn to_doc(&self, constants: &PhysicalConstants) -> MaterialDoc {
        MaterialDoc {
            name: self.name.clone(),
            density_g_cm3: self.density,
            atomic_mass_amu: self.atomic_mass / constants.amu,
            g_factor: self.g_factor,
            gilbert_alpha: self.gilbert_alpha,
            fmr_frequency_rad_s: self.fmr_frequency,
            resistivity_ohm_cm: constants.resistivity_to_ohm_cm(self.resistivity),
            spins_per_atom: self.spins_per_atom,
        }
    }

    /// Bulk cobalt with the room-temperature α and ω₀.
    pub fn cobalt(constants: &PhysicalConstants) -> Self {
        Material::from_doc(&MaterialDoc::cobalt(), constants).expect("cobalt preset is valid")
    }

    /// Looks up a named preset.
    pub fn preset(name: &str, constants: &PhysicalConstants) -> Option<Self> {
        match name {
            "cobalt" | "Co" => Some(Material::cobalt(constants)),
            _ => None,
        }
    }

    pub fn from_json(
        text: &str,
        constants: &PhysicalConstants,
    ) -> std::result::Result<Self, String> {
        let doc: MaterialDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Material::from_doc(&doc, constants).map_err(|e| e.to_string())
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("density", self.density)?;
        require_positive("atomic_mass", self.atomic_mass)?;
        require_positive("g_factor", self.g_factor)?;
        require_positive("fmr_frequency", self.fmr_frequency)?;
        require_positive("resistivity", self.resistivity)?;
        require_positive("spins_per_atom", self.spins_per_atom)?;
        if !(self.gilbert_alpha > 0.0 && self.gilbert_alpha < 1.0) {
            return Err(Error::invalid(
                "gilbert_alpha",
                format!("must lie in (0, 1), got {}", self.gilbert_alpha),
            ));
        }
        Ok(())
    }

    /// Spin–lattice locking rate Γ_G ≈ αω₀.
    pub fn locking_rate(&self) -> f64 {
        self.gilbert_alpha * self.fmr_frequency
    }

    /// Effective internal field H_eff with gμ_B·H_eff/ħ = ω₀, in gauss.
    pub fn anisotropy_field(&self, constants: &PhysicalConstants) -> f64 {
        constants.hbar * self.fmr_frequency / (self.g_factor * constants.mu_b)
    }
}
