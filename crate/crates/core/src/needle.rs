//! Needle geometry and every static quantity derived from it.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::error::{require_non_negative, require_positive, Result};
use crate::material::Material;

/// Aspect ratios outside this band may not be single-domain.
pub const SINGLE_DOMAIN_ASPECT: (f64, f64) = (5.0, 50.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeedleGeometry {
    #[serde(rename = "length_cm")]
    pub length: f64,
    #[serde(rename = "radius_cm")]
    pub radius: f64,
}

impl NeedleGeometry {
    pub fn new(length: f64, radius: f64) -> Result<Self> {
        let g = NeedleGeometry { length, radius };
        g.validate()?;
        Ok(g)
    }

    /// The 10 μm × 1 μm cobalt needle.
    pub fn reference() -> Self {
        NeedleGeometry {
            length: 10.0e-4,
            radius: 1.0e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("length", self.length)?;
        require_positive("radius", self.radius)?;
        Ok(())
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.length / self.radius
    }

    /// A warning when the needle shape makes a single domain doubtful.
    pub fn single_domain_warning(&self) -> Option<String> {
        let ar = self.aspect_ratio();
        if ar < 1.0 {
            Some(format!(
                "aspect ratio {ar:.3} < 1: the body is not a needle"
            ))
        } else if ar < SINGLE_DOMAIN_ASPECT.0 || ar > SINGLE_DOMAIN_ASPECT.1 {
            Some(format!(
                "aspect ratio {ar:.3} outside [{}, {}]: the needle may be multi-domain",
                SINGLE_DOMAIN_ASPECT.0, SINGLE_DOMAIN_ASPECT.1
            ))
        } else {
            None
        }
    }
}

/// Geometry-derived quantities, all cgs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeedleDerived {
    pub length: f64,
    pub radius: f64,
    pub volume: f64,
    pub mass: f64,
    /// Transverse moment of inertia Mℓ²/12.
    pub moment_of_inertia: f64,
    pub spin_count: f64,
    /// Nħ
    pub total_spin: f64,
    /// N·g·μ_B
    pub magnetic_moment: f64,
    pub g_factor: f64,
    /// γ = gμ_B/ħ
    pub gyromagnetic_ratio: f64,
    pub omega_star: f64,
    pub b_star: f64,
    /// Γ_G = αω₀
    pub gamma_g: f64,
}

/// Derives every static needle quantity from geometry and material.
pub fn derive_needle(
    geometry: &NeedleGeometry,
    material: &Material,
    constants: &PhysicalConstants,
) -> Result<NeedleDerived> {
    geometry.validate()?;
    material.validate()?;
    if let Some(w) = geometry.single_domain_warning() {
        log::debug!("{w}");
    }

    let volume = PI * geometry.radius * geometry.radius * geometry.length;
    let mass = material.density * volume;
    let moment_of_inertia = mass * geometry.length * geometry.length / 12.0;
    let spin_count = material.spins_per_atom * mass / material.atomic_mass;
    let total_spin = spin_count * constants.hbar;
    let (omega_star, b_star) =
        thresholds(total_spin, moment_of_inertia, material.g_factor, constants);

    Ok(NeedleDerived {
        length: geometry.length,
        radius: geometry.radius,
        volume,
        mass,
        moment_of_inertia,
        spin_count,
        total_spin,
        magnetic_moment: spin_count * material.g_factor * constants.mu_b,
        g_factor: material.g_factor,
        gyromagnetic_ratio: material.g_factor * constants.mu_b / constants.hbar,
        omega_star,
        b_star,
        gamma_g: material.locking_rate(),
    })
}

fn thresholds(total_spin: f64, inertia: f64, g: f64, constants: &PhysicalConstants) -> (f64, f64) {
    let omega_star = total_spin / inertia;
    (
        omega_star,
        constants.hbar * omega_star / (g * constants.mu_b),
    )
}

/// Gyroscopic thresholds (Ω*, B*): Ω* = Nħ/I and B* = ħΩ*/(gμ_B).
pub fn critical_thresholds(derived: &NeedleDerived, constants: &PhysicalConstants) -> (f64, f64) {
    thresholds(
        derived.total_spin,
        derived.moment_of_inertia,
        derived.g_factor,
        constants,
    )
}

/// Ω* from the atomic form 12ħ·(spins per atom)/(m_a ℓ²).
pub fn omega_star_atomic(length: f64, material: &Material, constants: &PhysicalConstants) -> f64 {
    12.0 * constants.hbar * material.spins_per_atom / (material.atomic_mass * length * length)
}

/// Mean Maxwell–Boltzmann speed √(8k_BT/(πm)), cm/s.
pub fn mean_thermal_speed(
    temperature: f64,
    gas_mass: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_non_negative("temperature", temperature)?;
    require_positive("gas_mass", gas_mass)?;
    Ok((8.0 * constants.k_b * temperature / (PI * gas_mass)).sqrt())
}
