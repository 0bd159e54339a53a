//! Bundled inputs for a complete needle configuration.

use crate::constants::PhysicalConstants;
use crate::dynamics::Vec3;
use crate::error::Result;
use crate::material::Material;
use crate::needle::{derive_needle, NeedleDerived, NeedleGeometry};
use crate::noise::EnvironmentConditions;
use crate::pickup::{angle_resolution, dipole_flux, PickupLoop};

/// Everything needed to evaluate the needle model.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub constants: PhysicalConstants,
    pub material: Material,
    pub geometry: NeedleGeometry,
    pub environment: EnvironmentConditions,
    pub pickup: PickupLoop,
    /// Applied field, G.
    pub field: Vec3,
}

impl Scenario {
    /// 10 μm × 1 μm cobalt needle in 0.1 K helium at 10³ cm⁻³, magic-angle
    /// pickup loop with δΦ = 10⁻¹³ G·cm²/√Hz, B = 10⁻⁷ G along ẑ.
    pub fn cobalt_reference() -> Self {
        let constants = PhysicalConstants::CODATA;
        let geometry = NeedleGeometry::reference();
        Scenario {
            material: Material::cobalt(&constants),
            environment: EnvironmentConditions::cryogenic_reference(&constants),
            pickup: PickupLoop::magic_angle_default(geometry.length),
            field: Vec3::new(0.0, 0.0, 1.0e-7),
            geometry,
            constants,
        }
    }

    pub fn needle(&self) -> Result<NeedleDerived> {
        derive_needle(&self.geometry, &self.material, &self.constants)
    }

    pub fn validate(&self) -> Result<()> {
        self.needle()?;
        self.environment.validate()?;
        self.pickup.validate()
    }

    /// δφ_det from the dipole flux through the configured loop, rad/√Hz.
    pub fn angle_resolution(&self) -> Result<f64> {
        let needle = self.needle()?;
        let flux = dipole_flux(needle.magnetic_moment, &self.pickup, needle.length)?;
        angle_resolution(&self.pickup, flux)
    }
}
