//! SQUID pickup-loop readout of the needle's precessing dipole.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{magic_angle, PhysicalConstants};
use crate::error::{require_non_negative, require_positive, Error, Result};

/// Flux noise of a low-temperature dc SQUID, G·cm²/√Hz.
pub const DEFAULT_FLUX_SENSITIVITY: f64 = 1.0e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickupLoop {
    /// Loop radius, cm.
    pub radius: f64,
    /// Distance from the needle tip to the loop plane, cm.
    pub standoff: f64,
    /// δΦ, G·cm²/√Hz.
    pub flux_sensitivity: f64,
}

impl PickupLoop {
    pub fn new(radius: f64, standoff: f64, flux_sensitivity: f64) -> Result<Self> {
        let l = PickupLoop {
            radius,
            standoff,
            flux_sensitivity,
        };
        l.validate()?;
        Ok(l)
    }

    /// Loop on the magic-angle cone around the dipole at slant distance ℓ:
    /// radius ℓ·sin θ_m, loop plane ℓ·cos θ_m from the needle centre.
    pub fn magic_angle_default(needle_length: f64) -> Self {
        let theta = magic_angle();
        PickupLoop {
            radius: needle_length * theta.sin(),
            standoff: needle_length * (theta.cos() - 0.5),
            flux_sensitivity: DEFAULT_FLUX_SENSITIVITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("pickup.radius", self.radius)?;
        require_positive("pickup.standoff", self.standoff)?;
        require_positive("pickup.flux_sensitivity", self.flux_sensitivity)?;
        Ok(())
    }

    /// Dipole-to-loop-plane distance for a dipole at the needle centre.
    pub fn dipole_distance(&self, needle_length: f64) -> f64 {
        self.standoff + 0.5 * needle_length
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// a²/(a² + d²)^{3/2}: on-axis flux per unit 2πm through a loop of radius `a`
/// at distance `d` from a point dipole.
pub fn flux_capture(a: f64, d: f64) -> f64 {
    let s = a * a + d * d;
    a * a / (s * s.sqrt())
}

/// On-axis point-dipole flux Φ = 2πm a²/(a² + d²)^{3/2}, G·cm².
pub fn dipole_flux(moment: f64, pickup: &PickupLoop, needle_length: f64) -> Result<f64> {
    require_non_negative("moment", moment)?;
    require_positive("needle_length", needle_length)?;
    pickup.validate()?;
    let d = pickup.dipole_distance(needle_length);
    Ok(2.0 * PI * moment * flux_capture(pickup.radius, d))
}

/// Angular resolution δφ_det = δΦ/Φ, rad/√Hz.
pub fn angle_resolution(pickup: &PickupLoop, flux_amplitude: f64) -> Result<f64> {
    if !(flux_amplitude.is_finite() && flux_amplitude > 0.0) {
        return Err(Error::invalid(
            "flux_amplitude",
            format!("must be > 0, got {flux_amplitude}"),
        ));
    }
    Ok(pickup.flux_sensitivity / flux_amplitude)
}

/// Detection-limited field uncertainty ΔB_det = (ħ/gμ_B)·δφ·t^{-3/2}.
pub fn detection_limit(
    delta_phi: f64,
    g: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    require_non_negative("delta_phi", delta_phi)?;
    Ok(constants.field_per_rate(g) * delta_phi * t.powf(-1.5))
}
