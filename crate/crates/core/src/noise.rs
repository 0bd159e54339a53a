//! Closed-form noise and limit formulas for the needle magnetometer.
//!
//! Every function returns a nonnegative value and vanishes when its driving
//! parameter (temperature, gas density, emissivity, flux noise) is zero.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{PhysicalConstants, HELIUM_AMU};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::material::Material;
use crate::needle::{mean_thermal_speed, NeedleDerived};

/// The needle's surroundings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentConditions {
    /// K
    pub temperature: f64,
    /// Residual gas number density, cm⁻³.
    pub gas_density: f64,
    /// Mass of one gas molecule, g.
    pub gas_mass: f64,
    pub emissivity: f64,
    /// Coherence relaxation rate Γ_rel used by the SQL overlay, 1/s.
    pub relaxation_rate: f64,
}

impl EnvironmentConditions {
    /// Cryogenic vacuum: 0.1 K, 10³ cm⁻³ of helium, black emitter, Γ_rel = 0.
    pub fn cryogenic_reference(constants: &PhysicalConstants) -> Self {
        EnvironmentConditions {
            temperature: 0.1,
            gas_density: 1.0e3,
            gas_mass: HELIUM_AMU * constants.amu,
            emissivity: 1.0,
            relaxation_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("temperature", self.temperature)?;
        require_non_negative("gas_density", self.gas_density)?;
        require_positive("gas_mass", self.gas_mass)?;
        require_non_negative("relaxation_rate", self.relaxation_rate)?;
        if !(0.0..=1.0).contains(&self.emissivity) {
            return Err(Error::invalid(
                "emissivity",
                format!("must lie in [0, 1], got {}", self.emissivity),
            ));
        }
        Ok(())
    }

    pub fn thermal_speed(&self, constants: &PhysicalConstants) -> Result<f64> {
        mean_thermal_speed(self.temperature, self.gas_mass, constants)
    }
}

/// An impulsive perturbation process: mean transverse kick and its rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationKick {
    /// Average transverse angular-momentum kick dL_y, erg·s.
    pub dl: f64,
    /// Γ_p, 1/s.
    pub rate: f64,
}

impl PerturbationKick {
    pub fn new(dl: f64, rate: f64) -> Result<Self> {
        require_non_negative("dl", dl)?;
        require_non_negative("rate", rate)?;
        Ok(PerturbationKick { dl, rate })
    }
}

/// Standard quantum limit for N uncorrelated spins, in gauss.
///
/// ΔΩ = √(Γ_rel/(N t)) once Γ_rel·t > 1; otherwise Γ_rel is replaced by 1/t
/// and ΔΩ = 1/(t√N). The two branches meet at Γ_rel·t = 1.
pub fn sql_limit(
    spin_count: f64,
    t: f64,
    relaxation_rate: f64,
    g: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    require_non_negative("relaxation_rate", relaxation_rate)?;
    if spin_count.is_nan() || spin_count < 1.0 {
        return Err(Error::invalid(
            "spin_count",
            format!("must be >= 1, got {spin_count}"),
        ));
    }
    let d_omega = if relaxation_rate * t > 1.0 {
        (relaxation_rate / (spin_count * t)).sqrt()
    } else {
        1.0 / (t * spin_count.sqrt())
    };
    Ok(constants.field_per_rate(g) * d_omega)
}

/// Single-shot spin-projection phase uncertainty 1/√N.
pub fn spin_projection_noise(spin_count: f64) -> f64 {
    1.0 / spin_count.sqrt()
}

/// Imaginary susceptibility of the linearised LLG response,
/// χ″(ω) = Nħα (g²μ_B²/V) ω/ω₀².
pub fn susceptibility_imag(
    omega: f64,
    needle: &NeedleDerived,
    alpha: f64,
    omega0: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let gmu = needle.g_factor * constants.mu_b;
    needle.total_spin * alpha * gmu * gmu / needle.volume * omega / (omega0 * omega0)
}

/// Fluctuation–dissipation spectral density of transverse spin,
/// (δS_y)² = V/(g²μ_B²) · (2k_BT/ω) · χ″(ω), low-frequency limit.
pub fn fdt_spin_density(
    omega: f64,
    chi_imag: f64,
    temperature: f64,
    needle: &NeedleDerived,
    constants: &PhysicalConstants,
) -> f64 {
    let gmu = needle.g_factor * constants.mu_b;
    needle.volume / (gmu * gmu) * 2.0 * constants.k_b * temperature / omega * chi_imag
}

/// White transverse spin noise δS_y = √(Nħ·2αk_BT/ω₀²), erg·s/√Hz.
pub fn quantum_spin_noise(
    needle: &NeedleDerived,
    temperature: f64,
    alpha: f64,
    omega0: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_non_negative("temperature", temperature)?;
    Ok((needle.total_spin * 2.0 * alpha * constants.k_b * temperature / (omega0 * omega0)).sqrt())
}

/// Band-averaged precession-angle noise Δφ_Q = (δS_y/Nħ)/√t.
pub fn quantum_phase_noise(
    needle: &NeedleDerived,
    material: &Material,
    temperature: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    let ds = quantum_spin_noise(
        needle,
        temperature,
        material.gilbert_alpha,
        material.fmr_frequency,
        constants,
    )?;
    Ok(ds / needle.total_spin / t.sqrt())
}

/// Thermally averaged quantum limit
/// ΔB_Q = (ħ/gμ_B)·√(2αk_BT/(ħω₀²))·(N t³)^{-1/2}.
pub fn quantum_limit(
    needle: &NeedleDerived,
    material: &Material,
    temperature: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    require_non_negative("temperature", temperature)?;
    let w0 = material.fmr_frequency;
    let root = (2.0 * material.gilbert_alpha * constants.k_b * temperature
        / (constants.hbar * w0 * w0))
        .sqrt();
    Ok(constants.field_per_rate(needle.g_factor) * root / (needle.spin_count * t * t * t).sqrt())
}

/// Averaging time beyond which Δφ_Q drops below the single-shot 1/√N,
/// t = 2αk_BT/(ħω₀²).
pub fn projection_crossover_time(
    material: &Material,
    temperature: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let w0 = material.fmr_frequency;
    2.0 * material.gilbert_alpha * constants.k_b * temperature / (constants.hbar * w0 * w0)
}

/// Gas-collision kicks: dL = m v ℓ/16 and Γ = n (rℓ) v/4.
pub fn collision_kick(
    env: &EnvironmentConditions,
    needle: &NeedleDerived,
    constants: &PhysicalConstants,
) -> Result<PerturbationKick> {
    env.validate()?;
    let v = env.thermal_speed(constants)?;
    Ok(PerturbationKick {
        dl: env.gas_mass * v * needle.length / 16.0,
        rate: env.gas_density * needle.radius * needle.length * v / 4.0,
    })
}

/// Random-walk phase spread Δφ_p = (dL/(Nħ))·√(Γ_p t).
pub fn perturbation_phase_noise(kick: &PerturbationKick, total_spin: f64, t: f64) -> Result<f64> {
    require_non_negative("t", t)?;
    require_positive("total_spin", total_spin)?;
    Ok(kick.dl / total_spin * (kick.rate * t).sqrt())
}

/// Field equivalent of a kick random walk, (ħ/gμ_B)·Δφ_p/t.
pub fn perturbation_field_noise(
    kick: &PerturbationKick,
    needle: &NeedleDerived,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    let phi = perturbation_phase_noise(kick, needle.total_spin, t)?;
    Ok(constants.field_per_rate(needle.g_factor) * phi / t)
}

/// Δφ_col = (m/(32Nħ))·√(n r ℓ³ v³ t).
pub fn collision_phase_noise(
    env: &EnvironmentConditions,
    needle: &NeedleDerived,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_non_negative("t", t)?;
    env.validate()?;
    let v = env.thermal_speed(constants)?;
    let l = needle.length;
    Ok(env.gas_mass / (32.0 * needle.total_spin)
        * (env.gas_density * needle.radius * l * l * l * v * v * v * t).sqrt())
}

/// ΔB_col = (ħ/gμ_B)(m/(32Nħ))·√(n r ℓ³ v³/t).
pub fn collision_field_noise(
    env: &EnvironmentConditions,
    needle: &NeedleDerived,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    env.validate()?;
    let v = env.thermal_speed(constants)?;
    let l = needle.length;
    Ok(
        constants.field_per_rate(needle.g_factor) * env.gas_mass / (32.0 * needle.total_spin)
            * (env.gas_density * needle.radius * l * l * l * v * v * v / t).sqrt(),
    )
}

/// Thermal photon emission rate Γ_BB = (4ζ(3)ε/(c²h³))·(k_BT)³·2πrℓ.
pub fn blackbody_rate(
    env: &EnvironmentConditions,
    needle: &NeedleDerived,
    constants: &PhysicalConstants,
) -> Result<f64> {
    env.validate()?;
    let kt = constants.k_b * env.temperature;
    let h = constants.h;
    Ok(
        4.0 * constants.zeta3 * env.emissivity / (constants.c * constants.c * h * h * h)
            * kt
            * kt
            * kt
            * 2.0
            * PI
            * needle.radius
            * needle.length,
    )
}

/// Black-body photons as a kick process, ħ per photon.
pub fn blackbody_kick(
    env: &EnvironmentConditions,
    needle: &NeedleDerived,
    constants: &PhysicalConstants,
) -> Result<PerturbationKick> {
    Ok(PerturbationKick {
        dl: constants.hbar,
        rate: blackbody_rate(env, needle, constants)?,
    })
}

/// Upper bound on Johnson-noise field at the loop from a conducting slab of
/// thickness ℓ: δB = √((π/4)·k_BT/(c²ρℓ)), G/√Hz.
pub fn thermal_current_noise(
    material: &Material,
    needle: &NeedleDerived,
    temperature: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_non_negative("temperature", temperature)?;
    let c2 = constants.c * constants.c;
    Ok(
        (PI / 4.0 * constants.k_b * temperature / (c2 * material.resistivity * needle.length))
            .sqrt(),
    )
}

/// Largest field gradient that keeps a free needle within r of its start
/// during t: |∂B_x/∂x| < 2 r m_a/(μ_B t²), G/cm.
pub fn gradient_limit(
    needle: &NeedleDerived,
    material: &Material,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("t", t)?;
    Ok(2.0 * needle.radius * material.atomic_mass / (constants.mu_b * t * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::needle::{derive_needle, NeedleGeometry};
    use rand::{Rng, SeedableRng};

    const C: PhysicalConstants = PhysicalConstants::CODATA;

    fn setup() -> (NeedleDerived, Material, EnvironmentConditions) {
        let m = Material::cobalt(&C);
        let n = derive_needle(&NeedleGeometry::reference(), &m, &C).unwrap();
        (n, m, EnvironmentConditions::cryogenic_reference(&C))
    }

    fn slope(f: impl Fn(f64) -> f64, x1: f64, x2: f64) -> f64 {
        (f(x2).ln() - f(x1).ln()) / (x2.ln() - x1.ln())
    }

    #[test]
    fn sql_reference_value() {
        let v = sql_limit(3e12, 1.0, 0.0, 1.0, &C).unwrap();
        assert!((v / 7e-14 - 1.0).abs() < 0.2, "{v:e}");
        let v10 = sql_limit(3e12, 10.0, 0.0, 1.0, &C).unwrap();
        assert!((v / v10 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn sql_branches_meet() {
        let t = 3.7;
        let at = sql_limit(1e10, t, 1.0 / t, 1.0, &C).unwrap();
        let above = sql_limit(1e10, t, (1.0 / t) * (1.0 + 1e-12), 1.0, &C).unwrap();
        assert!(((at - above) / at).abs() < 1e-11);
        let relaxing = sql_limit(1e10, 100.0, 5.0, 1.0, &C).unwrap();
        let expect = C.field_per_rate(1.0) * (5.0f64 / (1e10 * 100.0)).sqrt();
        assert!((relaxing / expect - 1.0).abs() < 1e-14);
        assert!(sql_limit(1e10, 0.0, 0.0, 1.0, &C).is_err());
    }

    #[test]
    fn spin_noise_examples() {
        let (n, _, _) = setup();
        assert_eq!(quantum_spin_noise(&n, 0.0, 0.01, 1e11, &C).unwrap(), 0.0);
        let a = quantum_spin_noise(&n, 0.1, 0.01, 1e11, &C).unwrap();
        let b = quantum_spin_noise(&n, 0.1, 0.04, 1e11, &C).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
        // 2αk_BT/ω₀² = 2·0.01·1.380649e-16·0.1/1e22
        let per_spin = a * a / n.total_spin;
        assert!((per_spin / 2.761298e-41 - 1.0).abs() < 1e-6, "{per_spin:e}");
    }

    #[test]
    fn fdt_chain_cancels_on_random_draws() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut doc = crate::material::MaterialDoc::cobalt();
            doc.g_factor = rng.random_range(0.5..2.5);
            let mat = Material::from_doc(&doc, &C).unwrap();
            let geo =
                NeedleGeometry::new(rng.random_range(1e-4..1e-2), rng.random_range(1e-5..1e-4))
                    .unwrap();
            let n = derive_needle(&geo, &mat, &C).unwrap();
            let alpha = rng.random_range(1e-4..0.5);
            let w0 = 10f64.powf(rng.random_range(9.0..12.0));
            let w = 10f64.powf(rng.random_range(-2.0..6.0));
            let t = rng.random_range(1e-3..10.0);
            let chi = susceptibility_imag(w, &n, alpha, w0, &C);
            let via_fdt = fdt_spin_density(w, chi, t, &n, &C);
            let direct = quantum_spin_noise(&n, t, alpha, w0, &C).unwrap().powi(2);
            assert!(((via_fdt - direct) / direct).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_limit_reference() {
        let (n, m, _) = setup();
        let q = quantum_limit(&n, &m, 0.1, 1.0, &C).unwrap();
        assert!((0.5e-20..=2e-20).contains(&q), "{q:e}");
        assert_eq!(quantum_limit(&n, &m, 0.0, 1.0, &C).unwrap(), 0.0);
        assert!(quantum_limit(&n, &m, 0.1, 0.0, &C).is_err());
        // Δφ_Q·(ħ/gμ_B)/t reproduces ΔB_Q
        for t in [0.01, 1.0, 300.0] {
            let phi = quantum_phase_noise(&n, &m, 0.1, t, &C).unwrap();
            let b = quantum_limit(&n, &m, 0.1, t, &C).unwrap();
            assert!((phi * C.field_per_rate(1.0) / t / b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sub_projection_averaging() {
        let (n, m, _) = setup();
        let tx = projection_crossover_time(&m, 0.1, &C);
        assert!(tx > 0.0 && tx < 1.0);
        let at = quantum_phase_noise(&n, &m, 0.1, tx, &C).unwrap();
        assert!((at / spin_projection_noise(n.spin_count) - 1.0).abs() < 1e-9);
        let one = quantum_phase_noise(&n, &m, 0.1, 1.0, &C).unwrap();
        assert!(one < spin_projection_noise(n.spin_count));
    }

    #[test]
    fn collision_kick_reference() {
        let (n, _, env) = setup();
        let k = collision_kick(&env, &n, &C).unwrap();
        let ratio = k.dl / C.hbar;
        assert!((500.0..=2000.0).contains(&ratio), "{ratio}");
        assert!((ratio / 905.96 - 1.0).abs() < 1e-4);
        // n r ℓ v/4 with v = 2299.94 cm/s
        assert!((k.rate / 0.057498 - 1.0).abs() < 1e-4, "{}", k.rate);
        let empty = EnvironmentConditions {
            gas_density: 0.0,
            ..env
        };
        assert_eq!(collision_kick(&empty, &n, &C).unwrap().rate, 0.0);
    }

    // Faithful version of the "about once a second" claim at n = 10³ cm⁻³.
    // The formula gives 0.0575 s⁻¹, a factor 17 below; see README notes.
    #[test]
    #[ignore = "n A v/4 at n = 1e3 is 0.0575 s^-1, outside factor 15 of 1 s^-1"]
    fn collision_rate_about_once_a_second() {
        let (n, _, env) = setup();
        let k = collision_kick(&env, &n, &C).unwrap();
        assert!(k.rate >= 1.0 / 15.0 && k.rate <= 15.0, "{}", k.rate);
    }

    #[test]
    fn perturbation_noise_examples() {
        let (n, _, env) = setup();
        let k = PerturbationKick::new(1e3 * C.hbar, 2.0).unwrap();
        assert_eq!(
            perturbation_phase_noise(&k, n.total_spin, 0.0).unwrap(),
            0.0
        );
        let a = perturbation_phase_noise(&k, n.total_spin, 3.0).unwrap();
        let b = perturbation_phase_noise(&k, n.total_spin, 12.0).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
        let col = collision_kick(&env, &n, &C).unwrap();
        let p = perturbation_phase_noise(&col, n.total_spin, 1.0).unwrap();
        assert!(p > 1e-11 && p < 1e-9, "{p:e}");
        assert!((p / 7.6377e-11 - 1.0).abs() < 1e-3);
        let direct = collision_phase_noise(&env, &n, 1.0, &C).unwrap();
        assert!((direct / p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collision_field_noise_examples() {
        let (n, _, env) = setup();
        let col = collision_field_noise(&env, &n, 1.0, &C).unwrap();
        assert!((col / 8.685e-18 - 1.0).abs() < 1e-3, "{col:e}");
        let pickup = crate::pickup::PickupLoop::magic_angle_default(n.length);
        let phi = crate::pickup::dipole_flux(n.magnetic_moment, &pickup, n.length).unwrap();
        let det = crate::pickup::detection_limit(
            crate::pickup::angle_resolution(&pickup, phi).unwrap(),
            1.0,
            1.0,
            &C,
        )
        .unwrap();
        assert!(col < det);
        let empty = EnvironmentConditions {
            gas_density: 0.0,
            ..env
        };
        assert_eq!(collision_field_noise(&empty, &n, 1.0, &C).unwrap(), 0.0);
        assert!(collision_field_noise(&env, &n, 0.0, &C).is_err());
        let k = collision_kick(&env, &n, &C).unwrap();
        let via_kick = perturbation_field_noise(&k, &n, 1.0, &C).unwrap();
        assert!((via_kick / col - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collision_noise_scales_as_n_to_minus_third_at_fixed_aspect() {
        let (_, m, env) = setup();
        let n1 = derive_needle(&NeedleGeometry::new(1e-3, 1e-4).unwrap(), &m, &C).unwrap();
        let n8 = derive_needle(&NeedleGeometry::new(2e-3, 2e-4).unwrap(), &m, &C).unwrap();
        assert!((n8.spin_count / n1.spin_count - 8.0).abs() < 1e-9);
        let a = collision_field_noise(&env, &n1, 1.0, &C).unwrap();
        let b = collision_field_noise(&env, &n8, 1.0, &C).unwrap();
        let exponent = (b / a).ln() / 8f64.ln();
        assert!((exponent + 1.0 / 3.0).abs() < 1e-9, "{exponent}");
    }

    #[test]
    fn blackbody_examples() {
        let (n, _, env) = setup();
        let r = blackbody_rate(&env, &n, &C).unwrap();
        assert!((10.0..=300.0).contains(&r), "{r}");
        assert!((r / 30.409 - 1.0).abs() < 1e-3);
        let cold = EnvironmentConditions {
            temperature: 0.0,
            ..env
        };
        assert_eq!(blackbody_rate(&cold, &n, &C).unwrap(), 0.0);
        let hot = EnvironmentConditions {
            temperature: 0.2,
            ..env
        };
        assert!((blackbody_rate(&hot, &n, &C).unwrap() / r - 8.0).abs() < 1e-12);
        let dark = EnvironmentConditions {
            emissivity: 0.0,
            ..env
        };
        assert_eq!(blackbody_kick(&dark, &n, &C).unwrap().rate, 0.0);
        assert_eq!(blackbody_kick(&env, &n, &C).unwrap().dl, C.hbar);
    }

    #[test]
    fn thermal_current_examples() {
        let (n, m, _) = setup();
        let db = thermal_current_noise(&m, &n, 0.1, &C).unwrap();
        assert!(db > 0.5e-8 && db < 2e-8, "{db:e}");
        let flux = db * crate::pickup::PickupLoop::magic_angle_default(n.length).area();
        assert!(flux < 1e-13, "{flux:e}");
        assert_eq!(thermal_current_noise(&m, &n, 0.0, &C).unwrap(), 0.0);
        let mut resistive = m.clone();
        resistive.resistivity *= 100.0;
        let db100 = thermal_current_noise(&resistive, &n, 0.1, &C).unwrap();
        assert!((db / db100 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_examples() {
        let (n, m, _) = setup();
        let g1 = gradient_limit(&n, &m, 1.0, &C).unwrap();
        assert!((g1 / 2e-6 - 1.0).abs() < 0.3, "{g1:e}");
        let g2 = gradient_limit(&n, &m, 2.0, &C).unwrap();
        assert!((g1 / g2 - 4.0).abs() < 1e-12);
        let wide = derive_needle(&NeedleGeometry::new(1e-3, 2e-4).unwrap(), &m, &C).unwrap();
        assert!((gradient_limit(&wide, &m, 1.0, &C).unwrap() / g1 - 2.0).abs() < 1e-12);
        assert!(gradient_limit(&n, &m, 0.0, &C).is_err());
    }

    #[test]
    fn power_law_audit() {
        let (n, m, env) = setup();
        let det = |t: f64| crate::pickup::detection_limit(1e-9, 1.0, t, &C).unwrap();
        let q = |t: f64| quantum_limit(&n, &m, 0.1, t, &C).unwrap();
        let sql = |t: f64| sql_limit(n.spin_count, t, 0.0, 1.0, &C).unwrap();
        let col_t = |t: f64| collision_field_noise(&env, &n, t, &C).unwrap();
        let col_n = |dens: f64| {
            let e = EnvironmentConditions {
                gas_density: dens,
                ..env
            };
            collision_field_noise(&e, &n, 1.0, &C).unwrap()
        };
        for (name, s, expect) in [
            ("det", slope(det, 0.03, 70.0), -1.5),
            ("quantum", slope(q, 0.03, 70.0), -1.5),
            ("sql", slope(sql, 0.03, 70.0), -1.0),
            ("col(t)", slope(col_t, 0.03, 70.0), -0.5),
            ("col(n)", slope(col_n, 10.0, 1e5), 0.5),
        ] {
            assert!((s - expect).abs() < 1e-6, "{name}: {s}");
        }
    }

    #[test]
    fn environment_validation() {
        let env = EnvironmentConditions::cryogenic_reference(&C);
        assert!(env.validate().is_ok());
        assert!(EnvironmentConditions {
            emissivity: 1.5,
            ..env
        }
        .validate()
        .is_err());
        assert!(EnvironmentConditions {
            temperature: -1.0,
            ..env
        }
        .validate()
        .is_err());
        assert!(EnvironmentConditions {
            gas_density: -1.0,
            ..env
        }
        .validate()
        .is_err());
    }
}
