//! JSON run configuration. Unit suffixes live in the key names.

use gyroneedle_core::constants::HELIUM_AMU;
use gyroneedle_core::dynamics::DEFAULT_MAX_STEPS;
use gyroneedle_core::{
    EnvironmentConditions, Material, MaterialDoc, NeedleGeometry, PhysicalConstants, PickupLoop,
    Scenario, Vec3,
};
use serde::{Deserialize, Deserializer, Serialize};
use std::path::Path;

use crate::error::CliError;

pub const PRESETS: &[&str] = &["cobalt-reference"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialSpec,
    pub geometry: NeedleGeometry,
    pub environment: EnvironmentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pickup: Option<PickupSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

/// A named material preset or a full material document.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Preset(String),
    Custom(MaterialDoc),
}

impl<'de> Deserialize<'de> for MaterialSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(MaterialSpec::Preset(s)),
            v @ serde_json::Value::Object(_) => serde_json::from_value(v)
                .map(MaterialSpec::Custom)
                .map_err(|e| D::Error::custom(format!("in `material`: {e}"))),
            other => Err(D::Error::custom(format!(
                "`material` must be a preset name or an object, got {other}"
            ))),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    pub temperature_K: f64,
    pub gas_density_cm3: f64,
    #[serde(default = "helium")]
    pub gas_mass_amu: f64,
    #[serde(default = "one")]
    pub emissivity: f64,
    #[serde(default)]
    pub relaxation_rate_s: f64,
    #[serde(default)]
    pub field_G: [f64; 3],
}

fn helium() -> f64 {
    HELIUM_AMU
}

fn one() -> f64 {
    1.0
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickupSection {
    pub radius_cm: f64,
    pub standoff_cm: f64,
    #[serde(default = "default_flux_sensitivity")]
    pub flux_sensitivity_G_cm2_rtHz: f64,
}

fn default_flux_sensitivity() -> f64 {
    gyroneedle_core::pickup::DEFAULT_FLUX_SENSITIVITY
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StartKind {
    /// Axis along x̂, lattice at rest, spin tilted towards ŷ.
    #[default]
    Misaligned,
    /// Spin on the axis, lattice co-rotating with the Larmor precession.
    Locked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default)]
    pub start: StartKind,
    #[serde(default = "default_misalignment")]
    pub misalignment_rad: f64,
    /// Needle direction for a locked start.
    #[serde(default = "default_axis")]
    pub axis: [f64; 3],
    /// Overrides the material's Gilbert α.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: f64,
    #[serde(default = "default_decimation")]
    pub decimation: usize,
    #[serde(default = "default_lock_tolerance")]
    pub lock_tolerance: f64,
}

fn default_duration() -> f64 {
    1e-8
}
fn default_misalignment() -> f64 {
    0.1
}
fn default_axis() -> [f64; 3] {
    [1.0, 0.0, 1.0]
}
fn default_max_steps() -> f64 {
    DEFAULT_MAX_STEPS
}
fn default_decimation() -> usize {
    100
}
fn default_lock_tolerance() -> f64 {
    1e-3
}

impl Default for DynamicsSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all dynamics keys have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KickSpec {
    /// Gas molecules at the thermal speed striking the rod.
    #[default]
    CollisionGeometry,
    /// ±dl kicks with random signs, dl in units of ħ.
    Fixed { dl_hbar: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    #[serde(default)]
    pub kick: KickSpec,
    /// Kick rate; the gas-collision rate when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_s: Option<f64>,
    #[serde(default = "default_durations")]
    pub durations_s: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_durations() -> Vec<f64> {
    vec![1.0, 10.0, 100.0, 1000.0]
}
fn default_trials() -> u64 {
    10_000
}

impl Default for McSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all mc keys have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    #[serde(default = "default_t_min")]
    pub t_min_s: f64,
    #[serde(default = "default_t_max")]
    pub t_max_s: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub include_thermal_current: bool,
}

fn default_t_min() -> f64 {
    1e-2
}
fn default_t_max() -> f64 {
    1e3
}
fn default_points() -> usize {
    200
}

impl Default for BudgetSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all budget keys have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "cobalt-reference" => Some(Self::cobalt_reference()),
            _ => None,
        }
    }

    /// Cobalt needle, 10 μm × 1 μm, in 0.1 K helium at 10³ cm⁻³, B = 10⁻⁷ G.
    pub fn cobalt_reference() -> Self {
        let geometry = NeedleGeometry::reference();
        RunConfig {
            material: MaterialSpec::Preset("cobalt".into()),
            geometry,
            environment: EnvironmentSection {
                temperature_K: 0.1,
                gas_density_cm3: 1e3,
                gas_mass_amu: HELIUM_AMU,
                emissivity: 1.0,
                relaxation_rate_s: 0.0,
                field_G: [0.0, 0.0, 1e-7],
            },
            pickup: None,
            dynamics: None,
            mc: None,
            budget: None,
            output: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        // An empty file reads as an empty object so the diagnostic names the
        // first missing key.
        let text = if text.trim().is_empty() { "{}" } else { text };
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Every optional section filled with its defaults.
    pub fn with_defaults(&self, constants: &PhysicalConstants) -> Result<Self, CliError> {
        let mut c = self.clone();
        if c.pickup.is_none() {
            let p = PickupLoop::magic_angle_default(c.geometry.length);
            c.pickup = Some(PickupSection {
                radius_cm: p.radius,
                standoff_cm: p.standoff,
                flux_sensitivity_G_cm2_rtHz: p.flux_sensitivity,
            });
        }
        c.material = MaterialSpec::Custom(self.material(constants)?.to_doc(constants));
        c.dynamics.get_or_insert_with(DynamicsSection::default);
        c.mc.get_or_insert_with(McSection::default);
        c.budget.get_or_insert_with(BudgetSection::default);
        c.output.get_or_insert_with(OutputSection::default);
        Ok(c)
    }

    pub fn material(&self, constants: &PhysicalConstants) -> Result<Material, CliError> {
        match &self.material {
            MaterialSpec::Preset(name) => Material::preset(name, constants)
                .ok_or_else(|| CliError::Config(format!("unknown material preset `{name}`"))),
            MaterialSpec::Custom(doc) => Ok(Material::from_doc(doc, constants)?),
        }
    }

    pub fn field(&self) -> Vec3 {
        Vec3::from(self.environment.field_G)
    }

    /// Resolves the configuration into validated model inputs. Without a
    /// pickup section the loop sits on the magic-angle cone for this length.
    pub fn scenario(&self, constants: &PhysicalConstants) -> Result<Scenario, CliError> {
        let material = self.material(constants)?;
        let env = &self.environment;
        let environment = EnvironmentConditions {
            temperature: env.temperature_K,
            gas_density: env.gas_density_cm3,
            gas_mass: env.gas_mass_amu * constants.amu,
            emissivity: env.emissivity,
            relaxation_rate: env.relaxation_rate_s,
        };
        let pickup = match &self.pickup {
            Some(p) => PickupLoop::new(p.radius_cm, p.standoff_cm, p.flux_sensitivity_G_cm2_rtHz)?,
            None => PickupLoop::magic_angle_default(self.geometry.length),
        };
        if !self.field().iter().all(|b| b.is_finite()) {
            return Err(CliError::Config(
                "`environment.field_G` must be finite".into(),
            ));
        }
        let s = Scenario {
            constants: *constants,
            material,
            geometry: self.geometry,
            environment,
            pickup,
            field: self.field(),
        };
        s.validate()?;
        Ok(s)
    }
}
