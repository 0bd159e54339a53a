//! Coupled macrospin + rigid-rotor dynamics.
//!
//! State is the spin S, the lattice angular momentum L and the needle axis â.
//! The spin obeys the Landau–Lifshitz–Gilbert equation with a uniaxial
//! anisotropy field along â; Gilbert damping acts on the motion of S relative
//! to the rotating lattice, so a rigidly co-rotating state is undamped. Every
//! internal torque on S is returned to the lattice, so J = S + L changes only
//! through the Zeeman torque.
//!
//! The full integrator resolves the FMR period (ω₀ ~ 10¹¹ s⁻¹) and is meant for
//! sub-microsecond transients. Long-time behaviour uses [`effective_precession`]
//! together with the noise and Monte Carlo modules.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

use crate::constants::PhysicalConstants;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::material::Material;
use crate::needle::NeedleDerived;

pub type Vec3 = Vector3<f64>;

/// Default cap on fast integrator steps.
pub const DEFAULT_MAX_STEPS: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicState {
    /// Spin S, erg·s.
    pub spin: Vec3,
    /// Rotational angular momentum L, erg·s.
    pub orbital: Vec3,
    /// Unit vector along the needle.
    pub axis: Vec3,
    /// s
    pub time: f64,
}

impl DynamicState {
    /// Spin and axis along `direction`, lattice at rest.
    pub fn at_rest(needle: &NeedleDerived, direction: Vec3) -> Self {
        let d = direction.normalize();
        DynamicState {
            spin: d * needle.total_spin,
            orbital: Vec3::zeros(),
            axis: d,
            time: 0.0,
        }
    }

    /// Axis along x̂, lattice at rest, spin tilted by `angle` towards ŷ.
    pub fn misaligned(needle: &NeedleDerived, angle: f64) -> Self {
        DynamicState {
            spin: Vec3::new(angle.cos(), angle.sin(), 0.0) * needle.total_spin,
            orbital: Vec3::zeros(),
            axis: Vec3::x(),
            time: 0.0,
        }
    }

    /// Spin locked to the axis along `direction`, lattice already co-rotating
    /// with the Larmor precession in `field`: ω = −γB, L = Iω.
    pub fn locked(needle: &NeedleDerived, direction: Vec3, field: Vec3) -> Self {
        let mut s = Self::at_rest(needle, direction);
        s.orbital = -field * needle.gyromagnetic_ratio * needle.moment_of_inertia;
        s
    }

    pub fn total_angular_momentum(&self) -> Vec3 {
        self.spin + self.orbital
    }

    /// Angle between S and â, radians.
    pub fn misalignment(&self) -> f64 {
        let s = self.spin.normalize();
        s.cross(&self.axis).norm().atan2(s.dot(&self.axis))
    }
}

/// d/dt of (S, L, â).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRate {
    pub spin: Vec3,
    pub orbital: Vec3,
    pub axis: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Applied field B, G.
    pub field: Vec3,
    /// H_eff with γ·H_eff = ω₀, G.
    pub anisotropy_field: f64,
    /// Gilbert α.
    pub damping: f64,
    /// Fixed step, s.
    pub fast_dt: f64,
    pub lock_tolerance: f64,
    /// Longest run the fast integrator accepts, s.
    pub max_duration: f64,
    /// Keep every n-th step in the trajectory.
    pub decimation: usize,
}

impl DynamicsConfig {
    /// Step 0.01/ω₀, lock tolerance 10⁻³, cap of 10⁶ steps.
    pub fn for_material(material: &Material, constants: &PhysicalConstants, field: Vec3) -> Self {
        let fast_dt = 0.01 / material.fmr_frequency;
        DynamicsConfig {
            field,
            anisotropy_field: material.anisotropy_field(constants),
            damping: material.gilbert_alpha,
            fast_dt,
            lock_tolerance: 1e-3,
            max_duration: DEFAULT_MAX_STEPS * fast_dt,
            decimation: 100,
        }
    }

    /// ω₀ = γ·H_eff for this needle.
    pub fn fmr_frequency(&self, needle: &NeedleDerived) -> f64 {
        needle.gyromagnetic_ratio * self.anisotropy_field
    }

    pub fn validate(&self, needle: &NeedleDerived) -> Result<()> {
        require_positive("anisotropy_field", self.anisotropy_field)?;
        require_non_negative("damping", self.damping)?;
        require_positive("fast_dt", self.fast_dt)?;
        require_positive("max_duration", self.max_duration)?;
        if !self.field.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("field", "must be finite"));
        }
        let limit = 0.01 / self.fmr_frequency(needle);
        if self.fast_dt > limit * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "fast_dt",
                format!("{:e} s exceeds 0.01/ω₀ = {limit:e} s", self.fast_dt),
            ));
        }
        if !(self.lock_tolerance > 0.0 && self.lock_tolerance <= 1e-3) {
            return Err(Error::invalid(
                "lock_tolerance",
                format!("must lie in (0, 1e-3], got {}", self.lock_tolerance),
            ));
        }
        if self.decimation == 0 {
            return Err(Error::invalid("decimation", "must be >= 1"));
        }
        Ok(())
    }

    /// Steps needed to cover `duration`.
    pub fn steps_for(&self, duration: f64) -> u64 {
        (duration / self.fast_dt - 1e-9).ceil().max(0.0) as u64
    }

    pub fn exceeds_cap(&self, duration: f64) -> bool {
        duration > self.max_duration * (1.0 + 1e-12)
    }
}

/// Right-hand side of the coupled spin–lattice equations.
pub fn llg_rotor_derivative(
    state: &DynamicState,
    cfg: &DynamicsConfig,
    needle: &NeedleDerived,
) -> StateRate {
    let gamma = needle.gyromagnetic_ratio;
    let alpha = cfg.damping;
    let s = state.spin;
    let s_hat = s.normalize();
    let a = state.axis;

    let h_anis = a * (cfg.anisotropy_field * s_hat.dot(&a));
    let b_eff = cfg.field + h_anis;
    let omega = state.orbital / needle.moment_of_inertia;

    // Spin motion relative to the lattice frame, with Gilbert damping solved
    // in closed form: X + α ŝ×X = Q.
    let lattice_motion = omega.cross(&s);
    let q = s.cross(&b_eff) * gamma - lattice_motion;
    let x = (q - s_hat.cross(&q) * alpha) / (1.0 + alpha * alpha);

    let ds = x + lattice_motion;
    let zeeman_torque = s.cross(&cfg.field) * gamma;
    StateRate {
        spin: ds,
        orbital: -(ds - zeeman_torque),
        axis: omega.cross(&a),
    }
}

/// Total energy: anisotropy + Zeeman + rotational, erg.
pub fn energy(state: &DynamicState, cfg: &DynamicsConfig, needle: &NeedleDerived) -> f64 {
    let gamma = needle.gyromagnetic_ratio;
    let s_norm = state.spin.norm();
    let c = state.spin.dot(&state.axis) / s_norm;
    -0.5 * gamma * cfg.anisotropy_field * s_norm * c * c - gamma * state.spin.dot(&cfg.field)
        + state.orbital.norm_squared() / (2.0 * needle.moment_of_inertia)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<DynamicState>,
    pub steps: u64,
    /// Set when the requested duration exceeded the cap and the run stopped
    /// at `max_duration`.
    pub truncated: bool,
}

impl Trajectory {
    pub fn last(&self) -> &DynamicState {
        self.samples
            .last()
            .expect("trajectory holds the initial state")
    }

    /// First sampled time at which the misalignment is below `tolerance`.
    pub fn lock_time(&self, tolerance: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| s.misalignment() < tolerance)
            .map(|s| s.time)
    }

    /// Exponential rate of decay of tan(angle(S, â)), fitted by least squares
    /// over the samples between 90% of the initial angle and `floor`.
    pub fn fit_locking_rate(&self, floor: f64) -> Option<f64> {
        let start = self.samples.first()?.misalignment();
        let (ts, ys): (Vec<f64>, Vec<f64>) = self
            .samples
            .iter()
            .map(|s| (s.time, s.misalignment()))
            .filter(|&(_, th)| th < 0.9 * start && th > floor)
            .map(|(t, th)| (t, th.tan().ln()))
            .unzip();
        linear_slope(&ts, &ys).map(|k| -k)
    }

    /// Signed angular velocity of â about `field_direction`, from a
    /// least-squares fit of the unwrapped azimuth.
    pub fn fit_precession_frequency(&self, field_direction: Vec3) -> Option<f64> {
        let z = field_direction.normalize();
        let helper = if z.x.abs() < 0.9 {
            Vec3::x()
        } else {
            Vec3::y()
        };
        let e1 = (helper - z * z.dot(&helper)).normalize();
        let e2 = z.cross(&e1);
        let mut ts = Vec::with_capacity(self.samples.len());
        let mut phis = Vec::with_capacity(self.samples.len());
        let mut prev: Option<f64> = None;
        let mut offset = 0.0;
        for s in &self.samples {
            let raw = s.axis.dot(&e2).atan2(s.axis.dot(&e1));
            if let Some(p) = prev {
                let d = raw + offset - p;
                if d > std::f64::consts::PI {
                    offset -= 2.0 * std::f64::consts::PI;
                } else if d < -std::f64::consts::PI {
                    offset += 2.0 * std::f64::consts::PI;
                }
            }
            let phi = raw + offset;
            prev = Some(phi);
            ts.push(s.time);
            phis.push(phi);
        }
        linear_slope(&ts, &phis)
    }

    /// CSV with header `t_s,Sx,Sy,Sz,Lx,Ly,Lz,ax,ay,az`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t_s,Sx,Sy,Sz,Lx,Ly,Lz,ax,ay,az")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                s.time,
                s.spin.x,
                s.spin.y,
                s.spin.z,
                s.orbital.x,
                s.orbital.y,
                s.orbital.z,
                s.axis.x,
                s.axis.y,
                s.axis.z
            )?;
        }
        Ok(())
    }
}

fn linear_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

fn advance(state: &DynamicState, rate: &StateRate, h: f64) -> DynamicState {
    DynamicState {
        spin: state.spin + rate.spin * h,
        orbital: state.orbital + rate.orbital * h,
        axis: state.axis + rate.axis * h,
        time: state.time + h,
    }
}

/// One classical RK4 step followed by renormalisation of |S| and |â|. The
/// change in S from rescaling is moved into L so that J is untouched.
pub fn rk4_step(
    state: &DynamicState,
    cfg: &DynamicsConfig,
    needle: &NeedleDerived,
    h: f64,
) -> DynamicState {
    let k1 = llg_rotor_derivative(state, cfg, needle);
    let k2 = llg_rotor_derivative(&advance(state, &k1, 0.5 * h), cfg, needle);
    let k3 = llg_rotor_derivative(&advance(state, &k2, 0.5 * h), cfg, needle);
    let k4 = llg_rotor_derivative(&advance(state, &k3, h), cfg, needle);
    let w = h / 6.0;
    let spin = state.spin + (k1.spin + (k2.spin + k3.spin) * 2.0 + k4.spin) * w;
    let orbital = state.orbital + (k1.orbital + (k2.orbital + k3.orbital) * 2.0 + k4.orbital) * w;
    let axis = state.axis + (k1.axis + (k2.axis + k3.axis) * 2.0 + k4.axis) * w;

    let renormalised = spin * (needle.total_spin / spin.norm());
    DynamicState {
        spin: renormalised,
        orbital: orbital + (spin - renormalised),
        axis: axis.normalize(),
        time: state.time + h,
    }
}

/// Integrates the full equations for `duration` seconds with the fixed step
/// `cfg.fast_dt`. Runs longer than `cfg.max_duration` stop at the cap and come
/// back with `truncated` set.
pub fn integrate_full(
    state0: &DynamicState,
    cfg: &DynamicsConfig,
    needle: &NeedleDerived,
    duration: f64,
) -> Result<Trajectory> {
    cfg.validate(needle)?;
    require_non_negative("duration", duration)?;
    let truncated = cfg.exceeds_cap(duration);
    let span = if truncated {
        cfg.max_duration
    } else {
        duration
    };
    let steps = cfg.steps_for(span);
    if truncated {
        log::warn!(
            "requested {duration:e} s exceeds the fast-integrator cap of {:e} s; stopping at the cap",
            cfg.max_duration
        );
    }

    let t_end = state0.time + span;
    let mut samples = Vec::with_capacity((steps as usize) / cfg.decimation + 2);
    samples.push(*state0);
    let mut state = *state0;
    for i in 1..=steps {
        let h = (t_end - state.time).min(cfg.fast_dt);
        state = rk4_step(&state, cfg, needle, h);
        if i == steps {
            state.time = t_end;
            samples.push(state);
        } else if i % cfg.decimation as u64 == 0 {
            samples.push(state);
        }
    }
    Ok(Trajectory {
        samples,
        steps,
        truncated,
    })
}

/// Locked-regime precession angle φ = φ₀ + gμ_B·B·t/ħ.
pub fn effective_precession(
    phi0: f64,
    field: f64,
    g: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> f64 {
    phi0 + g * constants.mu_b * field * t / constants.hbar
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Precessing,
    Marginal,
    Tipping,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Precessing => "Precessing",
            Regime::Marginal => "Marginal",
            Regime::Tipping => "Tipping",
        })
    }
}

pub const DEFAULT_REGIME_MARGIN: f64 = 0.1;

/// Precessing below margin·B*, tipping above B*/margin, marginal in between.
pub fn classify_regime(field: f64, needle: &NeedleDerived, margin: f64) -> Result<Regime> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::invalid(
            "margin",
            format!("must lie in (0, 1), got {margin}"),
        ));
    }
    let b = field.abs();
    Ok(if b < margin * needle.b_star {
        Regime::Precessing
    } else if b > needle.b_star / margin {
        Regime::Tipping
    } else {
        Regime::Marginal
    })
}

/// Ratio of the rotational angular momentum needed for steady precession in
/// `field` to the spin, IγB/(Nħ) = B/B*. Steady gyroscopic precession needs
/// this well below one.
pub fn required_orbital_fraction(field: f64, needle: &NeedleDerived) -> f64 {
    needle.moment_of_inertia * needle.gyromagnetic_ratio * field.abs() / needle.total_spin
}
