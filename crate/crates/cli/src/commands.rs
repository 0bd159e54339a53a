//! Subcommand bodies. Each returns a [`Report`]; writing it out is the
//! caller's job.

use gyroneedle_core::budget::{
    assemble_budget, crossover_time, required_vacuum, BudgetOptions, Source,
};
use gyroneedle_core::dynamics::{
    classify_regime, integrate_full, DynamicState, DynamicsConfig, DEFAULT_REGIME_MARGIN,
};
use gyroneedle_core::montecarlo::{
    exponent_from_summaries, simulate_walk, KickProcess, KickSampler, WalkSummary,
};
use gyroneedle_core::noise::{collision_field_noise, collision_kick, quantum_limit};
use gyroneedle_core::pickup::{detection_limit, PickupLoop};
use gyroneedle_core::{critical_thresholds, Scenario, Vec3};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;

use crate::config::{Format, KickSpec, McSection, RunConfig, StartKind};
use crate::error::CliError;

/// Rendered command output plus human-readable summary lines.
pub struct Report {
    pub default_format: Format,
    pub csv: String,
    pub json: serde_json::Value,
    pub summary: Vec<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serialises");
                s.push('\n');
                s
            }
        }
    }
}

pub fn derive(config: &RunConfig, scenario: &Scenario) -> Result<Report, CliError> {
    let n = scenario.needle()?;
    let (omega_star, b_star) = critical_thresholds(&n, &scenario.constants);
    let field = scenario.field.norm();
    let regime = classify_regime(field, &n, DEFAULT_REGIME_MARGIN)?;
    let warning = scenario.geometry.single_domain_warning();
    let mut summary = vec![format!(
        "Omega* = {omega_star:.4e} rad/s, B* = {b_star:.4e} G, N = {:.4e}, regime at |B| = {field:.3e} G: {regime}",
        n.spin_count
    )];
    if let Some(w) = &warning {
        summary.push(format!("warning: {w}"));
    }

    let rows: Vec<(&str, String, &str)> = vec![
        ("length", fmt(n.length), "cm"),
        ("radius", fmt(n.radius), "cm"),
        ("aspect_ratio", fmt(scenario.geometry.aspect_ratio()), ""),
        ("volume", fmt(n.volume), "cm3"),
        ("mass", fmt(n.mass), "g"),
        ("moment_of_inertia", fmt(n.moment_of_inertia), "g cm2"),
        ("spin_count", fmt(n.spin_count), ""),
        ("total_spin", fmt(n.total_spin), "erg s"),
        ("magnetic_moment", fmt(n.magnetic_moment), "erg/G"),
        ("gyromagnetic_ratio", fmt(n.gyromagnetic_ratio), "rad/(s G)"),
        ("omega_star", fmt(omega_star), "rad/s"),
        ("b_star", fmt(b_star), "G"),
        ("gilbert_rate", fmt(n.gamma_g), "1/s"),
        ("field", fmt(field), "G"),
        ("regime", regime.to_string(), ""),
    ];
    let mut csv = String::from("quantity,value,unit\n");
    for (q, v, u) in &rows {
        let _ = writeln!(csv, "{q},{v},{u}");
    }
    let json = json!({
        "material": scenario.material.name,
        "geometry": config.geometry,
        "needle": n,
        "omega_star_rad_s": omega_star,
        "b_star_G": b_star,
        "field_G": field,
        "regime": regime.to_string(),
        "single_domain_warning": warning,
    });
    Ok(Report {
        default_format: Format::Json,
        csv,
        json,
        summary,
    })
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

pub struct BudgetArgs {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub include_thermal_current: bool,
}

pub fn budget(scenario: &Scenario, args: &BudgetArgs) -> Result<Report, CliError> {
    let b = assemble_budget(
        scenario,
        args.t_min,
        args.t_max,
        args.points,
        BudgetOptions {
            include_thermal_current: args.include_thermal_current,
        },
    )?;
    let mut csv = Vec::new();
    b.write_csv(&mut csv)
        .map_err(|e| CliError::Io(e.to_string()))?;
    let mut summary = Vec::new();
    match crossover_time(&b, Source::Detection, Source::Collisions)? {
        Some(t) => summary.push(format!("detection/collisions crossover at t = {t:.4e} s")),
        None => summary.push("detection and collision curves do not cross on this grid".into()),
    }
    for (t, from, to) in b.dominance_switches() {
        summary.push(format!(
            "dominant source switches {from} -> {to} at t = {t:.4e} s"
        ));
    }
    if b.dominance_switches().is_empty() {
        summary.push(format!("dominant source throughout: {}", b.dominant[0]));
    }
    Ok(Report {
        default_format: Format::Csv,
        csv: String::from_utf8(csv).expect("CSV is ASCII"),
        json: b.to_json_rows(),
        summary,
    })
}

pub fn dynamics(
    config: &RunConfig,
    scenario: &Scenario,
    duration: Option<f64>,
) -> Result<Report, CliError> {
    let section = config.dynamics.clone().unwrap_or_default();
    let duration = duration.unwrap_or(section.duration_s);
    let n = scenario.needle()?;
    let mut cfg =
        DynamicsConfig::for_material(&scenario.material, &scenario.constants, scenario.field);
    if let Some(alpha) = section.damping {
        cfg.damping = alpha;
    }
    cfg.max_duration = section.max_steps * cfg.fast_dt;
    cfg.decimation = section.decimation;
    cfg.lock_tolerance = section.lock_tolerance;
    cfg.validate(&n)?;
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(CliError::Config(format!(
            "duration must be a finite non-negative time, got {duration}"
        )));
    }
    if cfg.exceeds_cap(duration) {
        return Err(CliError::Cap(format!(
            "requested {duration:e} s needs {} fast steps, above the cap of {:.3e} steps ({:.3e} s). \
             The full integrator resolves the ~{:.0e} rad/s ferromagnetic resonance and cannot reach \
             measurement time scales; use `derive` for the operating regime and the effective \
             precession model phi(t) = phi0 + g mu_B B t / hbar for long runs, or raise \
             `dynamics.max_steps`",
            cfg.steps_for(duration),
            section.max_steps,
            cfg.max_duration,
            cfg.fmr_frequency(&n),
        )));
    }

    let s0 = match section.start {
        StartKind::Misaligned => DynamicState::misaligned(&n, section.misalignment_rad),
        StartKind::Locked => {
            let axis = Vec3::from(section.axis);
            if axis.norm() == 0.0 || !axis.iter().all(|v| v.is_finite()) {
                return Err(CliError::Config(
                    "`dynamics.axis` must be a finite non-zero vector".into(),
                ));
            }
            DynamicState::locked(&n, axis, scenario.field)
        }
    };
    let tr = integrate_full(&s0, &cfg, &n, duration)?;
    let locking_rate = tr.fit_locking_rate(1e-6);
    let precession = if scenario.field.norm() > 0.0 {
        tr.fit_precession_frequency(scenario.field)
    } else {
        None
    };
    let lock_time = tr.lock_time(cfg.lock_tolerance);

    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4e}"));
    let summary = vec![format!(
        "steps = {}, fitted locking rate = {} 1/s (alpha*omega0 = {:.4e}), fitted precession frequency = {} rad/s \
         (-g mu_B B/hbar = {:.4e}), lock time = {} s",
        tr.steps,
        opt(locking_rate),
        cfg.damping * cfg.fmr_frequency(&n),
        opt(precession),
        -n.gyromagnetic_ratio * scenario.field.norm(),
        opt(lock_time),
    )];

    let mut csv = Vec::new();
    tr.write_csv(&mut csv)
        .map_err(|e| CliError::Io(e.to_string()))?;
    let json = json!({
        "steps": tr.steps,
        "fitted_locking_rate_s": locking_rate,
        "fitted_precession_rad_s": precession,
        "lock_time_s": lock_time,
        "samples": tr.samples,
    });
    Ok(Report {
        default_format: Format::Csv,
        csv: String::from_utf8(csv).expect("CSV is ASCII"),
        json,
        summary,
    })
}

pub fn kick_process(mc: &McSection, scenario: &Scenario) -> Result<KickProcess, CliError> {
    let c = &scenario.constants;
    let n = scenario.needle()?;
    let (sampler, natural_rate) = match mc.kick {
        KickSpec::CollisionGeometry => (
            KickSampler::CollisionGeometry {
                gas_mass: scenario.environment.gas_mass,
                speed: scenario.environment.thermal_speed(c)?,
                length: n.length,
                radius: n.radius,
            },
            Some(collision_kick(&scenario.environment, &n, c)?.rate),
        ),
        KickSpec::Fixed { dl_hbar } => (
            KickSampler::FixedMagnitude {
                dl: dl_hbar * c.hbar,
            },
            None,
        ),
    };
    let rate = mc
        .rate_s
        .or(natural_rate)
        .ok_or_else(|| CliError::Config("`mc.rate_s` is required for fixed kicks".into()))?;
    Ok(KickProcess::new(rate, sampler, mc.seed)?)
}

#[derive(Serialize)]
struct McOutput<'a> {
    process: &'a KickProcess,
    summaries: &'a [WalkSummary],
    exponent: Option<f64>,
    exponent_note: Option<String>,
}

pub fn mc(
    config: &RunConfig,
    scenario: &Scenario,
    durations: Option<Vec<f64>>,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Result<Report, CliError> {
    let mut section = config.mc.clone().unwrap_or_default();
    if let Some(d) = durations {
        section.durations_s = d;
    }
    if let Some(t) = trials {
        section.trials = t;
    }
    if let Some(s) = seed {
        section.seed = s;
    }
    if section.trials < 100 {
        return Err(CliError::Usage(format!(
            "need at least 100 trials, got {}",
            section.trials
        )));
    }
    if section.durations_s.is_empty() {
        return Err(CliError::Usage("need at least one duration".into()));
    }
    let process = kick_process(&section, scenario)?;
    let n = scenario.needle()?;
    let summaries = section
        .durations_s
        .iter()
        .map(|&d| simulate_walk(&process, &n, d, section.trials))
        .collect::<Result<Vec<_>, _>>()?;
    let (exponent, note) = match exponent_from_summaries(&summaries) {
        Ok(k) => (Some(k), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let mut csv = String::from(
        "duration_s,n_trials,mean_phi_rad,std_phi_rad,std_phi_stderr_rad,kick_count_mean,kick_count_variance,max_abs_sz_drift_frac\n",
    );
    for s in &summaries {
        let _ = writeln!(
            csv,
            "{:.6e},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
            s.duration,
            s.n_trials,
            s.mean_phi,
            s.std_phi,
            s.std_phi_stderr,
            s.kick_count_mean,
            s.kick_count_variance,
            s.max_abs_sz_drift / n.total_spin
        );
    }
    let summary = vec![match (exponent, &note) {
        (Some(k), _) => format!(
            "rate = {:.4e} 1/s, fitted std(phi) ~ t^{k:.4}",
            process.rate
        ),
        (None, Some(why)) => format!(
            "rate = {:.4e} 1/s, scaling exponent undefined: {why}",
            process.rate
        ),
        (None, None) => unreachable!(),
    }];
    let json = serde_json::to_value(McOutput {
        process: &process,
        summaries: &summaries,
        exponent,
        exponent_note: note,
    })
    .expect("summaries serialise");
    Ok(Report {
        default_format: Format::Json,
        csv,
        json,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParameter {
    Length,
    Radius,
    Temperature,
    GasDensity,
    FluxSensitivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub length_cm: f64,
    pub radius_cm: f64,
    pub spin_count: f64,
    pub omega_star_rad_s: f64,
    pub b_star_g: f64,
    pub db_det_1s_g: f64,
    pub db_q_1s_g: f64,
    pub db_col_1s_g: f64,
    pub required_n_cm3: f64,
}

const SWEEP_HEADER: &str = "value,length_cm,radius_cm,spin_count,omega_star_rad_s,b_star_G,dB_det_1s_G,dB_Q_1s_G,dB_col_1s_G,required_n_cm3";

/// Evaluates the key figures at each parameter value. With `aspect_ratio`
/// set, sweeping one dimension drags the other along at fixed ℓ/r.
pub fn sweep_rows(
    config: &RunConfig,
    base: &Scenario,
    parameter: SweepParameter,
    values: &[f64],
    aspect_ratio: Option<f64>,
) -> Result<Vec<SweepRow>, CliError> {
    if let Some(a) = aspect_ratio {
        if !(a > 0.0 && a.is_finite()) {
            return Err(CliError::Usage(format!(
                "aspect ratio must be positive, got {a}"
            )));
        }
        if !matches!(parameter, SweepParameter::Length | SweepParameter::Radius) {
            return Err(CliError::Usage(
                "--aspect-ratio applies to length and radius sweeps only".into(),
            ));
        }
    }
    let c = &base.constants;
    values
        .iter()
        .map(|&v| {
            let mut s = base.clone();
            match parameter {
                SweepParameter::Length => {
                    s.geometry.length = v;
                    if let Some(a) = aspect_ratio {
                        s.geometry.radius = v / a;
                    }
                }
                SweepParameter::Radius => {
                    s.geometry.radius = v;
                    if let Some(a) = aspect_ratio {
                        s.geometry.length = v * a;
                    }
                }
                SweepParameter::Temperature => s.environment.temperature = v,
                SweepParameter::GasDensity => s.environment.gas_density = v,
                SweepParameter::FluxSensitivity => s.pickup.flux_sensitivity = v,
            }
            if config.pickup.is_none()
                && matches!(parameter, SweepParameter::Length | SweepParameter::Radius)
            {
                let sens = s.pickup.flux_sensitivity;
                s.pickup = PickupLoop::magic_angle_default(s.geometry.length);
                s.pickup.flux_sensitivity = sens;
            }
            s.validate()?;
            if let Some(w) = s.geometry.single_domain_warning() {
                log::warn!("sweep value {v:e}: {w}");
            }
            let n = s.needle()?;
            let (omega_star, b_star) = critical_thresholds(&n, c);
            Ok(SweepRow {
                value: v,
                length_cm: n.length,
                radius_cm: n.radius,
                spin_count: n.spin_count,
                omega_star_rad_s: omega_star,
                b_star_g: b_star,
                db_det_1s_g: detection_limit(s.angle_resolution()?, n.g_factor, 1.0, c)?,
                db_q_1s_g: quantum_limit(&n, &s.material, s.environment.temperature, 1.0, c)?,
                db_col_1s_g: collision_field_noise(&s.environment, &n, 1.0, c)?,
                required_n_cm3: required_vacuum(&s, 1.0)?,
            })
        })
        .collect()
}

pub fn sweep(
    config: &RunConfig,
    base: &Scenario,
    parameter: SweepParameter,
    values: &[f64],
    aspect_ratio: Option<f64>,
) -> Result<Report, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let rows = sweep_rows(config, base, parameter, values, aspect_ratio)?;
    let mut csv = format!("{SWEEP_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.value,
            r.length_cm,
            r.radius_cm,
            r.spin_count,
            r.omega_star_rad_s,
            r.b_star_g,
            r.db_det_1s_g,
            r.db_q_1s_g,
            r.db_col_1s_g,
            r.required_n_cm3
        );
    }
    let keys: Vec<&str> = SWEEP_HEADER.split(',').collect();
    let json = rows
        .iter()
        .map(|r| {
            let vals = [
                r.value,
                r.length_cm,
                r.radius_cm,
                r.spin_count,
                r.omega_star_rad_s,
                r.b_star_g,
                r.db_det_1s_g,
                r.db_q_1s_g,
                r.db_col_1s_g,
                r.required_n_cm3,
            ];
            serde_json::Value::Object(
                keys.iter()
                    .map(|k| k.to_string())
                    .zip(vals.iter().map(|v| json!(v)))
                    .collect(),
            )
        })
        .collect();
    Ok(Report {
        default_format: Format::Csv,
        csv,
        json: serde_json::Value::Array(json),
        summary: vec![format!("{} sweep rows", rows.len())],
    })
}

/// Parses `start:stop:count` into `count` log-spaced values.
pub fn log_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "range must be START:STOP:COUNT with positive bounds, got `{text}`"
        ))
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let k: usize = parts[2].parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > 0.0) || k == 0 {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    Ok((0..k)
        .map(|i| match i {
            0 => a,
            i if i == k - 1 => b,
            i => (a.ln() + (b / a).ln() * i as f64 / (k - 1) as f64).exp(),
        })
        .collect())
}
