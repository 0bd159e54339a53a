//! Monte Carlo of impulsive environmental kicks on the locked gyroscope.
//!
//! Each trial draws Poisson kick times over the measurement window; a kick
//! rotates S in the xy-plane by dL_y/(Nħ) and shifts S_z by dL_z. Random
//! numbers come from a ChaCha stream keyed by (seed, trial index), consumed in
//! kick order, so results do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::needle::NeedleDerived;

/// |S_z drift|/(Nħ) above which a measurement is no longer certified.
pub const SZ_BUDGET_THRESHOLD: f64 = 0.01;

/// How the angular momentum of a single kick is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KickSampler {
    /// dL_y = ±dl and dL_z = ±dl with independent fair signs.
    FixedMagnitude { dl: f64 },
    /// A gas molecule of mass `gas_mass` and speed `speed` reflecting
    /// specularly off the rod surface: impact point uniform along the length
    /// and around the circumference, incidence angle from the cosine law,
    /// momentum transfer 2mv cos θ along the surface normal.
    CollisionGeometry {
        gas_mass: f64,
        speed: f64,
        length: f64,
        radius: f64,
    },
}

impl KickSampler {
    /// Draws (dL_y, dL_z) for one kick, erg·s.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        match *self {
            KickSampler::FixedMagnitude { dl } => {
                let bits: u32 = rng.random();
                let sy = if bits & 1 == 0 { dl } else { -dl };
                let sz = if bits & 2 == 0 { dl } else { -dl };
                (sy, sz)
            }
            KickSampler::CollisionGeometry {
                gas_mass,
                speed,
                length,
                ..
            } => {
                let x = length * (rng.random::<f64>() - 0.5);
                let psi = 2.0 * PI * rng.random::<f64>();
                let cos_theta = rng.random::<f64>().sqrt();
                let impulse = 2.0 * gas_mass * speed * cos_theta;
                // r × Δp with r = (x, R cos ψ, R sin ψ), Δp = −impulse·(0, cos ψ, sin ψ)
                (impulse * x * psi.sin(), -impulse * x * psi.cos())
            }
        }
    }

    /// Analytic mean |dL_y| of the sampler.
    pub fn mean_abs_transverse(&self) -> f64 {
        match *self {
            KickSampler::FixedMagnitude { dl } => dl,
            KickSampler::CollisionGeometry {
                gas_mass,
                speed,
                length,
                ..
            } => 2.0 * gas_mass * speed * (2.0 / 3.0) * (length / 4.0) * (2.0 / PI),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KickSampler::FixedMagnitude { dl } => {
                require_non_negative("dl", dl)?;
            }
            KickSampler::CollisionGeometry {
                gas_mass,
                speed,
                length,
                radius,
            } => {
                require_positive("gas_mass", gas_mass)?;
                require_non_negative("speed", speed)?;
                require_positive("length", length)?;
                require_positive("radius", radius)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KickProcess {
    /// Kicks per second.
    pub rate: f64,
    pub sampler: KickSampler,
    pub rng_seed: u64,
}

impl KickProcess {
    pub fn new(rate: f64, sampler: KickSampler, rng_seed: u64) -> Result<Self> {
        let p = KickProcess {
            rate,
            sampler,
            rng_seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("rate", self.rate)?;
        self.sampler.validate()
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(trial);
        rng
    }

    /// Runs one trial of length `duration`.
    pub fn run_trial(&self, needle: &NeedleDerived, duration: f64, trial: u64) -> TrialOutcome {
        let mut out = TrialOutcome {
            trial,
            final_phi: 0.0,
            sz_drift: 0.0,
            kicks: 0,
        };
        if self.rate == 0.0 {
            return out;
        }
        let mut rng = self.trial_rng(trial);
        let mut t = 0.0;
        loop {
            let wait: f64 = rng.sample(Exp1);
            t += wait / self.rate;
            if t > duration {
                break;
            }
            let (dly, dlz) = self.sampler.sample(&mut rng);
            out.final_phi += dly / needle.total_spin;
            out.sz_drift += dlz;
            out.kicks += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: u64,
    /// rad
    pub final_phi: f64,
    /// erg·s
    pub sz_drift: f64,
    pub kicks: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkSummary {
    pub n_trials: u64,
    /// s
    pub duration: f64,
    pub mean_phi: f64,
    /// Sample standard deviation (n − 1) of the final phase.
    pub std_phi: f64,
    /// Large-sample standard error of `std_phi`.
    pub std_phi_stderr: f64,
    pub mean_sz_drift: f64,
    pub max_abs_sz_drift: f64,
    pub kick_count_mean: f64,
    pub kick_count_variance: f64,
}

impl WalkSummary {
    /// Standard error of `mean_phi`.
    pub fn mean_phi_stderr(&self) -> f64 {
        self.std_phi / (self.n_trials as f64).sqrt()
    }

    /// Reduces trial outcomes in trial order with compensated sums.
    pub fn from_outcomes(outcomes: &[TrialOutcome], duration: f64) -> Self {
        let n = outcomes.len() as f64;
        let mean_phi = neumaier(outcomes.iter().map(|o| o.final_phi)) / n;
        let mean_sz = neumaier(outcomes.iter().map(|o| o.sz_drift)) / n;
        let mean_k = neumaier(outcomes.iter().map(|o| o.kicks as f64)) / n;
        let m2 = neumaier(outcomes.iter().map(|o| (o.final_phi - mean_phi).powi(2)));
        let m4 = neumaier(outcomes.iter().map(|o| (o.final_phi - mean_phi).powi(4))) / n;
        let var_k = if n > 1.0 {
            neumaier(outcomes.iter().map(|o| (o.kicks as f64 - mean_k).powi(2))) / (n - 1.0)
        } else {
            0.0
        };
        let (std_phi, stderr) = if n > 1.0 {
            let var = m2 / (n - 1.0);
            let std = var.sqrt();
            let var_of_var = ((m4 - (m2 / n).powi(2)) / n).max(0.0);
            let se = if std > 0.0 {
                var_of_var.sqrt() / (2.0 * std)
            } else {
                0.0
            };
            (std, se)
        } else {
            (0.0, 0.0)
        };
        WalkSummary {
            n_trials: outcomes.len() as u64,
            duration,
            mean_phi,
            std_phi,
            std_phi_stderr: stderr,
            mean_sz_drift: mean_sz,
            max_abs_sz_drift: outcomes
                .iter()
                .map(|o| o.sz_drift.abs())
                .fold(0.0, f64::max),
            kick_count_mean: mean_k,
            kick_count_variance: var_k,
        }
    }
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Runs `n_trials` independent trials in parallel, returned in trial order.
pub fn simulate_trials(
    process: &KickProcess,
    needle: &NeedleDerived,
    duration: f64,
    n_trials: u64,
) -> Result<Vec<TrialOutcome>> {
    process.validate()?;
    require_positive("duration", duration)?;
    if n_trials == 0 {
        return Err(Error::invalid("n_trials", "must be >= 1"));
    }
    Ok((0..n_trials)
        .into_par_iter()
        .map(|i| process.run_trial(needle, duration, i))
        .collect())
}

pub fn simulate_walk(
    process: &KickProcess,
    needle: &NeedleDerived,
    duration: f64,
    n_trials: u64,
) -> Result<WalkSummary> {
    let outcomes = simulate_trials(process, needle, duration, n_trials)?;
    Ok(WalkSummary::from_outcomes(&outcomes, duration))
}

/// Least-squares slope of ln(std φ) against ln t.
pub fn scaling_exponent(
    process: &KickProcess,
    needle: &NeedleDerived,
    durations: &[f64],
    n_trials: u64,
) -> Result<f64> {
    let summaries = durations
        .iter()
        .map(|&d| simulate_walk(process, needle, d, n_trials))
        .collect::<Result<Vec<_>>>()?;
    exponent_from_summaries(&summaries)
}

/// Fits the growth exponent from summaries over ≥ 4 durations spanning
/// ≥ 2 decades.
pub fn exponent_from_summaries(summaries: &[WalkSummary]) -> Result<f64> {
    if summaries.len() < 4 {
        return Err(Error::invalid("durations", "need at least 4 durations"));
    }
    let (lo, hi) = summaries
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
            (lo.min(s.duration), hi.max(s.duration))
        });
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::invalid(
            "durations",
            "must span at least two decades",
        ));
    }
    if summaries.iter().any(|s| s.std_phi <= 0.0) {
        return Err(Error::UndefinedExponent(
            "zero phase spread at some duration (no kicks)".into(),
        ));
    }
    let xs: Vec<f64> = summaries.iter().map(|s| s.duration.ln()).collect();
    let ys: Vec<f64> = summaries.iter().map(|s| s.std_phi.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("durations", "all durations are equal"));
    }
    Ok(sxy / sxx)
}

/// Largest |S_z drift|/(Nħ) over the trials.
pub fn sz_budget_check(
    process: &KickProcess,
    needle: &NeedleDerived,
    duration: f64,
    n_trials: u64,
) -> Result<f64> {
    let s = simulate_walk(process, needle, duration, n_trials)?;
    Ok(s.max_abs_sz_drift / needle.total_spin)
}

/// Per-trial dump: `trial,final_phi_rad,kicks`.
pub fn write_trials_csv<W: Write>(outcomes: &[TrialOutcome], mut out: W) -> io::Result<()> {
    writeln!(out, "trial,final_phi_rad,kicks")?;
    for o in outcomes {
        writeln!(out, "{},{:.12e},{}", o.trial, o.final_phi, o.kicks)?;
    }
    Ok(())
}
