//! Assembly of the full noise budget ΔB(t) over a measurement-time grid.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use crate::error::{require_positive, Error, Result};
use crate::noise::{
    blackbody_kick, collision_field_noise, perturbation_field_noise, quantum_limit, sql_limit,
    thermal_current_noise,
};
use crate::pickup::detection_limit;
use crate::presets::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Detection,
    Quantum,
    Collisions,
    Blackbody,
    Sql,
    Thermal,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Detection => "detection",
            Source::Quantum => "quantum",
            Source::Collisions => "collisions",
            Source::Blackbody => "blackbody",
            Source::Sql => "sql",
            Source::Thermal => "thermal",
        }
    }

    fn column(self) -> &'static str {
        match self {
            Source::Detection => "dB_det_G",
            Source::Quantum => "dB_Q_G",
            Source::Collisions => "dB_col_G",
            Source::Blackbody => "dB_BB_G",
            Source::Sql => "dB_SQL_G",
            Source::Thermal => "dB_thermal_G",
        }
    }

    pub fn parse(label: &str) -> Option<Source> {
        [
            Source::Detection,
            Source::Quantum,
            Source::Collisions,
            Source::Blackbody,
            Source::Sql,
            Source::Thermal,
        ]
        .into_iter()
        .find(|s| s.label() == label)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BudgetOptions {
    /// Add the thermal-current bound (as δB/√t) to the total.
    pub include_thermal_current: bool,
}

/// Log-spaced grid of `points` times from `t_min` to `t_max` inclusive.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    require_positive("t_min", t_min)?;
    require_positive("t_max", t_max)?;
    if t_max <= t_min {
        return Err(Error::invalid(
            "t_max",
            format!("must exceed t_min = {t_min}"),
        ));
    }
    if points < 2 {
        return Err(Error::invalid("points", "need at least 2 grid points"));
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => t_min,
            i if i == points - 1 => t_max,
            i => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudget {
    pub time_grid: Vec<f64>,
    pub per_source: BTreeMap<Source, Vec<f64>>,
    /// Sources combined in quadrature into `total`.
    pub included: Vec<Source>,
    pub total: Vec<f64>,
    pub dominant: Vec<Source>,
    pub g_factor: f64,
}

/// Evaluates every source on the grid. Detection, collisions and black-body
/// kicks (plus the thermal-current bound when requested) form the total; the
/// quantum and SQL curves are overlays.
pub fn assemble_budget(
    scenario: &Scenario,
    t_min: f64,
    t_max: f64,
    points: usize,
    options: BudgetOptions,
) -> Result<NoiseBudget> {
    let grid = log_grid(t_min, t_max, points)?;
    scenario.validate()?;
    let c = &scenario.constants;
    let needle = scenario.needle()?;
    let env = &scenario.environment;
    let g = needle.g_factor;
    let dphi = scenario.angle_resolution()?;
    let bb = blackbody_kick(env, &needle, c)?;
    let thermal = thermal_current_noise(&scenario.material, &needle, env.temperature, c)?;

    let eval =
        |f: &dyn Fn(f64) -> Result<f64>| grid.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>();
    let mut per_source = BTreeMap::new();
    per_source.insert(
        Source::Detection,
        eval(&|t| detection_limit(dphi, g, t, c))?,
    );
    per_source.insert(
        Source::Quantum,
        eval(&|t| quantum_limit(&needle, &scenario.material, env.temperature, t, c))?,
    );
    per_source.insert(
        Source::Collisions,
        eval(&|t| collision_field_noise(env, &needle, t, c))?,
    );
    per_source.insert(
        Source::Blackbody,
        eval(&|t| perturbation_field_noise(&bb, &needle, t, c))?,
    );
    per_source.insert(
        Source::Sql,
        eval(&|t| sql_limit(needle.spin_count, t, env.relaxation_rate, g, c))?,
    );

    let mut included = vec![Source::Detection, Source::Collisions, Source::Blackbody];
    if options.include_thermal_current {
        per_source.insert(Source::Thermal, eval(&|t| Ok(thermal / t.sqrt()))?);
        included.push(Source::Thermal);
    }

    let mut total = Vec::with_capacity(grid.len());
    let mut dominant = Vec::with_capacity(grid.len());
    #[allow(clippy::needless_range_loop)]
    for i in 0..grid.len() {
        let mut sum = 0.0;
        let mut best = (included[0], f64::NEG_INFINITY);
        for s in &included {
            let v = per_source[s][i];
            sum += v * v;
            if v > best.1 {
                best = (*s, v);
            }
        }
        total.push(sum.sqrt());
        dominant.push(best.0);
    }

    Ok(NoiseBudget {
        time_grid: grid,
        per_source,
        included,
        total,
        dominant,
        g_factor: g,
    })
}

impl NoiseBudget {
    pub fn curve(&self, source: Source) -> Result<&[f64]> {
        self.per_source
            .get(&source)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingSource(source.label().to_string()))
    }

    /// Total interpolated log-log at `t`.
    pub fn total_at(&self, t: f64) -> Result<f64> {
        interpolate_loglog(&self.time_grid, &self.total, t)
    }

    /// Local log-log slope of the total between the two grid points that
    /// bracket `t` (or the end pair when `t` sits on an end point).
    pub fn total_log_slope(&self, t: f64) -> Result<f64> {
        let (i, j) = self.bracket(t)?;
        Ok((self.total[j] / self.total[i]).ln() / (self.time_grid[j] / self.time_grid[i]).ln())
    }

    fn bracket(&self, t: f64) -> Result<(usize, usize)> {
        let g = &self.time_grid;
        let n = g.len();
        if !(t >= g[0] && t <= g[n - 1]) {
            return Err(Error::invalid(
                "t",
                format!("{t} s outside the grid [{}, {}] s", g[0], g[n - 1]),
            ));
        }
        let j = g.partition_point(|&x| x < t).clamp(1, n - 1);
        Ok((j - 1, j))
    }

    /// Times where the dominant source changes, with the sources before and
    /// after, located by log-linear interpolation between grid points.
    pub fn dominance_switches(&self) -> Vec<(f64, Source, Source)> {
        let mut out = Vec::new();
        for i in 1..self.dominant.len() {
            let (a, b) = (self.dominant[i - 1], self.dominant[i]);
            if a != b {
                let t = crossover_time(self, a, b)
                    .ok()
                    .flatten()
                    .unwrap_or(self.time_grid[i]);
                out.push((t, a, b));
            }
        }
        out
    }

    /// Column names in output order.
    pub fn columns(&self) -> Vec<&'static str> {
        let mut cols = vec!["t_s"];
        let mut order = vec![
            Source::Detection,
            Source::Quantum,
            Source::Collisions,
            Source::Blackbody,
            Source::Sql,
        ];
        if self.per_source.contains_key(&Source::Thermal) {
            order.push(Source::Thermal);
        }
        cols.extend(order.iter().map(|s| s.column()));
        cols.push("dB_total_G");
        cols.push("dominant");
        cols
    }

    fn row_values(&self, i: usize) -> Vec<f64> {
        let mut v = vec![self.time_grid[i]];
        for s in [
            Source::Detection,
            Source::Quantum,
            Source::Collisions,
            Source::Blackbody,
            Source::Sql,
            Source::Thermal,
        ] {
            if let Some(c) = self.per_source.get(&s) {
                v.push(c[i]);
            }
        }
        v.push(self.total[i]);
        v
    }

    /// CSV with one header row; numbers in scientific notation with six
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.columns().join(","))?;
        for i in 0..self.time_grid.len() {
            let nums: Vec<String> = self
                .row_values(i)
                .iter()
                .map(|x| format!("{x:.5e}"))
                .collect();
            writeln!(out, "{},{}", nums.join(","), self.dominant[i])?;
        }
        Ok(())
    }

    /// JSON twin of the CSV: an array of row objects keyed by column name,
    /// values rounded to the same six significant digits.
    pub fn to_json_rows(&self) -> serde_json::Value {
        let cols = self.columns();
        let rows = (0..self.time_grid.len())
            .map(|i| {
                let mut obj = serde_json::Map::new();
                for (name, x) in cols.iter().zip(self.row_values(i)) {
                    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
                    obj.insert((*name).to_string(), serde_json::json!(rounded));
                }
                obj.insert(
                    "dominant".into(),
                    serde_json::json!(self.dominant[i].label()),
                );
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn interpolate_loglog(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    let n = xs.len();
    if !(x >= xs[0] && x <= xs[n - 1]) {
        return Err(Error::invalid("t", format!("{x} s outside the grid")));
    }
    let j = xs.partition_point(|&v| v < x).clamp(1, n - 1);
    let i = j - 1;
    if ys[i] <= 0.0 || ys[j] <= 0.0 {
        let w = (x - xs[i]) / (xs[j] - xs[i]);
        return Ok(ys[i] + w * (ys[j] - ys[i]));
    }
    let w = (x / xs[i]).ln() / (xs[j] / xs[i]).ln();
    Ok((ys[i].ln() + w * (ys[j] / ys[i]).ln()).exp())
}

/// First time at which curves `a` and `b` cross, interpolating ln(a/b)
/// linearly in ln t. `Ok(None)` when they do not cross inside the grid.
pub fn crossover_time(budget: &NoiseBudget, a: Source, b: Source) -> Result<Option<f64>> {
    if a == b {
        return Err(Error::Degenerate(format!("cannot cross `{a}` with itself")));
    }
    let ca = budget.curve(a)?;
    let cb = budget.curve(b)?;
    let diff: Vec<f64> = ca.iter().zip(cb).map(|(x, y)| x.ln() - y.ln()).collect();
    let t = &budget.time_grid;
    for i in 1..diff.len() {
        let (d0, d1) = (diff[i - 1], diff[i]);
        if !d0.is_finite() || !d1.is_finite() {
            continue;
        }
        if d0 == 0.0 {
            return Ok(Some(t[i - 1]));
        }
        if d0.signum() != d1.signum() {
            let w = d0 / (d0 - d1);
            return Ok(Some((t[i - 1].ln() + w * (t[i] / t[i - 1]).ln()).exp()));
        }
    }
    if diff.last() == Some(&0.0) {
        return Ok(t.last().copied());
    }
    Ok(None)
}

/// Residual gas density at which collision noise equals the detection limit
/// at `t_ref`. ΔB_col ∝ √n, so n = (ΔB_det/ΔB_col(n = 1))².
pub fn required_vacuum(scenario: &Scenario, t_ref: f64) -> Result<f64> {
    require_positive("t_ref", t_ref)?;
    let c = &scenario.constants;
    let needle = scenario.needle()?;
    let det = detection_limit(scenario.angle_resolution()?, needle.g_factor, t_ref, c)?;
    let unit = crate::noise::EnvironmentConditions {
        gas_density: 1.0,
        ..scenario.environment
    };
    let col = collision_field_noise(&unit, &needle, t_ref, c)?;
    if col == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((det / col).powi(2))
}

/// Energy scale gμ_B·ΔB_total(t) reachable by the magnetometer, eV.
pub fn exotic_coupling_reach(
    budget: &NoiseBudget,
    t: f64,
    constants: &crate::constants::PhysicalConstants,
) -> Result<f64> {
    Ok(budget.g_factor * constants.mu_b_ev_per_gauss() * budget.total_at(t)?)
}
