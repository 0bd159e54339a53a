//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p gyroneedle-cli --test acceptance`.

use gyroneedle_cli::commands::{sweep_rows, SweepParameter};
use gyroneedle_cli::config::RunConfig;
use gyroneedle_core::budget::{
    assemble_budget, crossover_time, required_vacuum, BudgetOptions, Source,
};
use gyroneedle_core::dynamics::{integrate_full, DynamicState, DynamicsConfig};
use gyroneedle_core::montecarlo::{
    exponent_from_summaries, simulate_walk, KickProcess, KickSampler,
};
use gyroneedle_core::noise::{
    blackbody_rate, collision_kick, fdt_spin_density, gradient_limit, quantum_limit,
    quantum_spin_noise, sql_limit, susceptibility_imag, thermal_current_noise,
};
use gyroneedle_core::pickup::detection_limit;
use gyroneedle_core::{
    critical_thresholds, derive_needle, Material, MaterialDoc, NeedleGeometry, Scenario, Vec3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Suite {
    passed: usize,
    failed: usize,
}

impl Suite {
    fn check(&mut self, id: &str, ok: bool, detail: String, elapsed: Option<Duration>) {
        let tag = if ok { "PASS" } else { "FAIL" };
        let time = elapsed.map_or(String::new(), |d| {
            format!("  [{:.3} ms]", d.as_secs_f64() * 1e3)
        });
        println!("{tag}  {id:<4} {detail}{time}");
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn main() {
    let mut s = Suite {
        passed: 0,
        failed: 0,
    };
    let sc = Scenario::cobalt_reference();
    let c = sc.constants;
    let env = sc.environment;

    // 1. thresholds
    let ((omega, b_star), dt) = timed(|| {
        let n = derive_needle(&sc.geometry, &sc.material, &c).unwrap();
        critical_thresholds(&n, &c)
    });
    let needle = sc.needle().unwrap();
    s.check(
        "1",
        within(omega, 80.0, 150.0) && within(b_star, 0.8e-5, 1.5e-5) && dt < Duration::from_millis(1),
        format!("Omega* = {omega:.4} rad/s in [80, 150], B* = {b_star:.4e} G in [0.8, 1.5]e-5, runtime < 1 ms"),
        Some(dt),
    );

    // 2. detection limit
    let ((det1, slope), dt) = timed(|| {
        let dphi = sc.angle_resolution().unwrap();
        let a = detection_limit(dphi, needle.g_factor, 1.0, &c).unwrap();
        let b = detection_limit(dphi, needle.g_factor, 10.0, &c).unwrap();
        (a, (b / a).log10())
    });
    s.check(
        "2",
        within(det1, 0.5e-16, 2e-16)
            && (slope + 1.5).abs() < 1e-12
            && dt < Duration::from_millis(1),
        format!(
            "dB_det(1 s) = {det1:.4e} G in [0.5, 2]e-16, log-slope = {slope:.15}, runtime < 1 ms"
        ),
        Some(dt),
    );

    // 3. SQL overlay
    let sql = sql_limit(3e12, 1.0, 0.0, 1.0, &c).unwrap();
    s.check(
        "3",
        within(sql, 5e-14, 9e-14),
        format!("dB_SQL(1 s, N = 3e12) = {sql:.4e} G in [5, 9]e-14"),
        None,
    );

    // 4. quantum limit and fluctuation-dissipation consistency
    let q = quantum_limit(&needle, &sc.material, env.temperature, 1.0, &c).unwrap();
    s.check(
        "4a",
        within(q, 0.3e-20, 3e-20),
        format!("dB_Q(1 s, 0.1 K) = {q:.4e} G in [0.3, 3]e-20"),
        None,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut doc = MaterialDoc::cobalt();
        doc.g_factor = rng.random_range(0.5..2.5);
        let mat = Material::from_doc(&doc, &c).unwrap();
        let geo = NeedleGeometry::new(rng.random_range(1e-4..1e-2), rng.random_range(1e-5..1e-4))
            .unwrap();
        let n = derive_needle(&geo, &mat, &c).unwrap();
        let alpha = rng.random_range(1e-4..0.5);
        let w0 = 10f64.powf(rng.random_range(9.0..12.0));
        let w = 10f64.powf(rng.random_range(-2.0..6.0));
        let t = rng.random_range(1e-3..10.0);
        let via_fdt = fdt_spin_density(w, susceptibility_imag(w, &n, alpha, w0, &c), t, &n, &c);
        let direct = quantum_spin_noise(&n, t, alpha, w0, &c).unwrap().powi(2);
        worst = worst.max(((via_fdt - direct) / direct).abs());
    }
    s.check(
        "4b",
        worst < 1e-12,
        format!("susceptibility -> spin-noise chain vs closed form on 100 draws: worst rel. error {worst:.2e} < 1e-12"),
        None,
    );

    // 5. collisions
    let dl = collision_kick(&env, &needle, &c).unwrap().dl / c.hbar;
    s.check(
        "5a",
        within(dl, 500.0, 2000.0),
        format!("dL_col = {dl:.1} hbar in [500, 2000]"),
        None,
    );
    let n_req = required_vacuum(&sc, 1.0).unwrap();
    s.check(
        "5b",
        within(n_req, 1e3 / 30.0, 1e3 * 30.0),
        format!("required vacuum at 1 s = {n_req:.4e} cm^-3, target within x30 of 1e3"),
        None,
    );

    // 6. noise budget
    let (budget, dt) =
        timed(|| assemble_budget(&sc, 1e-2, 1e3, 200, BudgetOptions::default()).unwrap());
    let switch = budget
        .dominant
        .windows(2)
        .position(|w| w[0] == Source::Detection && w[1] == Source::Collisions);
    let t_cross = crossover_time(&budget, Source::Detection, Source::Collisions).unwrap();
    let switch_ok =
        switch.is_some_and(|i| budget.time_grid[i] >= 0.5 && budget.time_grid[i + 1] <= 5.0);
    s.check(
        "6a",
        switch_ok,
        format!(
            "detection -> collisions switch at {} s, target in [0.5, 5] s",
            t_cross.map_or("none".into(), |t| format!("{t:.3}"))
        ),
        None,
    );
    let early = budget.total_log_slope(1e-2).unwrap();
    s.check(
        "6b",
        (early + 1.5).abs() <= 0.1,
        format!("total log-slope at 0.01 s = {early:.4}, target -1.5 +/- 0.1"),
        None,
    );
    let late = budget.total_log_slope(1e3).unwrap();
    s.check(
        "6c",
        (late - 0.5).abs() <= 0.1,
        format!("total log-slope at 1e3 s = {late:.4}, target +0.5 +/- 0.1"),
        None,
    );
    s.check(
        "6d",
        dt < Duration::from_secs(1),
        "200-point budget runtime < 1 s".into(),
        Some(dt),
    );

    // 7. dynamics
    let zero = DynamicsConfig::for_material(&sc.material, &c, Vec3::zeros());
    let gilbert = sc.material.gilbert_alpha * sc.material.fmr_frequency;
    let s0 = DynamicState::misaligned(&needle, 0.2);
    let (tr, dt_lock) = timed(|| integrate_full(&s0, &zero, &needle, 10.0 / gilbert).unwrap());
    let j0 = s0.total_angular_momentum();
    let dj = tr
        .samples
        .iter()
        .map(|st| (st.total_angular_momentum() - j0).norm() / j0.norm())
        .fold(0.0, f64::max);
    let ds = tr
        .samples
        .iter()
        .map(|st| (st.spin.norm() / needle.total_spin - 1.0).abs())
        .fold(0.0, f64::max);
    s.check(
        "7a",
        dj < 1e-8,
        format!("max |dJ|/|J| at B = 0: {dj:.2e} < 1e-8"),
        None,
    );
    s.check(
        "7b",
        ds < 1e-6,
        format!("max ||S| - N hbar|/N hbar: {ds:.2e} < 1e-6"),
        None,
    );
    let rate = tr.fit_locking_rate(1e-6).unwrap_or(f64::NAN);
    s.check(
        "7c",
        within(rate, gilbert / 2.0, gilbert * 2.0),
        format!("fitted locking rate = {rate:.4e} 1/s, within x2 of {gilbert:.1e}"),
        Some(dt_lock),
    );
    let field = Vec3::new(0.0, 0.0, 1e-7);
    let cfg = DynamicsConfig::for_material(&sc.material, &c, field);
    let locked = DynamicState::locked(&needle, Vec3::new(1.0, 0.0, 1.0), field);
    let (tr, dt_prec) =
        timed(|| integrate_full(&locked, &cfg, &needle, 1e6 * cfg.fast_dt).unwrap());
    let w = tr.fit_precession_frequency(field).unwrap_or(f64::NAN);
    let expect = -needle.gyromagnetic_ratio * 1e-7;
    s.check(
        "7d",
        (w / expect - 1.0).abs() < 0.01,
        format!("locked precession = {w:.5e} rad/s vs -g mu_B B/hbar = {expect:.5e}, within 1%"),
        None,
    );
    s.check(
        "7e",
        tr.steps == 1_000_000 && dt_prec < Duration::from_secs(30),
        format!("{} fast steps in < 30 s", tr.steps),
        Some(dt_prec),
    );

    // 8. Monte Carlo
    let start = Instant::now();
    let dl = 1e3 * c.hbar;
    let mut worst_sigma = 0.0f64;
    for rate in [1.0, 3.0, 10.0] {
        let p = KickProcess::new(rate, KickSampler::FixedMagnitude { dl }, 8).unwrap();
        for duration in [10.0, 30.0, 100.0] {
            let w = simulate_walk(&p, &needle, duration, 10_000).unwrap();
            let analytic = dl / needle.total_spin * (rate * duration).sqrt();
            worst_sigma = worst_sigma.max((w.std_phi - analytic).abs() / w.std_phi_stderr);
        }
    }
    s.check(
        "8a",
        worst_sigma <= 3.0,
        format!("fixed-kick std(phi) vs analytic over 3x3 (rate, t) grid: worst {worst_sigma:.2} standard errors <= 3"),
        None,
    );
    let env_speed = env.thermal_speed(&c).unwrap();
    let sampler = KickSampler::CollisionGeometry {
        gas_mass: env.gas_mass,
        speed: env_speed,
        length: needle.length,
        radius: needle.radius,
    };
    let process =
        KickProcess::new(collision_kick(&env, &needle, &c).unwrap().rate, sampler, 8).unwrap();
    let summaries: Vec<_> = [1.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|&t| simulate_walk(&process, &needle, t, 10_000).unwrap())
        .collect();
    let k = exponent_from_summaries(&summaries).unwrap();
    s.check(
        "8b",
        (k - 0.5).abs() <= 0.05,
        format!("collision random walk exponent = {k:.4}, target 0.50 +/- 0.05"),
        None,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let draws = 200_000;
    let mean_abs = (0..draws)
        .map(|_| sampler.sample(&mut rng).0.abs())
        .sum::<f64>()
        / draws as f64;
    let reference = env.gas_mass * env_speed * needle.length / 16.0;
    let ratio = mean_abs / reference;
    s.check(
        "8c",
        within(ratio, 0.5, 2.0),
        format!("geometry sampler mean |dL_y| = {ratio:.3} x m v l/16, target within x2"),
        None,
    );
    let mc_time = start.elapsed();
    s.check(
        "8d",
        mc_time < Duration::from_secs(60),
        "Monte Carlo runtime < 60 s".into(),
        Some(mc_time),
    );

    // 9. supplemental bounds
    let db_th = thermal_current_noise(&sc.material, &needle, env.temperature, &c).unwrap();
    let flux = db_th * sc.pickup.area();
    s.check(
        "9a",
        within(db_th, 0.5e-8, 2e-8) && flux < 1e-13,
        format!("thermal-current dB = {db_th:.4e} G/rtHz within x2 of 1e-8, flux {flux:.3e} < 1e-13 G cm^2/rtHz"),
        None,
    );
    let bb = blackbody_rate(&env, &needle, &c).unwrap();
    s.check(
        "9b",
        within(bb, 10.0, 300.0),
        format!("Gamma_BB(emissivity 1, 0.1 K) = {bb:.3} 1/s in [10, 300]"),
        None,
    );
    let grad = gradient_limit(&needle, &sc.material, 1.0, &c).unwrap();
    s.check(
        "9c",
        (grad / 2e-6 - 1.0).abs() <= 0.3,
        format!("gradient limit at 1 s = {grad:.4e} G/cm, target 2e-6 +/- 30%"),
        None,
    );

    // 10. collision-noise scaling with spin count at fixed aspect ratio
    let config = RunConfig::cobalt_reference();
    let base = config.scenario(&c).unwrap();
    let lengths: Vec<f64> = (0..7).map(|i| 1e-4 * 10f64.powf(i as f64 / 3.0)).collect();
    let rows = sweep_rows(&config, &base, SweepParameter::Length, &lengths, Some(10.0)).unwrap();
    let xs: Vec<f64> = rows.iter().map(|r| r.spin_count.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.db_col_1s_g.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    s.check(
        "10",
        (slope + 1.0 / 3.0).abs() <= 0.02,
        format!("fixed-aspect sweep: d ln dB_col / d ln N = {slope:.4}, target -1/3 +/- 0.02"),
        None,
    );

    println!("\n{} passed, {} failed", s.passed, s.failed);
    if s.failed > 0 {
        std::process::exit(1);
    }
}
