//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gaussfid::dynamics::involution_defect;
use gaussfid::verify::{draws, oracle_deviation, Draw};
use gaussfid::{
    asymptotic_fidelity, asymptotic_fidelity_displaced, asymptotic_variances, fidelity_at,
    fidelity_closed_mu0, fidelity_closed_r0, fidelity_trajectory, initial_state, sigma_closed_form,
    thermal_diffusion, thermal_diffusion_unchecked, trajectory_point, uniform_times, Bath,
    DiffusionCoeffs, InitialParams, Result, SystemParams, ThermalSpec,
};

type Criterion = (&'static str, Option<Duration>, fn() -> Result<Outcome>);

const SEED: u64 = 0xacce97;
const DRAWS: usize = 100;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    let start = Instant::now();
    let out = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    let elapsed = start.elapsed();
    match budget {
        Some(b) => Outcome::new(
            out.passed && elapsed < b,
            format!(
                "{}; runtime {:.3}s (budget {}s)",
                out.detail,
                elapsed.as_secs_f64(),
                b.as_secs_f64()
            ),
        ),
        None => Outcome::new(
            out.passed,
            format!("{}; runtime {:.3}s", out.detail, elapsed.as_secs_f64()),
        ),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn argmax(xs: &[f64], ys: &[f64]) -> f64 {
    let mut best = 0;
    for i in 1..ys.len() {
        if ys[i] > ys[best] {
            best = i;
        }
    }
    xs[best]
}

fn identity_and_bounds() -> Result<Outcome> {
    let times = uniform_times(16.0, 401);
    let (mut worst_f0, mut min_f, mut max_f) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for d in draws(SEED, DRAWS) {
        let traj = fidelity_trajectory(&d.sys, &Bath::Explicit(d.diff), &d.init, &times)?;
        let f: Vec<f64> = traj.values().collect();
        worst_f0 = worst_f0.max((f[0] - 1.0).abs());
        for &x in &f {
            min_f = min_f.min(x);
            max_f = max_f.max(x);
        }
    }
    Ok(Outcome::new(
        worst_f0 <= 1e-12 && min_f > 0.0 && max_f <= 1.0,
        format!("max|F(0)-1| = {worst_f0:.3e}, F range [{min_f:.6e}, {max_f:.17}]"),
    ))
}

fn constant_fidelity() -> Result<Outcome> {
    let times = uniform_times(16.0, 401);
    let init = InitialParams::coherent(0.0, 0.0)?;
    let c1 = ThermalSpec::zero_temperature();
    let mut worst = 0.0f64;
    for lam in [0.01, 0.1, 0.3] {
        for mu in [0.0, 0.08, 0.2] {
            let sys = SystemParams::new(1.0, 1.0, 1.0, lam, mu)?;
            // Several of these (λ, μ) pairs sit outside the Gibbs admissibility
            // region, so the coefficients are built without validation.
            let d = thermal_diffusion_unchecked(&sys, &c1);
            for &t in &times {
                worst = worst.max((fidelity_at(&sys, &d, &init, t)? - 1.0).abs());
            }
        }
    }
    Ok(Outcome::new(
        worst < 1e-9,
        format!("max|F(t)-1| = {worst:.3e} over 9 (λ, μ) pairs"),
    ))
}

fn asymptotic_grid() -> Result<Outcome> {
    let lam = 0.1;
    let sys = SystemParams::new(1.0, 1.0, 1.0, lam, 0.0)?;
    let t = 60.0 / lam;
    let mut worst = 0.0f64;
    for delta in [0.125, 0.5, 1.0, 2.0, 5.0] {
        for c in [1.0, 2.0, 3.0, 4.0, 5.0] {
            let th = ThermalSpec::new(c)?;
            let d = thermal_diffusion(&sys, &th)?;
            for r in [0.0, 0.5, -0.75] {
                let init = InitialParams::new(delta, r, 0.0, 0.0)?;
                let late = fidelity_at(&sys, &d, &init, t)?;
                worst = worst.max((late - asymptotic_fidelity(delta, r, &th)?).abs());
            }
        }
    }
    let spot_a = asymptotic_fidelity(1.0, 0.0, &ThermalSpec::new(3.0)?)?;
    let spot_b = asymptotic_fidelity(4.0, 0.0, &ThermalSpec::new(1.0)?)?;
    let spots = (spot_a - 0.5).abs() < 1e-15 && (spot_b - 0.8).abs() < 1e-15;
    Ok(Outcome::new(
        worst < 1e-6 && spots,
        format!(
            "max|F(60/λ)-F(∞)| = {worst:.3e}; F(∞)(δ=1,C=3) = {spot_a}, F(∞)(δ=4,C=1) = {spot_b}"
        ),
    ))
}

fn displaced_asymptote() -> Result<Outcome> {
    let sys = SystemParams::new(1.0, 1.0, 1.0, 0.1, 0.0)?;
    let th = ThermalSpec::zero_temperature();
    let init = InitialParams::coherent(1.0, 1.0)?;
    let late = fidelity_at(
        &sys,
        &thermal_diffusion(&sys, &th)?,
        &init,
        60.0 / sys.lambda(),
    )?;
    let closed = asymptotic_fidelity_displaced(&sys, &th, &init)?;
    let target = (-1.0f64).exp();
    Ok(Outcome::new(
        (late - target).abs() < 1e-6 && (closed - target).abs() < 1e-12,
        format!("long-time F = {late:.12}, closed = {closed:.12}, e^-1 = {target:.12}"),
    ))
}

fn oracle_equivalence() -> Result<Outcome> {
    let times = uniform_times(16.0, 401);
    let (mut means, mut vars) = (0.0f64, 0.0f64);
    for d in draws(SEED ^ 1, DRAWS) {
        let (m, v) = oracle_deviation(&d, &times, None)?;
        means = means.max(m);
        vars = vars.max(v);
    }
    Ok(Outcome::new(
        means < 1e-6 && vars < 1e-6,
        format!("max relative deviation: means {means:.3e}, variances {vars:.3e}"),
    ))
}

fn cross_checks() -> Result<Outcome> {
    let times = uniform_times(16.0, 81);
    let set = draws(SEED ^ 2, DRAWS);
    let (mut r0, mut mu0, mut sig, mut inv, mut stat) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for Draw {
        sys,
        thermal,
        diff,
        init,
    } in &set
    {
        let delta = init.delta();
        let undisplaced = InitialParams::squeezed(delta)?;
        let sys0 = sys.with_mu(0.0)?;
        for &t in &times {
            let pipe = fidelity_at(sys, diff, &undisplaced, t)?;
            r0 = r0.max((fidelity_closed_r0(sys, thermal, delta, t)? - pipe).abs());
            let a = fidelity_closed_mu0(&sys0, thermal, delta, t)?;
            mu0 = mu0.max((a - fidelity_closed_r0(&sys0, thermal, delta, t)?).abs());
            let point = trajectory_point(sys, diff, init, t)?;
            let closed = sigma_closed_form(sys, thermal, delta, init.r(), t)?;
            sig = sig.max((closed - point.sigma).abs() / point.sigma);
        }
        inv = inv.max(involution_defect(sys));
        let x = asymptotic_variances(sys, diff)?;
        let want = 0.5 * sys.hbar() * thermal.c();
        stat = stat.max((x.x1 - want).abs().max((x.x2 - want).abs()).max(x.x3.abs()));
    }
    let passed = r0 < 1e-9 && mu0 < 1e-12 && sig < 1e-9 && inv < 1e-12 && stat < 1e-12;
    Ok(Outcome::new(
        passed,
        format!(
            "r0 vs pipeline {r0:.3e}, mu0 vs r0 {mu0:.3e}, sigma closed vs det {sig:.3e}, \
             |T·T-I| {inv:.3e}, X(∞) vs coth {stat:.3e}"
        ),
    ))
}

fn shape_properties() -> Result<Outcome> {
    let mut notes = Vec::new();

    // fig1a preset: δ = 1 over t ∈ [0, 16] and C ∈ [1, 5].
    let sys = SystemParams::new(1.0, 1.0, 1.0, 0.1, 0.0)?;
    let init = InitialParams::coherent(0.0, 0.0)?;
    let times = uniform_times(16.0, 401);
    let cs = grid(1.0, 5.0, 17);
    let mut surface = Vec::new();
    for &c in &cs {
        let d = thermal_diffusion(&sys, &ThermalSpec::new(c)?)?;
        surface.push(
            times
                .iter()
                .map(|&t| fidelity_at(&sys, &d, &init, t))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let in_t = surface
        .iter()
        .all(|row| row.windows(2).all(|w| w[1] <= w[0]));
    let in_c = surface
        .windows(2)
        .all(|p| p[0].iter().zip(&p[1]).all(|(a, b)| b <= a));
    notes.push(format!("fig1a monotone in t: {in_t}, in C: {in_c}"));

    // fig4 presets: δ grid on [1/8, 5] that contains δ = 1 exactly (index 7).
    let deltas = grid(0.125, 5.0, 40);
    let fig4_cs = grid(1.0, 5.0, 9);
    let mut argmax_ok = true;
    let mut decreasing_in_c = true;
    for r in [0.0, 0.75] {
        let mut peaks = Vec::new();
        for &c in &fig4_cs {
            let th = ThermalSpec::new(c)?;
            let f = deltas
                .iter()
                .map(|&d| asymptotic_fidelity(d, r, &th))
                .collect::<Result<Vec<_>>>()?;
            let peak = argmax(&deltas, &f);
            argmax_ok &= peak == 1.0;
            peaks.push(peak);
        }
        for &d in &deltas {
            let f = fig4_cs
                .iter()
                .map(|&c| asymptotic_fidelity(d, r, &ThermalSpec::new(c)?))
                .collect::<Result<Vec<_>>>()?;
            decreasing_in_c &= f.windows(2).all(|w| w[1] < w[0]);
        }
        let (lo, hi) = peaks
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &p| (a.min(p), b.max(p)));
        notes.push(format!("fig4 r={r}: argmax δ in [{lo}, {hi}]"));
    }
    notes.push(format!(
        "fig4 argmax at δ=1: {argmax_ok}, strictly decreasing in C: {decreasing_in_c}"
    ));

    // fig2b preset on the thermal constraint boundary.
    let sys = SystemParams::new(1.0, 1.0, 1.0, 0.1, 0.08)?;
    let c = 5.0 / 3.0;
    let margin = (0.1f64.powi(2) - 0.08f64.powi(2)) * c * c - 0.1f64.powi(2);
    let accepted = thermal_diffusion(&sys, &ThermalSpec::new(c)?).is_ok();
    let boundary = margin.abs() < 1e-15;
    notes.push(format!(
        "fig2b accepted: {accepted}, constraint margin {margin:.3e}"
    ));

    Ok(Outcome::new(
        in_t && in_c && argmax_ok && decreasing_in_c && accepted && boundary,
        notes.join("; "),
    ))
}

fn uncertainty_preservation() -> Result<Outcome> {
    let times = uniform_times(16.0, 401);
    let mut worst_ratio = f64::INFINITY;
    let mut systems: Vec<(SystemParams, DiffusionCoeffs, InitialParams)> = draws(SEED ^ 3, DRAWS)
        .into_iter()
        .map(|d| (d.sys, d.diff, d.init))
        .collect();
    for (m, hbar) in [(1.7, 0.6), (0.4, 2.5)] {
        let sys = SystemParams::new(m, 1.3, hbar, 0.15, 0.05)?;
        let d = thermal_diffusion(&sys, &ThermalSpec::new(2.0)?)?;
        systems.push((sys, d, InitialParams::new(0.3, 0.8, 0.5, -0.2)?));
    }
    for (sys, d, init) in &systems {
        let bound = sys.hbar().powi(2) / 4.0;
        for &t in &times {
            worst_ratio = worst_ratio.min(trajectory_point(sys, d, init, t)?.sigma / bound);
        }
    }

    let mut worst_start = 0.0f64;
    for hbar in [1.0, 0.6] {
        let sys = SystemParams::new(1.0, 1.0, hbar, 0.1, 0.0)?;
        for delta in grid(0.125, 8.0, 32) {
            for r in grid(-0.99, 0.99, 23) {
                let s = initial_state(&sys, &InitialParams::new(delta, r, 0.0, 0.0)?)?;
                worst_start = worst_start.max((s.uncertainty_sigma() - hbar * hbar / 4.0).abs());
            }
        }
    }
    Ok(Outcome::new(
        worst_ratio >= 1.0 - 1e-10 && worst_start <= 1e-12,
        format!("min σ(t)/(ħ²/4) = {worst_ratio:.15}, max|σ(0)-ħ²/4| = {worst_start:.3e}"),
    ))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 8] = [
        ("identity and bounds", Some(secs(5)), identity_and_bounds),
        (
            "constant fidelity for the coherent vacuum",
            Some(secs(1)),
            constant_fidelity,
        ),
        ("asymptotic formulas", Some(secs(5)), asymptotic_grid),
        ("displaced asymptote", None, displaced_asymptote),
        ("oracle equivalence", Some(secs(60)), oracle_equivalence),
        ("formula cross-checks", None, cross_checks),
        ("qualitative shape properties", None, shape_properties),
        ("uncertainty preservation", None, uncertainty_preservation),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let out = timed(budget, f);
        failures += usize::from(!out.passed);
        println!(
            "{} {}. {}: {}",
            if out.passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            out.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
