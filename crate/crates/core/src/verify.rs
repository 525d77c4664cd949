//! Randomised self-verification: closed forms against the RK4 oracle and
//! against each other, over the default parameter box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    asymptotic_variances, evolve_means, evolve_variances, propagator, thermal_diffusion,
    DiffusionCoeffs, SystemParams, ThermalSpec, VarianceVector,
};
use crate::error::Result;
use crate::evolution::{
    asymptotic_fidelity_displaced, fidelity_at, fidelity_closed_r0, initial_state,
    sigma_closed_form, trajectory_point, uniform_times, InitialParams,
};
use crate::oracle::{integrate_means_at, integrate_variances_at, OdeConfig, DEFAULT_STEP};
use crate::tol;

/// One randomly drawn, physically admissible configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub sys: SystemParams,
    pub thermal: ThermalSpec,
    pub diff: DiffusionCoeffs,
    pub init: InitialParams,
}

/// Draws ω ∈ [0.5, 2], μ ∈ [0, 0.2], C ∈ [1, 5], λ ∈ (μ, 0.3] subject to the
/// Gibbs constraint, δ ∈ [1/8, 5], |r| ≤ 0.9 and displacements in [−1, 1].
pub fn draw(rng: &mut impl Rng) -> Draw {
    loop {
        let omega = rng.gen_range(0.5..=2.0);
        let mu: f64 = rng.gen_range(0.0..=0.2);
        let c: f64 = rng.gen_range(1.0..=5.0);
        // (λ² − μ²)C² ≥ λ²  ⇔  λ ≥ μC/√(C² − 1)
        let lo = if mu == 0.0 {
            0.0
        } else {
            mu * c / (c * c - 1.0).sqrt()
        };
        let lo = lo.max(mu) * (1.0 + 1e-9) + 1e-6;
        if !(lo < 0.3) {
            continue;
        }
        let lambda = rng.gen_range(lo..=0.3);
        let sys = SystemParams::new(1.0, omega, 1.0, lambda, mu).expect("box is underdamped");
        let thermal = ThermalSpec::new(c).expect("C >= 1");
        let diff = thermal_diffusion(&sys, &thermal).expect("constraint enforced above");
        let init = InitialParams::new(
            rng.gen_range(0.125..=5.0),
            rng.gen_range(-0.9..=0.9),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        )
        .expect("box is valid");
        return Draw {
            sys,
            thermal,
            diff,
            init,
        };
    }
}

pub fn draws(seed: u64, n: usize) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw(&mut rng)).collect()
}

/// Deliberate corruption used to prove the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fault {
    /// Adds the value to entry (0, 0) of every closed-form propagator.
    PropagatorEntry(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub points: usize,
    pub t_max: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 0x5eed,
            points: 401,
            t_max: 16.0,
            fault: None,
        }
    }
}

impl VerifyOptions {
    pub fn quick() -> Self {
        Self {
            samples: 10,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Closed-form variances with an optional corrupted propagator.
fn closed_variances(
    d: &Draw,
    x0: &VarianceVector,
    t: f64,
    fault: Option<Fault>,
) -> Result<VarianceVector> {
    match fault {
        None => evolve_variances(&d.sys, &d.diff, x0, t),
        Some(Fault::PropagatorEntry(eps)) => {
            let mut p = propagator(&d.sys, t)?;
            p.matrix[0][0] += eps;
            let inf = asymptotic_variances(&d.sys, &d.diff)?.as_array();
            let x0 = x0.as_array();
            let dev = p.apply(std::array::from_fn(|i| x0[i] - inf[i]));
            Ok(VarianceVector::from_array(std::array::from_fn(|i| {
                dev[i] + inf[i]
            })))
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `‖a − b‖∞ / ‖b‖∞`, zero when both vanish.
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    let diff = max_abs_diff(a, b);
    if diff == 0.0 {
        0.0
    } else {
        diff / max_abs(b).max(f64::MIN_POSITIVE)
    }
}

/// Max relative deviation of closed-form means and variances from RK4 for one draw.
pub fn oracle_deviation(d: &Draw, times: &[f64], fault: Option<Fault>) -> Result<(f64, f64)> {
    let state = initial_state(&d.sys, &d.init)?;
    let x0 = VarianceVector::from_state(&d.sys, &state);
    let mw = d.sys.m() * d.sys.omega();
    let step = OdeConfig::for_horizon(&d.sys, times.last().copied().unwrap_or(0.0))?.step;
    let means = integrate_means_at(&d.sys, d.init.q0(), d.init.p0(), times, step)?;
    let vars = integrate_variances_at(&d.sys, &d.diff, &x0, times, step)?;
    let (mut dev_m, mut dev_v) = (0.0f64, 0.0f64);
    for (m, v) in means.iter().zip(&vars) {
        let (q, p) = evolve_means(&d.sys, d.init.q0(), d.init.p0(), m.t)?;
        dev_m = dev_m.max(relative_deviation(&[q, p / mw], &[m.q, m.p / mw]));
        let x = closed_variances(d, &x0, v.t, fault)?;
        dev_v = dev_v.max(relative_deviation(&x.as_array(), &v.x.as_array()));
    }
    Ok((dev_m, dev_v))
}

fn check(name: &'static str, tolerance: f64, observed: f64) -> CheckResult {
    CheckResult {
        name,
        tolerance,
        observed,
        passed: observed.is_finite() && observed < tolerance,
    }
}

fn fold_max(draws: &[Draw], f: impl Fn(&Draw) -> Result<f64>) -> f64 {
    draws
        .iter()
        .map(|d| f(d).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Runs every check and reports the worst deviation observed for each.
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let draws = draws(opts.seed, opts.samples);
    let times = uniform_times(opts.t_max, opts.points);
    let fault = opts.fault;
    let mut checks = Vec::new();

    let oracle: Vec<(f64, f64)> = draws
        .iter()
        .map(|d| oracle_deviation(d, &times, fault).unwrap_or((f64::INFINITY, f64::INFINITY)))
        .collect();
    checks.push(check(
        "oracle-means",
        1e-6,
        oracle.iter().map(|o| o.0).fold(0.0, f64::max),
    ));
    checks.push(check(
        "oracle-variances",
        1e-6,
        oracle.iter().map(|o| o.1).fold(0.0, f64::max),
    ));

    checks.push(check(
        "oracle-step-halving",
        1e-9,
        fold_max(&draws[..draws.len().min(5)], |d| {
            let x0 = VarianceVector::from_state(&d.sys, &initial_state(&d.sys, &d.init)?);
            let end = [opts.t_max];
            let a = integrate_variances_at(&d.sys, &d.diff, &x0, &end, DEFAULT_STEP)?;
            let b = integrate_variances_at(&d.sys, &d.diff, &x0, &end, DEFAULT_STEP / 2.0)?;
            Ok(relative_deviation(&a[0].x.as_array(), &b[0].x.as_array()))
        }),
    ));

    checks.push(check(
        "modal-involution",
        tol::INVOLUTION,
        draws
            .iter()
            .map(|d| crate::dynamics::involution_defect(&d.sys))
            .fold(0.0, f64::max),
    ));

    checks.push(check(
        "propagator-imaginary-residue",
        tol::IMAGINARY,
        fold_max(&draws, |d| {
            Ok(times
                .iter()
                .map(|&t| crate::dynamics::propagator_residue(&d.sys, t))
                .fold(0.0, f64::max))
        }),
    ));

    checks.push(check(
        "stationarity",
        1e-10,
        fold_max(&draws, |d| {
            let inf = asymptotic_variances(&d.sys, &d.diff)?;
            let mut worst = 0.0f64;
            for &t in times.iter().step_by(20) {
                let x = closed_variances(d, &inf, t, fault)?;
                worst = worst.max(relative_deviation(&x.as_array(), &inf.as_array()));
            }
            Ok(worst)
        }),
    ));

    checks.push(check(
        "uncertainty-preservation",
        tol::UNCERTAINTY_REL,
        fold_max(&draws, |d| {
            let bound = 0.25 * d.sys.hbar() * d.sys.hbar();
            let x0 = VarianceVector::from_state(&d.sys, &initial_state(&d.sys, &d.init)?);
            let mut worst = 0.0f64;
            for &t in &times {
                let sigma = closed_variances(d, &x0, t, fault)?.sigma();
                worst = worst.max((bound - sigma) / bound);
            }
            Ok(worst)
        }),
    ));

    checks.push(check(
        "initial-fidelity",
        1e-12,
        fold_max(&draws, |d| {
            Ok((fidelity_at(&d.sys, &d.diff, &d.init, 0.0)? - 1.0).abs())
        }),
    ));

    checks.push(check(
        "closed-r0-vs-pipeline",
        1e-9,
        fold_max(&draws, |d| {
            let init = InitialParams::squeezed(d.init.delta())?;
            let mut worst = 0.0f64;
            for &t in times.iter().step_by(10) {
                let a = fidelity_closed_r0(&d.sys, &d.thermal, init.delta(), t)?;
                let b = fidelity_at(&d.sys, &d.diff, &init, t)?;
                worst = worst.max((a - b).abs());
            }
            Ok(worst)
        }),
    ));

    checks.push(check(
        "sigma-closed-vs-pipeline",
        1e-9,
        fold_max(&draws, |d| {
            let x0 = VarianceVector::from_state(&d.sys, &initial_state(&d.sys, &d.init)?);
            let mut worst = 0.0f64;
            for &t in times.iter().step_by(10) {
                let a = sigma_closed_form(&d.sys, &d.thermal, d.init.delta(), d.init.r(), t)?;
                let b = closed_variances(d, &x0, t, fault)?.sigma();
                worst = worst.max((a - b).abs() / b.abs());
            }
            Ok(worst)
        }),
    ));

    checks.push(check(
        "asymptote-vs-pipeline",
        1e-6,
        fold_max(&draws, |d| {
            let late = trajectory_point(&d.sys, &d.diff, &d.init, 60.0 / d.sys.lambda())?;
            Ok((late.fidelity - asymptotic_fidelity_displaced(&d.sys, &d.thermal, &d.init)?).abs())
        }),
    ));

    VerifyReport { checks }
}
