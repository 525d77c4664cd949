//! Fidelity between a pure correlated squeezed initial state and its evolved image.
//!
//! Two routes are provided. The generic pipeline evolves moments with
//! [`crate::dynamics`] and feeds them to [`fidelity_pure`]; it handles any
//! bath, correlation and displacement. The explicit formulas (`*_closed_*`,
//! [`sigma_closed_form`], asymptotes) are the thermal-bath closed forms and are
//! kept as an independent cross-check of the pipeline.

use crate::dynamics::{
    evolve_state, thermal_diffusion, DiffusionCoeffs, SystemParams, ThermalSpec,
};
use crate::error::{require_finite, Error, Result};
use crate::gaussian::{fidelity_pure, GaussianState};

/// Parameters of the correlated coherent initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialParams {
    delta: f64,
    r: f64,
    q0: f64,
    p0: f64,
}

impl InitialParams {
    pub fn new(delta: f64, r: f64, q0: f64, p0: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "squeezing must be finite and > 0",
            });
        }
        if !(r.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "correlation must satisfy |r| < 1",
            });
        }
        require_finite("q0", q0)?;
        require_finite("p0", p0)?;
        Ok(Self { delta, r, q0, p0 })
    }

    /// Undisplaced, uncorrelated squeezed state.
    pub fn squeezed(delta: f64) -> Result<Self> {
        Self::new(delta, 0.0, 0.0, 0.0)
    }

    /// Glauber coherent state (δ = 1, r = 0) centred at `(q0, p0)`.
    pub fn coherent(q0: f64, p0: f64) -> Result<Self> {
        Self::new(1.0, 0.0, q0, p0)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn is_displaced(&self) -> bool {
        self.q0 != 0.0 || self.p0 != 0.0
    }

    /// `δ + 1/(δ(1 − r²))`, the combination that recurs in every closed form.
    fn spread_sum(&self) -> f64 {
        self.delta + 1.0 / (self.delta * (1.0 - self.r * self.r))
    }
}

/// Environment description: either the Gibbs preset or explicit coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bath {
    Thermal(ThermalSpec),
    Explicit(DiffusionCoeffs),
}

impl Bath {
    /// Diffusion coefficients; the thermal preset is validated against `sys`.
    pub fn diffusion(&self, sys: &SystemParams) -> Result<DiffusionCoeffs> {
        match self {
            Bath::Thermal(th) => thermal_diffusion(sys, th),
            Bath::Explicit(d) => DiffusionCoeffs::validated(sys, d.d_pp, d.d_qq, d.d_pq),
        }
    }
}

/// The pure initial state with `σ_qq = ħδ/2mω`, `σ_pp = ħmω/(2δ(1−r²))`,
/// `σ_pq = ħr/(2√(1−r²))`.
pub fn initial_state(sys: &SystemParams, init: &InitialParams) -> Result<GaussianState> {
    let (hbar, mw) = (sys.hbar(), sys.m() * sys.omega());
    let one_minus = 1.0 - init.r * init.r;
    GaussianState::new(
        init.q0,
        init.p0,
        hbar * init.delta / (2.0 * mw),
        hbar * mw / (2.0 * init.delta * one_minus),
        hbar * init.r / (2.0 * one_minus.sqrt()),
        hbar,
    )
}

/// One row of a fidelity trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub fidelity: f64,
    pub sigma: f64,
    pub state: GaussianState,
}

/// F(t) and the evolved moments on a time grid, with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrajectory {
    pub sys: SystemParams,
    pub bath: Bath,
    pub init: InitialParams,
    pub points: Vec<TrajectoryPoint>,
}

impl FidelityTrajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.t)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.fidelity)
    }
}

/// Evolved state and its fidelity to the initial state at time `t`.
pub fn trajectory_point(
    sys: &SystemParams,
    diff: &DiffusionCoeffs,
    init: &InitialParams,
    t: f64,
) -> Result<TrajectoryPoint> {
    let start = initial_state(sys, init)?;
    let state = evolve_state(sys, diff, &start, t)?;
    Ok(TrajectoryPoint {
        t,
        fidelity: fidelity_pure(&start, &state)?,
        sigma: state.uncertainty_sigma(),
        state,
    })
}

/// Generic pipeline F(t): evolve the moments, then apply the pure-state fidelity.
/// For displaced states β is built from the initial means and the evolved means.
pub fn fidelity_at(
    sys: &SystemParams,
    diff: &DiffusionCoeffs,
    init: &InitialParams,
    t: f64,
) -> Result<f64> {
    Ok(trajectory_point(sys, diff, init, t)?.fidelity)
}

pub fn fidelity_trajectory(
    sys: &SystemParams,
    bath: &Bath,
    init: &InitialParams,
    times: &[f64],
) -> Result<FidelityTrajectory> {
    let diff = bath.diffusion(sys)?;
    let points = times
        .iter()
        .map(|&t| trajectory_point(sys, &diff, init, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelityTrajectory {
        sys: *sys,
        bath: *bath,
        init: *init,
        points,
    })
}

pub const DEFAULT_T_MAX: f64 = 16.0;
pub const DEFAULT_POINTS: usize = 401;

/// `points` uniform samples on `[0, t_max]` (a single point is `t = 0`).
pub fn uniform_times(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Explicit thermal-bath F(t) for an undisplaced squeezed (r = 0) initial state.
pub fn fidelity_closed_r0(sys: &SystemParams, th: &ThermalSpec, delta: f64, t: f64) -> Result<f64> {
    InitialParams::squeezed(delta)?;
    check_time(t)?;
    let (w, mu, lam, c) = (sys.omega(), sys.mu(), sys.lambda(), th.c());
    let om = sys.omega_eff();
    let s = delta + 1.0 / delta;
    let sq = delta * delta + 1.0 / (delta * delta);
    let (sin2, cos2) = (2.0 * om * t).sin_cos();
    let e2 = (-2.0 * lam * t).exp();
    let e4 = e2 * e2;
    let oscillating = w * w * (2.0 + sq - 4.0 * c * c)
        + 4.0 * mu * om * (delta - 1.0 / delta) * sin2 * c
        + (w * w * (2.0 - sq) - 4.0 * mu * mu * (1.0 - c * c)) * cos2;
    let bracket =
        e4 * (1.0 - s * c + c * c) + e2 / (2.0 * om * om) * oscillating + 1.0 + s * c + c * c;
    Ok((2.0 / bracket.sqrt()).min(1.0))
}

/// The μ = 0 specialisation of [`fidelity_closed_r0`].
pub fn fidelity_closed_mu0(
    sys: &SystemParams,
    th: &ThermalSpec,
    delta: f64,
    t: f64,
) -> Result<f64> {
    if sys.mu() != 0.0 {
        return Err(Error::MuNonZero(sys.mu()));
    }
    InitialParams::squeezed(delta)?;
    check_time(t)?;
    let (w, lam, c) = (sys.omega(), sys.lambda(), th.c());
    let s = delta + 1.0 / delta;
    let sq = delta * delta + 1.0 / (delta * delta);
    let e2 = (-2.0 * lam * t).exp();
    let e4 = e2 * e2;
    let bracket = e4 * (1.0 - s * c + c * c)
        + 0.5 * e2 * (2.0 + sq - 4.0 * c * c + (2.0 - sq) * (2.0 * w * t).cos())
        + 1.0
        + s * c
        + c * c;
    Ok((2.0 / bracket.sqrt()).min(1.0))
}

/// `F(∞) = 2/√(1 + (δ + 1/(δ(1−r²)))C + C²)`, independent of λ and μ.
pub fn asymptotic_fidelity(delta: f64, r: f64, th: &ThermalSpec) -> Result<f64> {
    let init = InitialParams::new(delta, r, 0.0, 0.0)?;
    let c = th.c();
    Ok((2.0 / (1.0 + init.spread_sum() * c + c * c).sqrt()).min(1.0))
}

/// Long-time displacement exponent E(∞) for a correlated (any r) initial state.
pub fn displaced_exponent_asymptotic(
    sys: &SystemParams,
    th: &ThermalSpec,
    init: &InitialParams,
) -> Result<f64> {
    let (c, mw, hbar) = (th.c(), sys.m() * sys.omega(), sys.hbar());
    let (delta, r, q0, p0) = (init.delta, init.r, init.q0, init.p0);
    let one_minus = 1.0 - r * r;
    let num = mw * q0 * q0 * (1.0 / (delta * one_minus) + c) - 2.0 * q0 * p0 * r / one_minus.sqrt()
        + p0 * p0 * (delta + c) / mw;
    Ok(num / (hbar * (1.0 + init.spread_sum() * c + c * c)))
}

/// E(∞) for an uncorrelated squeezed initial state.
pub fn displaced_exponent_squeezed(
    sys: &SystemParams,
    th: &ThermalSpec,
    delta: f64,
    q0: f64,
    p0: f64,
) -> Result<f64> {
    InitialParams::new(delta, 0.0, q0, p0)?;
    let (c, mw, hbar) = (th.c(), sys.m() * sys.omega(), sys.hbar());
    let s = delta + 1.0 / delta;
    let num = mw * mw * q0 * q0 * (1.0 / delta + c) + p0 * p0 * (delta + c);
    Ok(num / (hbar * mw * (1.0 + s * c + c * c)))
}

/// E(∞) for a displaced coherent initial state.
pub fn displaced_exponent_coherent(sys: &SystemParams, th: &ThermalSpec, q0: f64, p0: f64) -> f64 {
    let (c, mw, hbar) = (th.c(), sys.m() * sys.omega(), sys.hbar());
    (mw * mw * q0 * q0 + p0 * p0) / (hbar * mw * (1.0 + c))
}

/// `F(∞)·exp(−E(∞))`.
pub fn asymptotic_fidelity_displaced(
    sys: &SystemParams,
    th: &ThermalSpec,
    init: &InitialParams,
) -> Result<f64> {
    let f = asymptotic_fidelity(init.delta, init.r, th)?;
    Ok(f * (-displaced_exponent_asymptotic(sys, th, init)?).exp())
}

/// Thermal-bath σ(t) in closed form, any correlation r.
pub fn sigma_closed_form(
    sys: &SystemParams,
    th: &ThermalSpec,
    delta: f64,
    r: f64,
    t: f64,
) -> Result<f64> {
    let init = InitialParams::new(delta, r, 0.0, 0.0)?;
    check_time(t)?;
    let (w, mu, lam, c, hbar) = (sys.omega(), sys.mu(), sys.lambda(), th.c(), sys.hbar());
    let om = sys.omega_eff();
    let one_minus = 1.0 - r * r;
    let s = init.spread_sum();
    let diff = delta - 1.0 / (delta * one_minus);
    let (sin2, cos2) = (2.0 * om * t).sin_cos();
    let e2 = (-2.0 * lam * t).exp();
    let e4 = e2 * e2;
    let transient = (s - 2.0 * c) * (w * w - mu * mu * cos2) / (om * om)
        + diff * mu * sin2 / om
        + 2.0 * r * mu * w * (1.0 - cos2) / (om * om * one_minus.sqrt());
    Ok(0.25 * hbar * hbar * (e4 * (1.0 - s * c + c * c) + e2 * transient * c + c * c))
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and >= 0",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::thermal_diffusion;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> SystemParams {
        SystemParams::unit(0.1, 0.0).unwrap()
    }

    #[test]
    fn initial_state_examples() {
        let sys = unit();
        let s = initial_state(&sys, &InitialParams::squeezed(1.0).unwrap()).unwrap();
        assert_eq!((s.var_qq(), s.var_pp(), s.cov_pq()), (0.5, 0.5, 0.0));
        let s = initial_state(&sys, &InitialParams::squeezed(2.0).unwrap()).unwrap();
        assert_eq!((s.var_qq(), s.var_pp(), s.cov_pq()), (1.0, 0.25, 0.0));
        let s = initial_state(&sys, &InitialParams::new(1.0, 0.75, 0.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(s.cov_pq(), 3.0 / (2.0 * 7f64.sqrt()), epsilon = 1e-15);
        assert_relative_eq!(s.uncertainty_sigma(), 0.25, epsilon = 1e-15);
        let s = initial_state(&sys, &InitialParams::new(2.0, 0.5, 0.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(s.uncertainty_sigma(), 0.25, epsilon = 1e-15);
        assert!(s.is_pure());
    }

    #[test]
    fn initial_params_validation() {
        assert!(InitialParams::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(InitialParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(InitialParams::new(1.0, -1.0, 0.0, 0.0).is_err());
        assert!(InitialParams::new(1.0, f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn coherent_zero_temperature_is_stationary() {
        let sys = SystemParams::unit(0.3, 0.0).unwrap();
        let d = thermal_diffusion(&sys, &ThermalSpec::zero_temperature()).unwrap();
        let init = InitialParams::squeezed(1.0).unwrap();
        for t in uniform_times(16.0, 33) {
            assert!((fidelity_at(&sys, &d, &init, t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_zero_temperature_reaches_asymptote() {
        let sys = unit();
        let d = thermal_diffusion(&sys, &ThermalSpec::zero_temperature()).unwrap();
        let f = fidelity_at(&sys, &d, &InitialParams::squeezed(2.0).unwrap(), 40.0).unwrap();
        // e^{-2λt} = e^{-8} still leaves ~1e-4 of transient at t = 40.
        assert!((f - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-3);
        let f = fidelity_at(&sys, &d, &InitialParams::squeezed(2.0).unwrap(), 400.0).unwrap();
        assert_relative_eq!(f, 2.0 * 2f64.sqrt() / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_r0_special_values() {
        let sys = SystemParams::unit(0.1, 0.08).unwrap();
        let th = ThermalSpec::new(5.0 / 3.0).unwrap();
        assert_relative_eq!(
            fidelity_closed_r0(&sys, &th, 2.0, 0.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let t0 = ThermalSpec::zero_temperature();
        for t in [0.0, 1.0, 7.5, 16.0] {
            assert_relative_eq!(
                fidelity_closed_r0(&sys, &t0, 1.0, t).unwrap(),
                1.0,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn closed_mu0_matches_r0() {
        let sys = unit();
        let th = ThermalSpec::zero_temperature();
        let a = fidelity_closed_mu0(&sys, &th, 2.0, PI / 2.0).unwrap();
        let b = fidelity_closed_r0(&sys, &th, 2.0, PI / 2.0).unwrap();
        assert!((a - b).abs() < 1e-12);
        let late = fidelity_closed_mu0(&sys, &ThermalSpec::new(2.0).unwrap(), 2.0, 1e4).unwrap();
        let inf = asymptotic_fidelity(2.0, 0.0, &ThermalSpec::new(2.0).unwrap()).unwrap();
        assert_relative_eq!(late, inf, epsilon = 1e-14);
        let e = fidelity_closed_mu0(&SystemParams::unit(0.1, 0.05).unwrap(), &th, 2.0, 1.0);
        assert_eq!(e.unwrap_err().code(), "mu-nonzero");
    }

    #[test]
    fn asymptote_spot_values() {
        let th = |c| ThermalSpec::new(c).unwrap();
        assert_eq!(asymptotic_fidelity(1.0, 0.0, &th(1.0)).unwrap(), 1.0);
        assert_relative_eq!(
            asymptotic_fidelity(1.0, 0.0, &th(3.0)).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            asymptotic_fidelity(4.0, 0.0, &th(1.0)).unwrap(),
            0.8,
            epsilon = 1e-15
        );
    }

    #[test]
    fn displaced_exponents() {
        let sys = unit();
        let th = ThermalSpec::zero_temperature();
        let none = InitialParams::squeezed(1.7).unwrap();
        assert_eq!(
            displaced_exponent_asymptotic(&sys, &th, &none).unwrap(),
            0.0
        );

        let coh = InitialParams::coherent(1.0, 1.0).unwrap();
        let f = asymptotic_fidelity_displaced(&sys, &th, &coh).unwrap();
        assert_relative_eq!(f, (-1.0f64).exp(), epsilon = 1e-15);

        let sys = SystemParams::new(1.4, 0.8, 0.6, 0.1, 0.0).unwrap();
        let th = ThermalSpec::new(2.3).unwrap();
        let general = InitialParams::new(1.9, 0.0, 0.7, -0.4).unwrap();
        assert_relative_eq!(
            displaced_exponent_asymptotic(&sys, &th, &general).unwrap(),
            displaced_exponent_squeezed(&sys, &th, 1.9, 0.7, -0.4).unwrap(),
            max_relative = 1e-14
        );
        let coh = InitialParams::coherent(0.7, -0.4).unwrap();
        assert_relative_eq!(
            displaced_exponent_asymptotic(&sys, &th, &coh).unwrap(),
            displaced_exponent_coherent(&sys, &th, 0.7, -0.4),
            max_relative = 1e-14
        );
    }

    #[test]
    fn sigma_closed_form_limits() {
        let sys = SystemParams::new(1.2, 0.9, 0.8, 0.15, 0.07).unwrap();
        let th = ThermalSpec::new(2.4).unwrap();
        let s0 = sigma_closed_form(&sys, &th, 1.6, 0.3, 0.0).unwrap();
        assert_relative_eq!(s0, 0.25 * 0.64, max_relative = 1e-14);
        let late = sigma_closed_form(&sys, &th, 1.6, 0.3, 1e4).unwrap();
        assert_relative_eq!(late, 0.25 * 0.64 * 2.4 * 2.4, max_relative = 1e-14);
    }

    #[test]
    fn grid() {
        assert_eq!(uniform_times(16.0, 1), vec![0.0]);
        let t = uniform_times(16.0, DEFAULT_POINTS);
        assert_eq!(t.len(), 401);
        assert_eq!(t[400], 16.0);
        assert_relative_eq!(t[1], 0.04, epsilon = 1e-15);
    }
}
